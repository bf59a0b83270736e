"""Minimal nonnegative solutions of linear Diophantine systems.

The search is the Contejean-Devie completion procedure. A compiled kernel is
used when it was built; otherwise the pure-Python one. Set the environment
variable ``SEMISTAB_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os
from contextlib import contextmanager
from contextvars import ContextVar
from math import lcm
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from . import _cdsearch
from .errors import DimensionError, ResourceLimitExceeded
from .exactlin import IntMatrix

try:
    if os.environ.get("SEMISTAB_PURE_PYTHON"):
        raise ImportError
    from . import _cdsearch_ext as _kernel

    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build
    _kernel = _cdsearch
    BACKEND = "python"

DEFAULT_CAP = 10**6
_cap_var: ContextVar[int] = ContextVar("state_cap", default=DEFAULT_CAP)


@contextmanager
def state_cap(cap: int) -> Iterator[None]:
    """Set the default search-state cap for everything run inside the block."""
    token = _cap_var.set(int(cap))
    try:
        yield
    finally:
        _cap_var.reset(token)


def resolve_cap(cap: Optional[int]) -> int:
    return _cap_var.get() if cap is None else cap

# the compiled kernel works in int64; larger data goes to the Python one
_INT64_SAFE = 1 << 20

ExpVec = tuple


def canonical_key(v: Sequence[int]):
    """Listing order: increasing degree, then decreasing lexicographic order.

    Within a degree ``e_1`` comes before ``e_2``, matching the graded-lex
    monomial order with ``X_1 > X_2 > ...`` listed from the largest.
    """
    return (sum(v), tuple(-x for x in v))


def grlex_greater(u: Sequence[int], v: Sequence[int]) -> bool:
    """``u > v`` in graded lexicographic order (``X_1 > X_2 > ...``)."""
    return (sum(u), tuple(u)) > (sum(v), tuple(v))


@dataclass(frozen=True)
class DiophantineSystem:
    a: IntMatrix
    b: tuple[int, ...]

    def __post_init__(self):
        if len(self.b) != self.a.rows:
            raise DimensionError("right-hand side does not match the matrix")

    @property
    def homogeneous(self) -> bool:
        return not any(self.b)


@dataclass(frozen=True)
class HilbertBasis:
    """Canonically ordered minimal generating set of ``{x in N^n : A x = 0}``."""

    elements: tuple[ExpVec, ...]

    def __iter__(self) -> Iterator[ExpVec]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.elements


def _equilibrate(cols, rhs):
    """Scale each equation to a common largest entry.

    The completion search is correct for any positive definite inner product
    on the residuals; rows of very different magnitude make the standard one
    explore far more states than needed.
    """
    rows = len(rhs)
    peaks = [max([abs(c[k]) for c in cols] + [abs(rhs[k])]) for k in range(rows)]
    nz = [x for x in peaks if x]
    if not nz:
        return cols, rhs
    top = lcm(*nz)
    if top >= _INT64_SAFE:
        return cols, rhs
    scale = [top // x if x else 1 for x in peaks]
    return [[a * s for a, s in zip(c, scale)] for c in cols], [a * s for a, s in zip(rhs, scale)]


def _search(cols, rhs, starts, weights, bound, cap, prune=()):
    cols, rhs = _equilibrate(cols, list(rhs))
    big = any(abs(x) >= _INT64_SAFE for c in cols for x in c) or any(abs(x) >= _INT64_SAFE for x in rhs)
    kernel = _cdsearch if big else _kernel
    try:
        sols, _ = kernel.cd_search(cols, rhs, starts, weights, bound, cap, list(prune))
    except RuntimeError as exc:
        if str(exc) == "cap":
            raise ResourceLimitExceeded(f"enumeration exceeded {cap} states") from None
        raise
    return sorted((tuple(s) for s in sols), key=canonical_key)


def _columns(a) -> tuple[list[list[int]], int]:
    a = a if isinstance(a, IntMatrix) else IntMatrix(a)
    return [list(a.column(j)) for j in range(a.cols)], a.rows


def hilbert_basis(a, cap: Optional[int] = None) -> HilbertBasis:
    """Hilbert basis of ``{x in N^cols : A x = 0}``.

    Raises :class:`ResourceLimitExceeded` once more than ``cap`` search states
    are generated; the result is never silently truncated.
    """
    cap = resolve_cap(cap)
    cols, _ = _columns(a)
    n = len(cols)
    if n == 0:
        return HilbertBasis(())
    rows = len(cols[0])
    starts = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    return HilbertBasis(tuple(_search(cols, [0] * rows, starts, None, None, cap)))


def nonneg_solve(
    a,
    b: Sequence[int],
    bound: Optional[int] = None,
    grading: Optional[Sequence[int]] = None,
    cap: Optional[int] = None,
) -> list[ExpVec]:
    """Componentwise-minimal ``x in N^cols`` with ``A x = b``.

    When ``bound`` is given only states with ``<grading, x> <= bound`` are
    explored (``grading`` defaults to all ones). Without a bound the Hilbert
    basis of the homogeneous part is computed first and used for pruning,
    which is what makes the unbounded search terminate.
    """
    cap = resolve_cap(cap)
    cols, rows = _columns(a)
    b = [int(x) for x in b]
    if len(b) != rows:
        raise DimensionError("right-hand side does not match the matrix")
    if bound is not None and bound < 0:
        raise ValueError("bound must be nonnegative")
    n = len(cols)
    if not any(b):
        return [(0,) * n]
    if n == 0:
        return []
    if bound is not None and grading is None:
        grading = [1] * n
    weights = None if bound is None else [int(w) for w in grading]
    prune = hilbert_basis(a, cap).elements if bound is None else ()
    return _search(cols, b, [(0,) * n], weights, bound, cap, prune)


def is_minimal_set(vectors: Sequence[Sequence[int]]) -> bool:
    """No vector dominates another distinct one componentwise."""
    vs = [tuple(v) for v in vectors]
    for i, x in enumerate(vs):
        for j, y in enumerate(vs):
            if i != j and x != y and all(p >= q for p, q in zip(x, y)):
                return False
    return True
