"""Exact integer linear algebra.

Smith normal form, finitely generated abelian groups, cokernels, integer
solving, and a small rational simplex used for feasibility questions.
Everything uses Python integers (or :class:`fractions.Fraction`), so no
overflow is possible at any size.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import DimensionError

__all__ = [
    "IntMatrix",
    "FgAbelianGroup",
    "GroupElement",
    "smith_normal_form",
    "cokernel",
    "cokernel_map",
    "solve_integer",
    "integer_kernel",
    "determinant",
    "feasible_point",
]


class IntMatrix:
    """Immutable integer matrix stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], cols: Optional[int] = None):
        rows = tuple(tuple(int(v) for v in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionError("ragged matrix rows")
            if cols is not None and cols != width:
                raise DimensionError(f"expected {cols} columns, got {width}")
        else:
            width = 0 if cols is None else cols
        self._data = rows
        self.rows = len(rows)
        self.cols = width

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(([0] * cols for _ in range(rows)), cols=cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        for c in columns:
            if len(c) != nrows:
                raise DimensionError("column length mismatch")
        return cls(([c[i] for c in columns] for i in range(nrows)), cols=len(columns))

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def transpose(self) -> "IntMatrix":
        return IntMatrix((self.column(j) for j in range(self.cols)), cols=self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        return IntMatrix(
            ([sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data),
            cols=other.cols,
        )

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._data)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})"

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self._data) for j, v in enumerate(r) if i != j)

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self._data[i][i] for i in range(min(self.rows, self.cols)))


def _as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


def determinant(m) -> int:
    """Bareiss fraction-free determinant."""
    m = _as_matrix(m)
    n = m.rows
    if n != m.cols:
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = m.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative
    entries forming a divisibility chain. Pivots are chosen by minimal
    absolute value to keep intermediate entries small.
    """
    m = _as_matrix(m)
    rows, cols = m.shape
    d = m.tolist()
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        if i != j:
            d[i], d[j] = d[j], d[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for r in d:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        if k:
            rd, rs = d[dst], d[src]
            for c in range(cols):
                rd[c] += k * rs[c]
            ud, us = u[dst], u[src]
            for c in range(rows):
                ud[c] += k * us[c]

    def add_col(dst, src, k):
        if k:
            for r in d:
                r[dst] += k * r[src]
            for r in v:
                r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = d[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            swap_rows(t, best[1])
            swap_cols(t, best[2])
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) if any(d[i][j] % p for j in range(t + 1, cols))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        if best is None:
            break
    return IntMatrix(u, cols=rows), IntMatrix(d, cols=cols), IntMatrix(v, cols=cols)


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank + Z/m_1 + ... + Z/m_k`` with ``m_1 | m_2 | ...`` and ``m_i >= 2``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion invariants must be >= 2")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion invariants must form a divisibility chain")

    @property
    def dim(self) -> int:
        """Length of the coordinate vector (free part followed by torsion residues)."""
        return self.free_rank + len(self.torsion)

    @property
    def torsion_order(self) -> int:
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def element(self, coords: Sequence[int]) -> "GroupElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.dim:
            raise DimensionError(f"element of {self} needs {self.dim} coordinates, got {len(coords)}")
        r = self.free_rank
        return GroupElement(self, coords[:r], tuple(c % m for c, m in zip(coords[r:], self.torsion)))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.free_rank, (0,) * len(self.torsion))

    def basis(self) -> list["GroupElement"]:
        return [self.element([int(i == j) for j in range(self.dim)]) for i in range(self.dim)]

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class GroupElement:
    group: FgAbelianGroup
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def __post_init__(self):
        if len(self.free) != self.group.free_rank or len(self.torsion) != len(self.group.torsion):
            raise DimensionError("element shape does not match its group")
        if any(not 0 <= r < m for r, m in zip(self.torsion, self.group.torsion)):
            raise ValueError("torsion residues must be reduced")

    @property
    def coords(self) -> tuple[int, ...]:
        return self.free + self.torsion

    def _check(self, other: "GroupElement"):
        if other.group != self.group:
            raise DimensionError("elements of different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return self.group.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GroupElement":
        return self.group.element([-a for a in self.coords])

    def __mul__(self, k: int) -> "GroupElement":
        return self.group.element([k * a for a in self.coords])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def __lt__(self, other: "GroupElement") -> bool:
        return self.coords < other.coords

    def __repr__(self) -> str:
        return f"GroupElement({list(self.free)}, {list(self.torsion)})"


def combine(group: FgAbelianGroup, coeffs: Sequence[int], elements: Sequence[GroupElement]) -> GroupElement:
    """``sum(c * e)`` computed on raw coordinates with a single reduction."""
    acc = [0] * group.dim
    for c, e in zip(coeffs, elements):
        if c:
            for i, x in enumerate(e.coords):
                acc[i] += c * x
    return group.element(acc)


class CokernelMap:
    """Projection ``Z^n -> Z^n / im(M)`` onto Smith coordinates."""

    def __init__(self, group: FgAbelianGroup, free_rows, torsion_rows):
        self.group = group
        self._free_rows = free_rows
        self._tors_rows = torsion_rows

    def __call__(self, vec: Sequence[int]) -> GroupElement:
        free = [sum(a * b for a, b in zip(r, vec)) for r in self._free_rows]
        tors = [sum(a * b for a, b in zip(r, vec)) for r in self._tors_rows]
        return self.group.element(free + tors)


def cokernel_map(m, nrows: Optional[int] = None) -> CokernelMap:
    m = _as_matrix(m)
    if m.rows == 0 and nrows:
        m = IntMatrix.zeros(nrows, 0)
    u, d, _ = smith_normal_form(m)
    diag = d.diagonal()
    rank = sum(1 for x in diag if x)
    torsion = [(i, diag[i]) for i in range(rank) if diag[i] > 1]
    group = FgAbelianGroup(m.rows - rank, tuple(t for _, t in torsion))
    free_rows = [u.row(i) for i in range(rank, m.rows)]
    tors_rows = [u.row(i) for i, _ in torsion]
    return CokernelMap(group, free_rows, tors_rows)


def cokernel(m, nrows: Optional[int] = None) -> FgAbelianGroup:
    """``Z^rows / (column span of M)`` in Smith form.

    ``nrows`` is needed only when ``M`` has no columns and no rows stored.
    """
    return cokernel_map(m, nrows).group


def solve_integer(a, b: Sequence[int]) -> Optional[tuple[tuple[int, ...], list[tuple[int, ...]]]]:
    """Solve ``A x = b`` over the integers.

    Returns ``(x, kernel_basis)`` or ``None`` when no integer solution exists.
    """
    a = _as_matrix(a)
    if len(b) != a.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {a.rows} rows")
    u, d, v = smith_normal_form(a)
    ub = u.apply(b) if a.rows else ()
    diag = d.diagonal()
    rank = sum(1 for x in diag if x)
    y = [0] * a.cols
    for i in range(rank):
        if ub[i] % diag[i]:
            return None
        y[i] = ub[i] // diag[i]
    if any(ub[i] for i in range(rank, a.rows)):
        return None
    x = v.apply(y) if a.cols else ()
    kernel = [v.column(j) for j in range(rank, a.cols)]
    return x, kernel


def integer_kernel(a) -> list[tuple[int, ...]]:
    a = _as_matrix(a)
    sol = solve_integer(a, [0] * a.rows)
    assert sol is not None
    return sol[1]


def feasible_point(a: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """A rational ``y >= 0`` with ``A y = b``, or ``None`` if infeasible.

    Phase-one simplex over :class:`Fraction` with Bland's rule, so the answer is
    exact and deterministic.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if len(b) != m:
        raise DimensionError("right-hand side length mismatch")
    if m == 0:
        return [Fraction(0)] * n
    tab = []
    for i in range(m):
        sgn = -1 if b[i] < 0 else 1
        row = [Fraction(sgn * x) for x in a[i]] + [Fraction(int(i == k)) for k in range(m)]
        row.append(Fraction(sgn * b[i]))
        tab.append(row)
    basis = [n + i for i in range(m)]
    width = n + m
    cost = [-sum(tab[i][j] for i in range(m)) if j < n else Fraction(0) for j in range(width)]
    cost.append(-sum(tab[i][-1] for i in range(m)))
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if leave is None or ratio < leave[0] or (ratio == leave[0] and basis[i] < basis[leave[1]]):
                    leave = (ratio, i)
        if leave is None:
            break  # unbounded direction; cannot happen in phase one
        r = leave[1]
        piv = tab[r][enter]
        tab[r] = [x / piv for x in tab[r]]
        for i in range(m):
            if i != r and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        if cost[enter]:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tab[r])]
        basis[r] = enter
    if cost[-1] != 0:
        return None
    y = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            y[j] = tab[i][-1]
    return y


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0
