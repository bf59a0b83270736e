"""Truncated power series in quotient rings ``k[[X_1..X_n]] / I``.

Two kinds of ideal are supported: monomial ideals ``(X^{I_1}, ..., X^{I_m})``
and principal binomial ideals ``(X^{I_0} - X^{J_0})``. Elements are stored as
``{exponent: coefficient}`` maps over normal-form exponents of weighted degree
at most the truncation degree ``D``.

For a binomial whose two sides have different degrees the weights are chosen
so that both sides have the same weighted degree; the ideal is then
homogeneous and truncation commutes with reduction.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence

from ..diophantine import ExpVec
from ..errors import DimensionError, NotAUnitError, PreconditionError
from ..monoid import dominates

DEFAULT_TRUNCATION = 12


class QuotientSeriesRing:
    def __init__(
        self,
        nvars: int,
        monomials: Optional[Sequence[Sequence[int]]] = None,
        binomial: Optional[tuple[Sequence[int], Sequence[int]]] = None,
        char: int = 0,
        truncation: int = DEFAULT_TRUNCATION,
    ):
        if monomials is not None and binomial is not None:
            raise ValueError("give either monomial relations or one binomial")
        if char < 0:
            raise ValueError("characteristic must be 0 or a prime")
        self.nvars = nvars
        self.char = char
        self.truncation = truncation
        self.monomials: tuple[ExpVec, ...] = tuple(tuple(m) for m in (monomials or ()))
        for m in self.monomials:
            if len(m) != nvars or not any(m):
                raise DimensionError("monomial relations must be nonzero vectors of length nvars")
        self.binomial: Optional[tuple[ExpVec, ExpVec]] = None
        self.weights = (1,) * nvars
        if binomial is not None:
            i0, j0 = tuple(binomial[0]), tuple(binomial[1])
            if len(i0) != nvars or len(j0) != nvars:
                raise DimensionError("binomial exponents must have length nvars")
            if not any(i0) or not any(j0):
                raise PreconditionError("both sides of the binomial must be nonconstant")
            if any(a and b for a, b in zip(i0, j0)):
                raise PreconditionError("binomial sides must have disjoint supports")
            # rewrite the larger side (degree, then lex) into the smaller one
            if (sum(i0), i0) < (sum(j0), j0):
                i0, j0 = j0, i0
            self.binomial = (i0, j0)
            di, dj = sum(i0), sum(j0)
            if di != dj:
                g = gcd(di, dj)
                self.weights = tuple(
                    dj // g if i0[k] else di // g if j0[k] else 1 for k in range(nvars)
                )
        self._nf_cache: dict[ExpVec, Optional[ExpVec]] = {}

    # ---- construction helpers -----------------------------------------------------

    @classmethod
    def semistable(cls, nvars: int, l: int, char: int = 0, truncation: int = DEFAULT_TRUNCATION):
        """``k[[X]] / (X_1 ... X_l)``."""
        return cls(nvars, monomials=[tuple(int(i < l) for i in range(nvars))], char=char, truncation=truncation)

    def with_truncation(self, truncation: int) -> "QuotientSeriesRing":
        return QuotientSeriesRing(
            self.nvars,
            monomials=self.monomials if self.binomial is None else None,
            binomial=self.binomial,
            char=self.char,
            truncation=truncation,
        )

    def __repr__(self) -> str:
        rel = f"binomial={self.binomial}" if self.binomial else f"monomials={list(self.monomials)}"
        return f"QuotientSeriesRing(n={self.nvars}, {rel}, char={self.char}, D={self.truncation})"

    def __eq__(self, other) -> bool:
        return isinstance(other, QuotientSeriesRing) and (
            self.nvars, self.monomials, self.binomial, self.char, self.truncation
        ) == (other.nvars, other.monomials, other.binomial, other.char, other.truncation)

    def __hash__(self) -> int:
        return hash((self.nvars, self.monomials, self.binomial, self.char, self.truncation))

    # ---- coefficients ---------------------------------------------------------------

    def coeff(self, c):
        if self.char:
            if isinstance(c, Fraction):
                return c.numerator * pow(c.denominator, -1, self.char) % self.char
            return int(c) % self.char
        return Fraction(c)

    def coeff_inv(self, c):
        if self.char:
            return pow(c, -1, self.char)
        return 1 / c

    # ---- exponents --------------------------------------------------------------------

    def wdeg(self, e: Sequence[int]) -> int:
        return sum(a * w for a, w in zip(e, self.weights))

    def normal_form(self, e: Sequence[int]) -> Optional[ExpVec]:
        """Normal form of the monomial ``X^e``; ``None`` when it is zero."""
        e = tuple(e)
        hit = self._nf_cache.get(e, False)
        if hit is not False:
            return hit
        if self.binomial is None:
            out = None if any(dominates(e, m) for m in self.monomials) else e
        else:
            out = self._rewrite(e)
        self._nf_cache[e] = out
        return out

    def _rewrite(self, e: ExpVec) -> ExpVec:
        lhs, rhs = self.binomial
        while dominates(e, lhs):
            a = min(x // y for x, y in zip(e, lhs) if y)
            e = tuple(x - a * l + a * r for x, l, r in zip(e, lhs, rhs))
        return e

    def is_standard(self, e: Sequence[int]) -> bool:
        return self.normal_form(e) == tuple(e)

    def standard_monomials(self, max_degree: Optional[int] = None) -> list[ExpVec]:
        """Normal-form exponents of weighted degree ``<= max_degree`` (default ``D``)."""
        top = self.truncation if max_degree is None else max_degree
        out = []

        def rec(prefix: list[int], budget: int):
            k = len(prefix)
            if k == self.nvars:
                e = tuple(prefix)
                if self.is_standard(e):
                    out.append(e)
                return
            w = self.weights[k]
            for a in range(budget // w + 1):
                rec(prefix + [a], budget - a * w)

        rec([], top)
        return sorted(out, key=lambda e: (self.wdeg(e), tuple(-x for x in e)))

    # ---- elements -------------------------------------------------------------------

    def element(self, terms: Mapping[Sequence[int], object] | Iterable = ()) -> "SeriesElement":
        """Element from ``{exponent: coefficient}``, reduced and truncated."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ExpVec, object] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != self.nvars:
                raise DimensionError("exponent length differs from the number of variables")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            self._accumulate(acc, e, self.coeff(c))
        return SeriesElement(self, acc)

    def _accumulate(self, acc: dict, e: ExpVec, c) -> None:
        if not c or self.wdeg(e) > self.truncation:
            return
        e = self.normal_form(e)
        if e is None:
            return
        v = acc.get(e, 0) + c
        if self.char:
            v %= self.char
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)

    def zero(self) -> "SeriesElement":
        return SeriesElement(self, {})

    def one(self) -> "SeriesElement":
        return self.constant(1)

    def constant(self, c) -> "SeriesElement":
        return self.element({(0,) * self.nvars: c})

    def var(self, i: int) -> "SeriesElement":
        """``X_i`` (1-based)."""
        return self.monomial(tuple(int(k == i - 1) for k in range(self.nvars)))

    def monomial(self, e: Sequence[int], c=1) -> "SeriesElement":
        return self.element({tuple(e): c})


class SeriesElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: QuotientSeriesRing, terms: dict):
        self.ring = ring
        self.terms: dict[ExpVec, object] = terms

    # ---- arithmetic -------------------------------------------------------------------

    def _coerce(self, other) -> "SeriesElement":
        if isinstance(other, SeriesElement):
            if other.ring != self.ring:
                raise DimensionError("elements of different rings")
            return other
        return self.ring.constant(other)

    def __add__(self, other) -> "SeriesElement":
        other = self._coerce(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            self.ring._accumulate(acc, e, c)
        return SeriesElement(self.ring, acc)

    __radd__ = __add__

    def __neg__(self) -> "SeriesElement":
        return self.scale(-1)

    def __sub__(self, other) -> "SeriesElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SeriesElement":
        return self._coerce(other) - self

    def scale(self, c) -> "SeriesElement":
        c = self.ring.coeff(c)
        acc = {}
        for e, a in self.terms.items():
            v = a * c
            if self.ring.char:
                v %= self.ring.char
            if v:
                acc[e] = v
        return SeriesElement(self.ring, acc)

    def __mul__(self, other) -> "SeriesElement":
        if not isinstance(other, SeriesElement):
            return self.scale(other)
        other = self._coerce(other)
        ring = self.ring
        acc: dict = {}
        top = ring.truncation
        wd = ring.wdeg
        right = [(e, c, wd(e)) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = wd(e1)
            for e2, c2, d2 in right:
                if d1 + d2 > top:
                    continue
                ring._accumulate(acc, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return SeriesElement(ring, acc)

    def __rmul__(self, other) -> "SeriesElement":
        return self.scale(other)

    def __pow__(self, k: int) -> "SeriesElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self) -> "SeriesElement":
        return invert_unit(self)

    # ---- inspection -------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeriesElement):
            try:
                other = self._coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def is_unit(self) -> bool:
        return bool(self.constant_term())

    def order(self) -> Optional[int]:
        """Smallest weighted degree of a term; ``None`` for zero."""
        return min((self.ring.wdeg(e) for e in self.terms), default=None)

    def degree(self) -> int:
        return max((self.ring.wdeg(e) for e in self.terms), default=0)

    def truncate(self, max_degree: int) -> "SeriesElement":
        wd = self.ring.wdeg
        return SeriesElement(self.ring, {e: c for e, c in self.terms.items() if wd(e) <= max_degree})

    def restrict(self, j: int) -> "SeriesElement":
        """Image modulo ``X_j`` (1-based): drop terms involving ``X_j``."""
        return SeriesElement(self.ring, {e: c for e, c in self.terms.items() if not e[j - 1]})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (self.ring.wdeg(e), tuple(-x for x in e))):
            mono = "*".join(f"X{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
            c = self.terms[e]
            parts.append(f"{c}" if not mono else mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


def invert_unit(a: SeriesElement) -> SeriesElement:
    """Inverse of a unit by the geometric series in its non-constant part."""
    ring = a.ring
    c0 = a.constant_term()
    if not c0:
        raise NotAUnitError("constant term is zero")
    inv0 = ring.coeff_inv(c0)
    m = a.scale(inv0) - ring.one()  # a = c0 (1 + m)
    out = ring.one()
    power = ring.one()
    neg = -m
    while True:
        power = power * neg
        if power.is_zero():
            break
        out = out + power
    return out.scale(inv0)
