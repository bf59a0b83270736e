"""Relative binomial ideals and the factorization of ``X^{I0} - X^{J0}``."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Union

from sympy import Poly, cyclotomic_poly, symbols
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf, gf_from_int_poly

from ..diophantine import ExpVec, canonical_key, grlex_greater
from ..errors import NotIntegralError, PreconditionError
from ..homs import MonoidHom, RelativePresentation, SemistableCertificate
from ..monoid import dominates, exp_stats


@dataclass(frozen=True)
class Pure:
    """``X^I = 0``."""

    I: ExpVec


@dataclass(frozen=True)
class Binomial:
    """``X^I - X^J``."""

    I: ExpVec
    J: ExpVec


@dataclass(frozen=True)
class RelativeBinomialIdeal:
    nvars: int
    relations: tuple

    @property
    def pure(self) -> list[ExpVec]:
        return [r.I for r in self.relations if isinstance(r, Pure)]

    @property
    def binomials(self) -> list[tuple[ExpVec, ExpVec]]:
        return [(r.I, r.J) for r in self.relations if isinstance(r, Binomial)]

    def is_zero(self) -> bool:
        return not self.relations

    def __str__(self) -> str:
        def mono(e):
            return "*".join(f"X{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a) or "1"

        parts = [mono(r.I) if isinstance(r, Pure) else f"{mono(r.I)} - {mono(r.J)}" for r in self.relations]
        return "(" + ", ".join(parts) + ")" if parts else "(0)"


def relative_binomial_ideal(
    src: Union[MonoidHom, RelativePresentation],
    certificate: Optional[SemistableCertificate] = None,
) -> RelativeBinomialIdeal:
    """Kernel of ``k[X_1..X_r] -> k (x)_{k[Q]} k[P]`` with ``X_i -> p_i``.

    The variables are the irreducibles of ``P`` outside ``f(Q)``, or the
    generators listed by ``certificate`` when one is given. Relations with
    a nonzero base part on exactly one side give monomials; relations with
    zero base part on both sides give binomials.
    """
    if isinstance(src, RelativePresentation):
        f = src.to_hom()
        gens = f.target.generators[src.base.ngens :]
    else:
        f = src
        gens = f.p_gens
    if certificate is not None:
        gens = certificate.p
    if not f.integral:
        raise NotIntegralError("the homomorphism is not integral")
    r = len(gens)
    pure: list[ExpVec] = []
    binom: set[tuple[ExpVec, ExpVec]] = set()
    for a, i, b, j in f.relation_basis(p=gens):
        za, zb = not any(a), not any(b)
        if za and zb:
            if i != j:
                binom.add((i, j) if grlex_greater(i, j) else (j, i))
        elif za:
            pure.append(i)
        elif zb:
            pure.append(j)
    pure = sorted(set(pure), key=canonical_key)
    pure = [m for m in pure if not any(o != m and dominates(m, o) for o in pure)]
    rels = [Pure(m) for m in pure]
    rels += [Binomial(i, j) for i, j in sorted(binom, key=lambda t: canonical_key(t[0] + t[1]))]
    return RelativeBinomialIdeal(r, tuple(rels))


# ---- roots of unity -------------------------------------------------------------------


class RootRing:
    """``Z[x]/(h)`` (char 0) or ``F_p[x]/(h)``, with ``x`` a primitive ``g``-th root of unity."""

    def __init__(self, order: int, char: int):
        self.order = order
        self.char = char
        x = symbols("x")
        phi = [int(c) for c in Poly(cyclotomic_poly(order, x), x).all_coeffs()]
        if char:
            _, factors = gf_factor_sqf(gf_from_int_poly(phi, char), char, ZZ)
            factors = sorted(([int(c) for c in f] for f in factors), key=lambda f: (len(f), f))
            phi = factors[0]
        self.modulus = tuple(reversed(phi))  # ascending, monic
        self.degree = len(self.modulus) - 1

    def describe(self) -> str:
        poly = " + ".join(
            (f"{c}" if k == 0 else ("" if c == 1 else f"{c}*") + ("x" if k == 1 else f"x^{k}"))
            for k, c in enumerate(self.modulus)
            if c
        )
        base = f"GF({self.char})" if self.char else "Z"
        return f"{base}[x]/({poly})"

    def _norm(self, coeffs: list[int]) -> tuple[int, ...]:
        m = self.modulus
        d = self.degree
        coeffs = list(coeffs)
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if c:
                for t in range(d + 1):
                    coeffs[k - d + t] -= c * m[t]
        coeffs = coeffs[:d] + [0] * max(0, d - len(coeffs))
        if self.char:
            coeffs = [c % self.char for c in coeffs]
        return tuple(coeffs)

    def const(self, c: int) -> tuple[int, ...]:
        return self._norm([c])

    def zeta(self, i: int) -> tuple[int, ...]:
        return self._norm([0] * (i % self.order) + [1])

    def add(self, a, b):
        return self._norm([x + y for x, y in zip(a, b)])

    def mul(self, a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self._norm(out)

    def is_zero(self, a) -> bool:
        return not any(a)


@dataclass(frozen=True)
class BinomialFactorization:
    """``X^{I0} - X^{J0} = prod_i (X^{I0p} - zeta^{root_index} X^{J0p})``."""

    I0: ExpVec
    J0: ExpVec
    g: int
    I0p: ExpVec
    J0p: ExpVec
    factors: tuple[tuple[ExpVec, ExpVec, int], ...]
    char: int
    root_field: str
    reduced: bool
    multiplicity: int  # each distinct factor repeats this often (char | g)

    @property
    def distinct_factors(self) -> int:
        return self.g // self.multiplicity

    def expand(self) -> dict[ExpVec, tuple[int, ...]]:
        """The product of the factors as ``{exponent: root-ring coefficient}``."""
        ring = RootRing(self.g // self.multiplicity, self.char)
        one = ring.const(1)
        poly: dict[ExpVec, tuple[int, ...]] = {(0,) * len(self.I0): one}
        for ip, jp, idx in self.factors:
            term = {ip: one, jp: ring.mul(ring.const(-1), ring.zeta(idx))}
            out: dict[ExpVec, tuple[int, ...]] = {}
            for e1, c1 in poly.items():
                for e2, c2 in term.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    v = ring.add(out.get(e, ring.const(0)), ring.mul(c1, c2))
                    if ring.is_zero(v):
                        out.pop(e, None)
                    else:
                        out[e] = v
            poly = out
        return poly

    def verify(self) -> bool:
        """Exact comparison of the expanded product with ``X^{I0} - X^{J0}``."""
        ring = RootRing(self.g // self.multiplicity, self.char)
        target = {self.I0: ring.const(1), self.J0: ring.const(-1)}
        return self.expand() == target


def _check_pair(i0: Sequence[int], j0: Sequence[int]) -> tuple[ExpVec, ExpVec]:
    i0, j0 = tuple(int(x) for x in i0), tuple(int(x) for x in j0)
    if len(i0) != len(j0):
        raise PreconditionError("exponent vectors of different lengths")
    if any(x < 0 for x in i0 + j0):
        raise PreconditionError("negative exponent")
    if not any(i0) or not any(j0):
        raise PreconditionError("both sides must have positive degree")
    if exp_stats(i0)[0] & exp_stats(j0)[0]:
        raise PreconditionError("supports overlap")
    return i0, j0


def decompose_binomial(i0: Sequence[int], j0: Sequence[int], char: int = 0) -> BinomialFactorization:
    """Factor ``X^{I0} - X^{J0}`` over a ring containing primitive roots of unity.

    With ``g = gcd(gcm(I0), gcm(J0))`` the factors are ``X^{I0/g} - z^i X^{J0/g}``.
    In characteristic ``p`` with ``g = p^a g'`` only ``g'``-th roots exist and
    each factor appears ``p^a`` times; the ideal is then not reduced.
    """
    i0, j0 = _check_pair(i0, j0)
    g = gcd(exp_stats(i0)[2], exp_stats(j0)[2])
    ip = tuple(x // g for x in i0)
    jp = tuple(x // g for x in j0)
    mult = 1
    if char:
        while (g // mult) % char == 0:
            mult *= char
    gp = g // mult
    ring = RootRing(gp, char)
    factors = tuple((ip, jp, i % gp) for i in range(g))
    return BinomialFactorization(
        I0=i0,
        J0=j0,
        g=g,
        I0p=ip,
        J0p=jp,
        factors=factors,
        char=char,
        root_field=ring.describe(),
        reduced=mult == 1,
        multiplicity=mult,
    )


def semistable_ring_test(i0: Sequence[int], j0: Sequence[int], char: int = 0) -> tuple[bool, Optional[tuple[int, int]]]:
    """Whether ``k[[X]]/(X^{I0} - X^{J0})`` is the node ``X_i^2 = X_j^2``.

    True iff ``char != 2``, ``g = 2`` and both primitive parts are single
    variables; the variable indices are 1-based.
    """
    i0, j0 = _check_pair(i0, j0)
    g = gcd(exp_stats(i0)[2], exp_stats(j0)[2])
    if char == 2 or g != 2:
        return False, None
    ip = [x // g for x in i0]
    jp = [x // g for x in j0]
    if sum(ip) != 1 or sum(jp) != 1:
        return False, None
    return True, (ip.index(1) + 1, jp.index(1) + 1)
