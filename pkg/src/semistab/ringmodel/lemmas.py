"""Verifiers for the power-series statements, each certified up to the ring's
truncation degree ``D`` (reported in every result)."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from ..diophantine import ExpVec
from ..errors import NotAUnitError, PreconditionError, TruncationTooSmall
from ..monoid import dominates
from .series import QuotientSeriesRing, SeriesElement


# ---- p-th roots of units ------------------------------------------------------------------


@dataclass(frozen=True)
class PthRootResult:
    v: SeriesElement
    u_prime: SeriesElement
    u_second: SeriesElement
    identity_holds: bool  # (H v)^q == H^q u'
    residual_zero: bool  # H^q u'' == 0
    degree: int


def split_divisible(u: SeriesElement, q: int) -> tuple[SeriesElement, SeriesElement]:
    """``u = u' + u''`` with ``u'`` the terms whose exponents are all divisible by ``q``."""
    ring = u.ring
    prime = {e: c for e, c in u.terms.items() if all(x % q == 0 for x in e)}
    rest = {e: c for e, c in u.terms.items() if e not in prime}
    return SeriesElement(ring, prime), SeriesElement(ring, rest)


def is_power(a: SeriesElement, q: int) -> bool:
    """In characteristic ``p`` with ``q`` a power of ``p`` over ``F_p``: ``a`` is a
    ``q``-th power of a series iff every exponent is divisible by ``q``."""
    return all(all(x % q == 0 for x in e) for e in a.terms)


def pth_root_adjust(h: SeriesElement, u: SeriesElement, p: int, k: int) -> PthRootResult:
    """Build the unit ``v`` with ``v^q = u'`` (``q = p^k``) and check the identities.

    Over ``F_p`` the Frobenius fixes coefficients, so the root of
    ``sum a_I T^I`` (all ``I`` divisible by ``q``) is ``sum a_I T^{I/q}``.
    """
    ring = u.ring
    if ring.char != p or ring.binomial is not None:
        raise PreconditionError("need a ring over F_p with monomial relations")
    if h.ring != ring:
        raise PreconditionError("H and u live in different rings")
    q = p**k
    if not u.is_unit():
        raise NotAUnitError("u is not a unit")
    u1, u2 = split_divisible(u, q)
    if not u1.is_unit():
        raise NotAUnitError("u' has zero constant term")
    order = h.order()
    if order is None or q * order > ring.truncation:
        raise TruncationTooSmall(f"H^{q} vanishes below degree {ring.truncation}; nothing to certify")
    v = ring.element({tuple(x // q for x in e): c for e, c in u1.terms.items()})
    hq = h**q
    lhs = (h * v) ** q
    return PthRootResult(
        v=v,
        u_prime=u1,
        u_second=u2,
        identity_holds=lhs == hq * u1,
        residual_zero=(hq * u2).is_zero(),
        degree=ring.truncation,
    )


# ---- unit lemma ------------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitLemmaResult:
    holds: bool  # product == 1 implies all units == 1
    product_is_one: bool
    all_trivial: bool
    expansion_holds: bool  # product == 1 + sum_i (u_i - 1)
    degree: int

    def __bool__(self) -> bool:
        return self.holds


def gamma_parts(u: SeriesElement, l: int) -> dict[frozenset, SeriesElement]:
    """Split ``u`` by the support of each exponent inside ``{1..l}``."""
    parts: dict[frozenset, dict] = {}
    for e, c in u.terms.items():
        s = frozenset(i + 1 for i in range(l) if e[i])
        parts.setdefault(s, {})[e] = c
    return {s: SeriesElement(u.ring, t) for s, t in parts.items()}


def check_unit_hypotheses(l: int, units: Sequence[SeriesElement], supports: Sequence[Sequence[int]]) -> None:
    """Raise :class:`PreconditionError` unless the hypotheses hold."""
    if not units:
        raise PreconditionError("no units given")
    ring = units[0].ring
    expected = QuotientSeriesRing.semistable(ring.nvars, l, ring.char, ring.truncation)
    if ring != expected:
        raise PreconditionError(f"ring must be k[[X]]/(X_1...X_{l})")
    if len(units) != len(supports):
        raise PreconditionError("one support set per unit is required")
    lam = set(range(1, l + 1))
    sets = [set(s) for s in supports]
    for s in sets:
        if not s <= lam:
            raise PreconditionError(f"support {sorted(s)} is not inside 1..{l}")
    for (a, sa), (b, sb) in combinations(enumerate(sets), 2):
        if sa | sb != lam:
            raise PreconditionError(f"S_{a + 1} and S_{b + 1} do not cover 1..{l}")
    for i, (u, s) in enumerate(zip(units, sets)):
        if u.ring != ring:
            raise PreconditionError("units live in different rings")
        if not u.is_unit():
            raise PreconditionError(f"u_{i + 1} is not a unit")
        for j in sorted(s):
            if u.restrict(j) != ring.one():
                raise PreconditionError(f"pi_{j}(u_{i + 1}) != 1")


def unit_lemma_check(l: int, units: Sequence[SeriesElement], supports: Sequence[Sequence[int]]) -> UnitLemmaResult:
    """If ``u_1 ... u_s = 1`` then every ``u_i = 1``, checked through the
    support decomposition.

    Under the hypotheses each ``u_i - 1`` only has parts supported on sets
    containing ``S_i``; such parts of different units multiply to zero and
    never share a support, so the product is ``1 + sum (u_i - 1)``.
    """
    check_unit_hypotheses(l, units, supports)
    ring = units[0].ring
    one = ring.one()
    for u, s in zip(units, supports):
        for part_support, part in gamma_parts(u - one, l).items():
            if not set(s) <= part_support:
                raise AssertionError(f"part supported on {sorted(part_support)} survives pi_j for some j in S")
    product = one
    for u in units:
        product = product * u
    expansion = one
    for u in units:
        expansion = expansion + (u - one)
    product_is_one = product == one
    all_trivial = all(u == one for u in units)
    return UnitLemmaResult(
        holds=(not product_is_one) or all_trivial,
        product_is_one=product_is_one,
        all_trivial=all_trivial,
        expansion_holds=product == expansion,
        degree=ring.truncation,
    )


# ---- radical of squarefree monomial ideals -----------------------------------------------


@dataclass(frozen=True)
class RadicalResult:
    holds: bool
    power_in_ideal: bool
    element_in_ideal: bool
    degree: int

    def __bool__(self) -> bool:
        return self.holds


def in_monomial_ideal(f: SeriesElement, monomials: Sequence[Sequence[int]]) -> bool:
    """Membership in a monomial ideal is termwise divisibility."""
    return all(any(dominates(e, m) for m in monomials) for e in f.terms)


def radical_squarefree_check(monomials: Sequence[Sequence[int]], f: SeriesElement, n: int) -> RadicalResult:
    """``f^n`` in ``I`` implies ``f`` in ``I`` for ``I`` generated by 0/1 monomials.

    ``f`` lives in a ring without relations; the power is exact as long as
    ``D >= n deg(f)``.
    """
    ring = f.ring
    if ring.monomials or ring.binomial is not None:
        raise PreconditionError("f must live in a power series ring without relations")
    for m in monomials:
        if len(m) != ring.nvars or any(x not in (0, 1) for x in m):
            raise PreconditionError("generators must be 0/1 exponent vectors")
    if n < 1:
        raise PreconditionError("n must be positive")
    if ring.truncation < n * f.degree():
        raise TruncationTooSmall(f"need D >= {n * f.degree()} to expand f^{n}")
    power_in = in_monomial_ideal(f**n, monomials)
    f_in = in_monomial_ideal(f, monomials)
    return RadicalResult(
        holds=(not power_in) or f_in,
        power_in_ideal=power_in,
        element_in_ideal=f_in,
        degree=ring.truncation,
    )


# ---- the principal binomial ring ----------------------------------------------------------


def _require_binomial(ring: QuotientSeriesRing) -> tuple[ExpVec, ExpVec]:
    if ring.binomial is None:
        raise PreconditionError("need a ring k[[X]]/(X^I0 - X^J0)")
    return ring.binomial


def multiplication_injective(ring: QuotientSeriesRing, i: int) -> bool:
    """``X_i`` (1-based) is injective on the slice of weighted degree ``<= D - w_i``.

    Normal forms of monomials are monomials, so the matrix of multiplication
    by ``X_i`` in the standard-monomial basis is a 0/1 matrix with one entry
    per column; it is injective iff no two columns collide.
    """
    _require_binomial(ring)
    w = ring.weights[i - 1]
    images = set()
    basis = ring.standard_monomials(ring.truncation - w)
    for e in basis:
        shifted = list(e)
        shifted[i - 1] += 1
        images.add(ring.normal_form(shifted))
    return len(images) == len(basis) and None not in images


def decompose_exponent(ring: QuotientSeriesRing, e: Sequence[int], order: Optional[Sequence[int]] = None) -> tuple[ExpVec, int, int]:
    """``e = e' + a I0 + b J0`` with ``e'`` dominating neither ``I0`` nor ``J0``.

    ``order`` is a sequence of choices (0 for ``I0``, 1 for ``J0``) consumed
    while both are possible; the default prefers ``I0``.
    """
    i0, j0 = _require_binomial(ring)
    e = list(e)
    a = b = 0
    choices = list(order or [])
    while True:
        can_i, can_j = dominates(e, i0), dominates(e, j0)
        if not (can_i or can_j):
            return tuple(e), a, b
        pick = choices.pop(0) if (can_i and can_j and choices) else (0 if can_i else 1)
        if pick == 0:
            e = [x - y for x, y in zip(e, i0)]
            a += 1
        else:
            e = [x - y for x, y in zip(e, j0)]
            b += 1


def solve_monomial_multiple(x_exp: Sequence[int], target: SeriesElement) -> Optional[SeriesElement]:
    """The unique ``v`` with ``x^J v = target`` up to degree ``D - wdeg(J)``, or ``None``."""
    ring = target.ring
    top = ring.truncation - ring.wdeg(x_exp)
    if top < 0:
        raise TruncationTooSmall("monomial degree exceeds the truncation")
    preimage = {}
    for m in ring.standard_monomials(top):
        img = ring.normal_form(tuple(a + b for a, b in zip(x_exp, m)))
        if img is not None:
            preimage[img] = m
    v = {}
    for e, c in target.terms.items():
        if e not in preimage:
            return None
        v[preimage[e]] = c
    return ring.element(v)


def unit_cancellation_check(ring: QuotientSeriesRing, i: Sequence[int], j: Sequence[int], u: SeriesElement) -> Optional[bool]:
    """Given ``x^I u``, solve ``x^J v = x^I u``. When ``v`` exists and is a unit,
    return whether ``u = v`` (to degree ``D - max wdeg``) and ``x^I = x^J``.
    ``None`` means no unit solution exists, so nothing is claimed."""
    _require_binomial(ring)
    lhs = ring.monomial(i) * u
    v = solve_monomial_multiple(j, lhs)
    if v is None or not v.is_unit():
        return None
    cut = ring.truncation - max(ring.wdeg(i), ring.wdeg(j))
    same_monomial = ring.normal_form(i) == ring.normal_form(j)
    return same_monomial and u.truncate(cut) == v.truncate(cut)
