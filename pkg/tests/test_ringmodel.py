import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from semistab.errors import NotAUnitError, PreconditionError, TruncationTooSmall
from semistab.exactlin import FgAbelianGroup
from semistab.homs import MonoidHom, semistable_from_certificate, semistable_type
from semistab.monoid import AffineMonoid
from semistab.ringmodel import (
    Binomial,
    Pure,
    QuotientSeriesRing,
    decompose_binomial,
    invert_unit,
    relative_binomial_ideal,
    semistable_ring_test,
)
from semistab.ringmodel.lemmas import (
    decompose_exponent,
    multiplication_injective,
    pth_root_adjust,
    radical_squarefree_check,
    unit_cancellation_check,
    unit_lemma_check,
)

N1 = AffineMonoid.free(1)


# ---- relative binomial ideals ----------------------------------------------------------------


def test_ideal_of_semistable_certificate():
    f = semistable_from_certificate(N1, 3, 2, N1.ambient.element([1]), (0, 0, 0))
    ideal = relative_binomial_ideal(f, semistable_type(f))
    assert ideal.relations == (Pure((1, 1, 0)),)
    assert str(ideal) == "(X1*X2)"


def test_ideal_of_free_extension_is_zero():
    f = MonoidHom(N1, AffineMonoid.free(3), [[1, 0, 0]])
    assert relative_binomial_ideal(f).is_zero()


def test_ideal_of_quadric():
    P = AffineMonoid(FgAbelianGroup(2, (2,)), [[1, 0, 0], [0, 1, 0], [0, 1, 1]])
    f = MonoidHom(N1, P, [[1, 0, 0]])
    assert relative_binomial_ideal(f).relations == (Binomial((2, 0), (0, 2)),)


# ---- binomial factorization --------------------------------------------------------------------


def independent_expansion(i0, j0):
    """Expand prod (X^I' - z^k X^J') with sympy and reduce modulo Phi_g(z)."""
    n = len(i0)
    xs = sympy.symbols(f"x1:{n + 1}")
    z = sympy.Symbol("z")
    fz = decompose_binomial(i0, j0, 0)
    prod = sympy.Integer(1)
    for ip, jp, k in fz.factors:
        prod *= sympy.prod([x**a for x, a in zip(xs, ip)]) - z**k * sympy.prod([x**a for x, a in zip(xs, jp)])
    phi = sympy.cyclotomic_poly(fz.g, z)
    reduced = sympy.rem(sympy.expand(prod), phi, z)
    target = sympy.prod([x**a for x, a in zip(xs, i0)]) - sympy.prod([x**a for x, a in zip(xs, j0)])
    return sympy.expand(reduced - target) == 0


def test_decompose_examples():
    fz = decompose_binomial((2, 0), (0, 2), 0)
    assert fz.g == 2 and len(fz.factors) == 2 and fz.verify() and fz.reduced
    assert [k for _, _, k in fz.factors] == [0, 1]
    fz = decompose_binomial((1, 0), (0, 1), 0)
    assert fz.g == 1 and len(fz.factors) == 1
    fz = decompose_binomial((2, 2, 0), (0, 0, 2), 0)
    assert (fz.g, fz.I0p, fz.J0p) == (2, (1, 1, 0), (0, 0, 1)) and fz.verify()


def test_decompose_in_positive_characteristic():
    fz = decompose_binomial((6, 0), (0, 3), 3)
    assert fz.g == 3 and not fz.reduced and fz.multiplicity == 3 and fz.verify()
    fz = decompose_binomial((4, 0), (0, 4), 5)
    assert fz.reduced and fz.verify() and fz.root_field.startswith("GF(5)")
    fz = decompose_binomial((4, 0), (0, 4), 3)  # 4th roots of unity need F_9
    assert fz.reduced and fz.verify()


def test_decompose_rejects_overlap():
    with pytest.raises(PreconditionError):
        decompose_binomial((1, 1), (0, 1))
    with pytest.raises(PreconditionError):
        decompose_binomial((0, 0), (0, 1))


@pytest.mark.parametrize("i0,j0", [((2, 0), (0, 2)), ((3, 3, 0), (0, 0, 6)), ((4, 0, 0), (0, 2, 6)), ((6, 0), (0, 6)), ((5, 0), (0, 5))])
def test_decomposition_agrees_with_sympy(i0, j0):
    assert independent_expansion(i0, j0)


def test_node_test():
    assert semistable_ring_test((2, 0), (0, 2), 3) == (True, (1, 2))
    assert semistable_ring_test((2, 0), (0, 2), 2) == (False, None)
    assert semistable_ring_test((2, 2, 0), (0, 0, 2), 0) == (False, None)
    assert semistable_ring_test((0, 2, 0), (0, 0, 2), 0) == (True, (2, 3))


# ---- series arithmetic --------------------------------------------------------------------------


def test_geometric_series():
    r = QuotientSeriesRing(2, truncation=8)
    x = r.var(1)
    inv = invert_unit(1 + x)
    assert inv == r.element({(k, 0): (-1) ** k for k in range(9)})
    assert (1 + x) * inv == r.one()


def test_monomial_relation_kills_products():
    r = QuotientSeriesRing.semistable(2, 2)
    assert (r.var(1) * r.var(2)).is_zero()


def test_not_a_unit():
    r = QuotientSeriesRing(2)
    with pytest.raises(NotAUnitError):
        invert_unit(r.var(1))


def test_binomial_normal_form():
    r = QuotientSeriesRing(2, binomial=((2, 0), (0, 2)))
    assert r.normal_form((3, 0)) == (1, 2)
    assert r.var(1) ** 3 == r.monomial((1, 2))


def test_normal_form_by_linear_algebra():
    # degree-3 slice of k[X1,X2] modulo the multiples of X1^2 - X2^2
    mons = [(a, 3 - a) for a in range(4)]
    idx = {m: k for k, m in enumerate(mons)}
    rows = []
    for m in ((1, 0), (0, 1)):
        v = [0] * 4
        v[idx[(m[0] + 2, m[1])]] += 1
        v[idx[(m[0], m[1] + 2)]] -= 1
        rows.append(v)
    diff = [0] * 4
    diff[idx[(3, 0)]] += 1
    diff[idx[(1, 2)]] -= 1
    span = sympy.Matrix(rows)
    assert span.rank() == sympy.Matrix(rows + [diff]).rank()


def test_rewriting_is_confluent():
    rng = random.Random(11)
    r = QuotientSeriesRing(3, binomial=((2, 1, 0), (0, 0, 3)), truncation=40)
    i0, j0 = r.binomial
    for _ in range(500):
        e = tuple(rng.randint(0, 6) for _ in range(3))
        # reduce by applying the rule at random positions until stuck
        cur = list(e)
        while all(a >= b for a, b in zip(cur, i0)):
            cur = [a - b + c for a, b, c in zip(cur, i0, j0)]
        assert tuple(cur) == r.normal_form(e)


coeff = st.integers(-3, 3)


@st.composite
def series(draw, ring):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coeff, max_size=5))
    return ring.element(terms)


RING = QuotientSeriesRing(2, binomial=((2, 0), (0, 2)), truncation=6)


@settings(max_examples=60, deadline=None)
@given(series(RING), series(RING), series(RING))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(series(RING))
def test_inverse(a):
    u = 1 + a * RING.var(1)
    assert u * invert_unit(u) == RING.one()


def test_rational_coefficients():
    r = QuotientSeriesRing(1, truncation=4)
    half = r.constant(Fraction(1, 2))
    assert invert_unit(2 + r.var(1)).constant_term() == Fraction(1, 2) == half.constant_term()


# ---- lemma verifiers ------------------------------------------------------------------------------


def test_pth_root_examples():
    r = QuotientSeriesRing.semistable(2, 2, char=2, truncation=8)
    x1, x2 = r.var(1), r.var(2)
    res = pth_root_adjust(x1, r.one(), 2, 1)
    assert res.v == r.one() and res.identity_holds
    res = pth_root_adjust(x1, 1 + x1**2, 2, 1)
    assert res.v == 1 + x1 and res.identity_holds and res.residual_zero
    r3 = QuotientSeriesRing.semistable(2, 2, char=3, truncation=8)
    y1, y2 = r3.var(1), r3.var(2)
    res = pth_root_adjust(y1, 1 + y1**3 + y1 * y2, 3, 1)
    assert res.u_prime == 1 + y1**3 and res.v == 1 + y1 and res.identity_holds and res.residual_zero


def test_pth_root_needs_room():
    r = QuotientSeriesRing.semistable(2, 2, char=2, truncation=3)
    with pytest.raises(TruncationTooSmall):
        pth_root_adjust(r.var(1) ** 2, r.one(), 2, 1)


def test_unit_lemma_examples():
    r = QuotientSeriesRing.semistable(3, 2, truncation=6)
    assert unit_lemma_check(2, [r.one(), r.one()], [[1], [2]])
    u1 = 1 + r.var(1) * r.var(3)
    with pytest.raises(PreconditionError):
        unit_lemma_check(2, [u1, invert_unit(u1)], [[1], [2]])


def test_radical_examples():
    r = QuotientSeriesRing(2, truncation=20)
    x1, x2 = r.var(1), r.var(2)
    assert radical_squarefree_check([(1, 1)], x1, 2)
    res = radical_squarefree_check([(1, 1)], x1 * x2 + x1**2 * x2**3, 3)
    assert res.power_in_ideal and res.element_in_ideal and res
    with pytest.raises(PreconditionError):
        radical_squarefree_check([(2, 0)], x1, 2)


def test_multiplication_is_injective():
    for b in (((2, 0), (0, 2)), ((1, 1, 0), (0, 0, 3)), ((3, 0), (0, 2))):
        r = QuotientSeriesRing(len(b[0]), binomial=b, truncation=8)
        assert all(multiplication_injective(r, i) for i in range(1, r.nvars + 1))


def test_exponent_decomposition_is_order_independent():
    r = QuotientSeriesRing(2, binomial=((2, 0), (0, 2)), truncation=12)
    e = (4, 4)
    results = {decompose_exponent(r, e, order) for order in itertools.product((0, 1), repeat=4)}
    parts = {(p, a + b) for p, a, b in results}
    assert len(parts) == 1


def test_unit_cancellation():
    r = QuotientSeriesRing(2, binomial=((2, 0), (0, 2)), truncation=10)
    u = 1 + r.var(1) + r.var(2) ** 2
    assert unit_cancellation_check(r, (2, 0), (0, 2), u) is True
