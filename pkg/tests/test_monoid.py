import random

import pytest

from oracles.brute import LatticeMonoid
from semistab.errors import NotInMonoidError, NotIntegralError, NotSharpError
from semistab.exactlin import FgAbelianGroup
from semistab.monoid import (
    AffineMonoid,
    PresentedMonoid,
    congruence_generators,
    exp_stats,
    grothendieck_group,
    irreducibles,
    is_sharp,
    pushout,
)
from semistab.verify import random_sharp_monoid

N2 = AffineMonoid.free(2)
NUM23 = AffineMonoid.from_vectors([[2], [3]])
CONE = AffineMonoid.from_vectors([[1, 0], [1, 1], [1, 2]])


def coords(xs):
    return [tuple(x.coords) for x in xs]


def test_exp_stats():
    assert exp_stats((2, 0, 3)) == (frozenset({1, 3}), 5, 1)
    assert exp_stats((0, 0)) == (frozenset(), 0, 0)
    assert exp_stats((4, 6))[1:] == (10, 2)


def test_grothendieck_groups():
    g = grothendieck_group(N2)
    assert (g.free_rank, tuple(g.torsion)) == (2, ())
    g = grothendieck_group(NUM23)
    assert (g.free_rank, tuple(g.torsion)) == (1, ())
    g = grothendieck_group(PresentedMonoid(2, [((2, 0), (0, 2))]))
    assert (g.free_rank, tuple(g.torsion)) == (1, (2,))


def test_sharpness():
    assert is_sharp(AffineMonoid.free(4))
    assert not is_sharp(AffineMonoid.from_vectors([[1], [-1]]))
    assert is_sharp(AffineMonoid.from_vectors([[1, 1], [1, -1]]))
    assert is_sharp(PresentedMonoid(2, [((1, 1), (2, 0))]))
    assert not is_sharp(PresentedMonoid(2, [((1, 1), (0, 0))]))


def test_irreducibles_examples():
    assert coords(irreducibles(N2)) == [(1, 0), (0, 1)]
    assert coords(irreducibles(NUM23)) == [(2,), (3,)]
    assert sorted(coords(irreducibles(CONE))) == [(1, 0), (1, 1), (1, 2)]
    # redundant generators are dropped
    m = AffineMonoid.from_vectors([[2], [3], [5], [4]])
    assert coords(irreducibles(m)) == [(2,), (3,)]
    with pytest.raises(NotSharpError):
        irreducibles(AffineMonoid.from_vectors([[1], [-1]]))


def test_membership():
    assert NUM23.contains(NUM23.ambient.element([7]))
    assert not NUM23.contains(NUM23.ambient.element([1]))
    m = AffineMonoid.from_vectors([[1, 0], [1, 2]])
    assert not m.contains(m.ambient.element([1, 1]))
    assert m.contains(m.ambient.element([3, 4]))


def test_membership_with_torsion():
    # Z + Z/2, generators (1,0) and (1,1)
    m = AffineMonoid(FgAbelianGroup(1, (2,)), [[1, 0], [1, 1]])
    assert m.contains(m.ambient.element([2, 0]))
    assert m.contains(m.ambient.element([2, 1]))
    assert not m.contains(m.ambient.element([0, 1]))


def test_saturation():
    assert AffineMonoid.free(3).is_saturated()
    assert not NUM23.is_saturated()
    assert CONE.is_saturated()
    # saturation is relative to the generated group, not the ambient lattice
    assert AffineMonoid.from_vectors([[1, 0], [1, 2]]).is_saturated()
    assert AffineMonoid.from_vectors([[2, 0], [1, 1], [0, 2]]).is_saturated()
    # 2 * (1,2) = (1,1) + (1,3) but (1,2) is missing
    assert not AffineMonoid.from_vectors([[1, 0], [1, 1], [1, 3]]).is_saturated()


def test_congruence_generators():
    assert congruence_generators(N2) == []
    assert congruence_generators(NUM23) == [((3, 0), (0, 2))]
    semistable = PresentedMonoid(3, [((1, 1, 0), (0, 0, 1))])
    assert congruence_generators(semistable) == [((1, 1, 0), (0, 0, 1))]


def test_congruence_closure_on_samples():
    rng = random.Random(3)
    for _ in range(20):
        m = random_sharp_monoid(rng)
        gens = congruence_generators(m)
        pres = PresentedMonoid(m.ngens, gens)
        n = m.ngens
        # every relation of degree <= 6 follows from the returned generators
        words = [w for w in _words(n, 4)]
        for x in words:
            for y in words:
                if x < y and m.element(x) == m.element(y):
                    assert pres.equivalent(x, y, degree_cap=12)


def _words(n, top):
    if n == 0:
        yield ()
        return
    for k in range(top + 1):
        for rest in _words(n - 1, top - k):
            yield (k,) + rest


def test_pushouts():
    n1 = AffineMonoid.free(1)
    p = pushout(n1, n1, n1.ambient.element([1]), n1.ambient.element([1]))
    a = p.to_affine()
    g = a.grothendieck_group()
    assert (g.free_rank, tuple(g.torsion)) == (1, ())
    assert len(a.irreducibles()) == 1

    p = pushout(N2, n1, N2.ambient.element([1, 1]), n1.ambient.element([1]))
    assert p.relations == (((1, 1, 0), (0, 0, 1)),)
    aff = p.to_affine()
    assert aff.grothendieck_group().free_rank == 2
    assert len(aff.irreducibles()) == 2  # the glued generator is eliminable

    with pytest.raises(NotInMonoidError):
        pushout(NUM23, n1, NUM23.ambient.element([1]), n1.ambient.element([1]))


def test_pushout_group_matches_group_pushout():
    # Z^2 +_Z Z along (1,1) <- 1 -> 1 is Z^2
    n1 = AffineMonoid.free(1)
    p = pushout(N2, n1, N2.ambient.element([1, 1]), n1.ambient.element([2]))
    g = p.grothendieck_group()
    assert (g.free_rank, tuple(g.torsion)) == (2, ())


def test_non_integral_presentation_rejected():
    # 2a = a + b but a != b: not cancellative
    with pytest.raises(NotIntegralError):
        PresentedMonoid(2, [((2, 0), (1, 1))]).to_affine()


def test_degree_function():
    rng = random.Random(5)
    for _ in range(20):
        m = random_sharp_monoid(rng)
        zero = m.ambient.element([0] * m.ambient.dim)
        assert m.degree(zero) == 0
        for _ in range(5):
            x = m.element([rng.randint(0, 2) for _ in range(m.ngens)])
            y = m.element([rng.randint(0, 2) for _ in range(m.ngens)])
            if not x.is_zero():
                assert m.degree(x) >= 1
            assert m.degree(x + y) >= m.degree(x) + m.degree(y)


@pytest.mark.parametrize("seed", range(3))
def test_atoms_match_brute_force(seed):
    rng = random.Random(seed)
    for _ in range(30):
        m = random_sharp_monoid(rng)
        gens = [tuple(g.coords) for g in m.generators]
        oracle = LatticeMonoid(gens)
        assert set(coords(m.irreducibles())) == oracle.atoms()
