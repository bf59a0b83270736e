"""Seeded property suites. Each returns a :class:`SuiteReport`; a nonempty
``falsifications`` list means a checked statement failed."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Optional

from .errors import PreconditionError, UndecidedWithinBound
from .exactlin import FgAbelianGroup, GroupElement
from .homs import MonoidHom, check_certificate, semistable_from_certificate
from .monoid import AffineMonoid, PresentedMonoid, pushout
from .ringmodel.binomial import Pure, relative_binomial_ideal
from .ringmodel.lemmas import (
    check_unit_hypotheses,
    decompose_exponent,
    is_power,
    multiplication_injective,
    pth_root_adjust,
    radical_squarefree_check,
    unit_cancellation_check,
    unit_lemma_check,
)
from .ringmodel.series import QuotientSeriesRing, SeriesElement


@dataclass
class SuiteReport:
    suite: str
    trials: int
    seed: int
    degree: Optional[int]
    falsifications: list[str] = field(default_factory=list)
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.falsifications

    def bump(self, key: str, n: int = 1) -> None:
        self.stats[key] = self.stats.get(key, 0) + n

    def fail(self, msg: str) -> None:
        self.falsifications.append(msg)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "certified_degree": self.degree,
            "passed": self.passed,
            "falsifications": list(self.falsifications),
            "stats": dict(sorted(self.stats.items())),
        }


# ---- random instances ------------------------------------------------------------------------


def random_sharp_monoid(rng: random.Random, dim: int = 2, max_gens: int = 3, max_degree: int = 5) -> AffineMonoid:
    """Sharp affine monoid with at most ``max_gens`` generators in ``Z^dim``
    whose coordinates sum to at most ``max_degree`` in absolute value."""
    group = FgAbelianGroup(dim)
    while True:
        gens = []
        for _ in range(rng.randint(1, max_gens)):
            while True:
                v = [rng.randint(-max_degree, max_degree) for _ in range(dim)]
                if any(v) and sum(abs(x) for x in v) <= max_degree:
                    break
            gens.append(v)
        m = AffineMonoid(group, gens)
        if m.is_sharp():
            return m


def random_base(rng: random.Random) -> AffineMonoid:
    """A small sharp base monoid with at most two generators."""
    choice = rng.randrange(4)
    if choice == 0:
        return AffineMonoid.free(1)
    if choice == 1:
        a = rng.randint(2, 4)
        b = rng.choice([x for x in range(a + 1, 8) if x % a])
        return AffineMonoid.from_vectors([[a], [b]])
    if choice == 2:
        return AffineMonoid.free(2)
    return AffineMonoid.from_vectors([[1, 0], [1, rng.randint(2, 3)]])


def random_nonzero_exps(rng: random.Random, n: int, top: int = 2) -> tuple[int, ...]:
    while True:
        v = tuple(rng.randint(0, top) for _ in range(n))
        if any(v):
            return v


# ---- appendix: irreducibles -------------------------------------------------------------------


def brute_force_atoms(m: AffineMonoid) -> set[tuple[int, ...]]:
    """Atoms among all elements of weight at most the largest generator weight."""
    top = max(m.weights)
    elems = {m.ambient.zero().coords}
    frontier = [m.ambient.zero()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in m.generators:
                if g.is_zero():
                    continue
                y = x + g
                if m.weight(y) <= top and y.coords not in elems:
                    elems.add(y.coords)
                    nxt.append(y)
        frontier = nxt
    zero = m.ambient.zero().coords
    nonzero = [e for e in elems if e != zero]
    atoms = set()
    grp = m.ambient
    for y in nonzero:
        ye = grp.element(y)
        if not any((ye - grp.element(a)).coords in elems and a != y for a in nonzero):
            atoms.add(y)
    return atoms


def suite_propA1(trials: int = 200, seed: int = 0, truncation: Optional[int] = None) -> SuiteReport:
    rep = SuiteReport("propA1", trials, seed, None)
    rng = random.Random(seed)
    for t in range(trials):
        m = random_sharp_monoid(rng)
        irr = {g.coords for g in m.irreducibles()}
        atoms = brute_force_atoms(m)
        if irr != atoms:
            rep.fail(f"trial {t}: irreducibles {sorted(irr)} != atoms {sorted(atoms)} for {m!r}")
            continue
        red = m.reduced
        if not all(red.contains(g) for g in m.generators):
            rep.fail(f"trial {t}: irreducibles do not regenerate {m!r}")
        # deg: zero only at 0, superadditive on sampled pairs
        elems = [m.element([rng.randint(0, 2) for _ in range(m.ngens)]) for _ in range(3)]
        for x in elems:
            if (m.degree(x) == 0) != x.is_zero():
                rep.fail(f"trial {t}: deg({x!r}) = 0 mismatch")
        for x, y in combinations(elems, 2):
            if m.degree(x + y) < m.degree(x) + m.degree(y):
                rep.fail(f"trial {t}: deg not superadditive at {x!r}, {y!r}")
            rep.bump("superadditivity_pairs")
        rep.bump("monoids")
    return rep


# ---- semistable round trip -----------------------------------------------------------------


@dataclass(frozen=True)
class CertificateInstance:
    base: AffineMonoid
    r: int
    l: int
    q0: GroupElement
    B: tuple[int, ...]


def random_certificate(rng: random.Random, max_r: int = 5) -> CertificateInstance:
    q = random_base(rng)
    r = rng.randint(1, max_r)
    l = rng.randint(1, r)
    while True:
        exps = [rng.randint(0, 2) for _ in range(q.ngens)]
        if any(exps):
            break
    b = tuple(0 if i < l else rng.randint(0, 3) for i in range(r))
    return CertificateInstance(q, r, l, q.element(exps), b)


def check_round_trip(inst: CertificateInstance, rep: SuiteReport, tag: str, deep: bool = True) -> None:
    f = semistable_from_certificate(inst.base, inst.r, inst.l, inst.q0, inst.B)
    P = f.target
    original_p = P.generators[inst.base.ngens :]
    cert = f.semistable_type()
    if cert is None:
        rep.fail(f"{tag}: recognizer returned nothing")
        return
    if (cert.r, cert.l) != (inst.r, inst.l):
        rep.fail(f"{tag}: (r, l) = {(cert.r, cert.l)} expected {(inst.r, inst.l)}")
        return
    if not check_certificate(f, cert):
        rep.fail(f"{tag}: returned certificate fails the definition")
    if inst.l >= 2:
        if cert.q0 != inst.q0:
            rep.fail(f"{tag}: q0 {cert.q0!r} expected {inst.q0!r}")
        try:
            where = [original_p.index(p) for p in cert.p]
        except ValueError:
            rep.fail(f"{tag}: recovered generators differ from the built ones")
            return
        if sorted(where[: inst.l]) != list(range(inst.l)):
            rep.fail(f"{tag}: block {{1..l}} not recovered")
        if any(cert.B[k] != inst.B[where[k]] for k in range(inst.r)):
            rep.fail(f"{tag}: B {cert.B} does not match {inst.B} under {where}")
        if f.split_test() is not None:
            rep.fail(f"{tag}: l >= 2 but the map splits")
    # every one-sided basis relation is n (Delta_l, q0, B)
    delta = cert.delta
    for a, i, b, j in f.relation_basis(p=cert.p):
        if any(a) or not any(b):
            continue
        n = i[0]
        if i != tuple(n * x for x in delta) or j != tuple(n * x for x in cert.B) or f.q_element(b) != cert.q0 * n:
            rep.fail(f"{tag}: relation {(i, b, j)} is not a multiple of the certified one")
        rep.bump("one_sided_relations")
    ideal = relative_binomial_ideal(f, cert)
    if ideal.relations != (Pure(delta),):
        rep.fail(f"{tag}: ideal {ideal} is not (X_1...X_l)")
    rep.bump(f"l={inst.l}")
    if deep:
        _check_no_collisions(f, cert, rep, tag)
        _check_pushout(f, cert, rep, tag)


def _check_no_collisions(f: MonoidHom, cert, rep: SuiteReport, tag: str) -> None:
    """Elements ``f(q) + T.p`` with a zero in ``T`` on ``1..l`` are pairwise distinct."""
    if cert.l < 2 and cert.r < 2:
        return
    seen: dict[tuple, tuple] = {}
    qgens = f.q_gens
    rng = random.Random(hash((cert.r, cert.l, cert.B)) & 0xFFFF)
    for _ in range(40):
        a = tuple(rng.randint(0, 2) for _ in qgens)
        t = [rng.randint(0, 2) for _ in range(cert.r)]
        t[rng.randrange(cert.l)] = 0
        q = f.q_element(a)
        val = (f.fq_element(a) + f.p_element(t, cert.p)).coords
        key = (q.coords, tuple(t))
        if val in seen and seen[val] != key:
            rep.fail(f"{tag}: f(q)+T.p collides for {seen[val]} and {key}")
        seen[val] = key
    rep.bump("collision_samples", 40)


def _check_pushout(f: MonoidHom, cert, rep: SuiteReport, tag: str) -> None:
    """``U x_(Delta.p, f(q0)+B.p) V -> P`` is bijective (degree cap 10)."""
    l, r = cert.l, cert.r
    if l < 2:
        return
    Q = f.source
    U = AffineMonoid.free(l)
    # V = Q x N^(r-l) on generators (q's, p_{l+1..r})
    vgroup = FgAbelianGroup(Q.ambient.free_rank + r - l, Q.ambient.torsion)
    fr = Q.ambient.free_rank

    def lift(g: GroupElement, tail):
        return vgroup.element(list(g.free) + list(tail) + list(g.torsion))

    vgens = [lift(g, [0] * (r - l)) for g in f.q_gens]
    vgens += [lift(Q.ambient.zero(), [int(i == k) for i in range(r - l)]) for k in range(r - l)]
    V = AffineMonoid(vgroup, vgens)
    b_elem = lift(cert.q0, cert.B[l:])
    po = pushout(U, V, U.element([1] * l), b_elem)
    images = list(cert.p[:l]) + list(f.fq) + list(cert.p[l:])
    target = AffineMonoid(f.target.ambient, images)
    try:
        for lhs, rhs in target.congruence_generators():
            if not po.equivalent(lhs, rhs, degree_cap=10):
                rep.fail(f"{tag}: relation {lhs} = {rhs} of P does not hold in the pushout")
        rep.bump("pushout_checks")
    except UndecidedWithinBound:
        rep.bump("pushout_undecided")
    for lhs, rhs in po.relations:
        if target.element(lhs) != target.element(rhs):
            rep.fail(f"{tag}: pushout relation {lhs} = {rhs} fails in P")


def suite_prop2_2(trials: int = 200, seed: int = 0, truncation: Optional[int] = None, deep: bool = True) -> SuiteReport:
    rep = SuiteReport("prop2_2", trials, seed, None)
    rng = random.Random(seed)
    for t in range(trials):
        inst = random_certificate(rng)
        check_round_trip(inst, rep, f"trial {t}", deep=deep)
    return rep


# ---- truncated ring suites ------------------------------------------------------------------


def random_binomial_ring(rng: random.Random, truncation: int, char: int = 0) -> QuotientSeriesRing:
    n = rng.randint(2, 3)
    while True:
        i0 = [0] * n
        j0 = [0] * n
        for k in range(n):
            side = rng.randrange(3)
            if side == 0:
                i0[k] = rng.randint(1, 2)
            elif side == 1:
                j0[k] = rng.randint(1, 2)
        if any(i0) and any(j0) and sum(i0) <= 3 and sum(j0) <= 3:
            return QuotientSeriesRing(n, binomial=(i0, j0), char=char, truncation=truncation)


def random_series(rng: random.Random, ring: QuotientSeriesRing, terms: int, max_degree: int, unit: bool = False) -> SeriesElement:
    basis = [e for e in ring.standard_monomials(max_degree) if any(e)]
    coeffs = {}
    for _ in range(terms):
        if basis:
            coeffs[rng.choice(basis)] = rng.randint(-3, 3)
    if unit:
        coeffs[(0,) * ring.nvars] = rng.choice([1, 2, -1, 3])
    return ring.element(coeffs)


def random_equivalent_exponent(rng: random.Random, ring: QuotientSeriesRing, e, steps: int = 4):
    """Apply random relation moves ``I0 <-> J0`` to ``e``."""
    i0, j0 = ring.binomial
    e = list(e)
    for _ in range(steps):
        moves = []
        if all(a >= b for a, b in zip(e, i0)):
            moves.append((i0, j0))
        if all(a >= b for a, b in zip(e, j0)):
            moves.append((j0, i0))
        if not moves:
            break
        src, dst = rng.choice(moves)
        e = [a - s + d for a, s, d in zip(e, src, dst)]
    return tuple(e)


def suite_prop3_2(trials: int = 200, seed: int = 0, truncation: int = 8) -> SuiteReport:
    rep = SuiteReport("prop3_2", trials, seed, truncation)
    rng = random.Random(seed)
    for t in range(trials):
        ring = random_binomial_ring(rng, truncation)
        n = ring.nvars
        # (1) injectivity of X_i
        for i in range(1, n + 1):
            if not multiplication_injective(ring, i):
                rep.fail(f"trial {t}: X_{i} not injective in {ring}")
        rep.bump("injectivity")
        # (3) x^I u = x^J v forces u = v and x^I = x^J
        top = max(1, truncation // 3)
        i = tuple(rng.randint(0, 2) for _ in range(n))
        while ring.wdeg(i) > top:
            i = tuple(max(0, x - 1) for x in i)
        j = random_equivalent_exponent(rng, ring, i) if rng.random() < 0.7 else tuple(rng.randint(0, 2) for _ in range(n))
        if ring.wdeg(j) <= truncation // 2:
            u = random_series(rng, ring, 3, truncation // 2, unit=True)
            res = unit_cancellation_check(ring, i, j, u)
            if res is False:
                rep.fail(f"trial {t}: x^{i} u = x^{j} v without u = v, x^I = x^J in {ring}")
            rep.bump("cancellation_solved" if res else "cancellation_vacuous")
        # (4) decompositions of equal monomials
        e = tuple(rng.randint(0, 4) for _ in range(n))
        f = random_equivalent_exponent(rng, ring, e, steps=rng.randint(1, 5))
        if ring.normal_form(e) != ring.normal_form(f):
            rep.fail(f"trial {t}: relation moves changed the normal form")
        order = [rng.randrange(2) for _ in range(6)]
        e1, a, b = decompose_exponent(ring, e, order)
        f1, a2, b2 = decompose_exponent(ring, f, order[::-1])
        if e1 != f1 or a + b != a2 + b2:
            rep.fail(f"trial {t}: decompositions {(e1, a, b)} and {(f1, a2, b2)} disagree in {ring}")
        rep.bump("decompositions")
    return rep


def suite_lemma1_3(trials: int = 100, seed: int = 0, truncation: int = 10) -> SuiteReport:
    rep = SuiteReport("lemma1_3", trials, seed, truncation)
    rng = random.Random(seed)
    done = attempts = 0
    while done < trials:
        attempts += 1
        if attempts > 50 * trials:
            rep.fail(f"only {done} hypothesis-satisfying instances in {attempts} attempts")
            break
        p = rng.choice([2, 3])
        k = rng.choice([1, 2])
        q = p**k
        e = rng.randint(2, 3)
        rels = []
        for _ in range(rng.randint(1, 2)):
            rels.append(random_nonzero_exps(rng, e, 2))
        ring = QuotientSeriesRing(e, monomials=rels, char=p, truncation=truncation)
        cands = [m for m in ring.standard_monomials(truncation // q) if any(m)]
        if not cands:
            continue
        a = rng.choice(cands)
        h = ring.monomial(a) * random_series(rng, ring, 2, 2, unit=True)
        if h.is_zero() or q * h.order() > truncation:
            continue
        # u' on exponents divisible by q, u'' biased towards monomials killed by H^q
        u1 = {(0,) * e: rng.randint(1, p - 1)}
        for m in ring.standard_monomials(truncation // q):
            if any(m) and rng.random() < 0.3:
                u1[tuple(q * x for x in m)] = rng.randint(0, p - 1)
        lead = tuple(q * x for x in a)
        killed = [m for m in ring.standard_monomials() if any(x % q for x in m) and ring.normal_form(tuple(x + y for x, y in zip(lead, m))) is None]
        others = [m for m in ring.standard_monomials() if any(x % q for x in m)]
        u2 = {}
        for _ in range(rng.randint(0, 3)):
            pool = killed if (killed and rng.random() < 0.8) else others
            if pool:
                u2[rng.choice(pool)] = rng.randint(1, p - 1)
        u = ring.element({**u1, **u2})
        if not is_power(h**q * u, q):
            rep.bump("hypothesis_fails")
            continue
        res = pth_root_adjust(h, u, p, k)
        if not res.identity_holds:
            rep.fail(f"instance {done}: (Hv)^q != H^q u' in {ring}")
        if not res.residual_zero:
            rep.fail(f"instance {done}: H^q u'' != 0 in {ring} with H={h}, u={u}")
        if res.v ** q != res.u_prime:
            rep.fail(f"instance {done}: v^q != u'")
        rep.bump(f"p={p},k={k}")
        rep.bump("nontrivial_u2" if not res.u_second.is_zero() else "trivial_u2")
        done += 1
    return rep


def suite_lemma1_7(trials: int = 200, seed: int = 0, truncation: int = 8) -> SuiteReport:
    rep = SuiteReport("lemma1_7", trials, seed, truncation)
    rng = random.Random(seed)
    for t in range(trials):
        nv = rng.randint(2, 4)
        gens = sorted({tuple(rng.randint(0, 1) for _ in range(nv)) for _ in range(rng.randint(1, 3))} - {(0,) * nv})
        if not gens:
            gens = [tuple(int(i == 0) for i in range(nv))]
        npow = rng.randint(2, 3)
        ring = QuotientSeriesRing(nv, monomials=[], truncation=truncation)
        top = truncation // npow
        f = ring.zero()
        for g in gens:
            if sum(g) <= top:
                f = f + ring.monomial(g) * random_series(rng, ring, 2, top - sum(g), unit=rng.random() < 0.5)
        if rng.random() < 0.5:
            f = f + random_series(rng, ring, 1, top)
        f = f.truncate(top)
        res = radical_squarefree_check(gens, f, npow)
        if not res.holds:
            rep.fail(f"trial {t}: f^{npow} in I but f not in I for I={gens}, f={f}")
        rep.bump("power_in_ideal" if res.power_in_ideal else "power_not_in_ideal")
    return rep


def _random_supports(rng: random.Random, l: int, s: int) -> list[set[int]]:
    lam = set(range(1, l + 1))
    while True:
        sets = [{j for j in lam if rng.random() < 0.6} for _ in range(s)]
        if all(a | b == lam for a, b in combinations(sets, 2)):
            return sets


def _random_admissible_unit(rng: random.Random, ring: QuotientSeriesRing, l: int, support: set[int]) -> SeriesElement:
    """``1 + sum f_S`` with every part supported on a proper superset-of-``support`` subset of ``1..l``."""
    if rng.random() < 0.3:
        return ring.one()
    lam = set(range(1, l + 1))
    mons = []
    for e in ring.standard_monomials(ring.truncation // 2):
        s = {i + 1 for i in range(l) if e[i]}
        if support <= s and s != lam and any(e) and (support or any(e)):
            mons.append(e)
    if not support:
        mons = [e for e in mons if any(e[:l]) or any(e[l:])]
    out = {(0,) * ring.nvars: 1}
    for _ in range(rng.randint(1, 3)):
        if mons:
            out[rng.choice(mons)] = rng.randint(-2, 2)
    return ring.element(out)


def suite_lemma4_2(trials: int = 200, seed: int = 0, truncation: int = 8) -> SuiteReport:
    rep = SuiteReport("lemma4_2", trials, seed, truncation)
    rng = random.Random(seed)
    for t in range(trials):
        n = rng.randint(2, 4)
        l = rng.randint(1, n)
        s = rng.randint(2, 3)
        ring = QuotientSeriesRing.semistable(n, l, truncation=truncation)
        supports = _random_supports(rng, l, s)
        units = [_random_admissible_unit(rng, ring, l, sup) for sup in supports]
        res = unit_lemma_check(l, units, [sorted(x) for x in supports])
        if not res.expansion_holds:
            rep.fail(f"trial {t}: product != 1 + sum(u_i - 1)")
        if not res.holds:
            rep.fail(f"trial {t}: product 1 with nontrivial units")
        if res.product_is_one != res.all_trivial:
            rep.fail(f"trial {t}: product is 1 exactly when all units are 1 fails")
        rep.bump("all_trivial" if res.all_trivial else "nontrivial")
        # force the product to 1 through the last unit
        prod = ring.one()
        for u in units[:-1]:
            prod = prod * u
        forced = units[:-1] + [prod.inverse()]
        try:
            check_unit_hypotheses(l, forced, [sorted(x) for x in supports])
        except PreconditionError:
            rep.bump("forced_violates_hypotheses")
            if all(u == ring.one() for u in units[:-1]):
                rep.fail(f"trial {t}: trivial forced product rejected")
            continue
        res2 = unit_lemma_check(l, forced, [sorted(x) for x in supports])
        if not (res2.product_is_one and res2.all_trivial):
            rep.fail(f"trial {t}: forced product admissible but units nontrivial")
        rep.bump("forced_admissible")
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "prop2_2": suite_prop2_2,
    "prop3_2": suite_prop3_2,
    "lemma1_3": suite_lemma1_3,
    "lemma1_7": suite_lemma1_7,
    "lemma4_2": suite_lemma4_2,
    "propA1": suite_propA1,
}

DEFAULT_DEGREES = {"prop3_2": 8, "lemma1_3": 10, "lemma1_7": 8, "lemma4_2": 8}


def run_suite(name: str, trials: int, seed: int, truncation: Optional[int] = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    fn = SUITES[name]
    if name in DEFAULT_DEGREES:
        return fn(trials=trials, seed=seed, truncation=truncation or DEFAULT_DEGREES[name])
    return fn(trials=trials, seed=seed)
