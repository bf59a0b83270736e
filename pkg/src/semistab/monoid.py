"""Fine monoids in two representations: generators inside an abelian group
(:class:`AffineMonoid`) and generators modulo relations (:class:`PresentedMonoid`).

Index sets returned to callers (supports) are 1-based; exponent vectors are
plain tuples indexed from 0.
"""
from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Optional, Sequence, Union

from .diophantine import ExpVec, canonical_key, grlex_greater, hilbert_basis, nonneg_solve, resolve_cap
from .errors import (
    DimensionError,
    NotInMonoidError,
    NotIntegralError,
    NotSharpError,
    ResourceLimitExceeded,
    UndecidedWithinBound,
)
from .exactlin import (
    CokernelMap,
    FgAbelianGroup,
    GroupElement,
    IntMatrix,
    cokernel_map,
    combine,
    determinant,
    feasible_point,
    smith_normal_form,
    integer_kernel,
    solve_integer,
)

WORD_PROBLEM_DEGREE_CAP = 16


def exp_stats(v: Sequence[int]) -> tuple[frozenset, int, int]:
    """``(support, degree, gcd of entries)``; the support is 1-based."""
    supp = frozenset(i + 1 for i, x in enumerate(v) if x)
    return supp, sum(v), reduce(gcd, v, 0)


def dominates(u: Sequence[int], v: Sequence[int]) -> bool:
    """``u >= v`` componentwise."""
    return all(a >= b for a, b in zip(u, v))


def _unit(n: int, i: int) -> ExpVec:
    return tuple(int(j == i) for j in range(n))


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class AffineMonoid:
    """Submonoid of a finitely generated abelian group spanned by ``generators``.

    Zero generators are allowed and ignored by every predicate.
    """

    def __init__(self, ambient: FgAbelianGroup, generators: Sequence):
        self.ambient = ambient
        gens = []
        for g in generators:
            if isinstance(g, GroupElement):
                if g.group != ambient:
                    raise DimensionError("generator lives in a different group")
                gens.append(g)
            else:
                gens.append(ambient.element(g))
        self.generators: tuple[GroupElement, ...] = tuple(gens)

    @classmethod
    def free(cls, n: int) -> "AffineMonoid":
        """``N^n`` with its unit vectors."""
        group = FgAbelianGroup(n)
        return cls(group, group.basis())

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[int]], torsion: Sequence[int] = ()) -> "AffineMonoid":
        """Generators given as coordinate vectors (free part, then torsion residues)."""
        vectors = [list(v) for v in vectors]
        if not vectors:
            raise DimensionError("use an explicit ambient group for the trivial monoid")
        dim = len(vectors[0])
        group = FgAbelianGroup(dim - len(torsion), tuple(torsion))
        return cls(group, vectors)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        gens = ", ".join(str(list(g.coords)) for g in self.generators)
        return f"AffineMonoid({self.ambient}; {gens})"

    def element(self, exps: Sequence[int]) -> GroupElement:
        """``sum exps[i] * g_i``."""
        if len(exps) != self.ngens:
            raise DimensionError("exponent vector length differs from the number of generators")
        return combine(self.ambient, exps, self.generators)

    # ---- linear systems over N ------------------------------------------------

    def _columns(self, gens: Sequence[GroupElement]) -> list[list[int]]:
        """Columns of the N-system for ``gens`` plus one slack column per torsion row.

        A torsion coordinate ``t (mod m)`` becomes the equation ``t - m*y = rhs``
        with ``y >= 0``; residues are reduced so the slack is determined by the
        other variables.
        """
        d = self.ambient.free_rank
        mods = self.ambient.torsion
        cols = [list(g.coords) for g in gens]
        for j, m in enumerate(mods):
            cols.append([0] * d + [-m if i == j else 0 for i in range(len(mods))])
        return cols

    def _system(self, gens: Sequence[GroupElement]) -> IntMatrix:
        return IntMatrix.from_columns(self._columns(gens), self.ambient.dim)

    @cached_property
    def _full_system(self) -> IntMatrix:
        return self._system(self.generators)

    @cached_property
    def _nonzero(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if not g.is_zero())

    # ---- grading and sharpness ------------------------------------------------

    @cached_property
    def grading(self) -> Optional[tuple[int, ...]]:
        """Integer functional ``c`` on the free part with ``<c, g> >= 1`` on every
        nonzero generator, or ``None`` when the monoid is not sharp."""
        d = self.ambient.free_rank
        nz = [self.generators[i] for i in self._nonzero]
        if any(not any(g.free) for g in nz):
            return None  # a nonzero torsion generator is a unit
        if not nz:
            return (0,) * d
        # variables: c+ (d), c- (d), slack (one per generator)
        rows, rhs = [], []
        for k, g in enumerate(nz):
            row = list(g.free) + [-x for x in g.free] + [0] * len(nz)
            row[2 * d + k] = -1
            rows.append(row)
            rhs.append(1)
        sol = feasible_point(rows, rhs)
        if sol is None:
            return None
        c = [sol[i] - sol[d + i] for i in range(d)]
        den = reduce(_lcm, (Fraction(x).denominator for x in c), 1)
        ints = [int(x * den) for x in c]
        g = reduce(gcd, ints, 0)
        return tuple(x // g for x in ints)

    @cached_property
    def weights(self) -> tuple[int, ...]:
        """``<grading, g_i>`` for each generator (zero for zero generators)."""
        c = self._require_grading()
        return tuple(self.weight(g) for g in self.generators)

    def _require_grading(self) -> tuple[int, ...]:
        c = self.grading
        if c is None:
            raise NotSharpError(f"{self!r} is not sharp")
        return c

    def weight(self, g: GroupElement) -> int:
        c = self._require_grading()
        return sum(a * b for a, b in zip(c, g.free))

    def is_sharp(self) -> bool:
        return self.grading is not None

    # ---- membership -------------------------------------------------------------

    def _check(self, g) -> GroupElement:
        if not isinstance(g, GroupElement):
            g = self.ambient.element(g)
        if g.group != self.ambient:
            raise DimensionError("element lives in a different group")
        return g

    def representations(self, g, cap: Optional[int] = None) -> list[ExpVec]:
        """Componentwise-minimal exponent vectors expressing ``g``.

        The search is bounded by ``<grading, g>``, which is a certified radius:
        every representation has weighted degree exactly that value.
        """
        g = self._check(g)
        w = self.weight(g)
        if w < 0:
            return []
        if g.is_zero():
            return [(0,) * self.ngens]
        sols = nonneg_solve(
            self._full_system,
            g.coords,
            bound=w,
            grading=list(self.weights) + [0] * len(self.ambient.torsion),
            cap=cap,
        )
        n = self.ngens
        out = sorted({s[:n] for s in sols}, key=canonical_key)
        return out

    def expression(self, g, cap: Optional[int] = None) -> Optional[ExpVec]:
        """One canonical exponent vector for ``g`` or ``None`` if ``g`` is not in the monoid."""
        reps = self.representations(g, cap)
        return reps[0] if reps else None

    def contains(self, g, cap: Optional[int] = None) -> bool:
        return bool(self.representations(g, cap))

    def all_representations(self, g) -> list[ExpVec]:
        """Every exponent vector (over nonzero generators) summing to ``g``."""
        g = self._check(g)
        w = self.weight(g)
        n = self.ngens
        if w < 0:
            return []
        nz = list(self._nonzero)
        wts = self.weights
        out = []
        acc = [0] * n

        def rec(k: int, budget: int):
            if k == len(nz):
                if budget == 0 and self.element(acc) == g:
                    out.append(tuple(acc))
                return
            i = nz[k]
            for e in range(budget // wts[i] + 1):
                acc[i] = e
                rec(k + 1, budget - e * wts[i])
            acc[i] = 0

        rec(0, w)
        return sorted(out, key=canonical_key)

    # ---- Grothendieck group -----------------------------------------------------

    @cached_property
    def relation_lattice(self) -> tuple[tuple[int, ...], ...]:
        """Generators of ``{x in Z^n : sum x_i g_i = 0}``."""
        n = self.ngens
        if n == 0:
            return ()
        ker = integer_kernel(self._full_system)
        return tuple(v[:n] for v in ker if any(v[:n]))

    @cached_property
    def gr_map(self) -> CokernelMap:
        """``Z^ngens -> M^gr``; the images of the unit vectors generate ``M^gr``."""
        n = self.ngens
        cols = list(self.relation_lattice)
        return cokernel_map(IntMatrix.from_columns(cols, n) if cols else IntMatrix.zeros(n, 0), n)

    def grothendieck_group(self) -> FgAbelianGroup:
        return self.gr_map.group

    def to_gr(self, g) -> GroupElement:
        """Coordinates of an ambient element of the subgroup generated by ``M``."""
        g = self._check(g)
        sol = solve_integer(self._full_system, g.coords)
        if sol is None:
            raise NotInMonoidError(f"{g!r} is not in the group generated by the monoid")
        return self.gr_map(sol[0][: self.ngens])

    def in_group(self, g) -> bool:
        g = self._check(g)
        return solve_integer(self._full_system, g.coords) is not None

    @cached_property
    def intrinsic(self) -> "AffineMonoid":
        """The same monoid with ``M^gr`` as ambient group."""
        n = self.ngens
        gr = self.grothendieck_group()
        return AffineMonoid(gr, [self.gr_map(_unit(n, i)) for i in range(n)])

    # ---- irreducibles -------------------------------------------------------------

    @cached_property
    def _distinct_nonzero(self) -> tuple[int, ...]:
        seen, out = set(), []
        for i in self._nonzero:
            key = self.generators[i].coords
            if key not in seen:
                seen.add(key)
                out.append(i)
        return tuple(out)

    @cached_property
    def irreducible_indices(self) -> tuple[int, ...]:
        """Indices of generators that are irreducible, one per distinct element,
        in canonical order."""
        self._require_grading()
        idx = list(self._distinct_nonzero)
        gens = [self.generators[i] for i in idx]
        system = self._system(gens)
        grading = [self.weights[i] for i in idx] + [0] * len(self.ambient.torsion)
        keep = []
        for k, i in enumerate(idx):
            g = self.generators[i]
            sols = nonneg_solve(system, g.coords, bound=self.weights[i], grading=grading)
            if all(s[: len(idx)] == _unit(len(idx), k) for s in sols):
                keep.append(i)
        keep.sort(key=lambda i: canonical_key(self.generators[i].coords))
        return tuple(keep)

    def irreducibles(self) -> list[GroupElement]:
        """Irreducible elements in canonical order (they all have degree 1)."""
        return [self.generators[i] for i in self.irreducible_indices]

    @cached_property
    def reduced(self) -> "AffineMonoid":
        """Same monoid generated by its irreducibles only."""
        return AffineMonoid(self.ambient, self.irreducibles())

    def degree(self, g) -> int:
        """Largest ``n`` with ``g`` a sum of ``n`` nonzero elements (0 for 0).

        This is the maximal factorization length into irreducibles; it is
        finite for sharp monoids and superadditive.
        """
        g = self._check(g)
        red = self.reduced
        if not red.contains(g):
            raise NotInMonoidError(f"{g!r} is not in the monoid")
        best = 0
        for rep in red.all_representations(g):
            best = max(best, sum(rep))
        return best

    # ---- saturation -------------------------------------------------------------

    def is_saturated(self, cap: Optional[int] = None) -> bool:
        """Every ``x`` in ``M^gr`` with some positive multiple in ``M`` lies in ``M``.

        Torsion in ``M^gr`` rules saturation out (a torsion element has a multiple
        equal to 0). Otherwise every point of the cone lattice is an
        N-combination of ``d`` independent generators plus a lattice point of
        their half-open parallelepiped, so it suffices to test those points.
        """
        self._require_grading()
        cap = resolve_cap(cap)
        intr = self.intrinsic
        gr = intr.ambient
        vecs = sorted({g.free for g in intr.generators if not g.is_zero()})
        if not vecs:
            return True
        if gr.torsion:
            return False
        d = gr.free_rank
        tested: set[tuple[int, ...]] = set()
        for sub in itertools.combinations(vecs, d):
            for x in _parallelepiped_points(sub):
                if x in tested:
                    continue
                tested.add(x)
                if len(tested) > cap:
                    raise ResourceLimitExceeded("saturation test exceeded its point budget")
                if not intr.contains(gr.element(x), cap):
                    return False
        return True

    # ---- relations ----------------------------------------------------------------

    def congruence_generators(self, cap: Optional[int] = None) -> list[tuple[ExpVec, ExpVec]]:
        """Minimal relations ``(I, J)`` with ``I.g = J.g``, oriented ``I > J`` in graded lex.

        These are the Hilbert basis of the pair monoid minus the trivial pairs
        ``(e_i, e_i)``; they have disjoint supports and generate every relation.
        """
        n = self.ngens
        cols = [list(g.coords) for g in self.generators] + [[-x for x in g.coords] for g in self.generators]
        cols += self._columns([])
        hb = hilbert_basis(IntMatrix.from_columns(cols, self.ambient.dim), cap)
        out = set()
        for x in hb:
            i, j = x[:n], x[n : 2 * n]
            if i == j:
                continue
            out.add((i, j) if grlex_greater(i, j) else (j, i))
        return sorted(out, key=lambda p: (canonical_key(p[0] + p[1]), canonical_key(p[0])))


def _parallelepiped_points(gens: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Nonzero lattice points of ``{sum mu_i g_i : 0 <= mu_i < 1}`` for ``d``
    vectors in ``Z^d``; empty when they are dependent."""
    d = len(gens)
    g = IntMatrix.from_columns(gens, d)
    det = determinant(g)
    if det == 0:
        return []
    u, dm, _ = smith_normal_form(g)
    diag = dm.diagonal()
    # coset representatives of Z^d / G Z^d are U^-1 z with 0 <= z_i < d_i
    uinv_cols = [solve_integer(u, [int(i == j) for i in range(d)])[0] for j in range(d)]
    out = []
    for z in itertools.product(*(range(x) for x in diag)):
        if not any(z):
            continue
        y = [sum(uinv_cols[j][i] * z[j] for j in range(d)) for i in range(d)]
        # lambda = G^-1 y by Cramer's rule; subtract the integer parts
        point = list(y)
        for k in range(d):
            cols = [list(c) for c in gens]
            cols[k] = y
            lam = Fraction(determinant(IntMatrix.from_columns(cols, d)), det)
            fl = lam.__floor__()
            for i in range(d):
                point[i] -= fl * gens[k][i]
        out.append(tuple(point))
    return out


class PresentedMonoid:
    """Free commutative monoid on ``ngens`` letters modulo the congruence
    generated by ``relations``."""

    def __init__(self, ngens: int, relations: Sequence[tuple[Sequence[int], Sequence[int]]] = ()):
        self.ngens = ngens
        rels = []
        for lhs, rhs in relations:
            lhs, rhs = tuple(int(x) for x in lhs), tuple(int(x) for x in rhs)
            if len(lhs) != ngens or len(rhs) != ngens:
                raise DimensionError("relation length differs from the number of generators")
            if any(x < 0 for x in lhs + rhs):
                raise ValueError("relation exponents must be nonnegative")
            rels.append((lhs, rhs))
        self.relations: tuple[tuple[ExpVec, ExpVec], ...] = tuple(rels)

    def __repr__(self) -> str:
        return f"PresentedMonoid({self.ngens}, {list(self.relations)})"

    @cached_property
    def gr_map(self) -> CokernelMap:
        n = self.ngens
        cols = [[a - b for a, b in zip(l, r)] for l, r in self.relations]
        return cokernel_map(IntMatrix.from_columns(cols, n) if cols else IntMatrix.zeros(n, 0), n)

    def grothendieck_group(self) -> FgAbelianGroup:
        return self.gr_map.group

    def image(self, exps: Sequence[int]) -> GroupElement:
        return self.gr_map(exps)

    def _moves(self):
        for l, r in self.relations:
            if l != r:
                yield l, r
                yield r, l

    def congruence_class(self, x: Sequence[int], degree_cap: int = WORD_PROBLEM_DEGREE_CAP) -> tuple[set, bool]:
        """States reachable from ``x`` by relation moves without exceeding
        ``degree_cap``, and whether the cap cut the search."""
        x = tuple(x)
        seen = {x}
        queue = deque([x])
        truncated = False
        moves = list(self._moves())
        while queue:
            z = queue.popleft()
            for l, r in moves:
                if not dominates(z, l):
                    continue
                y = tuple(a - b + c for a, b, c in zip(z, l, r))
                if sum(y) > degree_cap:
                    truncated = True
                    continue
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen, truncated

    def equivalent(self, x: Sequence[int], y: Sequence[int], degree_cap: int = WORD_PROBLEM_DEGREE_CAP) -> bool:
        """Decide ``x ~ y`` by congruence closure; raise when the cap leaves it open."""
        x, y = tuple(x), tuple(y)
        if x == y:
            return True
        cls, truncated = self.congruence_class(x, degree_cap)
        if y in cls:
            return True
        if truncated:
            raise UndecidedWithinBound(f"equivalence of {x} and {y} undecided at degree {degree_cap}")
        return False

    def is_sharp(self, degree_cap: int = WORD_PROBLEM_DEGREE_CAP) -> bool:
        cls, truncated = self.congruence_class((0,) * self.ngens, degree_cap)
        if len(cls) > 1:
            return False
        if truncated:
            raise UndecidedWithinBound("class of 0 undecided within the degree cap")
        return True

    def to_affine(self, check: bool = True, degree_cap: int = WORD_PROBLEM_DEGREE_CAP) -> AffineMonoid:
        """The image in the Grothendieck group.

        With ``check`` the map to the image is verified injective: every
        minimal relation holding in the group must already follow from the
        presentation. Failure means the presentation is not integral.
        """
        n = self.ngens
        gr = self.grothendieck_group()
        aff = AffineMonoid(gr, [self.gr_map(_unit(n, i)) for i in range(n)])
        if check:
            for lhs, rhs in aff.congruence_generators():
                if not self.equivalent(lhs, rhs, degree_cap):
                    raise NotIntegralError(f"{lhs} and {rhs} agree in the group but not in the monoid")
        return aff


Monoid = Union[AffineMonoid, PresentedMonoid]


def _relations_of(m: Monoid) -> list[tuple[ExpVec, ExpVec]]:
    if isinstance(m, PresentedMonoid):
        return list(m.relations)
    return m.congruence_generators()


def _expression_in(m: Monoid, a) -> ExpVec:
    if isinstance(m, PresentedMonoid):
        a = tuple(a)
        if len(a) != m.ngens or any(x < 0 for x in a):
            raise NotInMonoidError(f"{a} is not an exponent vector of {m!r}")
        return a
    e = m.expression(a)
    if e is None:
        raise NotInMonoidError(f"{a!r} is not in {m!r}")
    return e


def pushout(u: Monoid, v: Monoid, a, b) -> PresentedMonoid:
    """Amalgamate ``u`` and ``v`` along ``a = b``.

    Generators are those of ``u`` followed by those of ``v``; relations are
    those of both factors plus the gluing relation.
    """
    ea, eb = _expression_in(u, a), _expression_in(v, b)
    nu, nv = u.ngens, v.ngens
    zu, zv = (0,) * nu, (0,) * nv
    rels = [(l + zv, r + zv) for l, r in _relations_of(u)]
    rels += [(zu + l, zu + r) for l, r in _relations_of(v)]
    rels.append((ea + zv, zu + eb))
    return PresentedMonoid(nu + nv, rels)


# ---- module-level spellings -------------------------------------------------------


def grothendieck_group(m: Monoid) -> FgAbelianGroup:
    return m.grothendieck_group()


def is_sharp(m: Monoid) -> bool:
    return m.is_sharp()


def irreducibles(m: Monoid) -> list:
    """Irreducibles as group elements (affine) or exponent vectors (presented)."""
    if isinstance(m, PresentedMonoid):
        aff = m.to_affine()
        if not aff.is_sharp():
            raise NotSharpError(f"{m!r} is not sharp")
        return [_unit(m.ngens, i) for i in aff.irreducible_indices]
    if not m.is_sharp():
        raise NotSharpError(f"{m!r} is not sharp")
    return m.irreducibles()


def contains(m: AffineMonoid, g) -> bool:
    return m.contains(g)


def is_saturated(m: AffineMonoid) -> bool:
    return m.is_saturated()


def congruence_generators(m: Monoid) -> list[tuple[ExpVec, ExpVec]]:
    """Minimal relations among the generators; a presented monoid is first
    converted to its (checked) affine image."""
    if isinstance(m, PresentedMonoid):
        m = m.to_affine()
    return m.congruence_generators()
