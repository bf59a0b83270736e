"""Homomorphisms ``f: Q -> P`` of fine sharp monoids and the chart classifier.

Most analyses share one object: the Hilbert basis of relations

    f(a.q) + I.p = f(b.q) + J.p

where ``q`` are the irreducibles of ``Q`` and ``p`` the irreducibles of ``P``
outside ``f(Q)``. Elements are stored as ``(a, I, b, J)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Union

from .diophantine import ExpVec, canonical_key, grlex_greater, hilbert_basis, nonneg_solve
from .errors import DimensionError, NotInMonoidError, NotIntegralError, PreconditionError, SemistabError
from .exactlin import FgAbelianGroup, GroupElement, IntMatrix, cokernel_map, solve_integer
from .monoid import AffineMonoid, PresentedMonoid

Relation = tuple[ExpVec, ExpVec, ExpVec, ExpVec]


def _as_affine(m: Union[AffineMonoid, PresentedMonoid]) -> AffineMonoid:
    return m.to_affine() if isinstance(m, PresentedMonoid) else m


def _zeros(n: int) -> ExpVec:
    return (0,) * n


@dataclass(frozen=True)
class IntegralityResult:
    integral: bool
    counterexample: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.integral


@dataclass(frozen=True)
class SemistableCertificate:
    """``p_1 + ... + p_l = f(q0) + B.p`` with ``p`` listed after ``perm``.

    ``perm[k]`` is the 1-based index, among the irreducibles of ``P`` outside
    ``f(Q)``, of the ``k``-th certificate generator (0 marks ``f(q0)`` itself in
    the ``l = 1`` form ``P = f(Q) x N^(r-1)``).
    """

    r: int
    l: int
    perm: tuple[int, ...]
    q0: GroupElement
    B: ExpVec
    p: tuple[GroupElement, ...]

    @property
    def delta(self) -> ExpVec:
        return tuple(int(i < self.l) for i in range(self.r))


@dataclass(frozen=True)
class ChartClassification:
    variant: str  # Smooth | Semistable | SplitQuadric | Inconsistent
    multiplicity: int
    torsion_ok: bool
    torsion_order: int
    r: Optional[int] = None
    certificate: Optional[SemistableCertificate] = None
    quadric: Optional[tuple[int, int]] = None
    reason: Optional[str] = None
    saturation_violation: bool = False


class MonoidHom:
    """``f: Q -> P`` given by the images of the generators of ``Q``.

    Presented monoids are converted to their affine image first; images for a
    presented target may be exponent vectors over its generators.
    """

    def __init__(self, source, target, images: Sequence, check: bool = True):
        self.source = _as_affine(source)
        self.target = _as_affine(target)
        if len(images) != self.source.ngens:
            raise DimensionError("one image per source generator is required")
        imgs = []
        for x in images:
            if isinstance(x, GroupElement):
                imgs.append(x)
            elif isinstance(target, PresentedMonoid):
                imgs.append(self.target.element(x))
            else:
                imgs.append(self.target.ambient.element(x))
        self.images: tuple[GroupElement, ...] = tuple(imgs)
        if check:
            self._validate()

    def __repr__(self) -> str:
        return f"MonoidHom({self.source!r} -> {self.target!r}, {[list(x.coords) for x in self.images]})"

    def _validate(self):
        P = self.target
        for x in self.images:
            if x.group != P.ambient:
                raise DimensionError("image lives in a different group")
            if P.is_sharp():
                if not P.contains(x):
                    raise NotInMonoidError(f"image {x!r} is not in the target")
            elif not P.in_group(x):
                raise NotInMonoidError(f"image {x!r} is not in the target group")
        for v in self.source.relation_lattice:
            if not self.apply_exps(v).is_zero():
                raise PreconditionError("images violate a relation of the source")

    def apply_exps(self, exps: Sequence[int]) -> GroupElement:
        acc = self.target.ambient.zero()
        for c, x in zip(exps, self.images):
            if c:
                acc = acc + x * c
        return acc

    def __call__(self, q) -> GroupElement:
        """Image of an element of ``Q`` (group element or coordinates)."""
        Q = self.source
        q = q if isinstance(q, GroupElement) else Q.ambient.element(q)
        sol = solve_integer(Q._full_system, q.coords)
        if sol is None:
            raise NotInMonoidError(f"{q!r} is not in the group generated by the source")
        return self.apply_exps(sol[0][: Q.ngens])

    # ---- cached structure ---------------------------------------------------------

    @cached_property
    def q_indices(self) -> tuple[int, ...]:
        """Source generators used as the ``q`` block (the irreducibles of ``Q``)."""
        return self.source.irreducible_indices

    @cached_property
    def q_gens(self) -> tuple[GroupElement, ...]:
        return tuple(self.source.generators[i] for i in self.q_indices)

    @cached_property
    def fq(self) -> tuple[GroupElement, ...]:
        return tuple(self.images[i] for i in self.q_indices)

    @cached_property
    def p_gens(self) -> tuple[GroupElement, ...]:
        """Irreducibles of ``P`` not in ``f(Q)``, in canonical order."""
        image = AffineMonoid(self.target.ambient, self.fq)
        if not image.is_sharp():
            # f(Q) sharp fails only for degenerate maps; fall back to the group test
            return tuple(p for p in self.target.irreducibles() if not image.in_group(p))
        return tuple(p for p in self.target.irreducibles() if not image.contains(p))

    def q_element(self, a: Sequence[int]) -> GroupElement:
        acc = self.source.ambient.zero()
        for c, g in zip(a, self.q_gens):
            if c:
                acc = acc + g * c
        return acc

    def p_element(self, exps: Sequence[int], gens: Optional[Sequence[GroupElement]] = None) -> GroupElement:
        gens = self.p_gens if gens is None else gens
        acc = self.target.ambient.zero()
        for c, g in zip(exps, gens):
            if c:
                acc = acc + g * c
        return acc

    def fq_element(self, a: Sequence[int]) -> GroupElement:
        acc = self.target.ambient.zero()
        for c, g in zip(a, self.fq):
            if c:
                acc = acc + g * c
        return acc

    def relation_basis(self, p: Optional[Sequence[GroupElement]] = None, cap: Optional[int] = None) -> list[Relation]:
        """Hilbert basis of ``f(a.q) + I.p = f(b.q) + J.p`` without the diagonal pairs."""
        if p is None:
            return self._relation_basis
        return _relation_basis(self.target, self.fq, tuple(p), cap)

    @cached_property
    def _relation_basis(self) -> list[Relation]:
        return _relation_basis(self.target, self.fq, self.p_gens, None)

    # ---- predicates -----------------------------------------------------------------

    def is_injective(self) -> bool:
        """Injective on ``Q`` iff injective on ``Q^gr``, as ``Q`` is cancellative."""
        Q, P = self.source, self.target
        n = Q.ngens
        cols = [list(x.coords) for x in self.images] + P._columns([])
        if n == 0:
            return True
        ker = solve_integer(IntMatrix.from_columns(cols, P.ambient.dim), [0] * P.ambient.dim)[1]
        return all(Q.element(v[:n]).is_zero() for v in ker)

    def is_integral(self) -> IntegralityResult:
        """Decide integrality on the relation basis.

        For a basis relation ``f(a)+I.p = f(b)+J.p`` a witness is a pair
        ``a1, a2`` with ``a + a1 = b + a2`` in ``Q`` and ``I.p - f(a1)`` in ``P``.
        It suffices to try the minimal such pairs: adding ``(u, v)`` with
        ``u = v`` in ``Q`` only shrinks ``I.p - f(a1)``. Witnesses add up, and
        every identity in ``P`` reduces to a relation of this shape.
        """
        for rel in self.relation_basis():
            if not self._has_witness(rel):
                a, i, b, j = rel
                if grlex_greater(a, b):  # report the grlex-smaller Q-part first
                    a, i, b, j = b, j, a, i
                return IntegralityResult(
                    False,
                    {
                        "q": self.q_element(a),
                        "q_prime": self.q_element(b),
                        "p": self.p_element(i),
                        "p_prime": self.p_element(j),
                    },
                )
        return IntegralityResult(True)

    def _has_witness(self, rel: Relation) -> bool:
        a, i, b, j = rel
        if not any(a) and not any(b):
            return True
        Q, P = self.source, self.target
        qa, qb = self.q_element(a), self.q_element(b)
        m = len(self.q_gens)
        # a1 - a2 = b - a in Q
        sub = AffineMonoid(Q.ambient, self.q_gens)
        cols = [list(g.coords) for g in self.q_gens] + [[-x for x in g.coords] for g in self.q_gens]
        cols += sub._columns([])
        rhs = (qb - qa).coords
        sols = nonneg_solve(IntMatrix.from_columns(cols, Q.ambient.dim), rhs)
        ip = self.p_element(i)
        for s in sols:
            a1 = s[:m]
            if P.contains(ip - self.fq_element(a1)):
                return True
        return False

    @cached_property
    def integral(self) -> bool:
        return bool(self.is_integral())

    def split_test(self) -> Optional[AffineMonoid]:
        """The complement ``N`` with ``P = f(Q) x N`` if it exists.

        In any splitting with sharp factors the complement is generated by the
        irreducibles outside ``f(Q)``; ``Q x N -> P`` is then bijective iff every
        basis relation has equal ``Q``-parts.
        """
        if not self.is_injective():
            raise PreconditionError("split_test needs an injective homomorphism")
        for a, i, b, j in self.relation_basis():
            if self.q_element(a) != self.q_element(b):
                return None
        return AffineMonoid(self.target.ambient, self.p_gens)

    def semistable_type(self) -> Optional[SemistableCertificate]:
        """Certificate of semistable type over ``Q`` or ``None``."""
        Q = self.source
        if not Q.is_sharp() or not self.target.is_sharp():
            raise PreconditionError("semistable_type needs sharp monoids")
        if not self.q_gens:
            raise PreconditionError("semistable_type needs Q != 0")
        if not self.integral:
            raise NotIntegralError("the homomorphism is not integral")
        rels = self.relation_basis()
        r = len(self.p_gens)
        zq = Q.ambient.zero()
        for a, i, b, j in rels:
            if not any(a) and not any(b) and i != j:
                return None  # p_1..p_r not free
        one_sided = []
        for a, i, b, j in rels:
            if not any(a) and any(b):
                one_sided.append((i, b, j))
        if not one_sided:
            if self.is_injective() and self.split_test() is not None:
                return self._trivial_certificate()
            return None
        block = set(range(r))
        for i, _, _ in one_sided:
            block &= {k for k in range(r) if i[k]}
        if not block:
            return None
        lam = tuple(int(k in block) for k in range(r))
        prim = [(b, j) for i, b, j in one_sided if i == lam and not any(j[k] for k in block)]
        if not prim:
            return None
        b0, j0 = min(prim, key=lambda t: (canonical_key(t[1]), canonical_key(t[0])))
        q0 = self.q_element(b0)
        if q0 == zq:
            return None
        perm0 = sorted(block) + [k for k in range(r) if k not in block]
        B = tuple(j0[k] for k in perm0)
        cert = SemistableCertificate(
            r=r,
            l=len(block),
            perm=tuple(k + 1 for k in perm0),
            q0=q0,
            B=B,
            p=tuple(self.p_gens[k] for k in perm0),
        )
        self._check_relation_shape(cert, one_sided, perm0)
        return cert

    def _trivial_certificate(self) -> SemistableCertificate:
        q0 = self.q_gens[0]
        r = len(self.p_gens) + 1
        return SemistableCertificate(
            r=r,
            l=1,
            perm=tuple(range(r)),
            q0=q0,
            B=_zeros(r),
            p=(self.fq[0],) + self.p_gens,
        )

    def _check_relation_shape(self, cert, one_sided, perm0):
        """Every one-sided basis relation must be ``n`` times the certified one."""
        for i, b, j in one_sided:
            ip = tuple(i[k] for k in perm0)
            jp = tuple(j[k] for k in perm0)
            n = ip[0]
            if (
                n < 1
                or ip != tuple(n * x for x in cert.delta)
                or jp != tuple(n * x for x in cert.B)
                or self.q_element(b) != cert.q0 * n
            ):
                raise SemistabError(f"basis relation {(i, b, j)} is not a multiple of the certified relation")

    # ---- cokernel torsion -----------------------------------------------------------

    def coker_torsion(self) -> FgAbelianGroup:
        """``Coker(Q^gr -> P^gr)``."""
        P = self.target
        n = P.ngens
        cols = [list(v) for v in P.relation_lattice]
        for x in self.images:
            sol = solve_integer(P._full_system, x.coords)
            if sol is None:
                raise NotInMonoidError("image outside the target group")
            cols.append(list(sol[0][:n]))
        m = IntMatrix.from_columns(cols, n) if cols else IntMatrix.zeros(n, 0)
        return cokernel_map(m, n).group

    def coker_torsion_invertible(self, char: int) -> tuple[int, bool]:
        order = self.coker_torsion().torsion_order
        return order, char == 0 or order % char != 0


def _relation_basis(P: AffineMonoid, fq, p, cap) -> list[Relation]:
    m, r = len(fq), len(p)
    gens = list(fq) + list(p)
    cols = [list(g.coords) for g in gens] + [[-x for x in g.coords] for g in gens]
    cols += P._columns([])
    hb = hilbert_basis(IntMatrix.from_columns(cols, P.ambient.dim), cap)
    k = m + r
    out = []
    for x in hb:
        left, right = x[:k], x[k : 2 * k]
        if left == right:
            continue
        out.append((left[:m], left[m:], right[:m], right[m:]))
    return out


def check_certificate(f: MonoidHom, cert: SemistableCertificate) -> bool:
    """Check the definition of semistable type directly from the data."""
    Q, P = f.source, f.target
    r, l = cert.r, cert.l
    if not (1 <= l <= r) or len(cert.p) != r or len(cert.B) != r or any(cert.B[:l]):
        return False
    if cert.q0.is_zero() or not Q.contains(cert.q0):
        return False
    if any(not P.contains(x) for x in cert.p):
        return False
    # P generated by f(Q) and p
    span = AffineMonoid(P.ambient, list(f.images) + list(cert.p))
    if not span.is_sharp() or any(not span.contains(g) for g in P.generators):
        return False
    # N = <p> free of rank r
    if any(x.is_zero() for x in cert.p) or len(set(cert.p)) != r:
        return False
    if AffineMonoid(P.ambient, cert.p).congruence_generators():
        return False
    lhs = f.p_element(cert.delta, cert.p)
    rhs = f(cert.q0) + f.p_element(cert.B, cert.p)
    if lhs != rhs:
        return False
    for a, i, b, j in _relation_basis(P, f.fq, cert.p, None):
        if not any(a) and any(b) and not all(i[k] for k in range(l)):
            return False
    return True


def semistable_from_certificate(Q: AffineMonoid, r: int, l: int, q0, B: Sequence[int]) -> MonoidHom:
    """Build ``P = Q x N^r / (Delta_l.p = f(q0) + B.p)`` and the structure map.

    ``P^gr`` is the quotient of ``Q^gr + Z^r`` by the relation; the monoid is
    the image of ``Q x N^r``.
    """
    if not 1 <= l <= r or len(B) != r or any(B[:l]) or any(x < 0 for x in B):
        raise PreconditionError("need 1 <= l <= r and B supported on {l+1..r}")
    intr = Q.intrinsic
    gr = intr.ambient
    q0 = q0 if isinstance(q0, GroupElement) else Q.ambient.element(q0)
    q0g = Q.to_gr(q0)
    dq = gr.dim
    dim = dq + r
    cols = []
    for k, mod in enumerate(gr.torsion):
        col = [0] * dim
        col[gr.free_rank + k] = mod
        cols.append(col)
    delta = [int(i < l) for i in range(r)]
    cols.append([-x for x in q0g.coords] + [d - b for d, b in zip(delta, B)])
    proj = cokernel_map(IntMatrix.from_columns(cols, dim), dim)
    images = [proj(list(g.coords) + [0] * r) for g in intr.generators]
    ps = [proj([0] * dq + [int(i == k) for i in range(r)]) for k in range(r)]
    P = AffineMonoid(proj.group, images + ps)
    return MonoidHom(Q, P, images)


def _quadric_pair(rels) -> Optional[tuple[int, int]]:
    """``(i, j)`` (1-based) when the relations are exactly ``2 e_i = 2 e_j``."""
    if len(rels) != 1:
        return None
    lhs, rhs = rels[0]
    if sum(lhs) != 2 or sum(rhs) != 2 or max(lhs) != 2 or max(rhs) != 2:
        return None
    i, j = lhs.index(2), rhs.index(2)
    return tuple(sorted((i + 1, j + 1)))


def classify_chart(f: MonoidHom, char: int) -> ChartClassification:
    """Smooth / Semistable / SplitQuadric, or Inconsistent with a reason.

    Precondition failures are returned as Inconsistent values.
    """
    Q, P = f.source, f.target

    def bad(reason: str, order: int = 1, ok: bool = True, sat: bool = False) -> ChartClassification:
        return ChartClassification("Inconsistent", 0, ok, order, reason=reason, saturation_violation=sat)

    if char < 0:
        return bad("characteristic must be 0 or a prime")
    if not Q.is_sharp() or not P.is_sharp():
        return bad("source and target must be sharp")
    if not f.q_gens:
        return bad("the base monoid must be nonzero")
    order, ok = f.coker_torsion_invertible(char)
    if not f.is_injective():
        return bad("homomorphism is not injective", order, ok)
    if not f.integral:
        return bad("homomorphism is not integral", order, ok)
    saturated = P.is_saturated()

    def finish(c: ChartClassification) -> ChartClassification:
        if not ok:
            torsion_reason = f"cokernel torsion of order {order} is not invertible in characteristic {char}"
            reason = torsion_reason if c.variant != "Inconsistent" else f"{c.reason}; {torsion_reason}"
            c = bad(reason, order, ok)
        if saturated and c.variant not in ("Smooth", "Semistable"):
            c = ChartClassification(**{**c.__dict__, "saturation_violation": True})
        return c

    N = f.split_test()
    r = len(f.p_gens)
    if N is not None:
        rels = N.congruence_generators()
        if not rels:
            return finish(ChartClassification("Smooth", 1, ok, order, r=r))
        pair = _quadric_pair(rels)
        if pair is not None:
            if char == 2:
                return finish(bad("quadric X_i^2 - X_j^2 is not reduced in characteristic 2", order, ok))
            return finish(ChartClassification("SplitQuadric", 2, ok, order, r=r, quadric=pair))
        return finish(bad("split with a complement that is neither free nor a single quadric", order, ok))
    cert = f.semistable_type()
    if cert is None:
        return finish(bad("does not split and is not of semistable type", order, ok))
    return finish(ChartClassification("Semistable", cert.l, ok, order, r=r, certificate=cert))


@dataclass(frozen=True)
class RelativePresentation:
    """``P`` generated by ``f(Q)`` and ``r`` extra generators.

    Each relation is ``((a, I), (b, J))`` meaning ``f(a.q) + I.p = f(b.q) + J.p``
    with ``a, b`` exponent vectors over the generators of ``base``.
    """

    base: AffineMonoid
    extra_gens: int
    relations: tuple = field(default_factory=tuple)

    def to_presented(self) -> PresentedMonoid:
        m = self.base.ngens
        rels = [(l + _zeros(self.extra_gens), r + _zeros(self.extra_gens)) for l, r in self.base.congruence_generators()]
        for (a, i), (b, j) in self.relations:
            if len(a) != m or len(b) != m or len(i) != self.extra_gens or len(j) != self.extra_gens:
                raise DimensionError("relation shape does not match the presentation")
            rels.append((tuple(a) + tuple(i), tuple(b) + tuple(j)))
        return PresentedMonoid(m + self.extra_gens, rels)

    def to_hom(self) -> MonoidHom:
        total = self.to_presented().to_affine()
        return MonoidHom(self.base, total, list(total.generators[: self.base.ngens]))


def relative_presentation(f: MonoidHom) -> RelativePresentation:
    """Presentation of ``P`` over ``Q`` from the relation basis."""
    Q = f.source
    m = Q.ngens

    def lift(a):
        out = [0] * m
        for c, i in zip(a, f.q_indices):
            out[i] += c
        return tuple(out)

    rels = tuple(((lift(a), i), (lift(b), j)) for a, i, b, j in f.relation_basis())
    return RelativePresentation(Q, len(f.p_gens), rels)


# ---- module-level spellings ---------------------------------------------------------


def is_injective(f: MonoidHom) -> bool:
    return f.is_injective()


def is_integral(f: MonoidHom) -> IntegralityResult:
    return f.is_integral()


def split_test(f: MonoidHom) -> Optional[AffineMonoid]:
    return f.split_test()


def semistable_type(f: MonoidHom) -> Optional[SemistableCertificate]:
    return f.semistable_type()


def coker_torsion_invertible(f: MonoidHom, char: int) -> tuple[int, bool]:
    return f.coker_torsion_invertible(char)
