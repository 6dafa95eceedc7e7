"""
Quadratic pair modules.

A quadratic pair module C is a homomorphism ∂: C_1 → C_0 of class-2 groups
together with a shared abelian group C_ee, P: C_ee → C_1 and H: C_0 → C_ee,
such that C_(0) = (C_0, C_ee, ∂P, H) and C_(1) = (C_1, C_ee, P, H∂) are
square groups.  The 1-levels built here all come out of the reflection Φ,
presented by named generators plus one central P-symbol per ee generator.
"""

import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.abelian import (AbGroupPresentation, AbHom, Lattice, Vector, add_vectors, preimage_lattice, scale_vector,
                         tensor_pair, unit_vector)
from src.nil2 import Nil2Element, Nil2Hom, PointedSet, PresentedNil2, commutator
from src.sqgroup import (
    SquareGroup,
    SquareGroupMorphism,
    SquareGroupTensor,
    make_znil,
    symmetry_iso,
    tensor_morphism,
    unit_iso,
    znil_integers,
)
from src.utils import AxiomError, CompositionError, InputError

logger = logging.getLogger(__name__)


class QuadraticPairModule:
    """∂: C_1 → C_0 with shared C_ee; C_(0) is given as a square group."""

    def __init__(self, c0: SquareGroup, c1: PresentedNil2, boundary: Sequence[Nil2Element],
                 p_values: Sequence[Nil2Element], name: str = "", check: bool = True):
        self.c0 = c0
        self.c1 = c1
        self.name = name
        self.d = Nil2Hom(c1, c0.e, boundary, check=check)
        h_values = [c0.H(b) for b in boundary]
        cross = [[c0.cross(a, b) for b in boundary] for a in boundary]
        self.sq1 = SquareGroup(c1, c0.ee, p_values, h_values, cross, name=f"{name}_(1)", check=False)
        if check:
            self.validate()

    @property
    def ee(self) -> AbGroupPresentation:
        return self.c0.ee

    @property
    def p_values(self) -> Tuple[Nil2Element, ...]:
        return self.sq1.p_values

    def boundary(self, x: Nil2Element) -> Nil2Element:
        return self.d.apply(x)

    def P1(self, w: Sequence[int]) -> Nil2Element:
        return self.sq1.P(w)

    def act(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """x^y = x + P(∂x|y)_H."""
        return x + self.P1(self.c0.cross(self.boundary(x), y))

    def check_axioms(self) -> List[str]:
        failures = [f"C_(0): {f}" for f in self.c0.check_axioms()]
        failures += [f"C_(1): {f}" for f in self.sq1.check_axioms()]
        for k in range(self.ee.ngens):
            if not self.c0.e.equal(self.boundary(self.p_values[k]), self.c0.p_values[k]):
                failures.append(f"∂P != P on ee generator {k}")
        c1_gens = self.c1.generators()
        c0_gens = self.c0.e.generators()
        for x in c1_gens:
            dx = self.boundary(x)
            for y in c0_gens:
                if not self.c0.e.equal(self.boundary(self.act(x, y)), -y + dx + y):
                    failures.append(f"crossed module law ∂(x^y) = −y+∂x+y fails for {x}, {y}")
            for z in c1_gens:
                if not self.c1.equal(self.act(x, self.boundary(z)), -z + x + z):
                    failures.append(f"Peiffer identity fails for {x}, {z}")
        return failures

    def validate(self):
        failures = self.check_axioms()
        if failures:
            raise AxiomError("quadratic pair module " + self.name, "; ".join(failures[:5]))
        logger.debug(f"qpm {self.name}: {self.c0.ngens} 0-generators, {self.c1.ngens} 1-generators, "
                     f"{self.ee.ngens} ee-generators, axioms ok")

    def is_0good(self) -> bool:
        return self.c0.is_good()

    def h0(self) -> AbGroupPresentation:
        """Coker ∂ (abelian since [C_0, C_0] lies in ∂P)."""
        rels = [r.linear for r in self.c0.e.relators] + [b.linear for b in self.d.images]
        return AbGroupPresentation(self.c0.ngens, rels, self.c0.basis.names)

    def h1(self) -> AbGroupPresentation:
        """Ker ∂ (central, hence abelian)."""
        kernel = self.d.kernel_generators()
        return self.c1.subgroup_presentation(kernel)

    def __repr__(self) -> str:
        return f"QuadraticPairModule({self.name or '?'})"


class PhiPresentation:
    """
    Builder for a Φ-type 1-level over a 0-level square group: named
    generators with prescribed boundaries, then one central P-symbol per
    ee generator, with the Φ relations added on build().
    """

    def __init__(self, c0: SquareGroup, names: Sequence[str], boundary: Sequence[Nil2Element]):
        if len(names) != len(boundary):
            raise InputError("one boundary per 1-generator expected")
        self.c0 = c0
        self.n = len(names)
        pnames = [f"P({label})" for label in c0.ee.labels]
        self.boundary_images = list(boundary) + list(c0.p_values)
        central = list(pnames)
        for i, b in enumerate(boundary):
            if all(c0.ee.is_zero(c0.cross(b, other)) and c0.ee.is_zero(c0.cross(other, b))
                   for other in self.boundary_images):
                central.append(names[i])
        self.basis = PointedSet(list(names) + pnames, central)
        self.relators: List[Nil2Element] = []

    def gen(self, i: int) -> Nil2Element:
        return self.basis.gen(i)

    def pvec(self, w: Sequence[int]) -> Nil2Element:
        return self.basis.word((0,) * self.n + tuple(w))

    def embedding(self, source: PointedSet, images: Sequence[Nil2Element]) -> Nil2Hom:
        return Nil2Hom(PresentedNil2.free(source), PresentedNil2.free(self.basis), images, check=False)

    def add(self, relator: Nil2Element):
        self.relators.append(relator)

    def p_symbols(self) -> List[Nil2Element]:
        return [self.basis.gen(self.n + k) for k in range(self.c0.ee.ngens)]

    def law_relators(self) -> List[Nil2Element]:
        """(0, HP(c)) ∼ (0, 2c), ee relations and the commutator law [x, y] = P(∂x|∂y)."""
        c0 = self.c0
        m = c0.ee.ngens
        laws = []
        for k in range(m):
            ek = unit_vector(m, k)
            laws.append(self.pvec(add_vectors(c0.T(ek), scale_vector(-1, ek))))
        for r in c0.ee.relations:
            laws.append(self.pvec(r))
        for i in range(self.n):
            bi = self.boundary_images[i]
            for j in range(self.n):
                law = self.pvec(c0.cross(bi, self.boundary_images[j]))
                laws.append(commutator(self.gen(i), self.gen(j)) - law)
        return laws

    def build(self, name: str = "", check: bool = True) -> QuadraticPairModule:
        c1 = PresentedNil2(self.basis, self.relators + self.law_relators(), name=f"{name}_1")
        return QuadraticPairModule(self.c0, c1, self.boundary_images, self.p_symbols(), name=name, check=check)


@dataclass
class PhiResult:
    qpm: QuadraticPairModule
    unit_e: Nil2Hom
    unit_ee: AbHom


def phi_from_presentation(c0: SquareGroup, e1: PresentedNil2, boundary: Sequence[Nil2Element],
                          p_relations: Sequence[Tuple[Nil2Element, Sequence[int]]] = (),
                          name: str = "") -> Tuple[QuadraticPairModule, Nil2Hom]:
    """
    Φ of a presented 1-level: generators of e1 with the given boundaries,
    relators of e1, and for every (x, w) in p_relations the identification
    (x, 0) ∼ (0, w).  Returns the qpm and the map e1 → Φ_1.
    """
    builder = PhiPresentation(c0, e1.basis.names, boundary)
    emb = builder.embedding(e1.basis, [builder.gen(i) for i in range(e1.ngens)])
    for r in e1.relators:
        builder.add(emb.apply(r))
    for x, w in p_relations:
        builder.add(emb.apply(x) - builder.pvec(w))
    q = builder.build(name=name)
    return q, Nil2Hom(e1, q.c1, [emb.apply(g) for g in e1.generators()], check=False)


def phi(f: SquareGroupMorphism, name: str = "") -> PhiResult:
    """Φ(f: D → C) with its unit υ: υ_e(d) = (d, 0), υ_ee = f_ee."""
    D = f.source
    p_relations = [(D.p_values[k], f.f_ee.images[k]) for k in range(D.ee.ngens)]
    q, unit_e = phi_from_presentation(f.target, D.e, f.f_e.images, p_relations,
                                      name=name or f"Phi({D.name}->{f.target.name})")
    return PhiResult(q, unit_e, f.f_ee)


def zbar_nil(basis: Optional[PointedSet] = None) -> QuadraticPairModule:
    """Φ(0 → Z_nil[E]); with no basis this is the unit Z̄_nil."""
    c = znil_integers() if basis is None else make_znil(basis)
    empty = PresentedNil2.free(PointedSet([]))
    q, _ = phi_from_presentation(c, empty, [], name="Zbar_nil" if basis is None else f"Zbar_nil[{','.join(basis.names)}]")
    return q


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

class QpmMorphism:
    """(f_0, f_1, f_ee) commuting with H, P and ∂."""

    def __init__(self, source: QuadraticPairModule, target: QuadraticPairModule,
                 f0_images: Sequence[Nil2Element], f1_images: Sequence[Nil2Element],
                 fee_images: Sequence[Sequence[int]], check: bool = True, name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        self.sq0 = SquareGroupMorphism(source.c0, target.c0, f0_images, fee_images, check=check, name=name)
        self.f1 = Nil2Hom(source.c1, target.c1, f1_images, check=check)
        if check:
            failures = self.check()
            if failures:
                raise AxiomError("qpm morphism " + name, "; ".join(failures[:5]))

    @property
    def f0(self) -> Nil2Hom:
        return self.sq0.f_e

    @property
    def fee(self) -> AbHom:
        return self.sq0.f_ee

    def check(self) -> List[str]:
        failures = []
        src, tgt = self.source, self.target
        for z, im in zip(src.c1.generators(), self.f1.images):
            if not tgt.c0.e.equal(tgt.boundary(im), self.f0.apply(src.boundary(z))):
                failures.append(f"∂f_1 != f_0∂ on {z}")
        for k in range(src.ee.ngens):
            if not tgt.c1.equal(self.f1.apply(src.p_values[k]), tgt.P1(self.fee.images[k])):
                failures.append(f"f_1P != Pf_ee on ee generator {k}")
        return failures

    def compose(self, other: "QpmMorphism") -> "QpmMorphism":
        """self ∘ other."""
        if other.target is not self.source:
            raise CompositionError("qpm morphisms are not composable")
        return QpmMorphism(other.source, self.target,
                           [self.f0.apply(x) for x in other.f0.images],
                           [self.f1.apply(x) for x in other.f1.images],
                           [self.fee.apply(w) for w in other.fee.images], check=False)

    def equals(self, other: "QpmMorphism") -> bool:
        return self.sq0.equals(other.sq0) and self.f1.equals(other.f1)

    def is_isomorphism(self) -> bool:
        return self.sq0.is_isomorphism() and self.f1.is_isomorphism()

    @classmethod
    def identity(cls, c: QuadraticPairModule) -> "QpmMorphism":
        return cls(c, c, c.c0.e.generators(), c.c1.generators(),
                   [unit_vector(c.ee.ngens, k) for k in range(c.ee.ngens)], check=False)


# ---------------------------------------------------------------------------
# Tensor product
# ---------------------------------------------------------------------------

class QpmTensor(QuadraticPairModule):
    """
    C⊙D = Φ(C⊙̄D → C_(0)⊙D_(0)).  The 1-level is generated by the A-part
    x⊙̲y (x ∈ C_1, y ∈ D_0), the B-part c⊙̲z (c ∈ C_0, z ∈ D_1) and the
    P-symbols of C_ee⊗D_ee, identifying both images of C_(1)⊙D_(1).
    """

    def __init__(self, left: QuadraticPairModule, right: QuadraticPairModule, name: str = "",
                 require_good: bool = True):
        if require_good and not (left.is_0good() and right.is_0good()):
            raise AxiomError("0-goodness", f"{left.name} ⊙ {right.name} needs 0-good factors")
        self.left = left
        self.right = right
        self.t0 = SquareGroupTensor(left.c0, right.c0)
        self.a_part = SquareGroupTensor(left.sq1, right.c0, check=False)
        self.b_part = SquareGroupTensor(left.c0, right.sq1, check=False)
        t0 = self.t0
        n1l, n0r = left.c1.ngens, right.c0.ngens
        n0l, n1r = left.c0.ngens, right.c1.ngens
        self.n_a = n1l * n0r
        self.n_b = n0l * n1r

        names, boundary = [], []
        for x in range(n1l):
            for y in range(n0r):
                names.append(f"A({left.c1.basis.names[x]}⊙{right.c0.basis.names[y]})")
                boundary.append(t0.expand_under(left.d.images[x], right.c0.gen(y)))
        for c in range(n0l):
            for z in range(n1r):
                names.append(f"B({left.c0.basis.names[c]}⊙{right.c1.basis.names[z]})")
                boundary.append(t0.expand_under(left.c0.gen(c), right.d.images[z]))
        builder = PhiPresentation(t0, names, boundary)
        self._builder = builder

        a_images = [builder.gen(i) for i in range(self.n_a)]
        a_images += [builder.pvec(unit_vector(t0.ee.ngens, k)) for k in range(t0.ee.ngens)]
        self.zeta = builder.embedding(self.a_part.basis, a_images)
        b_images = [builder.gen(self.n_a + i) for i in range(self.n_b)]
        b_images += [builder.pvec(unit_vector(t0.ee.ngens, k)) for k in range(t0.ee.ngens)]
        self.xi = builder.embedding(self.b_part.basis, b_images)

        for r in self.a_part.e.relators:
            builder.add(self.zeta.apply(r))
        for r in self.b_part.e.relators:
            builder.add(self.xi.apply(r))
        for x in range(n1l):
            for z in range(n1r):
                via_a = self.zeta.apply(self.a_part.expand_under(left.c1.basis.gen(x), right.d.images[z]))
                via_b = self.xi.apply(self.b_part.expand_under(left.d.images[x], right.c1.basis.gen(z)))
                builder.add(via_a - via_b)

        built = builder.build(name=name or f"{left.name}⊙{right.name}", check=False)
        super().__init__(built.c0, built.c1, built.d.images, built.p_values, name=built.name, check=False)
        self.validate()

    def pvec(self, w: Sequence[int]) -> Nil2Element:
        return self._builder.pvec(w)

    def zeta_under(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """υζ(x⊙̲y) for x ∈ C_1, y ∈ D_0."""
        return self.zeta.apply(self.a_part.expand_under(x, y))

    def xi_under(self, c: Nil2Element, z: Nil2Element) -> Nil2Element:
        """υξ(c⊙̲z) for c ∈ C_0, z ∈ D_1."""
        return self.xi.apply(self.b_part.expand_under(c, z))

    def zeta_odot(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        return self.zeta.apply(self.a_part.odot(x, y))


def qpm_tensor_morphism(t: QpmTensor, t2: QpmTensor, f: QpmMorphism, g: QpmMorphism,
                        check: bool = True) -> QpmMorphism:
    """f⊙g: C⊙X → D⊙Y."""
    sq0 = tensor_morphism(t.t0, t2.t0, f.sq0, g.sq0, check=False)
    C, X = t.left, t.right
    f1 = []
    for x in range(C.c1.ngens):
        for y in range(X.c0.ngens):
            f1.append(t2.zeta_under(f.f1.images[x], g.f0.images[y]))
    for c in range(C.c0.ngens):
        for z in range(X.c1.ngens):
            f1.append(t2.xi_under(f.f0.images[c], g.f1.images[z]))
    for k in range(C.ee.ngens):
        for l in range(X.ee.ngens):
            f1.append(t2.pvec(tensor_pair(f.fee.images[k], g.fee.images[l])))
    return QpmMorphism(t, t2, sq0.f_e.images, f1, sq0.f_ee.images, check=check, name="tensor morphism")


def qpm_unit_iso(t: QpmTensor) -> Tuple[QpmMorphism, QpmMorphism]:
    """Z̄_nil⊙C ≅ C; returns (forward, inverse)."""
    zbar, C = t.left, t.right
    fwd0, inv0 = unit_iso(t.t0)
    f1 = []
    for _ in range(zbar.c1.ngens):
        for c in range(C.c0.ngens):
            f1.append(C.P1(C.c0.delta(C.c0.gen(c))))
    for _ in range(zbar.c0.ngens):
        for z in range(C.c1.ngens):
            f1.append(C.c1.basis.gen(z))
    for l in range(C.ee.ngens):
        f1.append(C.P1(unit_vector(C.ee.ngens, l)))
    forward = QpmMorphism(t, C, fwd0.f_e.images, f1, fwd0.f_ee.images, name="qpm left unit")
    inv1 = [t.c1.basis.gen(t.n_a + z) for z in range(C.c1.ngens)]
    inverse = QpmMorphism(C, t, inv0.f_e.images, inv1, inv0.f_ee.images, name="qpm left unit inverse")
    return forward, inverse


def qpm_symmetry(t: QpmTensor, s: QpmTensor) -> QpmMorphism:
    """τ⊙: C⊙D → D⊙C, level-wise x⊙̲y ↦ y⊙x."""
    C, D = t.left, t.right
    if s.left is not D or s.right is not C:
        raise CompositionError("symmetry target must be D⊙C")
    sym0 = symmetry_iso(t.t0, s.t0)
    f1 = []
    for x in range(C.c1.ngens):
        hx = C.c0.T(C.c0.H(C.d.images[x]))
        for y in range(D.c0.ngens):
            yy = D.c0.gen(y)
            corr = s.pvec(tensor_pair(D.c0.H(yy), hx))
            f1.append(s.xi_under(yy, C.c1.basis.gen(x)) - corr)
    for c in range(C.c0.ngens):
        cc = C.c0.gen(c)
        thc = C.c0.T(C.c0.H(cc))
        for z in range(D.c1.ngens):
            corr = s.pvec(tensor_pair(D.c0.H(D.d.images[z]), thc))
            f1.append(s.zeta_under(D.c1.basis.gen(z), cc) - corr)
    mc, md = C.ee.ngens, D.ee.ngens
    for k in range(mc):
        for l in range(md):
            f1.append(s.pvec(unit_vector(md * mc, l * mc + k)))
    return QpmMorphism(t, s, sym0.f_e.images, f1, sym0.f_ee.images, name="qpm symmetry")


def qpm_right_unit_iso(t: QpmTensor, swapped: QpmTensor) -> Tuple[QpmMorphism, QpmMorphism]:
    """C⊙Z̄_nil ≅ C through the symmetry."""
    tau = qpm_symmetry(t, swapped)
    tau_back = qpm_symmetry(swapped, t)
    fwd, inv = qpm_unit_iso(swapped)
    return fwd.compose(tau), tau_back.compose(inv)


# ---------------------------------------------------------------------------
# The interval
# ---------------------------------------------------------------------------

@dataclass
class Interval:
    qpm: QuadraticPairModule
    zbar: QuadraticPairModule
    i0: QpmMorphism
    i1: QpmMorphism
    p: QpmMorphism


def interval(zbar: Optional[QuadraticPairModule] = None) -> Interval:
    """𝕀 with ∂ī = −i_0 + i_1, the inclusions i_0, i_1 and the projection p."""
    zbar = zbar or zbar_nil()
    c0 = make_znil(PointedSet(["i0", "i1"]))
    i0, i1 = c0.gen(0), c0.gen(1)
    e1 = PresentedNil2.free(PointedSet(["ibar"]))
    I, _ = phi_from_presentation(c0, e1, [-i0 + i1], name="I")

    def inclusion(k: int, name: str) -> QpmMorphism:
        return QpmMorphism(zbar, I, [c0.gen(k)], [I.P1(unit_vector(4, 3 * k))],
                           [unit_vector(4, 3 * k)], name=name)

    one = zbar.c0.gen(0)
    p = QpmMorphism(I, zbar, [one, one],
                    [zbar.c1.basis.identity()] + [zbar.P1((1,))] * 4,
                    [(1,)] * 4, name="p")
    return Interval(I, zbar, inclusion(0, "i0"), inclusion(1, "i1"), p)


# ---------------------------------------------------------------------------
# Tracks
# ---------------------------------------------------------------------------

def word_letters(x: Nil2Element) -> List[Tuple[int, int]]:
    """A word (generator, ±1) representing x: ascending linear part, then commutators."""
    letters = []
    for i, c in enumerate(x.linear):
        letters.extend([(i, 1 if c > 0 else -1)] * abs(c))
    for c, (j, i) in zip(x.comm, x.basis.pairs):
        a, b = (j, i) if c > 0 else (i, j)
        for _ in range(abs(c)):
            letters.extend([(a, -1), (b, -1), (a, 1), (b, 1)])
    return letters


def extend_values(f: QpmMorphism, values: Sequence[Nil2Element], x: Nil2Element) -> Nil2Element:
    """α on any element of C_0 via α(x+y) = α(x)^{f_0(y)} + α(y) and α(−c) = −α(c) + P(∂α(c)|f_0c)."""
    D = f.target
    f0 = f.f0
    total = D.c1.basis.identity()
    for i, sign in word_letters(x):
        a = values[i]
        if sign < 0:
            a = -a + D.P1(D.c0.cross(D.boundary(a), f0.images[i]))
        step = f0.images[i] if sign > 0 else -f0.images[i]
        if any(total.linear) or any(total.comm):
            total = D.act(total, step)
        total = total + a
    return total


class QpmTrack:
    """α: f ⇒ g given by its values on the generators of C_0."""

    def __init__(self, source: QpmMorphism, target: QpmMorphism, values: Sequence[Nil2Element],
                 check: bool = True):
        if source.source is not target.source or source.target is not target.target:
            raise CompositionError("track endpoints must be parallel morphisms")
        if len(values) != source.source.c0.ngens:
            raise InputError("one track value per 0-generator expected")
        self.source = source
        self.target = target
        self.values: Tuple[Nil2Element, ...] = tuple(values)
        if check:
            failures = self.check()
            if failures:
                raise AxiomError("track", "; ".join(failures[:5]))

    @property
    def domain(self) -> QuadraticPairModule:
        return self.source.source

    @property
    def codomain(self) -> QuadraticPairModule:
        return self.source.target

    def extend(self, x: Nil2Element) -> Nil2Element:
        return extend_values(self.source, self.values, x)

    def __call__(self, x: Nil2Element) -> Nil2Element:
        return self.extend(x)

    def check(self) -> List[str]:
        failures = []
        C, D = self.domain, self.codomain
        for r in C.c0.e.relators:
            if not D.c1.is_identity(self.extend(r)):
                failures.append(f"track not well defined on relator {r}")
        for c, a in enumerate(self.values):
            g0 = self.target.f0.images[c]
            if not D.c0.e.equal(g0, self.source.f0.images[c] + D.boundary(a)):
                failures.append(f"g_0 != f_0 + ∂α on {C.c0.basis.names[c]}")
        for z, bz in enumerate(C.d.images):
            if not D.c1.equal(self.target.f1.images[z], self.source.f1.images[z] + self.extend(bz)):
                failures.append(f"g_1 != f_1 + α∂ on {C.c1.basis.names[z]}")
        return failures

    def equals(self, other: "QpmTrack") -> bool:
        D = self.codomain
        return all(D.c1.equal(a, b) for a, b in zip(self.values, other.values))


def _target_ee(f: QpmMorphism, g0: Sequence[Nil2Element]) -> List[Vector]:
    """g_ee on the ee generators of C, read off cross effects of g_0."""
    C, D = f.source, f.target
    gee = []
    for k in range(C.ee.ngens):
        w = [0] * D.ee.ngens
        for m, i, j in C.c0.cross_preimage(unit_vector(C.ee.ngens, k)):
            for idx, val in enumerate(D.c0.cross(g0[i], g0[j])):
                w[idx] += m * val
        gee.append(tuple(w))
    return gee


def target_of(f: QpmMorphism, values: Sequence[Nil2Element]) -> QpmMorphism:
    """g with g_0 = f_0 + ∂α, g_1 = f_1 + α∂ and g_ee read off cross effects."""
    C, D = f.source, f.target
    g0 = [f.f0.images[c] + D.boundary(a) for c, a in enumerate(values)]
    g1 = [f.f1.images[z] + extend_values(f, values, bz) for z, bz in enumerate(C.d.images)]
    return QpmMorphism(C, D, g0, g1, _target_ee(f, g0), name="track target")


def _track_defect(f: QpmMorphism, values: Sequence[Nil2Element]) -> Vector:
    """H and cross effect defects of f_0 + ∂α against g_ee, stacked over the generators of C_0."""
    C, D = f.source, f.target
    g0 = [f.f0.images[c] + D.boundary(a) for c, a in enumerate(values)]
    gee = _target_ee(f, g0)

    def through_gee(w: Sequence[int]) -> List[int]:
        out = [0] * D.ee.ngens
        for k, c in enumerate(w):
            if c:
                for idx, val in enumerate(gee[k]):
                    out[idx] += c * val
        return out

    defect: List[int] = []
    n = C.c0.ngens
    for i in range(n):
        defect.extend(a - b for a, b in zip(D.c0.H(g0[i]), through_gee(C.c0.H.values[i])))
        for j in range(n):
            defect.extend(a - b for a, b in zip(D.c0.cross(g0[i], g0[j]), through_gee(C.c0.H.cross[i][j])))
    return tuple(defect)


def admissible_track_lattice(f: QpmMorphism) -> List[Vector]:
    """
    Generators of the α coordinates (one block of C_1 coordinates per
    0-generator) along which f_0 + ∂α stays compatible with H.

    The defect is linearized at α = 0; samples drawn from this lattice are
    still validated as tracks.
    """
    C, D = f.source, f.target
    n0, n1 = C.c0.ngens, D.c1.ngens
    identity = D.c1.basis.identity()
    columns = []
    for k in range(n0 * n1):
        values = [D.c1.basis.word(unit_vector(n1, k % n1)) if c == k // n1 else identity for c in range(n0)]
        columns.append(_track_defect(f, values))
    blocks = n0 * (1 + n0)
    relations = []
    for b in range(blocks):
        for r in D.ee.lattice.basis():
            relations.append((0,) * (b * D.ee.ngens) + tuple(r) + (0,) * ((blocks - b - 1) * D.ee.ngens))
    target = Lattice(blocks * D.ee.ngens, relations)
    return preimage_lattice(columns, target)


def trivial_track(f: QpmMorphism) -> QpmTrack:
    D = f.target
    return QpmTrack(f, f, [D.c1.basis.identity()] * f.source.c0.ngens)


def track_vcomp(alpha: QpmTrack, beta: QpmTrack) -> QpmTrack:
    """α□β for β: f ⇒ g and α: g ⇒ h; (α□β)(x) = β(x) + α(x)."""
    if beta.target is not alpha.source and not beta.target.equals(alpha.source):
        raise CompositionError("tracks are not vertically composable")
    values = [b + a for a, b in zip(alpha.values, beta.values)]
    return QpmTrack(beta.source, alpha.target, values)


def track_hcomp_left(f: QpmMorphism, alpha: QpmTrack) -> QpmTrack:
    """(fα)(x) = f_1α(x)."""
    if alpha.codomain is not f.source:
        raise CompositionError("morphism does not follow the track")
    return QpmTrack(f.compose(alpha.source), f.compose(alpha.target), [f.f1.apply(a) for a in alpha.values])


def track_hcomp_right(alpha: QpmTrack, g: QpmMorphism) -> QpmTrack:
    """(αg)(x) = αg_0(x)."""
    if g.target is not alpha.domain:
        raise CompositionError("morphism does not precede the track")
    return QpmTrack(alpha.source.compose(g), alpha.target.compose(g), [alpha.extend(x) for x in g.f0.images])


def random_track(f: QpmMorphism, rng: random.Random, max_coeff: int = 2, attempts: int = 50) -> QpmTrack:
    """A track out of f: a random integer combination of the admissible lattice, validated."""
    C, D = f.source, f.target
    n0, n1 = C.c0.ngens, D.c1.ngens
    basis = admissible_track_lattice(f)
    for _ in range(attempts):
        coords = [0] * (n0 * n1)
        for b in basis:
            r = rng.randint(-max_coeff, max_coeff)
            if r:
                coords = [x + r * y for x, y in zip(coords, b)]
        values = [D.c1.basis.word(coords[c * n1:(c + 1) * n1]) for c in range(n0)]
        try:
            return QpmTrack(f, target_of(f, values), values)
        except AxiomError as e:
            logger.debug(f"random track rejected: {e}")
    raise AxiomError("random track", f"no valid track found in {attempts} attempts")


# ---------------------------------------------------------------------------
# Cylinder correspondence
# ---------------------------------------------------------------------------

def _endpoint_ee(ic: QpmTensor, ends: Sequence[Sequence[Nil2Element]], D: QuadraticPairModule) -> List[Vector]:
    """ee images of 𝕀⊙C → D on (a⊗b)⊗w, w written through cross effects of C."""
    C = ic.right
    images = []
    for a in range(2):
        for b in range(2):
            for l in range(C.ee.ngens):
                w = [0] * D.ee.ngens
                for m, i, j in C.c0.cross_preimage(unit_vector(C.ee.ngens, l)):
                    for idx, val in enumerate(D.c0.cross(ends[b][i], ends[a][j])):
                        w[idx] += m * val
                images.append(tuple(w))
    return images


def cylinder(alpha: QpmTrack, ic: QpmTensor, I: Interval) -> QpmMorphism:
    """ᾱ: 𝕀⊙C → D with ᾱi_0 = f, ᾱi_1 = g and ᾱυζ(ī⊙c) = α(c)."""
    C, D = alpha.domain, alpha.codomain
    if ic.left is not I.qpm or ic.right is not C:
        raise CompositionError("cylinder needs the tensor 𝕀⊙C of the track's domain")
    f, g = alpha.source, alpha.target
    ends0 = [f.f0.images, g.f0.images]
    ee_images = _endpoint_ee(ic, ends0, D)
    t0 = ic.t0

    def ee_map(w: Sequence[int]) -> Vector:
        out = [0] * D.ee.ngens
        for c, col in zip(w, ee_images):
            if c:
                for k, x in enumerate(col):
                    out[k] += c * x
        return tuple(out)

    f0_images = [ends0[a][c] for a in range(2) for c in range(C.c0.ngens)]
    f0_images += [D.c0.P(ee_images[k]) for k in range(t0.ee.ngens)]

    Iq = I.qpm
    f1_images = []
    h_ibar = Iq.c0.H(Iq.d.images[0])
    for x in range(Iq.c1.ngens):
        for c in range(C.c0.ngens):
            cc = C.c0.gen(c)
            if x == 0:
                corr = ee_map(tensor_pair(h_ibar, C.c0.T(C.c0.H(cc))))
                f1_images.append(alpha.values[c] + D.P1(corr))
            else:
                k = x - 1
                f1_images.append(D.P1(ee_map(tensor_pair(unit_vector(Iq.ee.ngens, k), C.c0.delta(cc)))))
    ends1 = [f.f1.images, g.f1.images]
    for a in range(2):
        for z in range(C.c1.ngens):
            f1_images.append(ends1[a][z])
    for k in range(t0.ee.ngens):
        f1_images.append(D.P1(ee_images[k]))
    return QpmMorphism(ic, D, f0_images, f1_images, ee_images, name="cylinder")


def cylinder_endpoints(abar: QpmMorphism, ic: QpmTensor) -> Tuple[QpmMorphism, QpmMorphism]:
    """ᾱi_0 and ᾱi_1 read off the generators of 𝕀⊙C."""
    C, D = ic.right, abar.target
    n0, n1 = C.c0.ngens, C.c1.ngens
    ends = []
    for a in range(2):
        f0 = [abar.f0.images[a * n0 + c] for c in range(n0)]
        f1 = [abar.f1.images[ic.n_a + a * n1 + z] for z in range(n1)]
        diag = 3 * a
        fee = [abar.fee.images[diag * C.ee.ngens + l] for l in range(C.ee.ngens)]
        ends.append(QpmMorphism(C, D, f0, f1, fee, name=f"endpoint {a}"))
    return ends[0], ends[1]


def track_of_cylinder(abar: QpmMorphism, ic: QpmTensor, I: Interval) -> QpmTrack:
    """α(c) = ᾱυζ(ī⊙c)."""
    C = ic.right
    f, g = cylinder_endpoints(abar, ic)
    ibar = I.qpm.c1.basis.gen(0)
    values = [abar.f1.apply(ic.zeta_odot(ibar, C.c0.gen(c))) for c in range(C.c0.ngens)]
    return QpmTrack(f, g, values)


# ---------------------------------------------------------------------------
# Tensor product of tracks
# ---------------------------------------------------------------------------

def track_tensor(alpha: QpmTrack, beta: QpmTrack, src: QpmTensor, dst: QpmTensor,
                 variant: str = "left") -> QpmTrack:
    """
    α⊙β: f⊙h ⇒ g⊙k.  variant "left" uses ξ(f_0c⊙̲β(x)) + ζ(α(c)⊙̲k_0x)
    + (−f_0c+g_0c|f_0c)⊗̄Hk_0x, variant "right" the equal expansion
    ζ(α(c)⊙̲h_0x) + ξ(g_0c⊙̲β(x)) + (−f_0c+g_0c|f_0c)⊗̄Hh_0x.
    """
    f, g, h, k = alpha.source, alpha.target, beta.source, beta.target
    C, X = src.left, src.right
    D, Y = dst.left, dst.right
    if C is not alpha.domain or X is not beta.domain or D is not alpha.codomain or Y is not beta.codomain:
        raise CompositionError("tensors do not match the tracks")
    values = []
    for c in range(C.c0.ngens):
        fc, gc = f.f0.images[c], g.f0.images[c]
        diff = D.c0.cross(-fc + gc, fc)
        for x in range(X.c0.ngens):
            bx = beta.values[x]
            if variant == "left":
                kx = k.f0.images[x]
                v = dst.xi_under(fc, bx) + dst.zeta_under(alpha.values[c], kx)
                v = v + dst.pvec(tensor_pair(diff, Y.c0.H(kx)))
            else:
                hx = h.f0.images[x]
                v = dst.zeta_under(alpha.values[c], hx) + dst.xi_under(gc, bx)
                v = v + dst.pvec(tensor_pair(diff, Y.c0.H(hx)))
            values.append(v)
    for a in range(C.ee.ngens):
        for b in range(X.ee.ngens):
            w = add_vectors(scale_vector(-1, tensor_pair(f.fee.images[a], h.fee.images[b])),
                            tensor_pair(g.fee.images[a], k.fee.images[b]))
            values.append(dst.pvec(w))
    fh = qpm_tensor_morphism(src, dst, f, h)
    gk = qpm_tensor_morphism(src, dst, g, k)
    return QpmTrack(fh, gk, values)


def tau_commutation_holds(alpha: QpmTrack, beta: QpmTrack, src: QpmTensor, dst: QpmTensor,
                          src_swapped: QpmTensor, dst_swapped: QpmTensor) -> bool:
    """τ⊙(α⊙β) = (β⊙α)τ⊙ on the generators of (C⊙X)_0."""
    ab = track_tensor(alpha, beta, src, dst)
    ba = track_tensor(beta, alpha, src_swapped, dst_swapped)
    tau_dst = qpm_symmetry(dst, dst_swapped)
    tau_src = qpm_symmetry(src, src_swapped)
    lhs = track_hcomp_left(tau_dst, ab)
    rhs = track_hcomp_right(ba, tau_src)
    return lhs.equals(rhs)
