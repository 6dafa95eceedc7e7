"""
Square groups.

A square group X is a class-2 group X_e, an abelian group X_ee, a
homomorphism P: X_ee → X_e and a quadratic map H: X_e → X_ee with bilinear
cross effect (a|b)_H, subject to

    (1) (Px|b)_H = 0 = (a|Py)_H
    (2) P(a|b)_H = [a, b]
    (3) PHP(x) = P(x) + P(x)

Everything is presented: X_e by a PresentedNil2, X_ee by an
AbGroupPresentation, P by its values on ee generators, H by its values on
e generators together with the cross effect matrix.  The tensor product
X⊙Y is generated by g⊙̲h and a⊗̄b.
"""

import logging
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from src.abelian import (
    AbGroupPresentation,
    AbHom,
    Lattice,
    Vector,
    add_vectors,
    scale_vector,
    tensor_pair,
    tensor_product,
    tensor_square,
    unit_vector,
)
from src.nil2 import (
    Nil2Element,
    Nil2Hom,
    PointedSet,
    PresentedNil2,
    binom2,
    commutator,
)
from src.utils import AxiomError, CompositionError, InputError, check_size

logger = logging.getLogger(__name__)


def _zero(n: int) -> Vector:
    return (0,) * n


def _accumulate(out: List[int], c: int, v: Sequence[int]):
    if c:
        for k, x in enumerate(v):
            if x:
                out[k] += c * x


class QuadraticMap:
    """H on a class-2 group given by generator values and a cross-effect matrix."""

    def __init__(self, basis: PointedSet, ee: AbGroupPresentation,
                 values: Sequence[Sequence[int]], cross: Sequence[Sequence[Sequence[int]]]):
        n = basis.size
        if len(values) != n or len(cross) != n or any(len(row) != n for row in cross):
            raise InputError("quadratic map data does not match the generator count")
        self.basis = basis
        self.ee = ee
        self.values: Tuple[Vector, ...] = tuple(tuple(v) for v in values)
        self.cross: Tuple[Tuple[Vector, ...], ...] = tuple(tuple(tuple(c) for c in row) for row in cross)
        for v in self.values:
            if len(v) != ee.ngens:
                raise InputError("H value of the wrong length")

    def cross_linear(self, v: Sequence[int], w: Sequence[int]) -> Vector:
        out = [0] * self.ee.ngens
        for i, a in enumerate(v):
            if a:
                row = self.cross[i]
                for j, b in enumerate(w):
                    if b:
                        _accumulate(out, a * b, row[j])
        return tuple(out)

    def cross_effect(self, x: Nil2Element, y: Nil2Element) -> Vector:
        return self.cross_linear(x.linear, y.linear)

    def __call__(self, x: Nil2Element) -> Vector:
        out = [0] * self.ee.ngens
        v = x.linear
        nz = [i for i, c in enumerate(v) if c]
        for i in nz:
            _accumulate(out, v[i], self.values[i])
            _accumulate(out, binom2(v[i]), self.cross[i][i])
        for a, i in enumerate(nz):
            for j in nz[a + 1:]:
                _accumulate(out, v[i] * v[j], self.cross[i][j])
        for c, (j, i) in zip(x.comm, self.basis.pairs):
            if c:
                _accumulate(out, c, self.cross[j][i])
                _accumulate(out, -c, self.cross[i][j])
        return tuple(out)


class SquareGroup:
    """A presented square group; validated at construction unless check=False."""

    def __init__(self, e: PresentedNil2, ee: AbGroupPresentation, p_values: Sequence[Nil2Element],
                 h_values: Sequence[Sequence[int]], cross: Sequence[Sequence[Sequence[int]]],
                 name: str = "", check: bool = True):
        if len(p_values) != ee.ngens:
            raise InputError(f"{len(p_values)} P values for {ee.ngens} ee generators")
        self.e = e
        self.ee = ee
        self.p_values: Tuple[Nil2Element, ...] = tuple(p_values)
        self.H = QuadraticMap(e.basis, ee, h_values, cross)
        self.name = name
        if check:
            self.validate()

    # -- structure maps ----------------------------------------------------

    @property
    def basis(self) -> PointedSet:
        return self.e.basis

    @property
    def ngens(self) -> int:
        return self.e.basis.size

    def gen(self, i: int) -> Nil2Element:
        return self.basis.gen(i)

    def P(self, w: Sequence[int]) -> Nil2Element:
        total = self.basis.identity()
        for c, p in zip(w, self.p_values):
            if c:
                total = total + p.scale(c)
        return total

    def cross(self, x: Nil2Element, y: Nil2Element) -> Vector:
        return self.H.cross_effect(x, y)

    def T(self, w: Sequence[int]) -> Vector:
        """T = HP − 1."""
        return tuple(a - b for a, b in zip(self.H(self.P(w)), w))

    def delta(self, x: Nil2Element) -> Vector:
        """Δ(x) = (x|x)_H − H(x) + TH(x)."""
        h = self.H(x)
        return add_vectors(self.cross(x, x), scale_vector(-1, h), self.T(h))

    def ee_equal(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self.ee.equal(a, b)

    def e_equal(self, x: Nil2Element, y: Nil2Element) -> bool:
        return self.e.equal(x, y)

    # -- axioms --------------------------------------------------------------

    def check_axioms(self) -> List[str]:
        """All violated laws, as readable strings (empty when the structure is valid)."""
        failures = []
        ee, e = self.ee, self.e
        n = self.ngens
        cross = self.H.cross
        for r in e.relators:
            if not ee.is_zero(self.H(r)):
                failures.append(f"H well-defined: H({r}) != 0")
            for j in range(n):
                row = self.H.cross_linear(r.linear, unit_vector(n, j))
                col = self.H.cross_linear(unit_vector(n, j), r.linear)
                if not ee.is_zero(row) or not ee.is_zero(col):
                    failures.append(f"cross effect well-defined on relator {r}")
                    break
        for k in range(n):
            if self.basis.is_central(k):
                for j in range(n):
                    if not ee.equal(cross[k][j], cross[j][k]):
                        failures.append(f"central generator {self.basis.names[k]} has asymmetric cross effect")
                        break
        for rel in ee.relations:
            if not e.is_identity(self.P(rel)):
                failures.append(f"P well-defined: P({rel}) != 0")
        for k in range(ee.ngens):
            pk = self.p_values[k]
            for j in range(n):
                g = self.gen(j)
                if not ee.is_zero(self.cross(pk, g)) or not ee.is_zero(self.cross(g, pk)):
                    failures.append(f"axiom (1): (P a{k} | {self.basis.names[j]}) != 0")
                    break
        gens = [self.gen(i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                if (self.basis.is_central(i) or self.basis.is_central(j)) and not any(cross[i][j]):
                    continue
                if not e.equal(self.P(cross[i][j]), commutator(gens[i], gens[j])):
                    failures.append(f"axiom (2): P({self.basis.names[i]}|{self.basis.names[j]}) != commutator")
        for i in range(n):
            if not e.is_identity(self.P(cross[i][i])):
                failures.append(f"axiom (2): P({self.basis.names[i]}|{self.basis.names[i]}) != 0")
        for k in range(ee.ngens):
            pk = self.p_values[k]
            if not e.equal(self.P(self.H(pk)), pk + pk):
                failures.append(f"axiom (3): PHP(a{k}) != 2P(a{k})")
        return failures

    def validate(self):
        failures = self.check_axioms()
        if failures:
            raise AxiomError("square group " + (self.name or ""), "; ".join(failures[:5]))
        logger.debug(f"square group {self.name}: {self.ngens} e-generators, {self.ee.ngens} ee-generators, axioms ok")

    # -- goodness -------------------------------------------------------------

    def coker_P(self) -> AbGroupPresentation:
        rels = [r.linear for r in self.e.relators] + [p.linear for p in self.p_values]
        return AbGroupPresentation(self.ngens, rels, self.basis.names)

    def cross_hom(self) -> AbHom:
        """⊗²(coker P) → X_ee, e_i⊗e_j ↦ (e_i|e_j)_H."""
        coker = self.coker_P()
        n = self.ngens
        images = [self.H.cross[i][j] for i in range(n) for j in range(n)]
        return AbHom(tensor_square(coker), self.ee, images)

    def is_good(self) -> bool:
        try:
            return self.cross_hom().is_isomorphism()
        except AxiomError:
            return False

    @cached_property
    def _cross_solver(self) -> Lattice:
        n = self.ngens
        cols = [self.H.cross[i][j] for i in range(n) for j in range(n)]
        return Lattice(self.ee.ngens, cols + list(self.ee.relations), track=True)

    def cross_preimage(self, w: Sequence[int]) -> List[Tuple[int, int, int]]:
        """Write w as Σ m (g_i|g_j)_H; returns (m, i, j) triples."""
        coeffs = self._cross_solver.solve(w)
        if coeffs is None:
            raise AxiomError("good square group", f"{w} is not a combination of cross effects")
        n = self.ngens
        return [(coeffs[i * n + j], i, j) for i in range(n) for j in range(n) if coeffs[i * n + j]]

    def __repr__(self) -> str:
        return f"SquareGroup({self.name or '?'}: {self.ngens} e-gens, {self.ee.ngens} ee-gens)"


# ---------------------------------------------------------------------------
# Z_nil[E]
# ---------------------------------------------------------------------------

def make_znil(basis: PointedSet, name: Optional[str] = None) -> SquareGroup:
    """
    Z_nil[E]: e-group ⟨E⟩_nil, ee-group ⊗²ℤ[E], P(a⊗b) = [b, a], H(e) = 0,
    (s|t)_H = t⊗s.
    """
    n = basis.size
    e = PresentedNil2.free(basis, name=f"<{','.join(basis.names)}>")
    ee = AbGroupPresentation(n * n, (), [f"{a}⊗{b}" for a in basis.names for b in basis.names])
    p_values = [commutator(basis.gen(b), basis.gen(a)) for a in range(n) for b in range(n)]
    cross = [[unit_vector(n * n, j * n + i) for j in range(n)] for i in range(n)]
    return SquareGroup(e, ee, p_values, [_zero(n * n)] * n, cross,
                       name=name or f"Z_nil[{','.join(basis.names)}]")


def znil_integers() -> SquareGroup:
    """ℤ_nil: P = 0, H(n) = C(n, 2)."""
    return make_znil(PointedSet(["1"]), name="Z_nil")


def trivial_square_group() -> SquareGroup:
    return SquareGroup(PresentedNil2.free(PointedSet([])), AbGroupPresentation(0), [], [], [], name="0")


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------

class SquareGroupMorphism:
    """f = (f_e, f_ee) commuting with P and H."""

    def __init__(self, source: SquareGroup, target: SquareGroup, e_images: Sequence[Nil2Element],
                 ee_images: Sequence[Sequence[int]], check: bool = True, name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        self.f_e = Nil2Hom(source.e, target.e, e_images, check=check)
        self.f_ee = AbHom(source.ee, target.ee, ee_images, check=check)
        if check:
            failures = self.check()
            if failures:
                raise AxiomError("square group morphism " + name, "; ".join(failures[:5]))

    def check(self) -> List[str]:
        failures = []
        src, tgt = self.source, self.target
        for k in range(src.ee.ngens):
            if not tgt.e.equal(self.f_e(src.p_values[k]), tgt.P(self.f_ee.images[k])):
                failures.append(f"P compatibility on ee generator {k}")
        n = src.ngens
        images = self.f_e.images
        for i in range(n):
            if not tgt.ee.equal(self.f_ee.apply(src.H.values[i]), tgt.H(images[i])):
                failures.append(f"H compatibility on {src.basis.names[i]}")
            for j in range(n):
                if not tgt.ee.equal(self.f_ee.apply(src.H.cross[i][j]), tgt.cross(images[i], images[j])):
                    failures.append(f"cross effect compatibility on ({src.basis.names[i]}|{src.basis.names[j]})")
        return failures

    def apply_e(self, x: Nil2Element) -> Nil2Element:
        return self.f_e.apply(x)

    def apply_ee(self, w: Sequence[int]) -> Vector:
        return self.f_ee.apply(w)

    def compose(self, other: "SquareGroupMorphism") -> "SquareGroupMorphism":
        """self ∘ other."""
        if other.target is not self.source:
            raise CompositionError("square group morphisms are not composable")
        return SquareGroupMorphism(other.source, self.target,
                                   [self.apply_e(x) for x in other.f_e.images],
                                   [self.apply_ee(w) for w in other.f_ee.images], check=False)

    def equals(self, other: "SquareGroupMorphism") -> bool:
        return self.f_e.equals(other.f_e) and self.f_ee.equals(other.f_ee)

    def is_isomorphism(self) -> bool:
        return self.f_e.is_isomorphism() and self.f_ee.is_isomorphism()

    @classmethod
    def identity(cls, x: SquareGroup) -> "SquareGroupMorphism":
        return cls(x, x, [x.gen(i) for i in range(x.ngens)],
                   [unit_vector(x.ee.ngens, k) for k in range(x.ee.ngens)], check=False)

    @classmethod
    def zero(cls, source: SquareGroup, target: SquareGroup) -> "SquareGroupMorphism":
        return cls(source, target, [target.basis.identity()] * source.ngens,
                   [_zero(target.ee.ngens)] * source.ee.ngens)


def znil_map(source: SquareGroup, target: SquareGroup, mapping: Dict[str, Optional[str]]) -> SquareGroupMorphism:
    """Z_nil[f′] for a map of pointed sets f′ (None = base point)."""
    sb, tb = source.basis, target.basis
    m = tb.size
    e_images = [tb.identity() if mapping.get(a) is None else tb.gen(mapping[a]) for a in sb.names]
    ee_images = []
    for a in sb.names:
        for b in sb.names:
            fa, fb = mapping.get(a), mapping.get(b)
            if fa is None or fb is None:
                ee_images.append(_zero(m * m))
            else:
                ee_images.append(unit_vector(m * m, tb.index[fa] * m + tb.index[fb]))
    return SquareGroupMorphism(source, target, e_images, ee_images)


# ---------------------------------------------------------------------------
# Tensor product
# ---------------------------------------------------------------------------

class SquareGroupTensor(SquareGroup):
    """
    X⊙Y generated by u_ij = g_i⊙̲h_j and central ω_kl = a_k⊗̄b_l, with
    (X⊙Y)_ee = X_ee⊗Y_ee.
    """

    def __init__(self, x: SquareGroup, y: SquareGroup, name: str = "", check: bool = True):
        self.left = x
        self.right = y
        nx, ny = x.ngens, y.ngens
        mx, my = x.ee.ngens, y.ee.ngens
        check_size(nx * ny + mx * my, f"tensor {x.name}⊙{y.name}")
        ee = tensor_product(x.ee, y.ee)
        self._nu = nx * ny

        def is_zero_pair(i, i2, j, j2):
            return ee.is_zero(tensor_pair(x.H.cross[i][i2], y.H.cross[j][j2]))

        names, central = [], []
        for i in range(nx):
            for j in range(ny):
                nm = f"({x.basis.names[i]}⊙{y.basis.names[j]})"
                names.append(nm)
                if all(is_zero_pair(i, i2, j, j2) and is_zero_pair(i2, i, j2, j)
                       for i2 in range(nx) for j2 in range(ny)):
                    central.append(nm)
        for k in range(mx):
            for l in range(my):
                nm = f"({x.ee.labels[k]}⊗̄{y.ee.labels[l]})"
                names.append(nm)
                central.append(nm)
        basis = PointedSet(names, central)

        # structure maps
        p_values = [basis.gen(self._nu + k * my + l) for k in range(mx) for l in range(my)]
        h_values, cross = [], []
        for i in range(nx):
            for j in range(ny):
                hy = y.H.values[j]
                dy = y.delta(y.gen(j))
                h_values.append(add_vectors(tensor_pair(x.H.cross[i][i], hy), tensor_pair(x.H.values[i], dy)))
        for k in range(mx):
            tk = x.T(unit_vector(mx, k))
            for l in range(my):
                tl = y.T(unit_vector(my, l))
                h_values.append(tuple(a - b for a, b in zip(unit_vector(mx * my, k * my + l), tensor_pair(tk, tl))))
        size = basis.size
        zero = _zero(mx * my)
        for g1 in range(size):
            row = []
            for g2 in range(size):
                if g1 < self._nu and g2 < self._nu:
                    i, j = divmod(g1, ny)
                    i2, j2 = divmod(g2, ny)
                    row.append(tensor_pair(x.H.cross[i][i2], y.H.cross[j][j2]))
                else:
                    row.append(zero)
            cross.append(row)

        # provisional structure so expand_under can run on the free group
        self.e = PresentedNil2.free(basis)
        self.ee = ee
        self.p_values = tuple(p_values)
        self.H = QuadraticMap(basis, ee, h_values, cross)

        relators = self._relators()
        e = PresentedNil2(basis, relators, name=f"({x.name}⊙{y.name})_e")
        logger.debug(f"tensor {x.name}⊙{y.name}: {basis.size} generators, {len(e.relators)} relators")
        super().__init__(e, ee, p_values, h_values, cross, name=name or f"{x.name}⊙{y.name}", check=check)

    # -- generators and derived operations -----------------------------------

    def u(self, i: int, j: int) -> Nil2Element:
        return self.basis.gen(i * self.right.ngens + j)

    def omega(self, k: int, l: int) -> Nil2Element:
        return self.basis.gen(self._nu + k * self.right.ee.ngens + l)

    def obar(self, a: Sequence[int], b: Sequence[int]) -> Nil2Element:
        """a ⊗̄ b for a ∈ X_ee, b ∈ Y_ee (central)."""
        return self.P(tensor_pair(a, b))

    def under_generator(self, x: Nil2Element, j: int) -> Nil2Element:
        """x ⊙̲ h_j for x ∈ X_e."""
        X, Y = self.left, self.right
        basis = self.basis
        total = basis.identity()
        v = x.linear
        for i, c in enumerate(v):
            if c:
                total = total + self.u(i, j).scale(c)
        hy = Y.H.values[j]
        quad = [0] * X.ee.ngens
        nz = [i for i, c in enumerate(v) if c]
        for i in nz:
            _accumulate(quad, binom2(v[i]), X.H.cross[i][i])
        for a, i in enumerate(nz):
            for i2 in nz[a + 1:]:
                _accumulate(quad, v[i] * v[i2], X.H.cross[i2][i])
        if any(hy) and any(quad):
            total = total + self.obar(quad, hy)
        if any(x.comm):
            comm = [0] * X.ee.ngens
            for c, (a, b) in zip(x.comm, X.basis.pairs):
                _accumulate(comm, c, X.H.cross[a][b])
            if any(comm):
                total = total + self.obar(comm, Y.delta(Y.gen(j)))
        return total

    def expand_under(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """x ⊙̲ y, right-linear in y and governed by (8) in x."""
        basis = self.basis
        total = basis.identity()
        for j, c in enumerate(y.linear):
            if c:
                total = total + self.under_generator(x, j).scale(c)
        if any(y.comm):
            xx = self.left.cross(x, x)
            comm = [0] * self.right.ee.ngens
            for c, (a, b) in zip(y.comm, self.right.basis.pairs):
                _accumulate(comm, c, self.right.H.cross[a][b])
            if any(comm) and any(xx):
                total = total + self.obar(xx, comm)
        return total

    def odot(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """x ⊙ y = x ⊙̲ y − H(x) ⊗̄ TH(y)."""
        corr = self.obar(self.left.H(x), self.right.T(self.right.H(y)))
        return self.expand_under(x, y) - corr

    def _relators(self) -> List[Nil2Element]:
        X, Y = self.left, self.right
        mx, my = X.ee.ngens, Y.ee.ngens
        rels: List[Nil2Element] = []
        for r in self.ee.relations:
            rels.append(self.P(r))
        for k in range(mx):
            tk = X.T(unit_vector(mx, k))
            for l in range(my):
                tl = Y.T(unit_vector(my, l))
                rels.append(self.obar(tk, tl) + self.omega(k, l))
        for k in range(mx):
            pk = X.p_values[k]
            for l in range(Y.ngens):
                rels.append(self.under_generator(pk, l) - self.obar(unit_vector(mx, k), Y.delta(Y.gen(l))))
        for i in range(X.ngens):
            gi = X.gen(i)
            gg = X.cross(gi, gi)
            for l in range(my):
                rels.append(self.expand_under(gi, Y.p_values[l]) - self.obar(gg, unit_vector(my, l)))
        for r in X.e.relators:
            for l in range(Y.ngens):
                rels.append(self.under_generator(r, l))
        for i in range(X.ngens):
            for r in Y.e.relators:
                rels.append(self.expand_under(X.gen(i), r))
        basis = self.basis
        for (g1, g2) in basis.pairs:
            if g1 < self._nu and g2 < self._nu:
                i, k = divmod(g1, Y.ngens)
                j, l = divmod(g2, Y.ngens)
                law = self.obar(X.H.cross[i][j], Y.H.cross[k][l])
                rels.append(commutator(basis.gen(g1), basis.gen(g2)) - law)
        return rels


def tensor(x: SquareGroup, y: SquareGroup) -> SquareGroupTensor:
    return SquareGroupTensor(x, y)


def tensor_morphism(t1: SquareGroupTensor, t2: SquareGroupTensor,
                    f: SquareGroupMorphism, g: SquareGroupMorphism, check: bool = True) -> SquareGroupMorphism:
    """f⊙g: X⊙Y → X′⊙Y′."""
    X, Y = t1.left, t1.right
    e_images = []
    for i in range(X.ngens):
        for j in range(Y.ngens):
            e_images.append(t2.expand_under(f.apply_e(X.gen(i)), g.apply_e(Y.gen(j))))
    mx, my = X.ee.ngens, Y.ee.ngens
    for k in range(mx):
        for l in range(my):
            e_images.append(t2.obar(f.f_ee.images[k], g.f_ee.images[l]))
    ee_images = [tensor_pair(f.f_ee.images[k], g.f_ee.images[l]) for k in range(mx) for l in range(my)]
    return SquareGroupMorphism(t1, t2, e_images, ee_images, check=check, name="tensor morphism")


# ---------------------------------------------------------------------------
# Structural isomorphisms
# ---------------------------------------------------------------------------

def smash_square_group(left: PointedSet, right: PointedSet) -> SquareGroup:
    return make_znil(left.smash(right))


def znil_tensor_iso(t: SquareGroupTensor, target: SquareGroup) -> Tuple[SquareGroupMorphism, SquareGroupMorphism]:
    """
    Z_nil[E]⊙Z_nil[Ē] ≅ Z_nil[E∧Ē]: u_ij ↦ e_i∧ē_j,
    ω_{(a,b),(c,d)} ↦ [e_b∧ē_d, e_a∧ē_c], (a⊗b)⊗(c⊗d) ↦ (a∧c)⊗(b∧d).
    Returns (forward, inverse).
    """
    m, n = t.left.ngens, t.right.ngens
    big = m * n
    tb = target.basis

    def g(a, c):
        return a * n + c

    e_images = [tb.gen(g(i, j)) for i in range(m) for j in range(n)]
    ee_images = []
    for a in range(m):
        for b in range(m):
            for c in range(n):
                for d in range(n):
                    e_images.append(commutator(tb.gen(g(b, d)), tb.gen(g(a, c))))
                    ee_images.append(unit_vector(big * big, g(a, c) * big + g(b, d)))
    forward = SquareGroupMorphism(t, target, e_images, ee_images, name="Z_nil tensor comparison")
    inv_e = [t.u(i, j) for i in range(m) for j in range(n)]
    inv_ee = [None] * (big * big)
    for src_index, img in enumerate(ee_images):
        dst = img.index(1)
        inv_ee[dst] = unit_vector(len(ee_images), src_index)
    inverse = SquareGroupMorphism(target, t, inv_e, inv_ee, name="Z_nil tensor comparison inverse")
    return forward, inverse


def symmetry_iso(t: SquareGroupTensor, s: SquareGroupTensor) -> SquareGroupMorphism:
    """τ: X⊙Y → Y⊙X, x⊙̲y ↦ y⊙x, a⊗̄b ↦ b⊗̄a."""
    X, Y = t.left, t.right
    if s.left is not Y or s.right is not X:
        raise CompositionError("symmetry target must be Y⊙X")
    e_images = []
    for i in range(X.ngens):
        for j in range(Y.ngens):
            corr = s.obar(Y.H.values[j], X.T(X.H.values[i]))
            e_images.append(s.u(j, i) - corr)
    mx, my = X.ee.ngens, Y.ee.ngens
    ee_images = []
    for k in range(mx):
        for l in range(my):
            e_images.append(s.omega(l, k))
            ee_images.append(unit_vector(my * mx, l * mx + k))
    return SquareGroupMorphism(t, s, e_images, ee_images, name="symmetry")


def assoc_iso(left: SquareGroupTensor, right: SquareGroupTensor) -> Tuple[SquareGroupMorphism, SquareGroupMorphism]:
    """(X⊙Y)⊙Z ≅ X⊙(Y⊙Z); returns (forward, inverse)."""
    xy, Z = left.left, left.right
    X, yz = right.left, right.right
    if not isinstance(xy, SquareGroupTensor) or not isinstance(yz, SquareGroupTensor):
        raise CompositionError("associativity needs nested tensors")
    Y = xy.right
    mx, my, mz = X.ee.ngens, Y.ee.ngens, Z.ee.ngens
    e_images = []
    for gi in range(xy.ngens):
        for k in range(Z.ngens):
            if gi < xy._nu:
                i, j = divmod(gi, Y.ngens)
                e_images.append(right.u(i, j * Z.ngens + k))
            else:
                a, b = divmod(gi - xy._nu, my)
                dz = Z.delta(Z.gen(k))
                e_images.append(right.obar(unit_vector(mx, a), tensor_pair(unit_vector(my, b), dz)))
    total_ee = mx * my * mz
    for ab in range(mx * my):
        a, b = divmod(ab, my)
        for c in range(mz):
            e_images.append(right.omega(a, b * mz + c))
    ee_identity = [unit_vector(total_ee, k) for k in range(total_ee)]
    forward = SquareGroupMorphism(left, right, e_images, ee_identity, name="associator")

    inv_images = []
    for i in range(X.ngens):
        gi = X.gen(i)
        gg = X.cross(gi, gi)
        for hz in range(yz.ngens):
            if hz < yz._nu:
                j, k = divmod(hz, Z.ngens)
                inv_images.append(left.u(i * Y.ngens + j, k))
            else:
                b, c = divmod(hz - yz._nu, mz)
                inv_images.append(left.obar(tensor_pair(gg, unit_vector(my, b)), unit_vector(mz, c)))
    for a in range(mx):
        for bc in range(my * mz):
            b, c = divmod(bc, mz)
            inv_images.append(left.omega(a * my + b, c))
    inverse = SquareGroupMorphism(right, left, inv_images, ee_identity, name="associator inverse")
    return forward, inverse


def unit_iso(t: SquareGroupTensor) -> Tuple[SquareGroupMorphism, SquareGroupMorphism]:
    """ℤ_nil⊙X ≅ X: 1⊙̲g ↦ g, 1⊗̄b ↦ P(b); returns (forward, inverse)."""
    unit, X = t.left, t.right
    if unit.ngens != 1 or unit.ee.ngens != 1:
        raise CompositionError("left factor must be ℤ_nil")
    e_images = [X.gen(j) for j in range(X.ngens)] + [X.p_values[l] for l in range(X.ee.ngens)]
    ee_images = [unit_vector(X.ee.ngens, l) for l in range(X.ee.ngens)]
    forward = SquareGroupMorphism(t, X, e_images, ee_images, name="left unit")
    inverse = SquareGroupMorphism(X, t, [t.u(0, j) for j in range(X.ngens)],
                                  [unit_vector(t.ee.ngens, l) for l in range(X.ee.ngens)], name="left unit inverse")
    return forward, inverse


def right_unit_iso(t: SquareGroupTensor, swapped: SquareGroupTensor) -> Tuple[SquareGroupMorphism, SquareGroupMorphism]:
    """X⊙ℤ_nil ≅ X through the symmetry X⊙ℤ_nil → ℤ_nil⊙X."""
    tau = symmetry_iso(t, swapped)
    tau_back = symmetry_iso(swapped, t)
    fwd, inv = unit_iso(swapped)
    return fwd.compose(tau), tau_back.compose(inv)
