"""
Groups of nilpotency class 2.

An element of the free class-2 group on an ordered pointed set E is stored as
(linear, comm): the ordered word Σ linear_i·e_i followed by
Σ_{j<i} comm_{ji}·[e_j, e_i], where [a, b] = −a − b + a + b.  Groups are
written additively.  Generators may be declared central; they get no
commutator coordinates.

Presented quotients decide equality with two lattices: L1 (linear parts of
relators) and L2 (commutator parts of the normal closure meeting the centre).
"""

import logging
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.abelian import (
    AbGroupPresentation,
    Lattice,
    Vector,
    preimage_lattice,
    unit_vector,
)
from src.utils import AxiomError, InputError

logger = logging.getLogger(__name__)


def binom2(n: int) -> int:
    """n(n-1)/2 for every integer n."""
    return n * (n - 1) // 2


class PointedSet:
    """Ordered basis E (base point excluded), optionally with central members."""

    def __init__(self, names: Sequence[str], central: Iterable[str] = ()):
        self.names: Tuple[str, ...] = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise InputError(f"duplicate generator names in {self.names}")
        central = frozenset(central)
        unknown = central - set(self.names)
        if unknown:
            raise InputError(f"central generators {sorted(unknown)} are not in the basis")
        self.central = central
        self.index: Dict[str, int] = {name: i for i, name in enumerate(self.names)}
        self.noncentral = [i for i, name in enumerate(self.names) if name not in central]
        self.pairs: List[Tuple[int, int]] = [
            (j, i) for a, j in enumerate(self.noncentral) for i in self.noncentral[a + 1:]
        ]
        self.pair_index: Dict[Tuple[int, int], int] = {p: k for k, p in enumerate(self.pairs)}

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def npairs(self) -> int:
        return len(self.pairs)

    def is_central(self, i: int) -> bool:
        return self.names[i] in self.central

    def smash(self, other: "PointedSet") -> "PointedSet":
        """E∧Ē with generator a.b at index i*|Ē| + j."""
        return PointedSet([f"{a}.{b}" for a in self.names for b in other.names])

    # -- element constructors ------------------------------------------------

    def identity(self) -> "Nil2Element":
        return Nil2Element(self, (0,) * self.size, (0,) * self.npairs)

    def gen(self, name_or_index, power: int = 1) -> "Nil2Element":
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        return Nil2Element(self, unit_vector(self.size, i, power), (0,) * self.npairs)

    def word(self, linear: Sequence[int]) -> "Nil2Element":
        return Nil2Element(self, tuple(linear), (0,) * self.npairs)

    def central_element(self, comm: Sequence[int]) -> "Nil2Element":
        return Nil2Element(self, (0,) * self.size, tuple(comm))

    def commutator_coords(self, i: int, j: int) -> Vector:
        """Coordinates of [e_i, e_j]."""
        out = [0] * self.npairs
        if i < j and (i, j) in self.pair_index:
            out[self.pair_index[(i, j)]] = 1
        elif j < i and (j, i) in self.pair_index:
            out[self.pair_index[(j, i)]] = -1
        return tuple(out)

    def bracket(self, v: Sequence[int], w: Sequence[int]) -> Vector:
        """Commutator coordinates of [x, y] for linear parts v, w."""
        out = [0] * self.npairs
        for k, (j, i) in enumerate(self.pairs):
            out[k] = v[j] * w[i] - v[i] * w[j]
        return tuple(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointedSet) and self.names == other.names and self.central == other.central

    def __hash__(self):
        return hash((self.names, self.central))

    def __repr__(self) -> str:
        return "{*, " + ", ".join(self.names) + "}"


class Nil2Element:
    """Element of the free class-2 group on a PointedSet, in normal form."""

    __slots__ = ("basis", "linear", "comm")

    def __init__(self, basis: PointedSet, linear: Sequence[int], comm: Sequence[int]):
        if len(linear) != basis.size or len(comm) != basis.npairs:
            raise InputError("element coordinates do not match the basis")
        self.basis = basis
        self.linear: Vector = tuple(linear)
        self.comm: Vector = tuple(comm)

    def _check(self, other: "Nil2Element"):
        if other.basis is not self.basis and other.basis != self.basis:
            raise InputError(f"basis mismatch: {self.basis} vs {other.basis}")

    def _square_part(self) -> List[int]:
        v = self.linear
        return [v[i] * v[j] for (j, i) in self.basis.pairs]

    def __add__(self, other: "Nil2Element") -> "Nil2Element":
        self._check(other)
        v, w = self.linear, other.linear
        comm = [c + d - v[i] * w[j] for c, d, (j, i) in zip(self.comm, other.comm, self.basis.pairs)]
        return Nil2Element(self.basis, tuple(a + b for a, b in zip(v, w)), comm)

    def __neg__(self) -> "Nil2Element":
        s = self._square_part()
        return Nil2Element(self.basis, tuple(-a for a in self.linear), [-c - x for c, x in zip(self.comm, s)])

    def __sub__(self, other: "Nil2Element") -> "Nil2Element":
        return self + (-other)

    def scale(self, n: int) -> "Nil2Element":
        """n-fold sum (n any integer)."""
        s = self._square_part()
        b = binom2(n)
        return Nil2Element(self.basis, tuple(n * a for a in self.linear),
                           [n * c - b * x for c, x in zip(self.comm, s)])

    def __rmul__(self, n: int) -> "Nil2Element":
        return self.scale(n)

    def is_identity(self) -> bool:
        return not any(self.linear) and not any(self.comm)

    def is_central_form(self) -> bool:
        return not any(self.linear)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Nil2Element):
            return NotImplemented
        return self.basis == other.basis and self.linear == other.linear and self.comm == other.comm

    def __hash__(self):
        return hash((self.linear, self.comm))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.linear):
            if c:
                terms.append(_signed(c, self.basis.names[i], terms))
        for k, (j, i) in enumerate(self.basis.pairs):
            c = self.comm[k]
            if c:
                terms.append(_signed(c, f"[{self.basis.names[j]},{self.basis.names[i]}]", terms))
        return " ".join(terms) if terms else "0"


def _signed(c: int, symbol: str, previous: List[str]) -> str:
    mag = "" if abs(c) == 1 else f"{abs(c)}"
    if c < 0:
        return f"- {mag}{symbol}" if previous else f"-{mag}{symbol}"
    return f"+ {mag}{symbol}" if previous else f"{mag}{symbol}"


def commutator(x: Nil2Element, y: Nil2Element) -> Nil2Element:
    """[x, y] = −x − y + x + y."""
    return (-x) + (-y) + x + y


def ordered_sum(elements: Iterable[Nil2Element], basis: PointedSet) -> Nil2Element:
    total = basis.identity()
    for e in elements:
        total = total + e
    return total


# ---------------------------------------------------------------------------
# Presented groups
# ---------------------------------------------------------------------------

class PresentedNil2:
    """Quotient of a free class-2 group by the normal closure of relators."""

    def __init__(self, basis: PointedSet, relators: Sequence[Nil2Element] = (), name: str = ""):
        self.basis = basis
        self.name = name
        seen = set()
        kept = []
        for r in relators:
            if r.basis != basis:
                raise InputError(f"relator {r} is not over {basis}")
            key = (r.linear, r.comm)
            if r.is_identity() or key in seen:
                continue
            seen.add(key)
            kept.append(r)
        self.relators: Tuple[Nil2Element, ...] = tuple(kept)
        logger.debug(f"presented nil2 group {name or basis}: {basis.size} generators, {len(kept)} relators")

    @classmethod
    def free(cls, basis: PointedSet, name: str = "") -> "PresentedNil2":
        return cls(basis, (), name)

    @property
    def ngens(self) -> int:
        return self.basis.size

    @cached_property
    def linear_lattice(self) -> Lattice:
        """L1, tracked so relator combinations can be recovered."""
        return Lattice(self.basis.size, [r.linear for r in self.relators], track=True)

    @cached_property
    def comm_lattice(self) -> Lattice:
        """L2 = commutators of relators with generators + centre parts of relator products."""
        basis = self.basis
        gens = []
        for r in self.relators:
            for i in range(basis.size):
                b = basis.bracket(r.linear, unit_vector(basis.size, i))
                if any(b):
                    gens.append(b)
        for n in self.linear_lattice.kernel():
            prod = self.relator_product(n)
            if any(prod.comm):
                gens.append(prod.comm)
        return Lattice(basis.npairs, gens)

    def relator_product(self, coeffs: Sequence[int]) -> Nil2Element:
        """Ordered product Σ_k coeffs_k · r_k."""
        total = self.basis.identity()
        for c, r in zip(coeffs, self.relators):
            if c:
                total = total + r.scale(c)
        return total

    def normal_form(self, x: Nil2Element) -> Nil2Element:
        reduced = self.linear_lattice.reduce(x.linear)
        diff = [a - b for a, b in zip(x.linear, reduced)]
        if any(diff):
            coeffs = self.linear_lattice.solve(diff)
            x = -self.relator_product(coeffs) + x
        return Nil2Element(self.basis, x.linear, self.comm_lattice.reduce(x.comm))

    def is_identity(self, x: Nil2Element) -> bool:
        coeffs = self.linear_lattice.solve(x.linear) if any(x.linear) else None
        if any(x.linear):
            if coeffs is None:
                return False
            x = -self.relator_product(coeffs) + x
        return self.comm_lattice.contains(x.comm)

    def equal(self, x: Nil2Element, y: Nil2Element) -> bool:
        return self.is_identity(x - y)

    def abelianization(self) -> AbGroupPresentation:
        return AbGroupPresentation(self.basis.size, [r.linear for r in self.relators], self.basis.names)

    def generators(self) -> List[Nil2Element]:
        return [self.basis.gen(i) for i in range(self.basis.size)]

    def commute(self, x: Nil2Element, y: Nil2Element) -> bool:
        return self.is_identity(commutator(x, y))

    def is_abelian(self) -> bool:
        gens = self.generators()
        return all(self.commute(gens[j], gens[i]) for (j, i) in self.basis.pairs)

    def subgroup_presentation(self, elements: Sequence[Nil2Element], labels: Optional[Sequence[str]] = None) -> AbGroupPresentation:
        """
        Abelian presentation of the subgroup generated by pairwise commuting
        central-enough elements: relations are all n with Σ n_k z_k ≡ 0.
        """
        for a in range(len(elements)):
            for b in range(a + 1, len(elements)):
                if not self.commute(elements[a], elements[b]):
                    raise AxiomError("abelian subgroup", f"{elements[a]} and {elements[b]} do not commute")
        k = len(elements)
        zetas = preimage_lattice([z.linear for z in elements], Lattice(self.basis.size, self.linear_lattice.basis()))
        zetas = Lattice(k, zetas).basis()
        nus = []
        for zeta in zetas:
            total = ordered_sum((z.scale(c) for c, z in zip(zeta, elements) if c), self.basis)
            nus.append(self.normal_form(total).comm)
        relations = []
        for c in preimage_lattice(nus, self.comm_lattice):
            rel = [0] * k
            for ci, zeta in zip(c, zetas):
                if ci:
                    for idx, z in enumerate(zeta):
                        rel[idx] += ci * z
            relations.append(rel)
        return AbGroupPresentation(k, relations, labels)

    def as_abelian_group(self) -> AbGroupPresentation:
        """The group itself, when abelian."""
        if not self.is_abelian():
            raise AxiomError("abelian group", f"{self.name or self.basis} is not abelian")
        return self.subgroup_presentation(self.generators(), self.basis.names)

    def __repr__(self) -> str:
        return f"PresentedNil2({self.name or self.basis}, {len(self.relators)} relators)"


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

class Nil2Hom:
    """Homomorphism of presented class-2 groups given on generators."""

    def __init__(self, source: PresentedNil2, target: PresentedNil2, images: Sequence[Nil2Element], check: bool = True):
        if len(images) != source.basis.size:
            raise InputError(f"{len(images)} images for {source.basis.size} generators")
        for im in images:
            if im.basis != target.basis:
                raise InputError(f"image {im} is not over the target basis {target.basis}")
        self.source = source
        self.target = target
        self.images: Tuple[Nil2Element, ...] = tuple(images)
        if check:
            self.validate()

    @classmethod
    def identity(cls, group: PresentedNil2) -> "Nil2Hom":
        return cls(group, group, group.generators(), check=False)

    @classmethod
    def from_pointed_map(cls, source: PresentedNil2, target: PresentedNil2, mapping: Dict[str, Optional[str]]) -> "Nil2Hom":
        """⟨f′⟩_nil for a map of pointed sets; None stands for the base point."""
        images = []
        for name in source.basis.names:
            dest = mapping.get(name)
            images.append(target.basis.identity() if dest is None else target.basis.gen(dest))
        return cls(source, target, images)

    def validate(self):
        for r in self.source.relators:
            if not self.target.is_identity(self.apply(r)):
                raise AxiomError("homomorphism well-defined", f"relator {r} maps to {self.apply(r)}")
        basis = self.source.basis
        for k in range(basis.size):
            if basis.is_central(k):
                for j in range(basis.size):
                    if not self.target.commute(self.images[k], self.images[j]):
                        raise AxiomError("central generators", f"image of {basis.names[k]} is not central")

    @cached_property
    def linear_matrix(self) -> List[Vector]:
        return [im.linear for im in self.images]

    def comm_image(self, comm: Sequence[int]) -> Nil2Element:
        """Image of the central element with the given commutator coordinates."""
        tb = self.target.basis
        out = [0] * tb.npairs
        for c, (j, i) in zip(comm, self.source.basis.pairs):
            if c:
                b = tb.bracket(self.images[j].linear, self.images[i].linear)
                for k, x in enumerate(b):
                    if x:
                        out[k] += c * x
        return tb.central_element(out)

    def apply(self, x: Nil2Element) -> Nil2Element:
        total = self.target.basis.identity()
        for c, im in zip(x.linear, self.images):
            if c:
                total = total + im.scale(c)
        if any(x.comm):
            total = total + self.comm_image(x.comm)
        return total

    def __call__(self, x: Nil2Element) -> Nil2Element:
        return self.apply(x)

    def compose(self, other: "Nil2Hom") -> "Nil2Hom":
        """self ∘ other."""
        return Nil2Hom(other.source, self.target, [self.apply(im) for im in other.images], check=False)

    def equals(self, other: "Nil2Hom") -> bool:
        return all(self.target.equal(a, b) for a, b in zip(self.images, other.images))

    def is_surjective(self) -> bool:
        tl = self.target.linear_lattice
        return Lattice(self.target.basis.size, list(self.linear_matrix) + tl.basis()).is_full()

    def kernel_generators(self) -> List[Nil2Element]:
        """Elements of the source generating the kernel."""
        sb, tb = self.source.basis, self.target.basis
        l1 = Lattice(tb.size, self.target.linear_lattice.basis())
        l2 = self.target.comm_lattice
        lam = [self.comm_image(unit_vector(sb.npairs, k)).comm for k in range(sb.npairs)]
        l3 = l2.extended(lam)
        primes = Lattice(sb.size, preimage_lattice(self.linear_matrix, l1)).basis()
        values = [self.target.normal_form(self.apply(sb.word(t))).comm for t in primes]
        taus = []
        for n in Lattice(len(primes), preimage_lattice(values, l3)).basis():
            tau = [0] * sb.size
            for c, t in zip(n, primes):
                if c:
                    tau = [a + c * b for a, b in zip(tau, t)]
            taus.append(tau)
        solver = Lattice(tb.npairs, lam + l2.basis(), track=True)
        gens = []
        for tau in taus:
            m = self.target.normal_form(self.apply(sb.word(tau))).comm
            coeffs = solver.solve([-x for x in m])
            if coeffs is None:
                raise AxiomError("kernel computation", "commutator defect not in the image lattice")
            gens.append(sb.word(tau) + sb.central_element(coeffs[:sb.npairs]))
        for kappa in preimage_lattice(lam, l2):
            gens.append(sb.central_element(kappa))
        return gens

    def is_injective(self) -> bool:
        return all(self.source.is_identity(g) for g in self.kernel_generators())

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()


def relabel_hom(source: PresentedNil2, target: PresentedNil2, order: Sequence[int]) -> Nil2Hom:
    """Generator i of the source goes to generator order[i] of the target."""
    return Nil2Hom(source, target, [target.basis.gen(k) for k in order], check=False)


# ---------------------------------------------------------------------------
# Z_nil[E] structure and exterior cup products
# ---------------------------------------------------------------------------

def znil_H(x: Nil2Element) -> Vector:
    """H: ⟨E⟩_nil → ⊗²ℤ[E] with H(e) = 0 and (s|t)_H = t⊗s."""
    basis = x.basis
    n = basis.size
    out = [0] * (n * n)
    v = x.linear
    for i in range(n):
        if v[i]:
            out[i * n + i] += binom2(v[i])
    for i in range(n):
        if v[i]:
            for j in range(i + 1, n):
                if v[j]:
                    out[j * n + i] += v[i] * v[j]
    for c, (j, i) in zip(x.comm, basis.pairs):
        if c:
            out[i * n + j] += c
            out[j * n + i] -= c
    return tuple(out)


def znil_T(u: Sequence[int], n: int) -> Vector:
    """T(a⊗b) = −b⊗a on ⊗²ℤ[E]."""
    out = [0] * (n * n)
    for a in range(n):
        for b in range(n):
            if u[a * n + b]:
                out[b * n + a] -= u[a * n + b]
    return tuple(out)


def znil_cross(x: Nil2Element, y: Nil2Element) -> Vector:
    """(x|y)_H = y⊗x on abelianizations."""
    return tuple(b * a for b in y.linear for a in x.linear)


def znil_delta(x: Nil2Element) -> Vector:
    """Δ(x) = (x|x)_H − H(x) + TH(x)."""
    n = x.basis.size
    h = znil_H(x)
    th = znil_T(h, n)
    return tuple(c - a + b for c, a, b in zip(znil_cross(x, x), h, th))


class CupProduct:
    """
    Exterior cup products ⟨E⟩_nil × ⟨Ē⟩_nil → ⟨E∧Ē⟩_nil.

    `hash` (#) is left-linear, `underhash` (⊏̲) right-linear; both send
    e, ē to e∧ē and they differ by the central term H(x)⊗̄TH(y).
    """

    def __init__(self, left: PointedSet, right: PointedSet):
        self.left = left
        self.right = right
        self.smash = left.smash(right)

    def _gen(self, i: int, j: int) -> int:
        return i * self.right.size + j

    def _phi(self, x: Nil2Element, j: int) -> Nil2Element:
        """Image of x under e_i ↦ e_i∧ē_j."""
        s = self.smash
        lin = [0] * s.size
        for i, c in enumerate(x.linear):
            lin[self._gen(i, j)] = c
        comm = [0] * s.npairs
        for c, (a, b) in zip(x.comm, self.left.pairs):
            if c:
                k = s.pair_index[(self._gen(a, j), self._gen(b, j))]
                comm[k] += c
        return Nil2Element(s, lin, comm)

    def _psi(self, y: Nil2Element, i: int) -> Nil2Element:
        """Image of y under ē_j ↦ e_i∧ē_j."""
        s = self.smash
        lin = [0] * s.size
        for j, c in enumerate(y.linear):
            lin[self._gen(i, j)] = c
        comm = [0] * s.npairs
        for c, (a, b) in zip(y.comm, self.right.pairs):
            if c:
                k = s.pair_index[(self._gen(i, a), self._gen(i, b))]
                comm[k] += c
        return Nil2Element(s, lin, comm)

    def hash(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """x # y, left-linear in x."""
        s = self.smash
        total = s.identity()
        for i, c in enumerate(x.linear):
            if c:
                total = total + self._psi(y, i).scale(c)
        for c, (a, b) in zip(x.comm, self.left.pairs):
            if c:
                total = total + commutator(self._psi(y, a), self._psi(y, b)).scale(c)
        return total

    def underhash(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """x ⊏̲ y, right-linear in y."""
        s = self.smash
        total = s.identity()
        for j, c in enumerate(y.linear):
            if c:
                total = total + self._phi(x, j).scale(c)
        for c, (a, b) in zip(y.comm, self.right.pairs):
            if c:
                total = total + commutator(self._phi(x, a), self._phi(x, b)).scale(c)
        return total

    def obar(self, u: Sequence[int], w: Sequence[int]) -> Nil2Element:
        """u ⊗̄ w for u ∈ ⊗²ℤ[E], w ∈ ⊗²ℤ[Ē]: (a⊗b)⊗̄(c⊗d) ↦ [b∧d, a∧c]."""
        m, n = self.left.size, self.right.size
        s = self.smash
        out = [0] * s.npairs
        for a in range(m):
            for b in range(m):
                ub = u[a * m + b]
                if not ub:
                    continue
                for c in range(n):
                    for d in range(n):
                        wd = w[c * n + d]
                        if wd:
                            coords = s.commutator_coords(self._gen(b, d), self._gen(a, c))
                            out = [o + ub * wd * k for o, k in zip(out, coords)]
        return s.central_element(out)

    def correction(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """H(x) ⊗̄ TH(y)."""
        return self.obar(znil_H(x), znil_T(znil_H(y), self.right.size))

    def difference_law_holds(self, x: Nil2Element, y: Nil2Element) -> bool:
        return self.underhash(x, y) == self.hash(x, y) + self.correction(x, y)


def associativity_check(x: Nil2Element, y: Nil2Element, z: Nil2Element, kind: str = "#") -> bool:
    """
    x∘(y∘z) = (x∘y)∘z for ∘ = # or ⊏̲, comparing over E∧(Ē∧F) and (E∧Ē)∧F
    identified by ((i, j), k) ↦ (i, (j, k)).
    """
    if kind not in ("#", "⊏̲", "underhash"):
        raise InputError(f"unknown cup product {kind!r}")
    e, ebar, f = x.basis, y.basis, z.basis
    inner_right = CupProduct(ebar, f)
    outer_right = CupProduct(e, inner_right.smash)
    inner_left = CupProduct(e, ebar)
    outer_left = CupProduct(inner_left.smash, f)
    op = "hash" if kind == "#" else "underhash"
    rhs = getattr(outer_right, op)(x, getattr(inner_right, op)(y, z))
    lhs = getattr(outer_left, op)(getattr(inner_left, op)(x, y), z)
    # generator (i*m + j)*p + k on the left is i*(m*p) + j*p + k on the right
    order = []
    m, p = ebar.size, f.size
    for i in range(e.size):
        for j in range(m):
            for k in range(p):
                order.append(i * m * p + j * p + k)
    relabel = relabel_hom(PresentedNil2.free(outer_left.smash), PresentedNil2.free(outer_right.smash), order)
    return relabel.apply(lhs) == rhs
