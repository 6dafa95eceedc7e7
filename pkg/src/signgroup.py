"""
Sign groups and their group-ring quadratic pair algebras.

A sign group is an extension {±1} ↣ G⋉ ↠ G together with a character
ε: G → {±1}; ω denotes the image of −1.  Elements of a finite sign group
are indices into a multiplication table.

The group ring A(G⋉) has 0-level Z_nil[G₊] and a 1-level generated by [t]
for t ∈ G⋉.  Its multiplication is given explicitly on generators; the
1-level relations are completed until that multiplication is a morphism
of quadratic pair modules.
"""

import logging
import random
from itertools import product
from typing import Any, Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from src.abelian import Vector, unit_vector
from src.nil2 import Nil2Element, Nil2Hom, PointedSet, PresentedNil2, binom2
from src.qpm import PhiPresentation, QpmMorphism, QpmTensor, QuadraticPairModule, word_letters
from src.sqgroup import make_znil
from src.utils import AxiomError, InputError, SizeGuardError

logger = logging.getLogger(__name__)


class SignGroup:
    """Finite sign group given by multiplication tables of G⋉ and G."""

    def __init__(self, names: Sequence[str], table: Sequence[Sequence[int]], identity: int, omega: int,
                 delta: Sequence[int], g_names: Sequence[str], g_table: Sequence[Sequence[int]],
                 eps: Sequence[int], name: str = "", check: bool = True):
        self.names = tuple(names)
        self.table = [list(row) for row in table]
        self.identity = identity
        self.omega = omega
        self.delta = list(delta)
        self.g_names = tuple(g_names)
        self.g_table = [list(row) for row in g_table]
        self.eps = list(eps)
        self.name = name or f"S{len(self.names)}"
        self.g_identity = self.delta[identity]
        self._inverse = {}
        for a in range(self.order):
            for b in range(self.order):
                if self.table[a][b] == identity:
                    self._inverse[a] = b
                    break
        if check:
            self.validate()

    # -- structure -----------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.names)

    @property
    def g_order(self) -> int:
        return len(self.g_names)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def g_mul(self, g: int, h: int) -> int:
        return self.g_table[g][h]

    def g_inv(self, g: int) -> int:
        return next(h for h in range(self.g_order) if self.g_table[g][h] == self.g_identity)

    def eps_of(self, t: int) -> int:
        return self.eps[self.delta[t]]

    def lifts(self, g: int) -> List[int]:
        return [t for t in range(self.order) if self.delta[t] == g]

    def lift(self, g: int) -> int:
        """Fixed section G → G⋉."""
        return self.lifts(g)[0]

    def check(self) -> List[str]:
        failures = []
        n, m = self.order, self.g_order
        if len(self._inverse) != n:
            failures.append("G⋉ has elements without inverse")
        if any(self.table[self.identity][a] != a or self.table[a][self.identity] != a for a in range(n)):
            failures.append("identity of G⋉ is not neutral")
        for a, b, c in product(range(n), repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                failures.append(f"G⋉ not associative at ({self.names[a]}, {self.names[b]}, {self.names[c]})")
                break
        for a, b in product(range(n), repeat=2):
            if self.delta[self.mul(a, b)] != self.g_mul(self.delta[a], self.delta[b]):
                failures.append(f"∂ is not a homomorphism at ({self.names[a]}, {self.names[b]})")
                break
        if sorted(set(self.delta)) != list(range(m)):
            failures.append("∂ is not surjective")
        kernel = sorted(t for t in range(n) if self.delta[t] == self.g_identity)
        if kernel != sorted({self.identity, self.omega}) or self.omega == self.identity:
            failures.append("kernel of ∂ is not {1, ω}")
        if self.mul(self.omega, self.omega) != self.identity:
            failures.append("ω² != 1")
        if any(self.mul(self.omega, a) != self.mul(a, self.omega) for a in range(n)):
            failures.append("ω is not central")
        if any(e not in (1, -1) for e in self.eps):
            failures.append("ε takes values outside {±1}")
        for g, h in product(range(m), repeat=2):
            if self.eps[self.g_mul(g, h)] != self.eps[g] * self.eps[h]:
                failures.append(f"ε is not a homomorphism at ({self.g_names[g]}, {self.g_names[h]})")
                break
        return failures

    def validate(self):
        failures = self.check()
        if failures:
            raise AxiomError("sign group " + self.name, "; ".join(failures[:5]))
        logger.debug(f"sign group {self.name}: |G⋉| = {self.order}, |G| = {self.g_order}")

    # -- constructors ----------------------------------------------------------

    @classmethod
    def trivial(cls) -> "SignGroup":
        """1⋉ = {1, ω} over the trivial group."""
        return cls(["1", "w"], [[0, 1], [1, 0]], 0, 1, [0, 0], ["1"], [[0]], [1], name="1")

    @classmethod
    def cyclic4(cls, signed: bool = True) -> "SignGroup":
        """ℤ/4 over ℤ/2 with ω = t²."""
        table = [[(a + b) % 4 for b in range(4)] for a in range(4)]
        return cls(["1", "t", "w", "wt"], table, 0, 2, [0, 1, 0, 1], ["1", "g"], [[0, 1], [1, 0]],
                   [1, -1 if signed else 1], name="Z4" + ("-" if signed else "+"))

    @classmethod
    def klein(cls, signed: bool = True) -> "SignGroup":
        """ℤ/2 × ℤ/2 over ℤ/2 with ω = (1, 0)."""
        table = [[a ^ b for b in range(4)] for a in range(4)]
        return cls(["1", "t", "w", "wt"], table, 0, 2, [0, 1, 0, 1], ["1", "g"], [[0, 1], [1, 0]],
                   [1, -1 if signed else 1], name="V4" + ("-" if signed else "+"))

    @classmethod
    def from_elements(cls, generators: Sequence[Any], multiply: Callable[[Any, Any], Any], identity: Any,
                      omega: Any, project: Callable[[Any], Hashable], sign: Callable[[Any], int],
                      key: Callable[[Any], Hashable] = lambda x: x, name: str = "",
                      limit: int = 10_000) -> "SignGroup":
        """Close `generators` under `multiply`; G is read off through `project`."""
        elements = [identity]
        index: Dict[Hashable, int] = {key(identity): 0}
        frontier = [identity]
        while frontier:
            fresh = []
            for a in frontier:
                for g in generators:
                    b = multiply(a, g)
                    k = key(b)
                    if k not in index:
                        index[k] = len(elements)
                        elements.append(b)
                        fresh.append(b)
                        if len(elements) > limit:
                            raise SizeGuardError(f"sign group closure exceeds {limit} elements")
            frontier = fresh
        if key(omega) not in index:
            raise InputError("ω is not in the group generated")
        n = len(elements)
        table = [[index[key(multiply(a, b))] for b in elements] for a in elements]
        g_index: Dict[Hashable, int] = {}
        delta = []
        eps_by_g: Dict[int, int] = {}
        for a in elements:
            p = project(a)
            if p not in g_index:
                g_index[p] = len(g_index)
            g = g_index[p]
            delta.append(g)
            s = sign(a)
            if eps_by_g.setdefault(g, s) != s:
                raise AxiomError("sign character", f"elements over {p} have different signs")
        m = len(g_index)
        g_table = [[0] * m for _ in range(m)]
        for a in range(n):
            for b in range(n):
                g_table[delta[a]][delta[b]] = delta[table[a][b]]
        names = [f"s{i}" for i in range(n)]
        names[0] = "1"
        names[index[key(omega)]] = "w"
        g_names = [f"g{i}" for i in range(m)]
        g_names[delta[0]] = "1"
        return cls(names, table, 0, index[key(omega)], delta, g_names, g_table,
                   [eps_by_g[g] for g in range(m)], name=name)

    def __repr__(self) -> str:
        return f"SignGroup({self.name}: |G⋉| = {self.order}, |G| = {self.g_order})"


# ---------------------------------------------------------------------------
# Twisted product and the crossed action
# ---------------------------------------------------------------------------

class TwistedProduct:
    """G⋉ ×̃ L⋉ as pairs (t, s) = t̄s̄ modulo (tω, s) ∼ (t, sω)."""

    def __init__(self, left: SignGroup, right: SignGroup):
        self.left = left
        self.right = right
        G, L = left, right
        transversal = [s for s in range(L.order) if s <= L.mul(s, L.omega)]
        pairs = [(t, s) for t in range(G.order) for s in transversal]
        self._index = {p: k for k, p in enumerate(pairs)}
        self.pairs = pairs
        nL = L.g_order

        def twist(s: int, t2: int) -> int:
            return binom2(L.eps_of(s)) * binom2(G.eps_of(t2))

        table = []
        for (t, s) in pairs:
            row = []
            for (t2, s2) in pairs:
                tt = G.mul(t, t2)
                if twist(s, t2) % 2:
                    tt = G.mul(tt, G.omega)
                row.append(self.canonical(tt, L.mul(s, s2)))
            table.append(row)
        g_table = [[G.g_mul(g, g2) * nL + L.g_mul(l, l2)
                    for g2 in range(G.g_order) for l2 in range(nL)]
                   for g in range(G.g_order) for l in range(nL)]
        self.group = SignGroup(
            [f"{G.names[t]}·{L.names[s]}" for t, s in pairs], table,
            self.canonical(G.identity, L.identity), self.canonical(G.omega, L.identity),
            [G.delta[t] * nL + L.delta[s] for t, s in pairs],
            [f"({g},{l})" for g in G.g_names for l in L.g_names], g_table,
            [G.eps[g] * L.eps[l] for g in range(G.g_order) for l in range(nL)],
            name=f"{G.name}×̃{L.name}")
        self.i_g = [self.canonical(t, L.identity) for t in range(G.order)]
        self.i_l = [self.canonical(G.identity, s) for s in range(L.order)]

    def canonical(self, t: int, s: int) -> int:
        key = (t, s)
        if key not in self._index:
            key = (self.left.mul(t, self.left.omega), self.right.mul(s, self.right.omega))
        return self._index[key]

    def g_pair(self, g: int, l: int) -> int:
        return g * self.right.g_order + l

    def check_relations(self) -> List[str]:
        """Relations of the universal twisted bilinear morphism."""
        G, L, K = self.left, self.right, self.group
        failures = []
        if self.i_g[G.omega] != K.omega or self.i_l[L.omega] != K.omega:
            failures.append("injections do not identify ω")
        for a, b in product(range(G.order), repeat=2):
            if self.i_g[G.mul(a, b)] != K.mul(self.i_g[a], self.i_g[b]):
                failures.append(f"i_G not multiplicative at ({G.names[a]}, {G.names[b]})")
        for a, b in product(range(L.order), repeat=2):
            if self.i_l[L.mul(a, b)] != K.mul(self.i_l[a], self.i_l[b]):
                failures.append(f"i_L not multiplicative at ({L.names[a]}, {L.names[b]})")
        for t, s in product(range(G.order), range(L.order)):
            lhs = K.mul(self.i_g[t], self.i_l[s])
            rhs = K.mul(self.i_l[s], self.i_g[t])
            if binom2(G.eps_of(t)) * binom2(L.eps_of(s)) % 2:
                rhs = K.mul(rhs, K.omega)
            if lhs != rhs:
                failures.append(f"t̄s̄ = s̄t̄ω^c fails at ({G.names[t]}, {L.names[s]})")
        if K.order != 2 * G.g_order * L.g_order:
            failures.append(f"order {K.order} != 2|G||L|")
        return failures


def twisted_product(left: SignGroup, right: SignGroup) -> TwistedProduct:
    tp = TwistedProduct(left, right)
    failures = tp.check_relations()
    if failures:
        raise AxiomError("twisted product", "; ".join(failures[:5]))
    return tp


def crossed_action(S: SignGroup, g: int, x: int, h: int, lift: Optional[int] = None) -> int:
    """g^{(x,h)} = h̄⁻¹ g h̄ ι(ε(g)^{C(x,2)})."""
    hb = S.lift(h) if lift is None else lift
    out = S.mul(S.mul(S.inv(hb), g), hb)
    if binom2(x) % 2 and S.eps_of(g) == -1:
        out = S.mul(out, S.omega)
    return out


def check_crossed_action(S: SignGroup) -> List[str]:
    """Lift independence, right action law and equivariance of ∂⋉ = (ε, ∂)."""
    failures = []
    signs = (1, -1)
    for g, x, h in product(range(S.order), signs, range(S.g_order)):
        values = {crossed_action(S, g, x, h, lift) for lift in S.lifts(h)}
        if len(values) != 1:
            failures.append(f"g^(x,h) depends on the lift at ({S.names[g]}, {x}, {S.g_names[h]})")
        gx = crossed_action(S, g, x, h)
        if S.delta[gx] != S.g_mul(S.g_mul(S.g_inv(h), S.delta[g]), h) or S.eps_of(gx) != S.eps_of(g):
            failures.append(f"∂⋉ not equivariant at ({S.names[g]}, {x}, {S.g_names[h]})")
        for x2, h2 in product(signs, range(S.g_order)):
            twice = crossed_action(S, gx, x2, h2)
            once = crossed_action(S, g, x * x2, S.g_mul(h, h2))
            if twice != once:
                failures.append(f"action law fails at ({S.names[g]}, ({x},{S.g_names[h]}), ({x2},{S.g_names[h2]}))")
    for g in range(S.order):
        if crossed_action(S, g, 1, S.g_identity) != g:
            failures.append(f"unit does not act trivially on {S.names[g]}")
    return failures


def peiffer_defects(S: SignGroup) -> List[Tuple[int, int]]:
    """Pairs (g, g') with g^{∂⋉g'} != g'⁻¹gg'; nonempty exactly when two odd elements exist."""
    out = []
    for g, g2 in product(range(S.order), repeat=2):
        lhs = crossed_action(S, g, S.eps_of(g2), S.delta[g2], lift=g2)
        if lhs != S.mul(S.mul(S.inv(g2), g), g2):
            out.append((g, g2))
    return out


# ---------------------------------------------------------------------------
# The group ring A(G⋉)
# ---------------------------------------------------------------------------

class QuadraticPairAlgebra:
    """
    A(G⋉) with product μ given on generators:
    [g]·[h] = [gh], [g]·[t] = [ĝt] − C(εĝ,2)C(εt,2)P(1|1) − ε(t)·[ĝ] and
    [t]·[g] = ε(ĝ)[t] − ∂[t]·[ĝ].
    """

    def __init__(self, sign_group: SignGroup, max_rounds: int = 12, check: bool = True):
        S = sign_group
        self.sign_group = S
        self.n = S.g_order
        self.m = self.n * self.n
        self.c0 = make_znil(PointedSet(list(S.g_names)), name=f"Z_nil[{S.name}+]")
        boundary = [self._boundary_value(t) for t in range(S.order)]
        self.builder = PhiPresentation(self.c0, [f"[{t}]" for t in S.names], boundary)
        self.basis = self.builder.basis
        self.free = PresentedNil2.free(self.basis)
        self._d = Nil2Hom(self.free, self.c0.e, self.builder.boundary_images, check=False)
        self.unit = self.c0.gen(S.g_identity)
        self.p11 = unit_vector(self.m, S.g_identity * self.n + S.g_identity)
        self.left_homs = [self._left_hom(g) for g in range(self.n)]
        self.right_homs = [self._right_hom(g) for g in range(self.n)]

        relators = self._base_relators()
        laws = self.builder.law_relators()
        self.closure_rounds = 0
        for round_no in range(1, max_rounds + 1):
            c1 = PresentedNil2(self.basis, relators + laws, name=f"A({S.name})_1")
            fresh, seen = [], set()
            for r in self._consequences(c1.relators):
                if c1.is_identity(r):
                    continue
                nf = c1.normal_form(r)
                if nf not in seen:
                    seen.add(nf)
                    fresh.append(r)
            logger.debug(f"A({S.name}) closure round {round_no}: {len(fresh)} new relators")
            if not fresh:
                self.closure_rounds = round_no
                break
            relators += fresh
        else:
            raise AxiomError("group ring closure", f"no fixed point after {max_rounds} rounds")
        self.qpm = QuadraticPairModule(self.c0, c1, self.builder.boundary_images, self.builder.p_symbols(),
                                       name=f"A({S.name})", check=check)
        logger.info(f"A({S.name}): {len(c1.relators)} relators after {self.closure_rounds} closure rounds")

    # -- elements ---------------------------------------------------------------

    def gen0(self, g: int) -> Nil2Element:
        return self.c0.gen(g)

    def gen1(self, t: int) -> Nil2Element:
        return self.builder.gen(t)

    def pvec(self, w: Sequence[int]) -> Nil2Element:
        return self.builder.pvec(w)

    def generators1(self) -> List[Nil2Element]:
        return [self.basis.gen(i) for i in range(self.basis.size)]

    def ee_mult(self, u: Sequence[int], w: Sequence[int]) -> Vector:
        """(a⊗b)(c⊗d) = ac⊗bd."""
        n = self.n
        out = [0] * self.m
        for k1, c1 in enumerate(u):
            if not c1:
                continue
            a, b = divmod(k1, n)
            for k2, c2 in enumerate(w):
                if c2:
                    c, d = divmod(k2, n)
                    out[self.sign_group.g_mul(a, c) * n + self.sign_group.g_mul(b, d)] += c1 * c2
        return tuple(out)

    def diag(self, g: int) -> Vector:
        return unit_vector(self.m, g * self.n + g)

    def boundary1(self, z: Nil2Element) -> Nil2Element:
        return self._d.apply(z)

    def H1(self, z: Nil2Element) -> Vector:
        return self.c0.H(self.boundary1(z))

    def eps_times(self, e: int, z: Nil2Element) -> Nil2Element:
        """(±1)·z with (−1)·z = −z + PH∂z."""
        if e == 1:
            return z
        return -z + self.pvec(self.H1(z))

    # -- products on generators ----------------------------------------------------

    def _boundary_value(self, t: int) -> Nil2Element:
        S = self.sign_group
        return -self.c0.gen(S.delta[t]) + self.c0.gen(S.g_identity).scale(S.eps_of(t))

    def left_value(self, g: int, t: int) -> Nil2Element:
        S = self.sign_group
        gl = S.lift(g)
        c = binom2(S.eps_of(gl)) * binom2(S.eps_of(t))
        return (self.gen1(S.mul(gl, t)) + self.pvec([-c * x for x in self.p11])
                - self.eps_times(S.eps_of(t), self.gen1(gl)))

    def _left_hom(self, g: int) -> Nil2Hom:
        S = self.sign_group
        images = [self.left_value(g, t) for t in range(S.order)]
        images += [self.pvec(self.ee_mult(self.diag(g), unit_vector(self.m, k))) for k in range(self.m)]
        return Nil2Hom(self.free, self.free, images, check=False)

    def right_value(self, t: int, g: int) -> Nil2Element:
        S = self.sign_group
        gl = S.lift(g)
        return self.gen1(t).scale(S.eps_of(gl)) - self.left_mult(self.boundary1(self.gen1(t)), self.gen1(gl))

    def _right_hom(self, g: int) -> Nil2Hom:
        S = self.sign_group
        images = [self.right_value(t, g) for t in range(S.order)]
        images += [self.pvec(self.ee_mult(unit_vector(self.m, k), self.diag(g))) for k in range(self.m)]
        return Nil2Hom(self.free, self.free, images, check=False)

    def left_mult(self, x: Nil2Element, z: Nil2Element) -> Nil2Element:
        """x·z for x ∈ A_0, z ∈ A_1."""
        cross = self.c0.H.cross
        total = self.basis.identity()
        v = x.linear
        for i, c in enumerate(v):
            if c:
                total = total + self.left_homs[i].apply(z).scale(c)
        nz = [i for i, c in enumerate(v) if c]
        quad = [0] * self.m
        for i in nz:
            quad = [a + binom2(v[i]) * b for a, b in zip(quad, cross[i][i])]
        for a, i in enumerate(nz):
            for i2 in nz[a + 1:]:
                quad = [p + v[i] * v[i2] * q for p, q in zip(quad, cross[i2][i])]
        hz = self.H1(z)
        if any(quad) and any(hz):
            total = total + self.pvec(self.ee_mult(quad, hz))
        if any(x.comm):
            comm = [0] * self.m
            for c, (a, b) in zip(x.comm, self.c0.basis.pairs):
                comm = [p + c * q for p, q in zip(comm, cross[a][b])]
            total = total + self.pvec(self.ee_mult(comm, self.c0.delta(self.boundary1(z))))
        return total

    def right_mult(self, z: Nil2Element, y: Nil2Element) -> Nil2Element:
        """z·y for z ∈ A_1, y ∈ A_0."""
        total = self.basis.identity()
        for j, c in enumerate(y.linear):
            if c:
                total = total + self.right_homs[j].apply(z).scale(c)
        if any(y.comm):
            dz = self.boundary1(z)
            zz = self.c0.cross(dz, dz)
            comm = [0] * self.m
            for c, (a, b) in zip(y.comm, self.c0.basis.pairs):
                comm = [p + c * q for p, q in zip(comm, self.c0.H.cross[a][b])]
            total = total + self.pvec(self.ee_mult(zz, comm))
        return total

    # -- relations ------------------------------------------------------------------

    def _base_relators(self) -> List[Nil2Element]:
        S = self.sign_group
        rels = [self.gen1(S.identity), self.gen1(S.omega) - self.pvec(self.p11)]
        for s, t in product(range(S.order), repeat=2):
            c = binom2(S.eps_of(s)) * binom2(S.eps_of(t))
            rhs = (self.left_value(S.delta[s], t) + self.eps_times(S.eps_of(t), self.gen1(s))
                   + self.pvec([c * x for x in self.p11]))
            rels.append(self.gen1(S.mul(s, t)) - rhs)
        return rels

    def _consequences(self, relators: Sequence[Nil2Element]) -> List[Nil2Element]:
        """Relations forced by μ being a well-defined associative, unital morphism."""
        S = self.sign_group
        L, R = self.left_homs, self.right_homs
        gens = self.generators1()
        out = []
        for g in range(self.n):
            for r in relators:
                out.append(L[g].apply(r))
                out.append(R[g].apply(r))
        e = S.g_identity
        for x in gens:
            out.append(L[e].apply(x) - x)
            out.append(R[e].apply(x) - x)
        for g, h in product(range(self.n), repeat=2):
            gh = S.g_mul(g, h)
            for x in gens:
                out.append(L[gh].apply(x) - L[g].apply(L[h].apply(x)))
                out.append(R[gh].apply(x) - R[h].apply(R[g].apply(x)))
                out.append(L[g].apply(R[h].apply(x)) - R[h].apply(L[g].apply(x)))
        for z in gens:
            dz = self.boundary1(z)
            for w in gens:
                out.append(self.right_mult(z, self.boundary1(w)) - self.left_mult(dz, w))
        return out

    def defining_relations_hold(self) -> List[str]:
        """The defining relations of A(G⋉), read in the built 1-level."""
        S = self.sign_group
        c0, c1 = self.c0.e, self.qpm.c1
        failures = []
        for t in range(S.order):
            if not c0.equal(self.qpm.boundary(self.gen1(t)), self._boundary_value(t)):
                failures.append(f"∂[{S.names[t]}] != −[∂t] + ε(t)")
        if not c1.is_identity(self.gen1(S.identity)):
            failures.append("[1] != 0")
        if not c1.equal(self.gen1(S.omega), self.pvec(self.p11)):
            failures.append("[ω] != P(1|1)")
        for s, t in product(range(S.order), repeat=2):
            c = binom2(S.eps_of(s)) * binom2(S.eps_of(t))
            rhs = (self.left_mult(self.gen0(S.delta[s]), self.gen1(t))
                   + self.eps_times(S.eps_of(t), self.gen1(s)) + self.pvec([c * x for x in self.p11]))
            if not c1.equal(self.gen1(S.mul(s, t)), rhs):
                failures.append(f"[st] relation fails at ({S.names[s]}, {S.names[t]})")
        return failures

    # -- the monoid structure -----------------------------------------------------------

    def multiplication(self, check: bool = True) -> Tuple[QpmTensor, QpmMorphism]:
        """μ: A⊙A → A."""
        S = self.sign_group
        t = QpmTensor(self.qpm, self.qpm, name=f"A({S.name})⊙A({S.name})")
        n, m = self.n, self.m
        f0 = [self.gen0(S.g_mul(g, h)) for g in range(n) for h in range(n)]
        fee = [self.ee_mult(unit_vector(m, k), unit_vector(m, l)) for k in range(m) for l in range(m)]
        f0 += [self.c0.P(w) for w in fee]
        gens = self.generators1()
        f1 = [self.right_homs[y].images[x] for x in range(len(gens)) for y in range(n)]
        f1 += [self.left_homs[c].images[z] for c in range(n) for z in range(len(gens))]
        f1 += [self.pvec(w) for w in fee]
        return t, QpmMorphism(t, self.qpm, f0, f1, fee, check=check, name=f"μ_{S.name}")

    def check_monoid(self, with_tensor: bool = True) -> List[str]:
        """Unit and associativity on generators, and μ a morphism when with_tensor."""
        S = self.sign_group
        c1 = self.qpm.c1
        failures = []
        e = S.g_identity
        for x in self.generators1():
            if not c1.equal(self.left_homs[e].apply(x), x):
                failures.append(f"1·{x} != {x}")
            if not c1.equal(self.right_homs[e].apply(x), x):
                failures.append(f"{x}·1 != {x}")
        for g, h in product(range(self.n), repeat=2):
            gh = S.g_mul(g, h)
            for x in self.generators1():
                L, R = self.left_homs, self.right_homs
                if not c1.equal(L[gh].apply(x), L[g].apply(L[h].apply(x))):
                    failures.append(f"([g][h])·x != [g]·([h]·x) at g={S.g_names[g]}, h={S.g_names[h]}")
                if not c1.equal(R[gh].apply(x), R[h].apply(R[g].apply(x))):
                    failures.append(f"x·([g][h]) != (x·[g])·[h] at g={S.g_names[g]}, h={S.g_names[h]}")
                if not c1.equal(L[g].apply(R[h].apply(x)), R[h].apply(L[g].apply(x))):
                    failures.append(f"[g]·(x·[h]) != ([g]·x)·[h] at g={S.g_names[g]}, h={S.g_names[h]}")
        if with_tensor:
            try:
                self.multiplication(check=True)
            except AxiomError as e:
                failures.append(f"μ is not a morphism: {e}")
        return failures

    def __repr__(self) -> str:
        return f"QuadraticPairAlgebra(A({self.sign_group.name}))"


def group_ring(sign_group: SignGroup, check: bool = True) -> QuadraticPairAlgebra:
    return QuadraticPairAlgebra(sign_group, check=check)


def unit_comparison(algebra: QuadraticPairAlgebra, unit: QuadraticPairModule) -> QpmMorphism:
    """Z̄_nil → A(1⋉): 1 ↦ [1], P(1⊗1) ↦ P(1|1)."""
    if algebra.n != 1:
        raise InputError("unit comparison needs the trivial sign group")
    return QpmMorphism(unit, algebra.qpm, [algebra.unit], [algebra.pvec(algebra.p11)], [algebra.p11],
                       name="Zbar_nil → A(1)")


def _embedding1(source: QuadraticPairAlgebra, target: QuadraticPairAlgebra,
                tmap: Sequence[int], gmap: Sequence[int]) -> Nil2Hom:
    """A(i)_1 on the free 1-level: [t] ↦ [i t], P(a⊗b) ↦ P(ia⊗ib)."""
    n, nt = source.n, target.n
    images = [target.gen1(tmap[t]) for t in range(source.sign_group.order)]
    for k in range(source.m):
        a, b = divmod(k, n)
        images.append(target.pvec(unit_vector(target.m, gmap[a] * nt + gmap[b])))
    return Nil2Hom(source.free, target.free, images, check=False)


def strict_monoidal_morphism(left: SignGroup, right: SignGroup, limit: int = 48,
                             check: bool = True) -> QpmMorphism:
    """A(G⋉)⊙A(L⋉) → A(G⋉ ×̃ L⋉): A(i_G)⊙A(i_L) followed by the product."""
    order = 2 * left.g_order * right.g_order
    if order > limit:
        raise SizeGuardError(f"twisted product of order {order} exceeds the limit {limit}")
    tp = twisted_product(left, right)
    AG, AL, AK = group_ring(left), group_ring(right), group_ring(tp.group)
    t = QpmTensor(AG.qpm, AL.qpm)
    nG, nL, nK = left.g_order, right.g_order, AK.n
    gmap_g = [tp.g_pair(g, right.g_identity) for g in range(nG)]
    gmap_l = [tp.g_pair(left.g_identity, l) for l in range(nL)]
    emb_g = _embedding1(AG, AK, tp.i_g, gmap_g)
    emb_l = _embedding1(AL, AK, tp.i_l, gmap_l)

    def ee_image(k: int, l: int) -> Vector:
        a, b = divmod(k, nG)
        c, d = divmod(l, nL)
        return unit_vector(AK.m, tp.g_pair(a, c) * nK + tp.g_pair(b, d))

    f0 = [AK.gen0(tp.g_pair(g, l)) for g in range(nG) for l in range(nL)]
    fee = [ee_image(k, l) for k in range(AG.m) for l in range(AL.m)]
    f0 += [AK.c0.P(w) for w in fee]
    f1 = [AK.right_mult(emb_g.apply(x), AK.gen0(gmap_l[y]))
          for x in AG.generators1() for y in range(nL)]
    f1 += [AK.left_mult(AK.gen0(gmap_g[c]), emb_l.apply(z))
           for c in range(nG) for z in AL.generators1()]
    f1 += [AK.pvec(w) for w in fee]
    return QpmMorphism(t, AK.qpm, f0, f1, fee, check=check, name=f"A({left.name})⊙A({right.name}) → A({tp.group.name})")


def strict_monoidal_check(left: SignGroup, right: SignGroup, limit: int = 48) -> bool:
    try:
        psi = strict_monoidal_morphism(left, right, limit=limit)
    except AxiomError as e:
        logger.warning(f"strict monoidal comparison is not a morphism: {e}")
        return False
    return psi.is_isomorphism()


# ---------------------------------------------------------------------------
# Modules and actions
# ---------------------------------------------------------------------------

def _random_word(basis: PointedSet, rng: random.Random, length: int = 3, max_coeff: int = 2) -> Nil2Element:
    x = basis.identity()
    for _ in range(length):
        x = x + basis.gen(rng.randrange(basis.size), rng.choice([c for c in range(-max_coeff, max_coeff + 1) if c]))
    return x


class RightModule:
    """
    Right A(G⋉)-module structure on a qpm C given on generators: x·[g] on
    both levels, c·[t] for 0-generators c, and the ee action C_ee ⊗ A_ee → C_ee.
    """

    def __init__(self, algebra: QuadraticPairAlgebra, qpm: QuadraticPairModule,
                 act0: Sequence[Sequence[Nil2Element]], act1: Sequence[Sequence[Nil2Element]],
                 act_ee: Sequence[Sequence[Vector]], times_t: Sequence[Sequence[Nil2Element]]):
        self.algebra = algebra
        self.qpm = qpm
        self.act0 = [list(r) for r in act0]
        self.act1 = [list(r) for r in act1]
        self.act_ee = [list(r) for r in act_ee]
        self.times_t = [list(r) for r in times_t]

    @classmethod
    def regular(cls, algebra: QuadraticPairAlgebra) -> "RightModule":
        """A(G⋉) acting on itself by right multiplication."""
        S, n, m = algebra.sign_group, algebra.n, algebra.m
        act0 = [[algebra.gen0(S.g_mul(h, g)) for h in range(n)] for g in range(n)]
        act1 = [list(algebra.right_homs[g].images) for g in range(n)]
        act_ee = [[algebra.ee_mult(unit_vector(m, k), unit_vector(m, ab)) for ab in range(m)] for k in range(m)]
        times_t = [[algebra.left_homs[h].images[t] for t in range(S.order)] for h in range(n)]
        return cls(algebra, algebra.qpm, act0, act1, act_ee, times_t)

    def ee_act(self, w: Sequence[int], u: Sequence[int]) -> Vector:
        out = [0] * self.qpm.ee.ngens
        for k, a in enumerate(w):
            if a:
                for ab, b in enumerate(u):
                    if b:
                        out = [p + a * b * q for p, q in zip(out, self.act_ee[k][ab])]
        return tuple(out)

    def gstar(self, g: int, check: bool = True) -> QpmMorphism:
        C = self.qpm
        fee = [self.ee_act(unit_vector(C.ee.ngens, k), self.algebra.diag(g)) for k in range(C.ee.ngens)]
        return QpmMorphism(C, C, self.act0[g], self.act1[g], fee, check=check,
                           name=f"{self.algebra.sign_group.g_names[g]}*")

    def right0(self, x: Nil2Element, y: Nil2Element) -> Nil2Element:
        """x·y for x ∈ C_0, y ∈ A_0."""
        C, A = self.qpm, self.algebra
        total = C.c0.basis.identity()
        for j, c in enumerate(y.linear):
            if c:
                total = total + self.gstar(j, check=False).f0.apply(x).scale(c)
        if any(y.comm):
            comm = [0] * A.m
            for c, (a, b) in zip(y.comm, A.c0.basis.pairs):
                comm = [p + c * q for p, q in zip(comm, A.c0.H.cross[a][b])]
            total = total + C.c0.P(self.ee_act(C.c0.cross(x, x), comm))
        return total

    def times(self, x: Nil2Element, t: int) -> Nil2Element:
        """x·[t] for x ∈ C_0."""
        C, A = self.qpm, self.algebra
        cross = C.c0.H.cross
        z = A.gen1(t)
        total = C.c1.basis.identity()
        v = x.linear
        for i, c in enumerate(v):
            if c:
                total = total + self.times_t[i][t].scale(c)
        nz = [i for i, c in enumerate(v) if c]
        quad = [0] * C.ee.ngens
        for i in nz:
            quad = [a + binom2(v[i]) * b for a, b in zip(quad, cross[i][i])]
        for a, i in enumerate(nz):
            for i2 in nz[a + 1:]:
                quad = [p + v[i] * v[i2] * q for p, q in zip(quad, cross[i2][i])]
        hz = A.H1(z)
        if any(quad) and any(hz):
            total = total + C.P1(self.ee_act(quad, hz))
        if any(x.comm):
            comm = [0] * C.ee.ngens
            for c, (a, b) in zip(x.comm, C.c0.basis.pairs):
                comm = [p + c * q for p, q in zip(comm, cross[a][b])]
            total = total + C.P1(self.ee_act(comm, A.c0.delta(A.boundary1(z))))
        return total

    def bracket_direct(self, x: Nil2Element, t: int) -> Nil2Element:
        """⟨x, t⟩ = x·[t] + C(ε(t),2)PH(x)."""
        C = self.qpm
        c = binom2(self.algebra.sign_group.eps_of(t))
        return self.times(x, t) + C.P1([c * a for a in C.c0.H(x)])

    def check(self) -> List[str]:
        S, A, C = self.algebra.sign_group, self.algebra, self.qpm
        failures = []
        stars = []
        for g in range(A.n):
            try:
                stars.append(self.gstar(g))
            except AxiomError as e:
                failures.append(f"x ↦ x·[{S.g_names[g]}] is not a morphism: {e}")
                return failures
        ident = QpmMorphism.identity(C)
        if not stars[S.g_identity].equals(ident):
            failures.append("x·[1] != x")
        for g, h in product(range(A.n), repeat=2):
            if not stars[S.g_mul(g, h)].equals(stars[h].compose(stars[g])):
                failures.append(f"x·[gh] != (x·[g])·[h] at g={S.g_names[g]}, h={S.g_names[h]}")
        for t in range(S.order):
            dt = A.boundary1(A.gen1(t))
            for c in range(C.c0.ngens):
                cg = C.c0.gen(c)
                if not C.c0.e.equal(C.boundary(self.times(cg, t)), self.right0(cg, dt)):
                    failures.append(f"∂(c·[t]) != c·∂[t] at c={C.c0.basis.names[c]}, t={S.names[t]}")
            for z in C.c1.generators():
                zt = self.times(C.boundary(z), t)
                zd = C.c1.basis.identity()
                for j, k in enumerate(dt.linear):
                    if k:
                        zd = zd + stars[j].f1.apply(z).scale(k)
                if not C.c1.equal(zd, zt):
                    failures.append(f"z·∂[t] != ∂z·[t] at z={z}, t={S.names[t]}")
        return failures

    def equals(self, other: "RightModule") -> bool:
        C = self.qpm
        A = self.algebra
        for g in range(A.n):
            if not all(C.c0.e.equal(a, b) for a, b in zip(self.act0[g], other.act0[g])):
                return False
            if not all(C.c1.equal(a, b) for a, b in zip(self.act1[g], other.act1[g])):
                return False
        for k in range(C.ee.ngens):
            if not all(C.ee.equal(a, b) for a, b in zip(self.act_ee[k], other.act_ee[k])):
                return False
        return all(C.c1.equal(a, b) for r1, r2 in zip(self.times_t, other.times_t) for a, b in zip(r1, r2))


class SignAction:
    """G⋉ acting on a qpm C: morphisms g* and the bracket ⟨c, t⟩ on 0-generators."""

    def __init__(self, sign_group: SignGroup, qpm: QuadraticPairModule, stars: Sequence[QpmMorphism],
                 brackets: Sequence[Sequence[Nil2Element]]):
        self.sign_group = sign_group
        self.qpm = qpm
        self.stars = list(stars)
        self.brackets = [list(r) for r in brackets]

    def minus_star0(self, x: Nil2Element) -> Nil2Element:
        """(−1)*x = −x + ∂PH(x)."""
        c0 = self.qpm.c0
        return -x + c0.P(c0.H(x))

    def minus_star1(self, z: Nil2Element) -> Nil2Element:
        """(−1)*z = −z + PH∂(z)."""
        C = self.qpm
        return -z + C.P1(C.c0.H(C.boundary(z)))

    def eps_star0(self, e: int, x: Nil2Element) -> Nil2Element:
        return x if e == 1 else self.minus_star0(x)

    def eps_star1(self, e: int, z: Nil2Element) -> Nil2Element:
        return z if e == 1 else self.minus_star1(z)

    def star0(self, t: int, x: Nil2Element) -> Nil2Element:
        """∂(t)*x."""
        return self.stars[self.sign_group.delta[t]].f0.apply(x)

    def star1(self, t: int, z: Nil2Element) -> Nil2Element:
        return self.stars[self.sign_group.delta[t]].f1.apply(z)

    def _defect(self, x: Nil2Element, t: int) -> Nil2Element:
        return -self.star0(t, x) + self.eps_star0(self.sign_group.eps_of(t), x)

    def bracket(self, x: Nil2Element, t: int) -> Nil2Element:
        """⟨x, t⟩ extended letter by letter with ⟨x+y,t⟩ = ⟨x,t⟩ + ⟨y,t⟩ + P(−∂(t)*x + ε(t)*x | ∂(t)*y)."""
        C = self.qpm
        basis = C.c0.basis
        done = basis.identity()
        total = C.c1.basis.identity()
        for i, sign in word_letters(x):
            g = basis.gen(i)
            value = self.brackets[i][t]
            if sign < 0:
                corr = C.P1(C.c0.cross(self._defect(-g, t), self.star0(t, g)))
                value = -corr - value
                g = -g
            total = total + value + C.P1(C.c0.cross(self._defect(done, t), self.star0(t, g)))
            done = done + g
        return total

    def check_laws(self, xs: Sequence[Nil2Element], zs: Sequence[Nil2Element]) -> List[str]:
        """Action axioms on sample elements of C_0 and C_1, for all s, t ∈ G⋉."""
        S, C = self.sign_group, self.qpm
        e0, e1 = C.c0.e, C.c1
        failures = []
        for t in range(S.order):
            et = S.eps_of(t)
            for x in xs:
                for y in xs:
                    lhs = self.bracket(x + y, t)
                    rhs = (self.bracket(x, t) + self.bracket(y, t)
                           + C.P1(C.c0.cross(self._defect(x, t), self.star0(t, y))))
                    if not e1.equal(lhs, rhs):
                        failures.append(f"⟨x+y,t⟩ additivity fails at x={x}, y={y}, t={S.names[t]}")
                if not e0.equal(self.eps_star0(et, x), self.star0(t, x) + C.boundary(self.bracket(x, t))):
                    failures.append(f"ε(t)*x != ∂(t)*x + ∂⟨x,t⟩ at x={x}, t={S.names[t]}")
                for s in range(S.order):
                    lhs = self.bracket(x, S.mul(s, t))
                    rhs = self.bracket(self.star0(s, x), t) + self.bracket(self.eps_star0(et, x), s)
                    if not e1.equal(lhs, rhs):
                        failures.append(f"⟨x,st⟩ product law fails at x={x}, s={S.names[s]}, t={S.names[t]}")
            for z in zs:
                if not e1.equal(self.eps_star1(et, z), self.star1(t, z) + self.bracket(C.boundary(z), t)):
                    failures.append(f"ε(t)*z != ∂(t)*z + ⟨∂z,t⟩ at z={z}, t={S.names[t]}")
        for x in xs:
            if not e1.equal(self.bracket(x, S.omega), C.P1(C.c0.cross(x, x))):
                failures.append(f"⟨x,ω⟩ != P(x|x) at x={x}")
        return failures

    def sample_laws(self, rng: random.Random, samples: int = 3) -> List[str]:
        C = self.qpm
        xs = [C.c0.basis.gen(i) for i in range(C.c0.ngens)]
        xs += [_random_word(C.c0.basis, rng) for _ in range(samples)]
        zs = C.c1.generators() + [_random_word(C.c1.basis, rng) for _ in range(samples)] if C.c1.ngens else []
        return self.check_laws(xs, zs)

    def equals(self, other: "SignAction") -> bool:
        C = self.qpm
        if not all(a.equals(b) for a, b in zip(self.stars, other.stars)):
            return False
        return all(C.c1.equal(a, b) for r1, r2 in zip(self.brackets, other.brackets) for a, b in zip(r1, r2))


def action_from_module(module: RightModule) -> SignAction:
    """g*x = x·[g] and ⟨x, t⟩ = x·[t] + C(ε(t),2)PH(x)."""
    failures = module.check()
    if failures:
        raise AxiomError("right module", "; ".join(failures[:5]))
    A, C = module.algebra, module.qpm
    S = A.sign_group
    stars = [module.gstar(g) for g in range(A.n)]
    brackets = [[module.bracket_direct(C.c0.gen(c), t) for t in range(S.order)] for c in range(C.c0.ngens)]
    return SignAction(S, C, stars, brackets)


def module_from_action(action: SignAction, algebra: QuadraticPairAlgebra) -> RightModule:
    """Inverse of action_from_module; the ee action is read off cross effects, so C_(0) must be good."""
    C, S = action.qpm, action.sign_group
    n = algebra.n
    act0 = [list(action.stars[g].f0.images) for g in range(n)]
    act1 = [list(action.stars[g].f1.images) for g in range(n)]
    act_ee = []
    for k in range(C.ee.ngens):
        row = []
        for ab in range(algebra.m):
            a, b = divmod(ab, n)
            out = [0] * C.ee.ngens
            for mult, i, j in C.c0.cross_preimage(unit_vector(C.ee.ngens, k)):
                w = C.c0.cross(action.stars[b].f0.apply(C.c0.gen(i)), action.stars[a].f0.apply(C.c0.gen(j)))
                out = [p + mult * q for p, q in zip(out, w)]
            row.append(tuple(out))
        act_ee.append(row)
    times_t = []
    for c in range(C.c0.ngens):
        h = C.P1(C.c0.H(C.c0.gen(c)))
        times_t.append([action.brackets[c][t] - h.scale(binom2(S.eps_of(t))) for t in range(S.order)])
    return RightModule(algebra, C, act0, act1, act_ee, times_t)


def regular_action(algebra: QuadraticPairAlgebra) -> SignAction:
    return action_from_module(RightModule.regular(algebra))


def describe_algebra(algebra: QuadraticPairAlgebra) -> Dict[str, Any]:
    q = algebra.qpm
    return {
        "sign_group": algebra.sign_group.name,
        "order": algebra.sign_group.order,
        "generators_0": q.c0.ngens,
        "generators_1": q.c1.ngens,
        "relators_1": len(q.c1.relators),
        "closure_rounds": algebra.closure_rounds,
        "h0": q.h0().describe(),
        "h1": q.h1().describe(),
    }
