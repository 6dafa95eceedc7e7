"""
Exact integer-lattice algebra.

Finitely generated abelian groups are presented by a generator count and a
list of relators (stored as integer column vectors).  Membership and normal
forms use a column Hermite normal form; structure (torsion, rank) uses the
Smith normal form.  All arithmetic is on Python ints, so nothing overflows.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Dict

from src.utils import InputError, AxiomError

logger = logging.getLogger(__name__)

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: Tuple[Tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != ncols:
                raise InputError(f"ragged matrix: expected {ncols} columns, got {len(row)}")
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        for col in columns:
            if len(col) != nrows:
                raise InputError(f"column of length {len(col)} in a matrix with {nrows} rows")
        return cls(tuple(tuple(int(col[i]) for col in columns) for i in range(nrows)), len(columns))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(tuple((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_columns(self.rows, self.ncols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.columns()
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col) if a) for col in cols) for row in self.rows),
            other.ncols,
        )

    def apply(self, v: Sequence[int]) -> Vector:
        return tuple(sum(a * b for a, b in zip(row, v) if a and b) for row in self.rows)

    def is_diagonal(self) -> bool:
        return all(x == 0 for i, row in enumerate(self.rows) for j, x in enumerate(row) if i != j)

    def diagonal(self) -> List[int]:
        return [self.rows[i][i] for i in range(min(self.shape))]

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.rows]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _snf_core(a: List[List[int]], m: int, n: int, u: Optional[List[List[int]]], v: Optional[List[List[int]]]):
    """In-place Smith reduction of `a`; row ops mirrored on `u`, column ops on `v`."""

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            if u is not None:
                u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            if v is not None:
                for row in v:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            rs, rd = a[src], a[dst]
            for k in range(n):
                if rs[k]:
                    rd[k] += q * rs[k]
            if u is not None:
                us, ud = u[src], u[dst]
                for k in range(m):
                    if us[k]:
                        ud[k] += q * us[k]

    def add_col(dst, src, q):
        if q:
            for row in a:
                if row[src]:
                    row[dst] += q * row[src]
            if v is not None:
                for row in v:
                    if row[src]:
                        row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            clean = True
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                best = None
                for i in range(t + 1, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, t)
                for j in range(t + 1, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), t, j)
                if best[0] < abs(a[t][t]):
                    swap_rows(t, best[1])
                    swap_cols(t, best[2])
                continue
            # divisibility chain
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
        t += 1


def smith_normal_form(matrix: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Smith normal form with transforms.

    Returns:
        (U, S, V) with U, V unimodular and U·M·V = S diagonal, d1 | d2 | ...
    """
    m, n = matrix.shape
    a = matrix.to_lists()
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    _snf_core(a, m, n, u, v)
    return IntMatrix.from_rows(u, m), IntMatrix.from_rows(a, n), IntMatrix.from_rows(v, n)


def invariant_factors(matrix: IntMatrix) -> List[int]:
    """Nonzero diagonal entries of the Smith form (no transforms kept)."""
    m, n = matrix.shape
    a = matrix.to_lists()
    _snf_core(a, m, n, None, None)
    return [a[i][i] for i in range(min(m, n)) if a[i][i]]


# ---------------------------------------------------------------------------
# Hermite normal form / lattices
# ---------------------------------------------------------------------------

def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _first_nonzero(v: List[int], start: int = 0) -> int:
    for i in range(start, len(v)):
        if v[i]:
            return i
    return -1


def _combine(a: List[int], ca: int, b: List[int], cb: int) -> List[int]:
    return [ca * x + cb * y for x, y in zip(a, b)]


class Lattice:
    """
    Sublattice of Z^dim spanned by generator vectors, kept in column Hermite
    normal form: pivot rows strictly increase, pivots are positive and the
    entries of earlier basis vectors in a pivot row lie in [0, pivot).

    With track=True every basis vector remembers its combination of the input
    generators, which enables `solve` and `kernel`.
    """

    def __init__(self, dim: int, generators: Sequence[Sequence[int]] = (), track: bool = False):
        self.dim = dim
        self.track = track
        self.ngenerators = 0
        self._basis: Dict[int, List[int]] = {}
        self._combo: Dict[int, List[int]] = {}
        self._kernel: List[List[int]] = []
        self._pending: List[Tuple[List[int], Optional[List[int]]]] = []
        self._canonical = True
        generators = list(generators)
        if track:
            k = len(generators)
            for idx, g in enumerate(generators):
                combo = [0] * k
                combo[idx] = 1
                self._insert(list(g), combo)
            self.ngenerators = k
        else:
            for g in generators:
                self._insert(list(g), None)
            self.ngenerators = len(generators)
        self._canonicalize()

    # -- construction ------------------------------------------------------

    def _insert(self, v: List[int], combo: Optional[List[int]]):
        if len(v) != self.dim:
            raise InputError(f"vector of length {len(v)} in a lattice of dimension {self.dim}")
        p = _first_nonzero(v)
        while p >= 0:
            b = self._basis.get(p)
            if b is None:
                if v[p] < 0:
                    v = [-x for x in v]
                    if combo is not None:
                        combo = [-x for x in combo]
                self._basis[p] = v
                if combo is not None:
                    self._combo[p] = combo
                self._canonical = False
                return
            bp, vp = b[p], v[p]
            if vp % bp == 0:
                q = vp // bp
                v = _combine(v, 1, b, -q)
                if combo is not None:
                    combo = _combine(combo, 1, self._combo[p], -q)
            else:
                g, x, y = _xgcd(bp, vp)
                if g < 0:
                    g, x, y = -g, -x, -y
                nb = _combine(b, x, v, y)
                nv = _combine(b, vp // g, v, -(bp // g))
                if combo is not None:
                    cb = self._combo[p]
                    self._combo[p] = _combine(cb, x, combo, y)
                    combo = _combine(cb, vp // g, combo, -(bp // g))
                self._basis[p] = nb
                self._canonical = False
                v = nv
            p = _first_nonzero(v, p + 1)
        if combo is not None and any(combo):
            self._kernel.append(combo)

    def _canonicalize(self):
        if self._canonical:
            return
        pivots = sorted(self._basis)
        for jdx, pj in enumerate(pivots):
            bj = self._basis[pj]
            piv = bj[pj]
            for pi in pivots[:jdx]:
                bi = self._basis[pi]
                q = bi[pj] // piv
                if q:
                    self._basis[pi] = _combine(bi, 1, bj, -q)
                    if self.track:
                        self._combo[pi] = _combine(self._combo[pi], 1, self._combo[pj], -q)
        self._canonical = True

    def extended(self, generators: Sequence[Sequence[int]]) -> "Lattice":
        """A new lattice spanned by this one and further generators (untracked)."""
        new = Lattice(self.dim)
        for p in sorted(self._basis):
            new._basis[p] = list(self._basis[p])
        new.ngenerators = len(self._basis)
        for g in generators:
            new._insert(list(g), None)
            new.ngenerators += 1
        new._canonical = False
        new._canonicalize()
        return new

    # -- queries -------------------------------------------------------------

    @property
    def pivots(self) -> List[int]:
        return sorted(self._basis)

    @property
    def rank(self) -> int:
        return len(self._basis)

    def basis(self) -> List[Vector]:
        return [tuple(self._basis[p]) for p in self.pivots]

    def reduce(self, v: Sequence[int], with_quotients: bool = False):
        """Canonical representative of v modulo the lattice."""
        v = list(v)
        quotients = {}
        for p in self.pivots:
            if v[p]:
                b = self._basis[p]
                q = v[p] // b[p]
                if q:
                    v = _combine(v, 1, b, -q)
                    quotients[p] = q
        if with_quotients:
            return tuple(v), quotients
        return tuple(v)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_all(self, vectors: Sequence[Sequence[int]]) -> bool:
        return all(self.contains(v) for v in vectors)

    def solve(self, v: Sequence[int]) -> Optional[List[int]]:
        """Integer coefficients c over the input generators with Σ c_k g_k = v, or None."""
        if not self.track:
            raise AxiomError("lattice solve", "lattice was built without transform tracking")
        rest, quotients = self.reduce(v, with_quotients=True)
        if any(rest):
            return None
        coeffs = [0] * self.ngenerators
        for p, q in quotients.items():
            for k, c in enumerate(self._combo[p]):
                if c:
                    coeffs[k] += q * c
        return coeffs

    def kernel(self) -> List[Vector]:
        """Basis of the relations among the input generators."""
        if not self.track:
            raise AxiomError("lattice kernel", "lattice was built without transform tracking")
        return [tuple(k) for k in self._kernel]

    def is_full(self) -> bool:
        """True iff the lattice is all of Z^dim."""
        return self.rank == self.dim and all(self._basis[p][p] == 1 for p in self._basis)

    def is_sublattice_of(self, other: "Lattice") -> bool:
        return other.contains_all(self.basis())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.dim == other.dim and self.basis() == other.basis()

    def __hash__(self):
        return hash((self.dim, tuple(self.basis())))

    def __repr__(self) -> str:
        return f"Lattice(dim={self.dim}, rank={self.rank})"


def hermite_normal_form(matrix: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """
    Column Hermite normal form with transform.

    Returns:
        (H, W) with W unimodular and M·W = H; the nonzero columns of H come
        first in increasing pivot order.
    """
    m, n = matrix.shape
    lattice = Lattice(m, matrix.columns(), track=True)
    h_cols = lattice.basis() + [(0,) * m] * (n - lattice.rank)
    w_cols = [tuple(lattice._combo[p]) for p in lattice.pivots] + lattice.kernel()
    return IntMatrix.from_columns(h_cols, m), IntMatrix.from_columns(w_cols, n)


def kernel_basis(columns: Sequence[Sequence[int]], dim: int) -> List[Vector]:
    """Basis of {c : Σ c_k columns_k = 0}."""
    return Lattice(dim, columns, track=True).kernel()


def preimage_lattice(images: Sequence[Sequence[int]], target: Lattice) -> List[Vector]:
    """Generators of {x : A x ∈ L} where A has the given columns."""
    n = len(images)
    gens = list(images) + target.basis()
    return [tuple(k[:n]) for k in kernel_basis(gens, target.dim)]


def unit_vector(n: int, i: int, value: int = 1) -> Vector:
    return tuple(value if k == i else 0 for k in range(n))


def add_vectors(*vectors: Sequence[int]) -> Vector:
    return tuple(sum(xs) for xs in zip(*vectors))


def scale_vector(c: int, v: Sequence[int]) -> Vector:
    return tuple(c * x for x in v)


# ---------------------------------------------------------------------------
# Presentations, elements and homomorphisms
# ---------------------------------------------------------------------------

class AbGroupPresentation:
    """Finitely generated abelian group ℤ^ngens / ⟨relations⟩."""

    def __init__(self, ngens: int, relations: Sequence[Sequence[int]] = (), labels: Optional[Sequence[str]] = None):
        self.ngens = ngens
        self.relations: Tuple[Vector, ...] = tuple(tuple(int(x) for x in r) for r in relations if any(r))
        for r in self.relations:
            if len(r) != ngens:
                raise InputError(f"relator of length {len(r)} for {ngens} generators")
        self.labels = tuple(labels) if labels is not None else tuple(f"g{i}" for i in range(ngens))
        if len(self.labels) != ngens:
            raise InputError("label count does not match generator count")

    @cached_property
    def lattice(self) -> Lattice:
        return Lattice(self.ngens, self.relations)

    @cached_property
    def cached_snf(self) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
        return smith_normal_form(self.relation_matrix)

    @property
    def relation_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.relations, self.ngens)

    def normal_form(self, coords: Sequence[int]) -> Vector:
        return self.lattice.reduce(coords)

    def is_zero(self, coords: Sequence[int]) -> bool:
        return self.lattice.contains(coords)

    def equal(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.lattice.contains([a - b for a, b in zip(x, y)])

    def invariants(self) -> Tuple[List[int], int]:
        """(torsion coefficients > 1, free rank)."""
        basis = self.lattice.basis()
        factors = invariant_factors(IntMatrix.from_columns(basis, self.ngens)) if basis else []
        return [d for d in factors if d > 1], self.ngens - len(factors)

    def order(self) -> Optional[int]:
        """Group order, None when infinite."""
        torsion, free = self.invariants()
        if free:
            return None
        order = 1
        for d in torsion:
            order *= d
        return order

    def is_trivial(self) -> bool:
        return self.lattice.is_full()

    def element(self, coords: Sequence[int]) -> "AbElement":
        return AbElement(self, coords)

    def gen(self, i: int) -> "AbElement":
        return AbElement(self, unit_vector(self.ngens, i))

    def zero(self) -> "AbElement":
        return AbElement(self, (0,) * self.ngens)

    def describe(self) -> str:
        torsion, free = self.invariants()
        parts = [f"Z/{d}" for d in torsion] + (["Z^%d" % free] if free > 1 else ["Z"] if free == 1 else [])
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"AbGroupPresentation({self.ngens} gens, {len(self.relations)} relations: {self.describe()})"


class AbElement:
    """Element of an abelian group presentation."""

    __slots__ = ("group", "coords")

    def __init__(self, group: AbGroupPresentation, coords: Sequence[int]):
        if len(coords) != group.ngens:
            raise InputError(f"element with {len(coords)} coordinates in a group on {group.ngens} generators")
        self.group = group
        self.coords: Vector = tuple(int(c) for c in coords)

    def _check(self, other: "AbElement"):
        if other.group is not self.group:
            raise InputError("elements of different groups")

    def __add__(self, other: "AbElement") -> "AbElement":
        self._check(other)
        return AbElement(self.group, add_vectors(self.coords, other.coords))

    def __sub__(self, other: "AbElement") -> "AbElement":
        self._check(other)
        return AbElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AbElement":
        return AbElement(self.group, scale_vector(-1, self.coords))

    def __rmul__(self, n: int) -> "AbElement":
        return AbElement(self.group, scale_vector(n, self.coords))

    def normal_form(self) -> Vector:
        return self.group.normal_form(self.coords)

    def is_zero(self) -> bool:
        return self.group.is_zero(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbElement):
            return NotImplemented
        return other.group is self.group and self.group.equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.normal_form())

    def __repr__(self) -> str:
        terms = [f"{c}*{self.group.labels[i]}" for i, c in enumerate(self.coords) if c]
        return " + ".join(terms) if terms else "0"


class AbHom:
    """Homomorphism given by the images of the source generators (matrix columns)."""

    def __init__(self, source: AbGroupPresentation, target: AbGroupPresentation,
                 images: Sequence[Sequence[int]], check: bool = True):
        self.source = source
        self.target = target
        self.images: Tuple[Vector, ...] = tuple(tuple(int(x) for x in col) for col in images)
        if len(self.images) != source.ngens or any(len(c) != target.ngens for c in self.images):
            raise InputError("homomorphism matrix does not match source/target sizes")
        if check:
            for r in source.relations:
                if not target.is_zero(self.apply(r)):
                    raise AxiomError("homomorphism well-defined", f"relator {r} does not map to 0")

    @classmethod
    def from_matrix(cls, source, target, matrix: IntMatrix, check: bool = True) -> "AbHom":
        return cls(source, target, matrix.columns(), check)

    @classmethod
    def identity_map(cls, source: AbGroupPresentation, target: AbGroupPresentation, check: bool = True) -> "AbHom":
        return cls(source, target, [unit_vector(target.ngens, i) for i in range(source.ngens)], check)

    @property
    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.images, self.target.ngens)

    def apply(self, coords: Sequence[int]) -> Vector:
        out = [0] * self.target.ngens
        for c, col in zip(coords, self.images):
            if c:
                for k, x in enumerate(col):
                    if x:
                        out[k] += c * x
        return tuple(out)

    def __call__(self, x: AbElement) -> AbElement:
        return AbElement(self.target, self.apply(x.coords))

    def compose(self, other: "AbHom") -> "AbHom":
        """self ∘ other."""
        return AbHom(other.source, self.target, [self.apply(col) for col in other.images], check=False)

    def equals(self, other: "AbHom") -> bool:
        return all(self.target.equal(a, b) for a, b in zip(self.images, other.images))

    def is_surjective(self) -> bool:
        return Lattice(self.target.ngens, list(self.images) + list(self.target.relations)).is_full()

    def kernel(self) -> List[Vector]:
        """Source coordinate vectors generating the kernel."""
        return preimage_lattice(self.images, self.target.lattice)

    def is_injective(self) -> bool:
        return self.source.lattice.contains_all(self.kernel())

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def cokernel(self) -> AbGroupPresentation:
        return AbGroupPresentation(self.target.ngens, list(self.target.relations) + list(self.images), self.target.labels)


# ---------------------------------------------------------------------------
# Tensor, reduced tensor and exterior squares
# ---------------------------------------------------------------------------

def tensor_pair(x: Sequence[int], y: Sequence[int]) -> Vector:
    """Coordinates of x⊗y on the generators e_i⊗f_j (index i*len(y)+j)."""
    return tuple(a * b for a in x for b in y)


def tensor_product(a: AbGroupPresentation, b: AbGroupPresentation) -> AbGroupPresentation:
    m, n = a.ngens, b.ngens
    rels = []
    for r in a.relations:
        for j in range(n):
            rels.append(tensor_pair(r, unit_vector(n, j)))
    for i in range(m):
        for r in b.relations:
            rels.append(tensor_pair(unit_vector(m, i), r))
    labels = [f"{la}⊗{lb}" for la in a.labels for lb in b.labels]
    return AbGroupPresentation(m * n, rels, labels)


def tensor_square(a: AbGroupPresentation) -> AbGroupPresentation:
    return tensor_product(a, a)


def tensor_z2(a: AbGroupPresentation) -> AbGroupPresentation:
    """A ⊗ ℤ/2."""
    rels = list(a.relations) + [unit_vector(a.ngens, i, 2) for i in range(a.ngens)]
    return AbGroupPresentation(a.ngens, rels, a.labels)


def _symmetric_relations(m: int, with_diagonal: bool) -> List[Vector]:
    rels = []
    for i in range(m):
        for j in range(i, m):
            v = [0] * (m * m)
            v[i * m + j] += 1
            v[j * m + i] += 1
            rels.append(tuple(v))
            if with_diagonal and i == j:
                rels.append(unit_vector(m * m, i * m + i))
    return rels


def reduced_tensor_square(a: AbGroupPresentation) -> Tuple[AbGroupPresentation, AbHom]:
    """⊗̂²A = A⊗A / (a⊗b + b⊗a) together with σ̄: ⊗²A ↠ ⊗̂²A."""
    t = tensor_square(a)
    reduced = AbGroupPresentation(t.ngens, list(t.relations) + _symmetric_relations(a.ngens, False), t.labels)
    return reduced, AbHom.identity_map(t, reduced)


def exterior_square(a: AbGroupPresentation) -> Tuple[AbGroupPresentation, AbHom, AbHom]:
    """
    Λ²A with q: ⊗̂²A ↠ Λ²A and τ̄: A⊗ℤ/2 → ⊗̂²A, τ̄(a) = σ̄(a⊗a).
    """
    reduced, _ = reduced_tensor_square(a)
    wedge = AbGroupPresentation(reduced.ngens,
                                list(reduced.relations) + _symmetric_relations(a.ngens, True),
                                [lab.replace("⊗", "∧") for lab in reduced.labels])
    q = AbHom.identity_map(reduced, wedge)
    m = a.ngens
    tau = AbHom(tensor_z2(a), reduced, [unit_vector(m * m, i * m + i) for i in range(m)])
    return wedge, q, tau


def check_exterior_sequence(a: AbGroupPresentation) -> Dict[str, bool]:
    """
    Facts about A⊗ℤ/2 → ⊗̂²A → Λ²A: the composite vanishes, the sequence is
    exact in the middle (ker q equals im τ̄ as sublattices), τ̄ is injective
    and q is surjective.
    """
    wedge, q, tau = exterior_square(a)
    reduced = q.source
    composite = q.compose(tau)
    composite_zero = all(wedge.is_zero(col) for col in composite.images)
    image = reduced.lattice.extended(tau.images)
    kernel = Lattice(reduced.ngens, q.kernel()).extended(reduced.lattice.basis())
    facts = {
        "composite_zero": composite_zero,
        "exact_middle": image == kernel,
        "tau_injective": tau.is_injective(),
        "q_surjective": q.is_surjective(),
    }
    logger.debug(f"exterior sequence for {a!r}: {facts}")
    return facts
