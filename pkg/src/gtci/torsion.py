from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from math import gcd, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import primefactors

import gtci
from gtci.constellations import WeightDegreeConstellation, exponent_tuple
from gtci.exceptions import CapacityError, InputError, InvariantError
from gtci.zlattice import (
    IntMatrix,
    Vector,
    cokernel_structure,
    kernel_lattice,
    lattice_basis,
    smith_normal_form,
    solve_diophantine,
    unimodular_inverse,
)

LatticeKey = Tuple[Vector, ...]
Permutation = Tuple[int, ...]

# existence tests for cyclic torsion Z/p^j stop beyond this exponent
MAX_PRIME_EXPONENT = 6


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """
    Finite abelian group `Z/n1 x ... x Z/nk` in standard form, `nk | ... | n1`.
    The empty tuple is the trivial group.
    """

    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if any(x < 2 for x in factors):
            raise InputError(40201, "Invariant factors must be at least 2", str(factors))
        if any(a % b for a, b in zip(factors, factors[1:])):
            raise InputError(40202, "Invariant factors not in standard form", str(factors))

    @classmethod
    def standard_form(cls, relations: IntMatrix) -> "FiniteAbelianGroup":
        """Standard form of `Z^rows / span(columns of relations)`; the quotient must be finite."""
        structure = cokernel_structure(relations)
        if 0 in structure:
            raise InputError(40203, "Quotient is not finite", repr(relations))
        return cls(structure)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[0] if self.invariant_factors else 1

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> Tuple["GroupElement", ...]:
        return tuple(self.element([int(i == r) for i in range(self.rank)]) for r in range(self.rank))

    def elements(self) -> Iterator["GroupElement"]:
        for coords in product(*(range(n) for n in self.invariant_factors)):
            yield GroupElement(self, coords)

    def relations(self) -> Optional[IntMatrix]:
        """Relation columns `n_r e_r`, or `None` for the trivial group."""
        return IntMatrix.diagonal(self.invariant_factors) if self.rank else None

    def __str__(self) -> str:
        return " x ".join(f"Z/{n}" for n in self.invariant_factors) or "0"

    def __repr__(self) -> str:
        return f"gtci.FiniteAbelianGroup({self})"


@dataclass(frozen=True)
class GroupElement:
    group: FiniteAbelianGroup
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise InputError(40204, "Element does not fit the group", f"{self.coords} in {self.group}")
        reduced = tuple(int(x) % n for x, n in zip(self.coords, self.group.invariant_factors))
        object.__setattr__(self, "coords", reduced)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.group != self.group:
            raise InputError(40205, "Elements of different groups", f"{self.group} vs {other.group}")
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        return f"gtci.GroupElement({self.coords} in {self.group})"


@dataclass(frozen=True)
class ClassGroupElement:
    """Element `(z, torsion)` of `K = Z x Gamma`."""

    z: int
    torsion: GroupElement

    def __add__(self, other: "ClassGroupElement") -> "ClassGroupElement":
        return ClassGroupElement(self.z + other.z, self.torsion + other.torsion)

    def __mul__(self, k: int) -> "ClassGroupElement":
        return ClassGroupElement(k * self.z, k * self.torsion)

    __rmul__ = __mul__

    def __sub__(self, other: "ClassGroupElement") -> "ClassGroupElement":
        return self + (-1) * other

    def lifted(self) -> Vector:
        return (self.z,) + self.torsion.coords


@dataclass(frozen=True)
class Automorphism:
    """Automorphism of a finite abelian group, given by the images of its generators."""

    group: FiniteAbelianGroup
    images: Tuple[GroupElement, ...]

    def __call__(self, x: GroupElement) -> GroupElement:
        result = self.group.zero()
        for coefficient, image in zip(x.coords, self.images):
            result = result + coefficient * image
        return result

    def is_identity(self) -> bool:
        return self.images == self.group.generators()


@dataclass(frozen=True)
class ElementaryOperation:
    """
    One elementary row operation on a degree matrix in standard form, written as
    `eta -> phi(eta) + w * shift`.
    """

    kind: str
    phi: Automorphism
    shift: GroupElement


@dataclass(frozen=True)
class DegreeMatrix:
    """
    Degree matrix `Q` in `K = Z x Gamma` associated with a weight-degree constellation:
    column `i` is `(w_i, eta_i)`.

    ## Attributes

    `constellation: WeightDegreeConstellation`
        Weights (the Z-row) and relation degrees.
    `gamma: FiniteAbelianGroup`
        Torsion part of `K`, in standard form.
    `eta: tuple[GroupElement, ...]`
        Torsion parts of the `1+d+c` columns.

    ## Raises

    `InputError` if the column count is wrong or homogeneity fails, i.e. for some relation
    `j` the products `l_ji * eta_i` differ.
    """

    constellation: WeightDegreeConstellation
    gamma: FiniteAbelianGroup
    eta: Tuple[GroupElement, ...]

    def __post_init__(self):
        family = str(self.constellation)
        if len(self.eta) != len(self.constellation.weights):
            raise InputError(40206, "Wrong number of torsion columns", f"{len(self.eta)} columns", family)
        if any(e.group != self.gamma for e in self.eta):
            raise InputError(40207, "Torsion columns outside Gamma", str(self.gamma), family)
        for e in exponent_tuple(self.constellation):
            values = {ell * eta for ell, eta in zip(e.l, self.eta)}
            if len(values) > 1:
                raise InputError(40208, "Degree matrix is not homogeneous", f"relation of degree {e.mu}", family)

    @classmethod
    def of(
        cls,
        weights: Sequence[int],
        degrees: Sequence[int],
        torsion: Sequence[int] = (),
        eta_rows: Sequence[Sequence[int]] = (),
        d: int = 3,
    ) -> "DegreeMatrix":
        """Builds a matrix from plain integers; `eta_rows[r]` is the `r`-th torsion row."""
        k = WeightDegreeConstellation.of(weights, degrees, d)
        gamma = FiniteAbelianGroup(tuple(torsion))
        if len(eta_rows) != gamma.rank or any(len(row) != len(k.weights) for row in eta_rows):
            raise InputError(40209, "Torsion rows do not match Gamma", f"{gamma}: {eta_rows}", str(k))
        columns = tuple(zip(*eta_rows)) if eta_rows else ((),) * len(k.weights)
        return cls(k, gamma, tuple(gamma.element(col) for col in columns))

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.constellation.weights

    @property
    def torsion_rows(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(zip(*(e.coords for e in self.eta))) if self.gamma.rank else ()

    def column(self, i: int) -> ClassGroupElement:
        return ClassGroupElement(self.weights[i], self.eta[i])

    def lifted(self) -> IntMatrix:
        """`Q` with torsion entries lifted to `[0, n_r)`, one row for `Z` and one per invariant factor."""
        return IntMatrix.of((self.weights,) + self.torsion_rows)

    def relations(self) -> Optional[IntMatrix]:
        """Columns `n_r e_{1+r}` in `Z^{1+k}`, or `None` for trivial Gamma."""
        if not self.gamma.rank:
            return None
        size = 1 + self.gamma.rank
        return IntMatrix.from_columns(
            [int(i == r + 1) * n for i in range(size)] for r, n in enumerate(self.gamma.invariant_factors)
        )

    def with_relations(self, columns: Sequence[Vector]) -> IntMatrix:
        relations = self.relations()
        extra = relations.columns() if relations is not None else ()
        return IntMatrix.from_columns(tuple(columns) + tuple(extra))

    def __str__(self) -> str:
        rows = "; ".join(" ".join(map(str, row)) for row in self.torsion_rows)
        return f"{self.constellation} over {self.gamma}" + (f" [{rows}]" if rows else "")

    def __repr__(self) -> str:
        return f"gtci.DegreeMatrix({self})"


@dataclass(frozen=True)
class MatrixClass:
    """
    Isomorphism class of degree matrices, with its canonical representative.

    ## Attributes

    `representative: DegreeMatrix`
        The canonical form of every member.
    `key: tuple`
        HNF basis of the kernel lattice of the representative, minimal over its orbit.
    `stabilizer: tuple[tuple[int, ...], ...]`
        Weight-preserving column permutations fixing the class.
    `orbit_size: int`
        Number of distinct kernel lattices in the orbit.
    """

    representative: DegreeMatrix
    key: LatticeKey
    stabilizer: Tuple[Permutation, ...] = field(default=(), compare=False)
    orbit_size: int = field(default=1, compare=False)

    @property
    def gamma(self) -> FiniteAbelianGroup:
        return self.representative.gamma

    def __repr__(self) -> str:
        return f"gtci.MatrixClass({self.representative}, orbit_size={self.orbit_size})"


def is_gorenstein_matrix(q: DegreeMatrix) -> bool:
    """
    For every `1+c` columns `I` with complement `J`, the sum of the `q_j`, `j` in `J`,
    lies in the subgroup of `K` generated by the `q_i`, `i` in `I`.
    """
    lifted = q.lifted()
    n = len(q.weights)
    for subset in combinations(range(n), 1 + q.constellation.c):
        rest = [j for j in range(n) if j not in subset]
        target = [sum(lifted.rows[r][j] for j in rest) for r in range(lifted.nrows)]
        system = q.with_relations([lifted.column(i) for i in subset])
        if solve_diophantine(system, target) is None:
            return False
    return True


def is_almost_free(q: DegreeMatrix) -> bool:
    lifted = q.lifted()
    n = len(q.weights)
    for omitted in range(n):
        system = q.with_relations([lifted.column(i) for i in range(n) if i != omitted])
        if cokernel_structure(system):
            return False
    return True


def degree_lattice(q: DegreeMatrix) -> LatticeKey:
    """HNF basis of `ker Q`, the relations among the columns of `Q` in `Z^{1+d+c}`."""
    n = len(q.weights)
    kernel = kernel_lattice(q.with_relations(q.lifted().columns()))
    if kernel is None:
        raise InvariantError(40210, "Degree matrix has trivial kernel", "", str(q.constellation))
    return lattice_basis(col[:n] for col in kernel.columns())


def weight_permutations(weights: Sequence[int]) -> List[Permutation]:
    """All permutations of the column indices that only move equal weights, identity first."""
    blocks: Dict[int, List[int]] = {}
    for i, w in enumerate(weights):
        blocks.setdefault(w, []).append(i)
    groups = list(blocks.values())
    result = []
    for choice in product(*(permutations(g) for g in groups)):
        perm = [0] * len(weights)
        for block, image in zip(groups, choice):
            for i, j in zip(block, image):
                perm[i] = j
        result.append(tuple(perm))
    return result


def _permute(v: Sequence[int], perm: Permutation) -> Vector:
    out = [0] * len(v)
    for i, x in enumerate(v):
        out[perm[i]] = x
    return tuple(out)


def _orbit(basis: LatticeKey, perms: Sequence[Permutation]) -> Dict[Permutation, LatticeKey]:
    return {perm: lattice_basis(_permute(v, perm) for v in basis) for perm in perms}


def _matrix_from_lattice(k: WeightDegreeConstellation, basis: LatticeKey) -> DegreeMatrix:
    """
    Degree matrix whose kernel is the lattice spanned by `basis`, read off a Smith form
    of the basis; torsion rows in standard form and `eta_1 = 0` when `w_1 = 1`.
    """
    snf = smith_normal_form(IntMatrix.from_columns(basis))
    factors = snf.invariant_factors
    order = sorted((i for i, x in enumerate(factors) if x > 1), key=lambda i: factors[i], reverse=True)
    gamma = FiniteAbelianGroup(tuple(factors[i] for i in order))
    eta = [gamma.element([snf.u.rows[i][col] for i in order]) for col in range(len(k.weights))]
    if k.weights[0] == 1:
        eta = [e - w * eta[0] for e, w in zip(eta, k.weights)]
    return DegreeMatrix(k, gamma, tuple(eta))


def canonical_key(q: DegreeMatrix) -> LatticeKey:
    basis = degree_lattice(q)
    return min(_orbit(basis, weight_permutations(q.weights)).values())


def canonical_form(q: DegreeMatrix) -> DegreeMatrix:
    """
    Canonical representative of the isomorphism class of `q`: the orbit member whose kernel
    lattice has the smallest HNF key under weight-preserving column permutations, rebuilt
    from that lattice. Automorphisms of `Gamma` and shears leave the kernel unchanged.
    """
    return _matrix_from_lattice(q.constellation, canonical_key(q))


def isomorphic(q1: DegreeMatrix, q2: DegreeMatrix) -> bool:
    return q1.constellation == q2.constellation and canonical_key(q1) == canonical_key(q2)


def apply_isomorphism(
    q: DegreeMatrix,
    phi: Optional[Automorphism] = None,
    shift: Optional[GroupElement] = None,
    permutation: Optional[Permutation] = None,
) -> DegreeMatrix:
    """
    Applies `eta_i -> phi(eta_{p(i)}) + w_i * shift` where `p` permutes equal weights only.
    """
    n = len(q.weights)
    permutation = permutation or tuple(range(n))
    if sorted(permutation) != list(range(n)) or any(q.weights[permutation[i]] != q.weights[i] for i in range(n)):
        raise InputError(40211, "Permutation does not preserve the weights", str(permutation), str(q.constellation))
    shift = shift or q.gamma.zero()
    eta = []
    for i in range(n):
        e = q.eta[permutation[i]]
        eta.append((phi(e) if phi else e) + q.weights[i] * shift)
    return DegreeMatrix(q.constellation, q.gamma, tuple(eta))


def automorphisms(g: FiniteAbelianGroup) -> List[Automorphism]:
    """
    All automorphisms of `g`, by brute force over generator images of matching order.

    ## Raises

    `CapacityError` if `|g|` exceeds `gtci.MAX_GROUP_ORDER`.
    """
    if g.order > gtci.MAX_GROUP_ORDER:
        raise CapacityError(40212, "Group too large for automorphism enumeration", f"|{g}| = {g.order}")
    if not g.rank:
        return [Automorphism(g, ())]
    candidates = [[x for x in g.elements() if (n * x).is_zero()] for n in g.invariant_factors]
    relations = g.relations()
    found = []
    for images in product(*candidates):
        system = IntMatrix.from_columns([x.coords for x in images] + list(relations.columns()))
        if not cokernel_structure(system):
            found.append(Automorphism(g, tuple(images)))
    return found


def elementary_operations(g: FiniteAbelianGroup) -> List[ElementaryOperation]:
    """
    The elementary row operations on a degree matrix over `Z x g`: unit scaling of a torsion
    row, adding an earlier row (the Z-row or a torsion row with a multiple order) to a later
    one, and adding `n_r / n_s` times a later torsion row `s` to row `r`.
    """
    ops = []
    gens = g.generators()
    zero = g.zero()
    n = g.invariant_factors

    def replace(r: int, image: GroupElement) -> Automorphism:
        return Automorphism(g, tuple(image if i == r else x for i, x in enumerate(gens)))

    for r in range(g.rank):
        for unit in range(2, n[r]):
            if gcd(unit, n[r]) == 1:
                ops.append(ElementaryOperation("scale", replace(r, unit * gens[r]), zero))
        ops.append(ElementaryOperation("shear", replace(r, gens[r]), gens[r]))
        # e_r -> e_r + m e_s adds m times row r to row s
        for s in range(g.rank):
            if s > r:
                ops.append(ElementaryOperation("add", replace(r, gens[r] + gens[s]), zero))
            elif s < r:
                ops.append(ElementaryOperation("add-scaled", replace(r, gens[r] + (n[s] // n[r]) * gens[s]), zero))
    return ops


def subgroups(g: FiniteAbelianGroup) -> List[Tuple[GroupElement, ...]]:
    """Every subgroup of `g` once, each as a tuple of generators."""
    result = []
    for basis in enumerate_subgroup_bases(g.invariant_factors):
        gens = tuple(g.element(row) for row in basis)
        result.append(tuple(x for x in gens if not x.is_zero()))
    return result


def enumerate_subgroup_bases(orders: Sequence[int]) -> Iterator[Tuple[Vector, ...]]:
    """
    Upper triangular Hermite bases of all lattices `M` with `diag(orders) Z^k <= M <= Z^k`,
    i.e. of all subgroups of `Z/o_1 x ... x Z/o_k`. Rows are built from the last one up;
    pivots divide the orders and entries above a pivot are reduced modulo it.
    """
    k = len(orders)
    if not k:
        yield ()
        return

    def contains_multiple(rows: List[Vector], top: int) -> bool:
        # orders[top] e_top must lie in the span of rows top..k-1
        v = [orders[top] // rows[0][top] * x for x in rows[0]]
        v[top] = 0
        for offset, row in enumerate(rows[1:], start=1):
            i = top + offset
            if v[i] % row[i]:
                return False
            f = v[i] // row[i]
            v = [a - f * b for a, b in zip(v, row)]
        return not any(v)

    def build(top: int, rows: List[Vector]) -> Iterator[Tuple[Vector, ...]]:
        if top < 0:
            yield tuple(rows)
            return
        pivots = [row[top + 1 + i] for i, row in enumerate(rows)]
        for pivot in (x for x in range(1, orders[top] + 1) if orders[top] % x == 0):
            for tail in product(*(range(p) for p in pivots)):
                row = (0,) * top + (pivot,) + tuple(tail)
                candidate = [row] + rows
                if contains_multiple(candidate, top):
                    yield from build(top - 1, candidate)

    yield from build(k - 1, [])


@dataclass(frozen=True)
class _Setup:
    # H <= L <= ker(w) in the basis E where H = span(a_i E_i)
    basis: IntMatrix
    orders: Tuple[int, ...]


def _setup(k: WeightDegreeConstellation) -> _Setup:
    n = len(k.weights)
    kernel = kernel_lattice(IntMatrix.of([k.weights]))
    generators = []
    for e in exponent_tuple(k):
        for i in range(1, n):
            h = [0] * n
            h[i] += e.l[i]
            h[0] -= e.l[0]
            generators.append(solve_diophantine(kernel, h))
    snf = smith_normal_form(IntMatrix.from_columns(generators))
    basis = kernel @ unimodular_inverse(snf.u)
    return _Setup(basis, snf.invariant_factors)


def _lattice(setup: _Setup, rows: Sequence[Vector]) -> LatticeKey:
    return lattice_basis(setup.basis.apply(row) for row in rows)


def _quotient(rows: Sequence[Vector]) -> Tuple[int, ...]:
    return cokernel_structure(IntMatrix.of(rows).transpose())


def _is_almost_free_lattice(basis: LatticeKey) -> bool:
    return all(gcd(*(v[i] for v in basis)) == 1 for i in range(len(basis[0])))


def _is_gorenstein_lattice(basis: LatticeKey, d: int) -> bool:
    pstar = IntMatrix.from_columns(basis)
    for subset in combinations(range(pstar.nrows), d):
        rows = IntMatrix.of(pstar.rows[j] for j in subset)
        if solve_diophantine(rows, (1,) * d) is None:
            return False
    return True


def _valid_lattices(
    k: WeightDegreeConstellation, setup: _Setup, orders: Sequence[int]
) -> Iterator[Tuple[LatticeKey, Tuple[int, ...]]]:
    for rows in enumerate_subgroup_bases(orders):
        structure = _quotient(rows) if rows else ()
        if len(structure) > k.n - 1:
            continue
        basis = _lattice(setup, rows)
        if _is_almost_free_lattice(basis) and _is_gorenstein_lattice(basis, k.d):
            yield basis, structure


def torsion_prime_bounds(k: WeightDegreeConstellation) -> Dict[int, int]:
    """
    For every prime `p` dividing a relation degree, the largest `j` such that an almost free
    Gorenstein degree matrix for `k` with torsion `Z/p^j` exists (0 if none).
    """
    setup = _setup(k)
    top = max(k.mu)
    bounds = {}
    for p in sorted({p for m in k.mu for p in primefactors(m)}):
        nu = 0
        for j in range(1, MAX_PRIME_EXPONENT + 1):
            if p**j > top:
                break
            orders = [gcd(a, p**j) for a in setup.orders]
            if not any(s == (p**j,) for _, s in _valid_lattices(k, setup, orders)):
                break
            nu = j
        bounds[p] = nu
    return bounds


def enumerate_degree_matrices(k: WeightDegreeConstellation) -> List[MatrixClass]:
    """
    Enumerates the almost free Gorenstein degree matrices associated with `k`, one
    representative per isomorphism class.

    Kernel lattices `L` with `H <= L <= ker(w)`, `H` spanned by the homogeneity relations
    `l_ji e_i - l_j1 e_1`, are in bijection with degree matrices up to automorphisms of
    `Gamma` and shears. The torsion exponent is bounded by `torsion_prime_bounds`, and
    classes are formed under weight-preserving column permutations.

    ## Parameters

    `k: WeightDegreeConstellation`
        A true Gorenstein Fano constellation.

    ## Returns

    The classes, sorted by torsion group and lattice key.
    """
    setup = _setup(k)
    exponent = prod(p**nu for p, nu in torsion_prime_bounds(k).items())
    orders = [gcd(a, exponent) for a in setup.orders]
    perms = weight_permutations(k.weights)
    seen = set()
    classes = []
    for basis, _ in _valid_lattices(k, setup, orders):
        if basis in seen:
            continue
        orbit = _orbit(basis, perms)
        seen.update(orbit.values())
        key = min(orbit.values())
        stabilizer = tuple(perm for perm, image in _orbit(key, perms).items() if image == key)
        q = _matrix_from_lattice(k, key)
        if gtci.DEBUG_CHECK_MATRICES and not (is_almost_free(q) and is_gorenstein_matrix(q)):
            raise InvariantError(40213, "Enumerated matrix fails a matrix-side check", str(q), str(k))
        classes.append(MatrixClass(q, key, stabilizer, len(set(orbit.values()))))
    classes.sort(key=lambda m: (m.gamma.invariant_factors, m.key))
    gtci.logger.debug(f"{k}: {len(classes)} degree matrices")
    return classes


def downgrade_matrix(q: DegreeMatrix, subgroup: Sequence[GroupElement]) -> DegreeMatrix:
    """
    Pushes the torsion parts of `q` through `Gamma -> Gamma / Gamma_0`, `Gamma_0` generated by
    `subgroup`, and restandardizes the quotient.

    ## Raises

    `InputError` if a generator is not an element of `q.gamma`.
    """
    if any(x.group != q.gamma for x in subgroup):
        raise InputError(40214, "Subgroup generators outside Gamma", str(q.gamma), str(q.constellation))
    relations = q.gamma.relations()
    if relations is None:
        return q
    system = IntMatrix.from_columns(list(relations.columns()) + [x.coords for x in subgroup])
    snf = smith_normal_form(system)
    factors = snf.invariant_factors
    order = sorted((i for i, x in enumerate(factors) if x > 1), key=lambda i: factors[i], reverse=True)
    gamma = FiniteAbelianGroup(tuple(factors[i] for i in order))
    eta = tuple(gamma.element([snf.u.apply(e.coords)[i] for i in order]) for e in q.eta)
    return DegreeMatrix(q.constellation, gamma, eta)
