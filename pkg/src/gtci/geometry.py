from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, prod
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, Rational

import gtci
from gtci.constellations import exponent_tuple
from gtci.exceptions import InputError, InvariantError
from gtci.torsion import (
    ClassGroupElement,
    DegreeMatrix,
    GroupElement,
    degree_lattice,
    downgrade_matrix,
)
from gtci.zlattice import IntMatrix, Vector, kernel_lattice, smith_normal_form, solve_diophantine

Point = Tuple[Fraction, ...]


@dataclass(frozen=True)
class GeneratorMatrix:
    """
    Generator matrix `P` of shape `n x (n+1)`; its columns `v_i` are pairwise distinct
    primitive vectors whose positive kernel vector is the weight vector.

    ## Raises

    `InputError` if a column is zero, not primitive, repeated, or the columns do not
    positively span.
    """

    p: IntMatrix

    def __post_init__(self):
        columns = self.p.columns()
        if self.p.ncols != self.p.nrows + 1:
            raise InputError(40401, "Generator matrix must be n x (n+1)", repr(self.p))
        if len(set(columns)) != len(columns):
            raise InputError(40402, "Generator matrix has repeated columns", repr(self.p))
        for col in columns:
            if not any(col) or _gcd_all(col) != 1:
                raise InputError(40403, "Generator matrix column is not primitive", str(col))
        if not all(x > 0 for x in self.weights):
            raise InputError(40404, "Columns do not positively span", repr(self.p))

    @property
    def n(self) -> int:
        return self.p.nrows

    @property
    def weights(self) -> Vector:
        """Primitive kernel vector of `P`, sign chosen so its first entry is positive."""
        kernel = kernel_lattice(self.p)
        if kernel is None or kernel.ncols != 1:
            raise InputError(40405, "Generator matrix does not have rank n", repr(self.p))
        w = kernel.column(0)
        return w if w[0] > 0 else tuple(-x for x in w)

    @property
    def pstar(self) -> IntMatrix:
        return self.p.transpose()

    def __repr__(self) -> str:
        return f"gtci.GeneratorMatrix({[list(row) for row in self.p.rows]})"


@dataclass(frozen=True)
class LatticeSimplex:
    """
    The polytope `{x : <v_i, x> >= -b_i}` for the rows `v_i` of `P*`, with its exact vertices.
    Vertex `k` is the solution of all inequalities but the `k`-th taken as equalities.
    """

    normals: IntMatrix
    shifts: Vector
    vertices: Tuple[Point, ...]

    @property
    def n(self) -> int:
        return self.normals.ncols

    def slack(self, point: Sequence[Fraction], i: int) -> Fraction:
        return sum((a * x for a, x in zip(self.normals.rows[i], point)), Fraction(0)) + self.shifts[i]

    @property
    def is_empty(self) -> bool:
        return self.slack(self.vertices[0], 0) < 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.slack(self.vertices[0], 0) > 0

    @property
    def is_lattice(self) -> bool:
        return all(x.denominator == 1 for v in self.vertices for x in v)

    def integer_vertices(self) -> Tuple[Vector, ...]:
        return tuple(tuple(int(x) for x in v) for v in self.vertices)


@dataclass(frozen=True)
class LaurentSupport:
    """Exponent vectors of the monomials of a Laurent polynomial in `n` variables."""

    n: int
    exponents: Tuple[Vector, ...]

    def __post_init__(self):
        if not self.exponents:
            raise InputError(40406, "Empty Laurent support", "")
        if any(len(e) != self.n for e in self.exponents):
            raise InputError(40407, "Exponent vectors of wrong length", f"n={self.n}")


@dataclass(frozen=True)
class Homogenization:
    """`P`-homogenized support and its degree `(z, torsion coordinates)` in `Z x Gamma`."""

    exponents: Tuple[Vector, ...]
    degree: Vector


@dataclass(frozen=True)
class DowngradeGeometry:
    p: GeneratorMatrix
    a: IntMatrix
    polytopes: Tuple[LatticeSimplex, ...]


def _gcd_all(values: Sequence[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def generator_matrix(q: DegreeMatrix) -> GeneratorMatrix:
    """Hermite normal form basis of `ker Q`, as the rows of `P`."""
    basis = degree_lattice(q)
    if len(basis) != len(q.weights) - 1:
        raise InvariantError(40408, "Degenerate kernel of the degree matrix", str(len(basis)), str(q.constellation))
    return GeneratorMatrix(IntMatrix(basis))


def polytope_vertices(p: GeneratorMatrix, b: Sequence[int]) -> Tuple[Point, ...]:
    rows = p.pstar.rows
    vertices = []
    for k in range(len(rows)):
        system = Matrix([list(rows[i]) for i in range(len(rows)) if i != k])
        rhs = Matrix([-b[i] for i in range(len(rows)) if i != k])
        solution = system.LUsolve(rhs)
        vertices.append(tuple(Fraction(int(Rational(x).p), int(Rational(x).q)) for x in solution))
    return tuple(vertices)


def lattice_simplex(p: GeneratorMatrix, b: Sequence[int]) -> LatticeSimplex:
    if len(b) != p.p.ncols:
        raise InputError(40409, "One shift per column of P is required", str(tuple(b)))
    return LatticeSimplex(p.pstar, tuple(int(x) for x in b), polytope_vertices(p, b))


def relation_polytopes(q: DegreeMatrix, p: GeneratorMatrix) -> List[LatticeSimplex]:
    """The simplices `B_j = {x : <v_1, x> >= -l_j1, <v_i, x> >= 0}`, one per relation."""
    size = len(q.weights)
    return [lattice_simplex(p, (e.l[0],) + (0,) * (size - 1)) for e in exponent_tuple(q.constellation)]


def count_lattice_points(s: LatticeSimplex) -> int:
    """
    Counts the integer points of `s` by sweeping its bounding box one slice of the first
    coordinate at a time.
    """
    if s.is_empty:
        return 0
    lower = [floor(min(v[i] for v in s.vertices)) for i in range(s.n)]
    upper = [ceil(max(v[i] for v in s.vertices)) for i in range(s.n)]
    normals = np.array(s.normals.rows, dtype=np.int64)
    shifts = np.array(s.shifts, dtype=np.int64)[:, None]
    if s.n > 1:
        axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in zip(lower[1:], upper[1:])]
        rest = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")])
        partial = normals[:, 1:] @ rest + shifts
    else:
        partial = shifts
    count = 0
    for x0 in range(lower[0], upper[0] + 1):
        values = partial + normals[:, :1] * x0
        count += int(np.count_nonzero(np.all(values >= 0, axis=0)))
    return count


def _facet_normal(points: Sequence[Point], interior: Sequence[Rational]) -> Optional[Matrix]:
    """The inward normal of the hyperplane through `points`, or None if they do not span one."""
    if len(points) < 2:
        return None
    base = [Rational(x.numerator, x.denominator) for x in points[0]]
    diffs = Matrix([[Rational(x.numerator, x.denominator) - y for x, y in zip(pt, base)] for pt in points[1:]])
    kernel = diffs.nullspace()
    if len(kernel) != 1:
        return None
    u = kernel[0]
    return -u if u.dot(Matrix(interior) - Matrix(base)) < 0 else u


def verify_normal_fan(s_list: Sequence[LatticeSimplex], p: GeneratorMatrix) -> bool:
    """
    Checks that the Minkowski sum of `s_list` (support numbers add, the normals are shared)
    is a full-dimensional lattice polytope and that the inward normal of its `i`-th facet
    is a positive multiple of the `i`-th column of `p`.
    """
    if not s_list or any(s.normals != p.pstar for s in s_list):
        return False
    shifts = tuple(sum(col) for col in zip(*(s.shifts for s in s_list)))
    total = lattice_simplex(p, shifts)
    if not total.is_full_dimensional or not total.is_lattice:
        return False
    centroid = [sum((Rational(v[k].numerator, v[k].denominator) for v in total.vertices), Rational(0)) / len(total.vertices)
                for k in range(total.n)]
    for i, column in enumerate(p.p.columns()):
        u = _facet_normal([v for v in total.vertices if total.slack(v, i) == 0], centroid)
        if u is None:
            return False
        v = Matrix(column)
        if Matrix.hstack(u, v).rank() != 1 or u.dot(v) <= 0:
            return False
    return True


def degree_map(p: GeneratorMatrix) -> Tuple[IntMatrix, Tuple[int, ...]]:
    """
    A degree matrix read off `P`: rows of the lifted `Q` (weights first) and the torsion
    factors in standard form, from a Smith form of `P*`.
    """
    snf = smith_normal_form(p.pstar)
    factors = snf.invariant_factors
    order = sorted((i for i, x in enumerate(factors) if x > 1), key=lambda i: factors[i], reverse=True)
    free = snf.u.rows[-1]
    if sum(free) < 0:
        free = tuple(-x for x in free)
    torsion = [tuple(x % factors[i] for x in snf.u.rows[i]) for i in order]
    return IntMatrix.of([free] + torsion), tuple(factors[i] for i in order)


def homogenize(f: LaurentSupport, p: GeneratorMatrix, q: Optional[DegreeMatrix] = None) -> Homogenization:
    """
    `P`-homogenization of a Laurent support: exponents are pulled back through `P*` and
    shifted by their componentwise minimum. The degree is taken in the coordinates of `q`
    when given, otherwise in those of `degree_map(p)`.
    """
    if f.n != p.n:
        raise InputError(40410, "Support and generator matrix differ in dimension", f"{f.n} vs {p.n}")
    pulled = [p.pstar.apply(e) for e in f.exponents]
    shift = [min(col) for col in zip(*pulled)]
    exponents = tuple(sorted({tuple(x - s for x, s in zip(e, shift)) for e in pulled}))
    if q is not None:
        lifted, factors = q.lifted(), q.gamma.invariant_factors
    else:
        lifted, factors = degree_map(p)
    image = lifted.apply(exponents[0])
    degree = (image[0],) + tuple(x % n for x, n in zip(image[1:], factors))
    return Homogenization(exponents, degree)


def anticanonical_class(q: DegreeMatrix) -> ClassGroupElement:
    """`-K = sum(q_i) - sum_j deg(g_j)`, each relation degree taken as `l_j1 * q_1`."""
    total = ClassGroupElement(0, q.gamma.zero())
    for i in range(len(q.weights)):
        total = total + q.column(i)
    for e in exponent_tuple(q.constellation):
        total = total - e.l[0] * q.column(0)
    return total


def anticanonical_selfintersection(q: DegreeMatrix) -> Fraction:
    k = anticanonical_class(q).z
    return Fraction(prod(q.constellation.mu) * k ** q.constellation.d, prod(q.weights) * q.gamma.order)


def _canonical_shifts(q: DegreeMatrix) -> List[int]:
    e_x = [1] * len(q.weights)
    e_x[0] -= sum(e.l[0] for e in exponent_tuple(q.constellation))
    return e_x


def anticanonical_polytopes(q: DegreeMatrix, p: GeneratorMatrix) -> Tuple[LatticeSimplex, List[LatticeSimplex]]:
    """`B(-K)` and the polytopes `C_j` obtained by moving `B(-K)` by the relation degrees."""
    e_x = _canonical_shifts(q)
    big = lattice_simplex(p, e_x)
    corrections = [lattice_simplex(p, [e_x[0] - e.l[0]] + e_x[1:]) for e in exponent_tuple(q.constellation)]
    return big, corrections


def h0_anticanonical(q: DegreeMatrix, p: GeneratorMatrix) -> int:
    big, corrections = anticanonical_polytopes(q, p)
    return max(count_lattice_points(big) - sum(count_lattice_points(c) for c in corrections), 0)


def _monomials(weights: Sequence[int], degree: int) -> Iterator[Vector]:
    if not weights:
        if degree == 0:
            yield ()
        return
    w, rest = weights[0], weights[1:]
    for a in range(degree // w + 1):
        for tail in _monomials(rest, degree - a * w):
            yield (a,) + tail


def count_monomials(q: DegreeMatrix, target: ClassGroupElement) -> int:
    """Number of monomials `T^nu`, `nu >= 0`, of degree `target` in `Z x Gamma`."""
    if target.z < 0:
        return 0
    count = 0
    for nu in _monomials(q.weights, target.z):
        torsion = q.gamma.zero()
        for a, e in zip(nu, q.eta):
            torsion = torsion + a * e
        count += torsion == target.torsion
    return count


def h0_monomial_oracle(q: DegreeMatrix) -> int:
    """`h^0(-K)` from monomial counts in the Cox ring, independent of any polytope."""
    anticanonical = anticanonical_class(q)
    total = count_monomials(q, anticanonical)
    for e in exponent_tuple(q.constellation):
        total -= count_monomials(q, anticanonical - e.l[0] * q.column(0))
    return max(total, 0)


def downgrade_geometry(q: DegreeMatrix, subgroup: Sequence[GroupElement]) -> DowngradeGeometry:
    """
    Generator matrix `P~` of the downgraded degree matrix, the integer matrix `A` with
    `P~* A = P*`, and the relation polytopes transported by `A`.
    """
    p = generator_matrix(q)
    target = generator_matrix(downgrade_matrix(q, subgroup))
    columns = []
    for col in p.pstar.columns():
        x = solve_diophantine(target.pstar, col)
        if x is None:
            raise InvariantError(40411, "Kernel lattices are not nested", repr(target), str(q.constellation))
        columns.append(x)
    a = IntMatrix.from_columns(columns)
    polytopes = tuple(lattice_simplex(target, s.shifts) for s in relation_polytopes(q, p))
    gtci.logger.debug(f"{q.constellation}: downgraded to {target}")
    return DowngradeGeometry(target, a, polytopes)
