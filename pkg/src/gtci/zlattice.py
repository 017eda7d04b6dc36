from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from gtci.exceptions import InputError

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """
    Immutable integer matrix, stored row by row with Python integers.

    ## Attributes

    `rows: tuple[tuple[int, ...], ...]`
        The entries, one tuple per row. At least one row and one column.
    """

    rows: Tuple[Vector, ...]

    def __post_init__(self):
        if not self.rows or not self.rows[0]:
            raise InputError(40001, "Empty matrix", "rows and cols must be >= 1")
        width = len(self.rows[0])
        if any(len(row) != width for row in self.rows):
            raise InputError(40002, "Ragged matrix", f"rows {self.rows}")

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def from_columns(cls, columns: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls.of(zip(*[tuple(col) for col in columns]))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls.of([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> Tuple[Vector, ...]:
        return tuple(zip(*self.rows))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.columns())

    def select_columns(self, indices: Iterable[int]) -> "IntMatrix":
        return IntMatrix.from_columns(self.column(j) for j in indices)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix(tuple(a + b for a, b in zip(self.rows, other.rows)))

    def apply(self, x: Sequence[int]) -> Vector:
        """Matrix times column vector."""
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        cols = other.columns()
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def __repr__(self) -> str:
        return f"gtci.IntMatrix({[list(row) for row in self.rows]})"


@dataclass(frozen=True)
class SnfResult:
    """
    Smith normal form `u·m·v = d` of an integer matrix.

    ## Attributes

    `d: IntMatrix`
        Diagonal, nonnegative entries, each nonzero entry dividing the next.
    `u, v: IntMatrix`
        Unimodular transforms.
    """

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix

    @property
    def invariant_factors(self) -> Vector:
        return tuple(self.d.rows[i][i] for i in range(min(self.d.nrows, self.d.ncols)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.invariant_factors if x != 0)


@dataclass(frozen=True)
class HnfResult:
    """Row Hermite normal form `t·m = h`, `t` unimodular."""

    h: IntMatrix
    t: IntMatrix
    rank: int


def _swap_rows(a: List[List[int]], i: int, j: int):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: List[List[int]], i: int, j: int):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a: List[List[int]], target: int, source: int, factor: int):
    if factor:
        a[target] = [x + factor * y for x, y in zip(a[target], a[source])]


def _add_col(a: List[List[int]], target: int, source: int, factor: int):
    if factor:
        for row in a:
            row[target] += factor * row[source]


def _min_pivot(a: List[List[int]], start: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(start, len(a)):
        for j in range(start, len(a[0])):
            x = a[i][j]
            if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(m: IntMatrix) -> SnfResult:
    """
    Computes the Smith normal form of `m` together with unimodular transforms.

    Pivots are chosen with minimal absolute value, ties broken by lowest row, then
    lowest column, so the transforms are reproducible.

    ## Parameters

    `m: IntMatrix`
        Any integer matrix.

    ## Returns

    A `SnfResult` with `u·m·v = d`.
    """
    a = [list(row) for row in m.rows]
    u = [list(row) for row in IntMatrix.identity(m.nrows).rows]
    v = [list(row) for row in IntMatrix.identity(m.ncols).rows]
    rows, cols = m.nrows, m.ncols

    for t in range(min(rows, cols)):
        pivot = _min_pivot(a, t)
        if pivot is None:
            break
        while True:
            i, j = pivot
            _swap_rows(a, t, i)
            _swap_rows(u, t, i)
            _swap_cols(a, t, j)
            _swap_cols(v, t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                q = a[i][t] // p
                _add_row(a, i, t, -q)
                _add_row(u, i, t, -q)
                clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                q = a[t][j] // p
                _add_col(a, j, t, -q)
                _add_col(v, j, t, -q)
                clean = clean and a[t][j] == 0
            if clean:
                # pivot must divide the remaining block
                bad = next(
                    (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                _add_row(a, t, bad, 1)
                _add_row(u, t, bad, 1)
            pivot = _min_pivot_in_cross(a, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SnfResult(IntMatrix.of(a), IntMatrix.of(u), IntMatrix.of(v))


def _min_pivot_in_cross(a: List[List[int]], t: int) -> Tuple[int, int]:
    # row t and column t only hold the leftovers of the last elimination
    candidates = [(i, t) for i in range(t, len(a)) if a[i][t]]
    candidates += [(t, j) for j in range(t + 1, len(a[0])) if a[t][j]]
    return min(candidates, key=lambda ij: (abs(a[ij[0]][ij[1]]), ij[0], ij[1]))


def hermite_normal_form(m: IntMatrix) -> HnfResult:
    """
    Row-style Hermite normal form: pivots positive, pivot columns strictly
    increasing, entries above a pivot reduced into `[0, pivot)`, zero rows last.
    """
    a = [list(row) for row in m.rows]
    t = [list(row) for row in IntMatrix.identity(m.nrows).rows]
    r = 0
    for col in range(m.ncols):
        if r == m.nrows:
            break
        while True:
            nonzero = [i for i in range(r, m.nrows) if a[i][col]]
            if not nonzero:
                break
            i = min(nonzero, key=lambda i: (abs(a[i][col]), i))
            _swap_rows(a, r, i)
            _swap_rows(t, r, i)
            for i in range(r + 1, m.nrows):
                q = a[i][col] // a[r][col]
                _add_row(a, i, r, -q)
                _add_row(t, i, r, -q)
            if all(a[i][col] == 0 for i in range(r + 1, m.nrows)):
                break
        if a[r][col] == 0:
            continue
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
            t[r] = [-x for x in t[r]]
        for i in range(r):
            q = a[i][col] // a[r][col]
            _add_row(a, i, r, -q)
            _add_row(t, i, r, -q)
        r += 1
    return HnfResult(IntMatrix.of(a), IntMatrix.of(t), r)


def lattice_basis(generators: Iterable[Sequence[int]]) -> Tuple[Vector, ...]:
    """
    HNF row basis of the lattice spanned by `generators`. Equal lattices give equal
    bases, so the result doubles as a hashable lattice key.
    """
    gens = [tuple(g) for g in generators]
    if not gens:
        return ()
    hnf = hermite_normal_form(IntMatrix.of(gens))
    return hnf.h.rows[: hnf.rank]


def kernel_lattice(m: IntMatrix) -> Optional[IntMatrix]:
    """
    Saturated basis of `{x : m·x = 0}` in `Z^cols`, as the columns of the returned
    matrix, normalized to Hermite normal form. Returns `None` for the zero lattice.
    """
    hnf = hermite_normal_form(m.transpose())
    kernel_rows = hnf.t.rows[hnf.rank :]
    if not kernel_rows:
        return None
    return IntMatrix.from_columns(lattice_basis(kernel_rows))


def solve_diophantine(m: IntMatrix, t: Sequence[int]) -> Optional[Vector]:
    """
    Finds an integer solution `x` of `m·x = t`.

    ## Returns

    Some solution as a tuple, or `None` when the system has no integer solution.

    ## Raises

    `InputError` if `t` does not have one entry per row of `m`.
    """
    if len(t) != m.nrows:
        raise InputError(40003, "Dimension mismatch", f"{m.nrows} rows vs target of length {len(t)}")
    snf = smith_normal_form(m)
    s = snf.u.apply(t)
    y = [0] * m.ncols
    for i, x in enumerate(s):
        d = snf.d.rows[i][i] if i < m.ncols else 0
        if d == 0:
            if x != 0:
                return None
        elif x % d:
            return None
        else:
            y[i] = x // d
    return snf.v.apply(y)


def cokernel_structure(m: IntMatrix) -> Vector:
    """
    Invariant factors of `Z^rows / span(columns of m)`, free factors first as `0`,
    then torsion factors in descending divisibility order. Trivial group gives `()`.
    """
    snf = smith_normal_form(m)
    torsion = sorted((d for d in snf.invariant_factors if d > 1), reverse=True)
    return (0,) * (m.nrows - snf.rank) + tuple(torsion)


def is_primitive(v: Sequence[int]) -> bool:
    if not any(v):
        raise InputError(40004, "Zero vector", "primitivity is undefined for the zero vector")
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def determinant(m: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant of a square matrix."""
    n = m.nrows
    if n != m.ncols:
        raise InputError(40005, "Not square", f"{n}x{m.ncols}")
    a = [list(row) for row in m.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            _swap_rows(a, k, swap)
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    hnf = hermite_normal_form(m)
    if hnf.h != IntMatrix.identity(m.nrows):
        raise InputError(40006, "Not unimodular", repr(m))
    return hnf.t
