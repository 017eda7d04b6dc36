import random
from itertools import product
from math import ceil, floor
from typing import List, Tuple

from gtci.geometry import GeneratorMatrix, LatticeSimplex
from gtci.zlattice import IntMatrix


def random_unimodular(n: int, rng: random.Random, steps: int = 12, factors=(-2, -1, 1, 2)) -> IntMatrix:
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        f = rng.choice(factors)
        rows[i] = [a + f * b for a, b in zip(rows[i], rows[j])]
    return IntMatrix.of(rows)


def random_generator_matrix(n: int, rng: random.Random) -> GeneratorMatrix:
    """`U [I | -u]` with a small positive `u` whose last entry is 1 and a nearly diagonal unimodular `U`."""
    u = [rng.randint(1, 2) for _ in range(n - 1)] + [1]
    rows = [[int(i == j) for j in range(n)] + [-u[i]] for i in range(n)]
    return GeneratorMatrix(random_unimodular(n, rng, steps=2, factors=(-1, 1)) @ IntMatrix.of(rows))


def naive_count(s: LatticeSimplex) -> int:
    """Full bounding box scan in plain integers."""
    if s.is_empty:
        return 0
    box = [
        range(floor(min(v[i] for v in s.vertices)), ceil(max(v[i] for v in s.vertices)) + 1)
        for i in range(s.n)
    ]
    rows = list(zip(s.normals.rows, s.shifts))
    return sum(1 for x in product(*box) if all(sum(a * b for a, b in zip(row, x)) + shift >= 0 for row, shift in rows))


def is_upper_triangular_hnf(rows: List[Tuple[int, ...]]) -> bool:
    pivots = []
    for row in rows:
        nonzero = [j for j, x in enumerate(row) if x]
        if not nonzero or row[nonzero[0]] <= 0:
            return False
        pivots.append(nonzero[0])
    return pivots == sorted(set(pivots))
