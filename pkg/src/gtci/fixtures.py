"""
Worked-example data: a hypersurface of degree 12 in a fake weighted projective space with
weights (1, 2, 3, 6, 6) and class group Z x Z/2, its generator matrix, Newton polytope and
downgrade, plus the published constellation lists and smooth family ids.
"""

from typing import Dict, Tuple

from gtci.geometry import GeneratorMatrix, LaurentSupport
from gtci.torsion import DegreeMatrix
from gtci.zlattice import IntMatrix

EXAMPLE_WEIGHTS = (1, 2, 3, 6, 6)
EXAMPLE_DEGREES = (12,)
EXAMPLE_TORSION = (2,)
EXAMPLE_ETA = ((0, 0, 1, 0, 1),)

EXAMPLE_P = (
    (1, 1, 1, 0, -1),
    (0, 3, 0, 1, -2),
    (0, 0, 2, 1, -2),
    (0, 0, 0, 2, -2),
)

EXAMPLE_B_VERTICES = (
    (0, 0, 0, 0),
    (-12, 4, 6, -5),
    (-12, 6, 6, -6),
    (-12, 4, 8, -6),
    (-12, 4, 6, -4),
)
EXAMPLE_B_COUNT = 21

EXAMPLE_HOMOGENIZATION = (
    (12, 0, 0, 0, 0),
    (0, 6, 0, 0, 0),
    (0, 0, 4, 0, 0),
    (0, 0, 0, 2, 0),
    (0, 0, 0, 0, 2),
)
EXAMPLE_HOMOGENIZATION_DEGREE = (12, 0)

DOWNGRADED_P = (
    (1, 1, 1, 0, -1),
    (0, 3, 0, 0, -1),
    (0, 0, 2, 0, -1),
    (0, 0, 0, 1, -1),
)
DOWNGRADED_A = (
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 1, 1, 2),
)
DOWNGRADED_B_VERTICES = (
    (0, 0, 0, 0),
    (-12, 4, 6, 0),
    (-12, 6, 6, 0),
    (-12, 4, 8, 0),
    (-12, 4, 6, 2),
)
DOWNGRADED_B_COUNT = 36

EXPECTED_CONSTELLATIONS: Dict[int, Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]] = {
    1: (
        ((1, 1, 1, 1, 1), (2,)),
        ((1, 1, 1, 1, 1), (3,)),
        ((1, 1, 1, 1, 1), (4,)),
        ((1, 1, 1, 1, 2), (4,)),
        ((1, 1, 1, 1, 3), (6,)),
        ((1, 1, 1, 2, 3), (6,)),
        ((1, 1, 1, 3, 3), (6,)),
        ((1, 1, 2, 2, 2), (4,)),
        ((1, 1, 2, 2, 2), (6,)),
        ((1, 1, 2, 2, 4), (8,)),
        ((1, 1, 2, 4, 4), (8,)),
        ((1, 1, 2, 4, 6), (12,)),
        ((1, 1, 4, 4, 6), (12,)),
        ((1, 1, 4, 6, 6), (12,)),
        ((1, 2, 2, 2, 3), (6,)),
        ((1, 2, 2, 2, 5), (10,)),
        ((1, 2, 3, 3, 3), (6,)),
        ((1, 2, 3, 6, 6), (12,)),
        ((1, 2, 6, 6, 9), (18,)),
        ((1, 3, 4, 4, 4), (12,)),
        ((1, 3, 8, 12, 12), (24,)),
        ((1, 4, 5, 10, 10), (20,)),
        ((2, 2, 2, 3, 3), (6,)),
        ((2, 3, 3, 4, 6), (12,)),
    ),
    2: (
        ((1, 1, 1, 1, 1, 1), (2, 2)),
        ((1, 1, 1, 1, 1, 1), (2, 3)),
        ((1, 1, 2, 2, 2, 2), (4, 4)),
        ((1, 2, 3, 3, 3, 3), (6, 6)),
        ((2, 2, 2, 2, 3, 3), (6, 6)),
    ),
    3: (((1, 1, 1, 1, 1, 1, 1), (2, 2, 2)),),
}

# families with smooth members, by id
SMOOTH_IDS: Dict[str, Tuple[Tuple[int, ...], Tuple[int, ...]]] = {
    "w11111t1-1": ((1, 1, 1, 1, 1), (2,)),
    "w11111t1-2": ((1, 1, 1, 1, 1), (3,)),
    "w11111t1-3": ((1, 1, 1, 1, 1), (4,)),
    "w11112t1-1": ((1, 1, 1, 1, 2), (4,)),
    "w11113t1-1": ((1, 1, 1, 1, 3), (6,)),
    "w11123t1-1": ((1, 1, 1, 2, 3), (6,)),
    "w111111t1-1": ((1, 1, 1, 1, 1, 1), (2, 2)),
    "w111111t1-2": ((1, 1, 1, 1, 1, 1), (2, 3)),
    "w1111111t1-1": ((1, 1, 1, 1, 1, 1, 1), (2, 2, 2)),
}


def example_matrix() -> DegreeMatrix:
    return DegreeMatrix.of(EXAMPLE_WEIGHTS, EXAMPLE_DEGREES, EXAMPLE_TORSION, EXAMPLE_ETA)


def example_generator_matrix() -> GeneratorMatrix:
    return GeneratorMatrix(IntMatrix.of(EXAMPLE_P))


def downgraded_generator_matrix() -> GeneratorMatrix:
    return GeneratorMatrix(IntMatrix.of(DOWNGRADED_P))


def example_support() -> LaurentSupport:
    """Vertices of the Newton polytope, read as the exponents of a Laurent polynomial."""
    return LaurentSupport(4, EXAMPLE_B_VERTICES)
