import random
from collections import Counter
from math import gcd

import pytest

import gtci
from gtci.constellations import WeightDegreeConstellation, WeightVector, is_almost_free_weights, is_gorenstein_weights
from gtci.exceptions import CapacityError, InputError
from gtci.fixtures import EXAMPLE_DEGREES, EXAMPLE_WEIGHTS, example_matrix
from gtci.torsion import (
    DegreeMatrix,
    FiniteAbelianGroup,
    apply_isomorphism,
    automorphisms,
    canonical_form,
    degree_lattice,
    downgrade_matrix,
    elementary_operations,
    enumerate_degree_matrices,
    enumerate_subgroup_bases,
    is_almost_free,
    is_gorenstein_matrix,
    isomorphic,
    subgroups,
    torsion_prime_bounds,
    weight_permutations,
)
from gtci.zlattice import IntMatrix
from tests.util import is_upper_triangular_hnf


def _example(eta):
    return DegreeMatrix.of(EXAMPLE_WEIGHTS, EXAMPLE_DEGREES, (2,), (eta,))


def test_group_basics():
    g = FiniteAbelianGroup((4, 2))
    assert g.order == 8 and g.exponent == 4 and g.rank == 2
    assert str(g) == "Z/4 x Z/2"
    assert str(FiniteAbelianGroup()) == "0"
    assert FiniteAbelianGroup().order == 1
    assert len(list(g.elements())) == 8
    x, y = g.element((3, 1)), g.element((1, 1))
    assert (x + y).is_zero()
    assert 3 * y == g.element((3, 1)) == -y
    assert g.element((5, 3)).coords == (1, 1)


@pytest.mark.parametrize("factors", [(2, 4), (1,), (0,), (6, 4)])
def test_group_errors(factors):
    with pytest.raises(InputError):
        FiniteAbelianGroup(factors)


def test_element_errors():
    g = FiniteAbelianGroup((2,))
    with pytest.raises(InputError):
        g.element((1, 0))
    with pytest.raises(InputError):
        g.element((1,)) + FiniteAbelianGroup((3,)).element((1,))


def test_standard_form():
    assert FiniteAbelianGroup.standard_form(IntMatrix.diagonal([2, 3])) == FiniteAbelianGroup((6,))
    assert FiniteAbelianGroup.standard_form(IntMatrix.of([[2, 2], [0, 4]])).invariant_factors == (4, 2)
    with pytest.raises(InputError):
        FiniteAbelianGroup.standard_form(IntMatrix.of([[2, 0], [0, 0]]))


@pytest.mark.parametrize(
    "factors, count",
    [((), 1), ((2,), 1), ((3,), 2), ((4,), 2), ((6,), 2), ((2, 2), 6), ((4, 2), 8)],
)
def test_automorphisms(factors, count):
    assert len(automorphisms(FiniteAbelianGroup(factors))) == count


def test_automorphisms_capacity(monkeypatch):
    monkeypatch.setattr(gtci, "MAX_GROUP_ORDER", 3)
    with pytest.raises(CapacityError):
        automorphisms(FiniteAbelianGroup((2, 2)))


@pytest.mark.parametrize("factors", [(2,), (3,), (4,), (6,), (2, 2), (4, 2), (6, 2)])
def test_elementary_operations_are_automorphisms(factors):
    g = FiniteAbelianGroup(factors)
    found = automorphisms(g)
    ops = elementary_operations(g)
    assert all(op.phi in found for op in ops)
    assert {op.kind for op in ops} >= {"shear"}


@pytest.mark.parametrize(
    "factors, count",
    [((), 1), ((2,), 2), ((4,), 3), ((6,), 4), ((2, 2), 5), ((3, 3), 6), ((4, 2), 8)],
)
def test_subgroups(factors, count):
    g = FiniteAbelianGroup(factors)
    found = subgroups(g)
    assert len(found) == count
    bases = list(enumerate_subgroup_bases(factors))
    assert len(set(bases)) == count
    assert all(is_upper_triangular_hnf(list(b)) for b in bases if b)


def test_degree_matrix_of():
    q = example_matrix()
    assert q.torsion_rows == ((0, 0, 1, 0, 1),)
    assert q.lifted() == IntMatrix.of([EXAMPLE_WEIGHTS, (0, 0, 1, 0, 1)])
    assert q.column(2).lifted() == (3, 1)
    assert str(q) == "(1, 2, 3, 6, 6; 12) over Z/2 [0 0 1 0 1]"


@pytest.mark.parametrize(
    "weights, degrees, torsion, eta",
    [
        ((1, 1, 1, 1, 1), (3,), (2,), ((1, 0, 0, 0, 0),)),  # not homogeneous
        ((1, 2, 3, 6, 6), (12,), (2,), ()),
        ((1, 2, 3, 6, 6), (12,), (2,), ((0, 0, 1, 0),)),
        ((1, 2, 3, 6, 6), (12,), (2, 4), ((0, 0, 1, 0, 1), (0, 0, 0, 0, 0))),
    ],
)
def test_degree_matrix_errors(weights, degrees, torsion, eta):
    with pytest.raises(InputError):
        DegreeMatrix.of(weights, degrees, torsion, eta)


def test_example_predicates():
    q = example_matrix()
    assert is_almost_free(q)
    assert is_gorenstein_matrix(q)


def test_not_almost_free():
    q = DegreeMatrix.of((1, 1, 1, 1, 1), (2,), (2,), ((0, 0, 0, 0, 1),))
    assert not is_almost_free(q)


def test_trivial_torsion_not_gorenstein():
    q = DegreeMatrix.of((1, 1, 2, 3, 3), (6,))
    assert is_almost_free(q)
    assert not is_gorenstein_matrix(q)


def test_gorenstein_agrees_with_weights():
    rng = random.Random(11)
    checked = 0
    for _ in range(10**4):
        weights = tuple(sorted(rng.randint(1, 12) for _ in range(5)))
        if not is_almost_free_weights(weights, 4):
            continue
        lcm = 1
        for w in weights:
            lcm = lcm * w // gcd(lcm, w)
        q = DegreeMatrix.of(weights, (lcm,))
        assert is_gorenstein_matrix(q) == is_gorenstein_weights(WeightVector(weights))
        checked += 1
    assert checked > 1000


def test_canonical_form():
    q = example_matrix()
    assert canonical_form(canonical_form(q)) == canonical_form(q)
    assert canonical_form(_example((1, 0, 0, 0, 1))) == canonical_form(q)  # shear
    assert canonical_form(_example((0, 0, 1, 1, 0))) == canonical_form(q)  # swap of equal weights
    assert isomorphic(_example((0, 0, 1, 1, 0)), q)
    assert not isomorphic(_example((0, 0, 0, 1, 1)), q)


def test_canonical_form_of_trivial_torsion():
    q = DegreeMatrix.of((1, 1, 1, 1, 1), (4,))
    assert canonical_form(q) == q


def test_canonical_form_under_permutation():
    q1 = DegreeMatrix.of((1, 1, 1, 1, 1), (4,), (2,), ((0, 1, 1, 0, 0),))
    q2 = DegreeMatrix.of((1, 1, 1, 1, 1), (4,), (2,), ((1, 1, 0, 0, 0),))
    assert canonical_form(q1) == canonical_form(q2)


def test_isomorphisms_keep_the_class():
    rng = random.Random(5)
    q = DegreeMatrix.of((1, 1, 1, 1, 1), (4,), (2, 2), ((0, 1, 0, 1, 0), (0, 0, 1, 1, 0)))
    expected = canonical_form(q)
    perms = weight_permutations(q.weights)
    autos = automorphisms(q.gamma)
    elements = list(q.gamma.elements())
    for _ in range(50):
        moved = apply_isomorphism(q, rng.choice(autos), rng.choice(elements), rng.choice(perms))
        assert canonical_form(moved) == expected
        assert degree_lattice(apply_isomorphism(q, rng.choice(autos), rng.choice(elements))) == degree_lattice(q)


def test_apply_isomorphism_rejects_bad_permutations():
    with pytest.raises(InputError):
        apply_isomorphism(example_matrix(), permutation=(1, 0, 2, 3, 4))


def test_weight_permutations():
    assert weight_permutations(EXAMPLE_WEIGHTS) == [(0, 1, 2, 3, 4), (0, 1, 2, 4, 3)]
    assert len(weight_permutations((1, 1, 1, 1, 1))) == 120


@pytest.mark.parametrize(
    "weights, degrees, bounds",
    [
        ((1, 1, 1, 1, 1), (2,), {2: 0}),
        ((1, 1, 1, 1, 1), (3,), {3: 1}),
        ((1, 1, 1, 1, 1), (4,), {2: 0}),
        ((1, 1, 1, 1, 2), (4,), {2: 2}),
    ],
)
def test_torsion_prime_bounds(weights, degrees, bounds):
    assert torsion_prime_bounds(WeightDegreeConstellation.of(weights, degrees)) == bounds


def test_example_prime_bounds():
    bounds = torsion_prime_bounds(example_matrix().constellation)
    assert set(bounds) == {2, 3}
    assert bounds[2] >= 1


def test_enumerate_degree_matrices():
    q = example_matrix()
    classes = enumerate_degree_matrices(q.constellation)
    representatives = [m.representative for m in classes]
    assert canonical_form(q) in representatives
    assert any(isomorphic(r, q) for r in representatives)
    assert any(m.gamma.rank == 0 for m in classes)
    perms = weight_permutations(q.weights)
    for m in classes:
        assert is_almost_free(m.representative) and is_gorenstein_matrix(m.representative)
        assert m.stabilizer[0] == tuple(range(5))
        assert m.orbit_size * len(m.stabilizer) == len(perms)
        assert canonical_form(m.representative) == m.representative
    assert len({m.key for m in classes}) == len(classes)


def test_quadric_matrices():
    classes = enumerate_degree_matrices(WeightDegreeConstellation.of((1, 1, 1, 1, 1), (3,)))
    assert [m.gamma.invariant_factors for m in classes] == [(), (3,)]


def test_cubic_weights_carry_three_torsion():
    q = DegreeMatrix.of((2, 2, 2, 3, 3), (6,), torsion=(3,), eta_rows=[(0, 1, 2, 0, 0)])
    assert is_almost_free(q) and is_gorenstein_matrix(q)
    classes = enumerate_degree_matrices(q.constellation)
    assert [m.gamma.invariant_factors for m in classes] == [(), (3,)]
    assert isomorphic(classes[1].representative, q)


@pytest.mark.parametrize(
    "weights, degrees, buckets",
    [
        ((1, 1, 1, 1, 1, 1), (2, 2), {(): 1, (2,): 1, (2, 2): 2, (2, 2, 2): 1, (2, 2, 2, 2): 1}),
        ((1, 1, 1, 1, 1, 1), (2, 3), {(): 1}),
        ((1, 1, 2, 2, 2, 2), (4, 4), {(): 1, (2,): 3, (2, 2): 2}),
        ((1, 2, 3, 3, 3, 3), (6, 6), {(): 1}),
        ((2, 2, 2, 2, 3, 3), (6, 6), {(): 1}),
    ],
)
def test_two_relation_buckets(weights, degrees, buckets):
    classes = enumerate_degree_matrices(WeightDegreeConstellation.of(weights, degrees))
    assert Counter(m.gamma.invariant_factors for m in classes) == buckets


def test_debug_check(monkeypatch):
    monkeypatch.setattr(gtci, "DEBUG_CHECK_MATRICES", True)
    assert enumerate_degree_matrices(WeightDegreeConstellation.of((1, 1, 1, 1, 2), (4,)))


def test_downgrade_matrix():
    q = example_matrix()
    full = downgrade_matrix(q, q.gamma.generators())
    assert full.gamma.rank == 0
    assert full == DegreeMatrix.of(EXAMPLE_WEIGHTS, EXAMPLE_DEGREES)
    assert downgrade_matrix(q, []) == q
    assert downgrade_matrix(full, []) == full


def test_downgrade_cyclic():
    q = DegreeMatrix.of((1, 1, 1, 1, 1), (4,), (4,), ((0, 1, 2, 3, 0),))
    half = downgrade_matrix(q, [q.gamma.element((2,))])
    assert half.gamma.invariant_factors == (2,)
    assert half.torsion_rows == ((0, 1, 0, 1, 0),)


def test_downgrade_rejects_foreign_elements():
    with pytest.raises(InputError):
        downgrade_matrix(example_matrix(), [FiniteAbelianGroup((3,)).element((1,))])
