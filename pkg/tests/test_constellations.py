from itertools import combinations
from math import gcd

import pytest

import gtci
from gtci.constellations import (
    WeightDegreeConstellation,
    WeightVector,
    enumerate_constellations,
    exponent_tuple,
    harmonic_fano,
    is_almost_free_weights,
    is_fano,
    is_gorenstein_weights,
    is_true,
    search_constellations,
    tail_candidates,
)
from gtci.exceptions import InputError
from tests.constants import (
    CODIM_THREE_TAILS,
    CODIM_TWO_FINITE_TAILS,
    CODIM_TWO_L2222,
    EXPECTED_CONSTELLATIONS,
    TAIL_L4_WEIGHTS,
    TAIL_Y22_WEIGHTS,
    TRIPLE_TAILS_L4,
)


def _pairs(constellations):
    return [(k.weights, k.mu) for k in constellations]


@pytest.mark.parametrize("c, total", [(1, 24), (2, 5), (3, 1)])
def test_enumerate_constellations(c, total):
    found = enumerate_constellations(3, c)
    assert len(found) == total
    assert _pairs(found) == list(EXPECTED_CONSTELLATIONS[c])


@pytest.mark.parametrize("c", [1, 2, 3])
def test_cutoff_does_not_change_the_result(c):
    assert enumerate_constellations(3, c, 1000) == enumerate_constellations(3, c)


def test_codimension_four_is_empty():
    assert search_constellations(3, 4) == []
    with pytest.raises(InputError):
        enumerate_constellations(3, 4)


@pytest.mark.parametrize("d, c, cutoff", [(3, 0, None), (3, 1, 10), (3, 1, 0), (4, 1, None)])
def test_enumerate_errors(d, c, cutoff):
    with pytest.raises(InputError):
        enumerate_constellations(d, c, cutoff)


def test_triple_tails():
    tails = tail_candidates(3, 1, 100)
    assert sum(1 for t in tails if t[1] >= 3) == TRIPLE_TAILS_L4
    assert {t for t in tails if t[1] == 2} == {(y, 2, 2) for y in range(2, 101)}


def test_quintuple_tails():
    tails = tail_candidates(3, 2, 100)
    assert {t for t in tails if t[1] >= 3} == CODIM_TWO_FINITE_TAILS
    assert {t for t in tails if t[1] == 2} == {(y, 2, 2, 2, 2) for y in range(2, 101)}


def test_sextuple_tails():
    assert tail_candidates(3, 3, 100) == CODIM_THREE_TAILS


def test_tail_cap():
    with pytest.raises(InputError):
        tail_candidates(3, 1, 1)


def test_weight_vectors_by_tail():
    found = enumerate_constellations(3, 1)
    y22 = {k.weights for k in found if exponent_tuple(k)[0].l[3:] == (2, 2)}
    l4 = {k.weights for k in found if exponent_tuple(k)[0].l[3] >= 3}
    assert y22 == TAIL_Y22_WEIGHTS
    assert l4 == TAIL_L4_WEIGHTS


def test_codim_two_exponents():
    found = enumerate_constellations(3, 2)
    first = {exponent_tuple(k)[0].l for k in found}
    assert {l for l in first if set(l[2:]) == {2}} == CODIM_TWO_L2222
    assert {exponent_tuple(k)[0].l for k in enumerate_constellations(3, 3)} == {(2,) * 7}


def test_gorenstein_filter():
    with_filter = search_constellations(3, 1)
    without = search_constellations(3, 1, gorenstein=False)
    assert set(with_filter) < set(without)
    assert ((1, 1, 2, 3, 3), (6,)) in _pairs(without)
    assert ((1, 1, 2, 3, 3), (6,)) not in _pairs(with_filter)


@pytest.mark.parametrize(
    "weights, c, gorenstein",
    [
        ((1, 1, 1, 1, 1), 1, True),
        ((1, 2, 3, 6, 6), 1, True),
        ((1, 1, 2, 3, 3), 1, False),
        ((1, 2, 3, 3, 3, 3), 2, True),
        ((1, 1, 1, 1, 1, 1, 1), 3, True),
    ],
)
def test_is_gorenstein_weights(weights, c, gorenstein):
    assert is_gorenstein_weights(WeightVector(weights, 3, c)) == gorenstein


@pytest.mark.parametrize("c", [1, 2, 3])
def test_found_constellations_are_valid(c):
    for k in enumerate_constellations(3, c):
        assert is_true(k) and is_fano(k) and harmonic_fano(k) and is_gorenstein_weights(k.w)
        for e in exponent_tuple(k):
            assert all(ell * w == e.mu for ell, w in zip(e.l, k.weights))
            assert e.is_true
            # lcm of any d + c exponents is the degree
            for subset in combinations(e.l, k.d + k.c):
                lcm = 1
                for x in subset:
                    lcm = lcm * x // gcd(lcm, x)
                assert lcm == e.mu


def test_equal_weight_pairs():
    for k in enumerate_constellations(3, 1):
        w = k.weights
        for i, j in combinations(range(5), 2):
            if w[i] != w[j]:
                continue
            rest = [w[m] for m in range(5) if m not in (i, j)]
            g = gcd(gcd(rest[0], rest[1]), rest[2])
            assert g in (1, 2)
            assert g == 1 or w[i] % 2 == 1


@pytest.mark.parametrize(
    "weights, degrees",
    [
        ((1, 1, 1, 1, 1), (5,)),
        ((1, 1, 1, 1, 2), (6,)),
        ((1, 1, 1, 1, 1), (1,)),
        ((1, 1, 1, 1, 1, 1), (2, 4)),
    ],
)
def test_harmonic_fano_agrees(weights, degrees):
    k = WeightDegreeConstellation.of(weights, degrees)
    assert harmonic_fano(k) == is_fano(k)


@pytest.mark.parametrize(
    "weights, c",
    [
        ((1, 1, 1, 1), 1),
        ((1, 1, 0, 1, 1), 1),
        ((1, 2, 1, 1, 1), 1),
        ((1, 1, 2, 2, 2, 2), 1),
        ((1, 2, 2, 2, 2), 1),
    ],
)
def test_weight_vector_errors(weights, c):
    with pytest.raises(InputError):
        WeightVector(weights, 3, c)


def test_constellation_errors():
    with pytest.raises(InputError):
        WeightDegreeConstellation.of((1, 2, 3, 6, 6), (8,))
    with pytest.raises(InputError):
        WeightDegreeConstellation(WeightVector((1, 1, 1, 1, 1, 1), 3, 2), (2,))


def test_constellation_format():
    k = WeightDegreeConstellation.of((1, 2, 3, 6, 6), (12,))
    assert str(k) == "(1, 2, 3, 6, 6; 12)"
    assert repr(k) == "gtci.WeightDegreeConstellation(1, 2, 3, 6, 6; 12)"
    assert exponent_tuple(k)[0].l == (12, 6, 4, 2, 2)
    assert WeightDegreeConstellation.of((1, 1, 1, 1, 1, 1), (3, 2)).mu == (2, 3)


def test_almost_free_weights():
    assert is_almost_free_weights((1, 2, 3, 6, 6))
    assert not is_almost_free_weights((1, 2, 2, 2, 2))
    assert is_almost_free_weights((2, 2, 2, 3, 3), 4)


def test_default_cutoff(monkeypatch):
    monkeypatch.setattr(gtci, "tail_cutoff", 30)
    assert len(enumerate_constellations(3, 1)) == 24
