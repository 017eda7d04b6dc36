import asyncio

import pytest

import gtci
from gtci.classes import Classification
from gtci.cli import main
from gtci.constellations import WeightDegreeConstellation
from gtci.exceptions import InputError, InvariantError
from gtci.fixtures import EXAMPLE_P, example_matrix
from gtci.pipeline import (
    EXPECTED_TOTALS,
    assign_id,
    classify_constellation,
    run_fixtures,
    verify_classification,
    verify_record,
)
from gtci.process_scheduler import process_batch, time_format
from gtci.torsion import canonical_form
from tests.constants import ID_EXAMPLES, SMOOTH_IDS, TORSION_BUCKETS


@pytest.fixture(scope="module")
def classification() -> Classification:
    return gtci.classify()


def test_run_fixtures():
    report = run_fixtures()
    assert report.passed, report.failures
    assert len(report.results) == 8


def test_fixtures_detect_a_wrong_generator_matrix():
    p = [list(row) for row in EXAMPLE_P]
    p[0][0] = 2
    report = run_fixtures(p=p)
    assert not report.passed
    assert not report["degree-matrix-kernel"].passed


def test_fixtures_detect_a_wrong_exponent():
    report = run_fixtures(exponents=(13, 6, 4, 2, 2))
    assert not report["newton-polytope-vertices"].passed
    assert report["cokernel"].passed


@pytest.mark.parametrize("weights, torsion, index, expected", ID_EXAMPLES)
def test_assign_id(weights, torsion, index, expected):
    assert assign_id(weights, torsion, index) == expected


def test_assign_id_rejects_large_weights():
    with pytest.raises(InputError):
        assign_id((1, 2, 3, 13, 13), (), 1)


def test_totals(classification):
    assert len(classification) == 76
    assert classification.summary.per_type == EXPECTED_TOTALS
    assert classification.summary.constellations == 30
    assert len(set(classification.ids)) == 76


def test_torsion_buckets(classification):
    assert {(r.weights, r.torsion) for r in classification} == TORSION_BUCKETS


@pytest.mark.parametrize("family_id, family", list(SMOOTH_IDS.items()))
def test_smooth_ids(classification, family_id, family):
    r = classification[family_id]
    assert (r.weights, r.degrees) == family
    assert r.torsion == ()


def test_example_family(classification):
    expected = canonical_form(example_matrix())
    r = next(r for r in classification if r.matrix == expected)
    assert r.id.startswith("w12366t2-")
    assert r.antican_cube == 6
    assert r.h0 == 6


def test_records_are_sorted(classification):
    keys = [r.sort_key() for r in classification]
    assert keys == sorted(keys)
    assert [len(classification.of_type(c)) for c in (1, 2, 3)] == [58, 15, 3]


def test_invariants_are_integers(classification):
    for r in classification:
        assert r.antican_cube.denominator == 1 and r.antican_cube > 0
        assert r.antican_class.z > 0
        assert r.h0 >= 0


def test_verify_classification(classification):
    assert verify_classification(classification) == []


def test_verify_record_detects_tampering(classification):
    r = classification["w11111t1-3"]
    original = r.h0
    r.h0 = original + 1
    try:
        assert any("h0" in message for message in verify_record(r))
    finally:
        r.h0 = original


def test_verify_classification_detects_wrong_totals():
    result = gtci.classify([3])
    assert verify_classification(result, {3: 4})
    assert verify_classification(result, {3: 3}) == []


def test_deterministic():
    first = gtci.classify([2, 3], max_workers=1)
    second = gtci.classify([3, 2], max_workers=4)
    assert [r.to_dict() for r in first] == [r.to_dict() for r in second]


def test_codim_three():
    result = gtci.Classifier(c_set=[3]).run()
    assert result.ids == ["w1111111t1-1", "w1111111t2-1", "w1111111t22-1"]
    assert "w1111111t2-1" in result
    assert result[0] is result["w1111111t1-1"]


@pytest.mark.asyncio
async def test_classify_async():
    result = await gtci.classify_async([3])
    assert len(result) == 3


@pytest.mark.asyncio
async def test_classifier_run_async():
    result = await gtci.Classifier(c_set=[3], max_workers=3).run_async()
    assert result.summary.per_type == {3: 3}


def test_classify_from_a_running_loop():
    async def inside():
        return gtci.classify([3])

    assert len(asyncio.run(inside())) == 3


@pytest.mark.parametrize("c_set", [[], [4], [0, 1]])
def test_classify_rejects_types(c_set):
    with pytest.raises(InputError):
        gtci.classify(c_set)
    with pytest.raises(InputError):
        gtci.Classifier(c_set=c_set)


def test_classifier_rejects_a_zero_cutoff():
    with pytest.raises(InputError):
        gtci.Classifier(c_set=[3], cutoff=0).run()


def test_classify_names_the_failing_family(monkeypatch):
    def broken(k):
        raise ZeroDivisionError()

    monkeypatch.setattr(gtci.pipeline, "classify_constellation", broken)
    with pytest.raises(InvariantError) as info:
        gtci.classify([2])
    assert info.value.family == "(1, 1, 1, 1, 1, 1; 2, 2)"


def test_classify_checks_every_family(monkeypatch):
    monkeypatch.setattr(gtci.pipeline, "verify_record", lambda r: ["normal fan is not given by P"])
    with pytest.raises(InvariantError) as info:
        gtci.classify([3])
    assert info.value.family == "(1, 1, 1, 1, 1, 1, 1; 2, 2, 2)"
    assert "normal fan" in info.value.details
    assert main(["classify", "--type", "3,3"]) == 1


def test_classify_constellation():
    records = classify_constellation(WeightDegreeConstellation.of((1, 1, 1, 1, 1), (3,)))
    assert [r.torsion for r in records] == [(), (3,)]
    assert all(r.id == "" for r in records)


@pytest.mark.asyncio
async def test_process_batch():
    outputs, errors = {}, {}

    def job(x: int) -> int:
        if x == 3:
            raise ValueError("three")
        return x * x

    successful, failed = await process_batch(
        range(6),
        job,
        on_output=lambda x, y: outputs.__setitem__(x, y),
        on_error=lambda x, e: errors.__setitem__(x, e),
        max_workers=3,
    )
    assert (successful, failed) == (5, 1)
    assert outputs == {0: 0, 1: 1, 2: 4, 4: 16, 5: 25}
    assert isinstance(errors[3], ValueError)


def test_time_format():
    from datetime import timedelta

    assert time_format(timedelta(seconds=75, milliseconds=250)) == "1m 15s 250ms"
    assert time_format(timedelta(milliseconds=5)) == "0s 5ms"
