from fractions import Fraction
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import primefactors

import gtci
from gtci import fixtures
from gtci.async_utils import async_to_sync
from gtci.classes import Classification, ClassificationRecord, FixtureReport, RunSummary
from gtci.constellations import WeightDegreeConstellation, enumerate_constellations, exponent_tuple, is_fano
from gtci.exceptions import GTCIError, InputError, InvariantError
from gtci.geometry import (
    GeneratorMatrix,
    LaurentSupport,
    anticanonical_class,
    anticanonical_selfintersection,
    count_lattice_points,
    degree_map,
    downgrade_geometry,
    generator_matrix,
    h0_anticanonical,
    h0_monomial_oracle,
    homogenize,
    lattice_simplex,
    relation_polytopes,
    verify_normal_fan,
)
from gtci.process_scheduler import process_batch
from gtci.torsion import (
    DegreeMatrix,
    FiniteAbelianGroup,
    apply_isomorphism,
    automorphisms,
    canonical_form,
    downgrade_matrix,
    elementary_operations,
    enumerate_degree_matrices,
    is_almost_free,
    is_gorenstein_matrix,
    subgroups,
)
from gtci.zlattice import IntMatrix, cokernel_structure, determinant, lattice_basis

EXPECTED_TOTALS: Dict[int, int] = {1: 58, 2: 15, 3: 3}
ALL_TYPES = (1, 2, 3)

WEIGHT_DIGITS = "0123456789ABC"


def assign_id(weights: Sequence[int], torsion: Sequence[int], index: int) -> str:
    """
    `w` + weight digits (10, 11, 12 as A, B, C) + `t` + torsion factors (`1` if trivial)
    + `-` + the 1-based index within the (weights, torsion) bucket.

    ## Raises

    `InputError` for weights above 12.
    """
    if any(w >= len(WEIGHT_DIGITS) or w < 1 for w in weights):
        raise InputError(40501, "Weight has no id digit", str(tuple(weights)))
    torsion_part = "".join(map(str, torsion)) or "1"
    return f"w{''.join(WEIGHT_DIGITS[w] for w in weights)}t{torsion_part}-{index}"


def assign_ids(records: Iterable[ClassificationRecord]) -> List[ClassificationRecord]:
    """Sorts the records and fills in their ids."""
    ordered = sorted(records, key=ClassificationRecord.sort_key)
    buckets: Dict[Tuple, int] = {}
    for r in ordered:
        bucket = (r.weights, r.torsion)
        buckets[bucket] = buckets.get(bucket, 0) + 1
        r.id = assign_id(r.weights, r.torsion, buckets[bucket])
    return ordered


def classify_constellation(k: WeightDegreeConstellation) -> List[ClassificationRecord]:
    """
    Degree matrices of `k` with their anticanonical invariants; ids are left empty.

    ## Raises

    `InvariantError` naming the constellation if a record fails the property suite.
    """
    records = []
    for matrix_class in enumerate_degree_matrices(k):
        q = matrix_class.representative
        p = generator_matrix(q)
        r = ClassificationRecord(
            id="",
            constellation=k,
            matrix=q,
            antican_class=anticanonical_class(q),
            antican_cube=anticanonical_selfintersection(q),
            h0=h0_anticanonical(q, p),
        )
        failures = verify_record(r)
        if failures:
            raise InvariantError(40504, "Family fails the property suite", "; ".join(failures), str(k))
        records.append(r)
    return records


def _validate_types(c_set: Iterable[int]) -> Tuple[int, ...]:
    types = tuple(sorted(set(c_set)))
    if not types or any(c not in ALL_TYPES for c in types):
        raise InputError(40502, "Codimensions must be taken from 1, 2, 3", str(types))
    return types


async def classify_async(
    c_set: Iterable[int] = ALL_TYPES,
    cutoff: Optional[int] = None,
    max_workers: Optional[int] = None,
    d: int = 3,
) -> Classification:
    """
    Classifies the families of the requested codimensions, fanning the constellations out
    to `max_workers` workers.

    ## Raises

    `InputError` for codimensions outside {1, 2, 3} or a too small cutoff.
    `InvariantError` naming the family if the computation for a constellation fails.
    """
    types = _validate_types(c_set)
    constellations = [k for c in types for k in enumerate_constellations(d, c, cutoff)]
    records: List[ClassificationRecord] = []
    errors: List[Tuple[WeightDegreeConstellation, Exception]] = []

    await process_batch(
        constellations,
        classify_constellation,
        on_output=lambda k, result: records.extend(result),
        on_error=lambda k, e: errors.append((k, e)),
        max_workers=max_workers,
        label="constellation",
    )
    if errors:
        k, e = min(errors, key=lambda item: item[0].sort_key())
        if isinstance(e, GTCIError):
            e.family = e.family or str(k)
            raise e
        raise InvariantError(40503, "Classification failed", repr(e), str(k)) from e

    ordered = assign_ids(records)
    summary = RunSummary(constellations=len(constellations))
    for r in ordered:
        summary.add(r)
    gtci.logger.info(f"Classified {summary.total} families from {len(constellations)} constellations")
    return Classification(ordered, summary)


def classify(
    c_set: Iterable[int] = ALL_TYPES,
    cutoff: Optional[int] = None,
    max_workers: Optional[int] = None,
    d: int = 3,
) -> Classification:
    return async_to_sync(classify_async(c_set, cutoff, max_workers, d))


class Classifier:
    """
    Runs classifications for a fixed choice of codimensions and tail cutoff.

    ## Attributes

    `c_set: tuple[int, ...]`
        Codimensions to classify, taken from 1, 2, 3.
    `cutoff: int, optional`
        Tail sweep cutoff. If not provided, the global `gtci.tail_cutoff` is used.
    `max_workers: int, optional`
        Number of workers. If not provided, the global `gtci.MAX_WORKERS` is used.

    ## Methods

    `run() -> Classification`
        Classifies the requested families.
    `run_async() -> Classification`
        Classifies the requested families asynchronously.
    `verify(result) -> list[str]`
        Runs the property suite and the totals check on a result.

    ## Example

    >>> result = gtci.Classifier(c_set=[3]).run()
    >>> result.ids
    ['w1111111t1-1', ...]
    """

    def __init__(self, c_set: Iterable[int] = ALL_TYPES, cutoff: Optional[int] = None, max_workers: Optional[int] = None):
        self.c_set = _validate_types(c_set)
        self.cutoff = cutoff
        self.max_workers = max_workers

    def run(self) -> Classification:
        return classify(self.c_set, self.cutoff, self.max_workers)

    async def run_async(self) -> Classification:
        return await classify_async(self.c_set, self.cutoff, self.max_workers)

    def verify(self, result: Classification) -> List[str]:
        return verify_classification(result, {c: EXPECTED_TOTALS[c] for c in self.c_set})


def _pure_powers(exponents: Sequence[Tuple[int, ...]]) -> bool:
    size = len(exponents[0])
    return all(any(e[i] > 0 and not any(e[:i] + e[i + 1 :]) for e in exponents) for i in range(size))


def _torsion_bounds_hold(q: DegreeMatrix) -> List[str]:
    failures = []
    exps = exponent_tuple(q.constellation)
    for p in primefactors(q.gamma.order):
        if any(sum(1 for x in e.l if x % p == 0) < 2 for e in exps):
            failures.append(f"fewer than two exponents divisible by {p}")
    for n in q.gamma.invariant_factors:
        if any(gcd(w, n) == 1 for w in q.weights) and any(m % n for m in q.constellation.mu):
            failures.append(f"torsion factor {n} does not divide the degrees")
    return failures


def verify_record(r: ClassificationRecord) -> List[str]:
    """
    Runs the per-family property suite.

    ## Returns

    Descriptions of the failed properties; empty if the record is consistent.
    """
    q, k = r.matrix, r.constellation
    failures: List[str] = []

    def check(ok: bool, message: str):
        if not ok:
            failures.append(f"{r.id or k}: {message}")

    check(is_almost_free(q), "degree matrix is not almost free")
    check(is_gorenstein_matrix(q), "degree matrix is not Gorenstein")
    check(canonical_form(q) == q, "degree matrix is not in canonical form")
    for message in _torsion_bounds_hold(q):
        check(False, message)

    antican = anticanonical_class(q)
    check(antican == r.antican_class, "anticanonical class differs from recomputation")
    check(antican.z == sum(q.weights) - sum(k.mu) and antican.z > 0, "anticanonical degree is not positive")
    cube = anticanonical_selfintersection(q)
    check(cube == r.antican_cube, "-K^3 differs from recomputation")
    check(cube > 0 and cube.denominator == 1, f"-K^3 = {cube} is not a positive integer")

    p = generator_matrix(q)
    h0 = h0_anticanonical(q, p)
    check(h0 == r.h0, "h0 differs from recomputation")
    check(h0 == h0_monomial_oracle(q), "h0 from polytopes differs from the monomial count")

    polytopes = relation_polytopes(q, p)
    check(verify_normal_fan(polytopes, p), "normal fan of the relation polytopes is not given by P")
    for s in polytopes:
        if s.is_lattice:
            support = LaurentSupport(p.n, s.integer_vertices())
            check(_pure_powers(homogenize(support, p, q).exponents), "homogenized vertex support misses a pure power")

    check(cokernel_structure(p.pstar) == (0,) + q.gamma.invariant_factors, "cokernel of P* is not Z x Gamma")
    lifted, factors = degree_map(p)
    check(lifted.rows[0] == q.weights, "degree map of P does not reproduce the weights")
    if lifted.rows[0] == q.weights:
        roundtrip = DegreeMatrix.of(q.weights, k.mu, factors, lifted.rows[1:], k.d)
        check(canonical_form(roundtrip) == q, "roundtrip through P does not return the degree matrix")

    for subgroup in subgroups(q.gamma):
        downgraded = downgrade_matrix(q, subgroup)
        label = f"downgrade by {[x.coords for x in subgroup]}"
        check(is_fano(downgraded.constellation) == is_fano(k), f"{label} changes the Fano property")
        check(is_gorenstein_matrix(downgraded), f"{label} is not Gorenstein")
        geometry = downgrade_geometry(q, subgroup)
        check(
            abs(determinant(geometry.a)) == q.gamma.order // downgraded.gamma.order,
            f"{label}: |det A| differs from the subgroup order",
        )
        check(geometry.p.pstar @ geometry.a == p.pstar, f"{label}: P~* A differs from P*")
    return failures


def verify_classification(result: Classification, expected: Optional[Dict[int, int]] = None) -> List[str]:
    """
    Checks every record, the totals per codimension, id uniqueness, and that every
    elementary row operation is an automorphism mapping each family to itself.
    """
    failures: List[str] = []
    if expected is None:
        expected = {c: EXPECTED_TOTALS[c] for c in result.summary.per_type}
    for c, total in expected.items():
        found = result.summary.per_type.get(c, 0)
        if found != total:
            failures.append(f"type (3,{c}): {found} families, expected {total}")
    if len(set(result.ids)) != len(result):
        failures.append("ids are not unique")

    groups: Dict[FiniteAbelianGroup, list] = {}
    for r in result:
        failures.extend(verify_record(r))
        q = r.matrix
        if not q.gamma.rank:
            continue
        if q.gamma not in groups:
            groups[q.gamma] = automorphisms(q.gamma)
        for op in elementary_operations(q.gamma):
            if op.phi not in groups[q.gamma]:
                failures.append(f"{r.id}: {op.kind} operation is not an automorphism of {q.gamma}")
            elif canonical_form(apply_isomorphism(q, op.phi, op.shift)) != q:
                failures.append(f"{r.id}: {op.kind} operation leaves the isomorphism class")
    for message in failures:
        gtci.logger.error(message)
    return failures


def _run_check(report: FixtureReport, name: str, fn: Callable[[], Tuple[bool, str]]):
    try:
        passed, details = fn()
    except Exception as e:  # a broken fixture input fails the fixture, not the run
        passed, details = False, repr(e)
    report.check(name, passed, details)


def run_fixtures(
    p: Optional[Sequence[Sequence[int]]] = None,
    exponents: Optional[Sequence[int]] = None,
) -> FixtureReport:
    """
    Checks the worked example: the degree matrix against its generator matrix, the Newton
    polytope, its lattice count and homogenization, the anticanonical data and the downgrade.

    ## Parameters

    `p: rows, optional`
        Generator matrix to check instead of the printed one.
    `exponents: sequence of int, optional`
        Exponent vector of the relation to use instead of `(12, 6, 4, 2, 2)`.

    ## Returns

    A `FixtureReport` with one named result per check.
    """
    report = FixtureReport()
    q = fixtures.example_matrix()
    rows = IntMatrix.of(p or fixtures.EXAMPLE_P)
    ell = tuple(exponents) if exponents is not None else exponent_tuple(q.constellation)[0].l

    def kernel() -> Tuple[bool, str]:
        product = q.lifted() @ rows.transpose()
        ok = not any(product.rows[0]) and all(x % 2 == 0 for x in product.rows[1])
        return ok, repr(product)

    def cokernel() -> Tuple[bool, str]:
        structure = cokernel_structure(rows.transpose())
        return structure == (0, 2), str(structure)

    def newton_polytope():
        return lattice_simplex(GeneratorMatrix(rows), (ell[0],) + (0,) * (len(ell) - 1))

    def vertices() -> Tuple[bool, str]:
        found = newton_polytope().vertices
        return set(found) == {tuple(Fraction(x) for x in v) for v in fixtures.EXAMPLE_B_VERTICES}, str(found)

    def lattice_count() -> Tuple[bool, str]:
        count = count_lattice_points(newton_polytope())
        return count == fixtures.EXAMPLE_B_COUNT, str(count)

    def normal_fan() -> Tuple[bool, str]:
        return verify_normal_fan([newton_polytope()], GeneratorMatrix(rows)), ""

    def homogenization() -> Tuple[bool, str]:
        result = homogenize(fixtures.example_support(), GeneratorMatrix(rows), q)
        ok = set(result.exponents) == set(fixtures.EXAMPLE_HOMOGENIZATION)
        return ok and result.degree == fixtures.EXAMPLE_HOMOGENIZATION_DEGREE, str(result)

    def anticanonical() -> Tuple[bool, str]:
        antican, cube = anticanonical_class(q), anticanonical_selfintersection(q)
        return antican.z == 6 and antican.torsion.is_zero() and cube == 6, f"{antican}, {cube}"

    def downgrade() -> Tuple[bool, str]:
        target = fixtures.downgraded_generator_matrix()
        a = IntMatrix.of(fixtures.DOWNGRADED_A)
        printed = target.pstar @ a == rows.transpose()
        geometry = downgrade_geometry(q, q.gamma.generators())
        same_lattice = lattice_basis(geometry.p.p.rows) == lattice_basis(target.p.rows)
        transported = geometry.polytopes[0]
        ok = (
            printed
            and same_lattice
            and geometry.p.pstar @ geometry.a == generator_matrix(q).pstar
            and abs(determinant(geometry.a)) == 2
            and count_lattice_points(transported) == fixtures.DOWNGRADED_B_COUNT
            and set(transported.integer_vertices()) == set(fixtures.DOWNGRADED_B_VERTICES)
        )
        return ok, repr(geometry.a)

    _run_check(report, "degree-matrix-kernel", kernel)
    _run_check(report, "cokernel", cokernel)
    _run_check(report, "newton-polytope-vertices", vertices)
    _run_check(report, "lattice-count", lattice_count)
    _run_check(report, "normal-fan", normal_fan)
    _run_check(report, "homogenization", homogenization)
    _run_check(report, "anticanonical", anticanonical)
    _run_check(report, "downgrade", downgrade)
    for failure in report.failures:
        gtci.logger.error(f"Fixture {failure.name} failed: {failure.details}")
    return report
