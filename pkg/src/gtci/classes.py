from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Tuple, Union

from gtci.constellations import WeightDegreeConstellation
from gtci.torsion import ClassGroupElement, DegreeMatrix


@dataclass
class ClassificationRecord:
    """
    One family of the classification.

    ## Attributes

    `id: str`
        Deterministic id, e.g. `w12366t2-1`. Empty until ids are assigned.
    `constellation: WeightDegreeConstellation`
        Weights and relation degrees.
    `matrix: DegreeMatrix`
        The canonical degree matrix of the family.
    `antican_class: ClassGroupElement`
        The anticanonical class in `Z x Gamma`.
    `antican_cube: Fraction`
        The anticanonical self-intersection number, an integer for every family.
    `h0: int`
        Dimension of the space of global sections of the anticanonical sheaf.
    """

    id: str
    constellation: WeightDegreeConstellation
    matrix: DegreeMatrix
    antican_class: ClassGroupElement
    antican_cube: Fraction
    h0: int

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.constellation.weights

    @property
    def degrees(self) -> Tuple[int, ...]:
        return self.constellation.mu

    @property
    def torsion(self) -> Tuple[int, ...]:
        return self.matrix.gamma.invariant_factors

    @property
    def c(self) -> int:
        return self.constellation.c

    def sort_key(self) -> Tuple:
        return (self.c, self.weights, self.torsion, self.degrees, self.matrix.torsion_rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "weights": list(self.weights),
            "torsion": list(self.torsion),
            "degrees": list(self.degrees),
            "eta": [list(row) for row in self.matrix.torsion_rows],
            "antican_z": self.antican_class.z,
            "antican_torsion": list(self.antican_class.torsion.coords),
            "antican_cube": int(self.antican_cube) if self.antican_cube.denominator == 1 else str(self.antican_cube),
            "h0": self.h0,
        }

    def __repr__(self) -> str:
        return f"gtci.ClassificationRecord({self.id}: {self.matrix}, -K^3={self.antican_cube}, h0={self.h0})"


@dataclass
class RunSummary:
    per_type: Dict[int, int] = field(default_factory=dict)
    per_weights: Dict[Tuple[int, ...], int] = field(default_factory=dict)
    constellations: int = 0
    failed: int = 0

    @property
    def total(self) -> int:
        return sum(self.per_type.values())

    def add(self, record: ClassificationRecord):
        self.per_type[record.c] = self.per_type.get(record.c, 0) + 1
        self.per_weights[record.weights] = self.per_weights.get(record.weights, 0) + 1

    def __repr__(self) -> str:
        types = ", ".join(f"(3,{c}): {n}" for c, n in sorted(self.per_type.items()))
        return f"gtci.RunSummary({types}, total={self.total})"


@dataclass
class FixtureResult:
    name: str
    passed: bool
    details: str = ""


@dataclass
class FixtureReport:
    results: List[FixtureResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[FixtureResult]:
        return [r for r in self.results if not r.passed]

    def check(self, name: str, passed: bool, details: str = ""):
        self.results.append(FixtureResult(name, bool(passed), "" if passed else details))

    def __getitem__(self, name: str) -> FixtureResult:
        return next(r for r in self.results if r.name == name)

    def __repr__(self) -> str:
        return f"gtci.FixtureReport({len(self.results) - len(self.failures)}/{len(self.results)} passed)"


class Classification:
    """
    Sorted classification records together with their run summary. Records can be
    looked up by position or by id.
    """

    def __init__(self, records: List[ClassificationRecord], summary: RunSummary):
        self.records = records
        self.summary = summary
        self._by_id = {r.id: r for r in records}

    def __getitem__(self, key: Union[int, str]) -> ClassificationRecord:
        return self.records[key] if isinstance(key, int) else self._by_id[key]

    def __contains__(self, key: str) -> bool:
        return key in self._by_id

    def __iter__(self) -> Iterator[ClassificationRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def ids(self) -> List[str]:
        return [r.id for r in self.records]

    def of_type(self, c: int) -> List[ClassificationRecord]:
        return [r for r in self.records if r.c == c]

    def __repr__(self) -> str:
        return f"gtci.Classification({len(self.records)} records, {self.summary})"
