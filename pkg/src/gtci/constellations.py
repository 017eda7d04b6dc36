from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from sympy import divisors

import gtci
from gtci.exceptions import InputError

# leading exponents left free by the tail bound, per codimension
HEAD_SIZE = {1: 2}
DEFAULT_HEAD_SIZE = 1


def _gcd_all(values: Sequence[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def _lcm_all(values: Sequence[int]) -> int:
    result = 1
    for v in values:
        result = result * v // gcd(result, v)
    return result


def is_almost_free_weights(weights: Sequence[int], size: Optional[int] = None) -> bool:
    """True iff every `size` of the entries (default: all but one) are coprime."""
    size = len(weights) - 1 if size is None else size
    return all(_gcd_all(sub) == 1 for sub in combinations(weights, size))


@dataclass(frozen=True)
class WeightVector:
    """
    Ascending, almost free vector of `1+d+c` positive weights.

    ## Attributes

    `w: tuple[int, ...]`
        The weights.
    `d, c: int`
        Target dimension and codimension.

    ## Raises

    `InputError` if the length, order, positivity or almost-freeness fails.
    """

    w: Tuple[int, ...]
    d: int = 3
    c: int = 1

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        if len(self.w) != 1 + self.d + self.c:
            raise InputError(
                40101, "Wrong number of weights", f"type ({self.d},{self.c}) needs {1 + self.d + self.c}, got {self.w}"
            )
        if any(x <= 0 for x in self.w):
            raise InputError(40102, "Weights must be positive", str(self.w))
        if list(self.w) != sorted(self.w):
            raise InputError(40103, "Weights must be ascending", str(self.w))
        if not is_almost_free_weights(self.w, self.d + self.c):
            raise InputError(40104, "Weights are not almost free", str(self.w))

    def __len__(self) -> int:
        return len(self.w)

    def __iter__(self):
        return iter(self.w)

    def __getitem__(self, i: int) -> int:
        return self.w[i]


@dataclass(frozen=True)
class ExponentVector:
    """Exponents `l` with common degree `mu = l_i * w_i`."""

    l: Tuple[int, ...]
    mu: int

    def __post_init__(self):
        if any(x <= 0 for x in self.l) or self.mu <= 0:
            raise InputError(40105, "Exponents and degree must be positive", f"{self.l}; {self.mu}")

    @property
    def is_true(self) -> bool:
        return self.l[-1] >= 2


@dataclass(frozen=True, order=True)
class WeightDegreeConstellation:
    """
    A weight vector together with the ascending degrees `mu_1 <= ... <= mu_c` of the
    relations. Every degree must be divisible by every weight.
    """

    w: WeightVector
    mu: Tuple[int, ...]

    def __post_init__(self):
        mu = tuple(sorted(int(x) for x in self.mu))
        object.__setattr__(self, "mu", mu)
        if len(mu) != self.w.c:
            raise InputError(40106, "Wrong number of degrees", f"codimension {self.w.c}, degrees {mu}")
        for m in mu:
            if m <= 0 or any(m % x for x in self.w):
                raise InputError(40107, "Degree not divisible by every weight", f"{self.w.w}; {m}")

    @classmethod
    def of(cls, weights: Sequence[int], degrees: Sequence[int], d: int = 3) -> "WeightDegreeConstellation":
        return cls(WeightVector(tuple(weights), d, len(degrees)), tuple(degrees))

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.w.w

    @property
    def d(self) -> int:
        return self.w.d

    @property
    def c(self) -> int:
        return self.w.c

    @property
    def n(self) -> int:
        return self.w.d + self.w.c

    def sort_key(self) -> Tuple:
        return (self.c, self.weights, self.mu)

    def __str__(self) -> str:
        return f"({', '.join(map(str, self.weights))}; {', '.join(map(str, self.mu))})"

    def __repr__(self) -> str:
        return f"gtci.WeightDegreeConstellation{self}"


def exponent_tuple(k: WeightDegreeConstellation) -> Tuple[ExponentVector, ...]:
    return tuple(ExponentVector(tuple(m // x for x in k.weights), m) for m in k.mu)


def is_fano(k: WeightDegreeConstellation) -> bool:
    return sum(k.weights) > sum(k.mu)


def harmonic_fano(k: WeightDegreeConstellation) -> bool:
    """Fano test in exponent form: the reciprocals of the column sums of the exponents add up to more than one."""
    columns = zip(*(e.l for e in exponent_tuple(k)))
    return sum(Fraction(1, sum(col)) for col in columns) > 1


def is_gorenstein_weights(w: WeightVector) -> bool:
    """
    For every split into `1+c` indices `I` and `d` complementary indices `J`,
    `gcd(w_I)` divides `sum(w_J)`.
    """
    total = sum(w.w)
    return all(total % _gcd_all(sub) == 0 for sub in combinations(w.w, 1 + w.c))


def is_true(k: WeightDegreeConstellation) -> bool:
    return all(m >= 2 * k.weights[-1] for m in k.mu)


def _head_size(c: int) -> int:
    return HEAD_SIZE.get(c, DEFAULT_HEAD_SIZE)


def tail_candidates(d: int, c: int, max_first: int) -> Set[Tuple[int, ...]]:
    """
    Descending exponent tails that extend to a full exponent vector passing the
    harmonic Fano bound `sum(1 / (c * l_i)) > 1` for some choice of the free leading
    entries (which are at least the first tail entry).

    For `c = 1` the tail is `(l3, l4, l5)`, otherwise `(l2, ..., l_{1+d+c})`.

    ## Parameters

    `d, c: int`
        Type of the weight vectors.
    `max_first: int`
        Cap for the first (largest) tail entry; at least 2.

    ## Returns

    The set of tails as tuples.
    """
    if max_first < 2:
        raise InputError(40108, "max_first must be at least 2", str(max_first))
    head = _head_size(c)
    length = 1 + d + c - head
    coefficients = [head + 1] + [1] * (length - 1)
    found: Set[Tuple[int, ...]] = set()

    def extend(position: int, suffix: Tuple[int, ...], partial: Fraction):
        lower = suffix[0] if suffix else 2
        left_weight = sum(coefficients[:position])
        for v in range(lower, max_first + 1):
            value = partial + Fraction(coefficients[position], v)
            if value + Fraction(left_weight, v) <= c:
                break
            if position == 0:
                found.add((v,) + suffix)
            else:
                extend(position - 1, (v,) + suffix, value)

    extend(length - 1, (), Fraction(0))
    return found


def _further_degrees(first: int, step: int, count: int, budget: int) -> Iterator[Tuple[int, ...]]:
    # nondecreasing multiples of `step`, at least `first`, summing to less than `budget`
    if count == 0:
        yield ()
        return
    start = -(-first // step) * step
    for m in range(start, budget, step):
        if m * count >= budget:
            break
        for rest in _further_degrees(m, step, count - 1, budget - m):
            yield (m,) + rest


def weights_for_tail(tail: Sequence[int], c: int, d: int = 3) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """
    Candidate `(weights, degrees)` whose smallest-degree exponent vector ends in `tail`.

    For `c = 1`, with `lam = lcm(tail)`, the weights are `(w1, w2, lam/l3 * om, lam/l4 * om,
    lam/l5 * om)` with `w1, w2 | lam` and `om | (w1 + w2) / gcd(w1, w2)`, the last bound
    holding for Gorenstein weights. Otherwise the first degree is `lcm(tail)`, the first
    exponent divides it, and the remaining degrees are multiples of `lcm(w)` below the
    Fano bound.

    Candidates are ascending but not yet filtered.
    """
    tail = tuple(tail)
    if c == 1:
        lam = _lcm_all(tail)
        scaled = tuple(lam // x for x in tail)
        options = divisors(lam)
        for i, w1 in enumerate(options):
            for w2 in options[i:]:
                for om in divisors((w1 + w2) // gcd(w1, w2)):
                    if w2 > scaled[0] * om:
                        continue
                    yield (w1, w2) + tuple(s * om for s in scaled), (lam * om,)
        return

    mu = _lcm_all(tail)
    for first in divisors(mu):
        if first < tail[0]:
            continue
        weights = tuple(mu // x for x in (first,) + tail)
        for rest in _further_degrees(mu, _lcm_all(weights), c - 1, sum(weights) - mu):
            yield weights, (mu,) + rest


def search_constellations(
    d: int, c: int, cutoff: Optional[int] = None, gorenstein: bool = True
) -> List[WeightDegreeConstellation]:
    """
    Runs the tail-bounded search for true Fano weight-degree constellations of type
    `(d, c)` with any `c >= 1`, optionally without the Gorenstein filter.
    """
    if d != 3:
        raise InputError(40109, "Only threefolds are supported", f"d={d}")
    if c < 1:
        raise InputError(40110, "Codimension must be positive", f"c={c}")
    cutoff = gtci.tail_cutoff if cutoff is None else cutoff
    found: Set[WeightDegreeConstellation] = set()
    for tail in tail_candidates(d, c, cutoff):
        for weights, degrees in weights_for_tail(tail, c, d):
            if not is_almost_free_weights(weights, d + c):
                continue
            k = WeightDegreeConstellation(WeightVector(weights, d, c), degrees)
            if is_true(k) and is_fano(k) and (not gorenstein or is_gorenstein_weights(k.w)):
                found.add(k)
    return sorted(found, key=WeightDegreeConstellation.sort_key)


def enumerate_constellations(d: int, c: int, cutoff: Optional[int] = None) -> List[WeightDegreeConstellation]:
    """
    Enumerates all true Gorenstein Fano weight-degree constellations of type `(d, c)`.

    ## Parameters

    `d: int`
        Target dimension, must be 3.
    `c: int`
        Codimension, one of 1, 2, 3.
    `cutoff: int, optional`
        Sweep bound for the unbounded exponent-tail families. Defaults to `gtci.tail_cutoff`.

    ## Returns

    The constellations, sorted by (weights, degrees).

    ## Raises

    `InputError` if `c` is not in {1, 2, 3} or `cutoff` is below `gtci.MIN_TAIL_CUTOFF`.
    """
    if c not in (1, 2, 3):
        raise InputError(40111, "Unsupported codimension", f"type ({d},{c})")
    cutoff = gtci.tail_cutoff if cutoff is None else cutoff
    if cutoff < gtci.MIN_TAIL_CUTOFF:
        raise InputError(40112, "Tail cutoff too small", f"{cutoff} < {gtci.MIN_TAIL_CUTOFF}")
    result = search_constellations(d, c, cutoff)
    gtci.logger.debug(f"Type ({d},{c}): {len(result)} constellations, tail cutoff {cutoff}")
    return result
