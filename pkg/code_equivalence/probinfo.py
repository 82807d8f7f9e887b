"""Exact finite distributions and the information measures built on them.

Probabilities are kept as :class:`fractions.Fraction` so that error
probabilities compare exactly; only the logarithms in entropies and mutual
informations are floating point.
"""
import math

from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

from code_equivalence.consts import NUMERIC_TOLERANCE
from code_equivalence.exceptions import DomainError, NullEventError
from code_equivalence.utils import parse_fraction

Outcome = Tuple[int, ...]
VarSet = Iterable[str]


class Pmf:
    """Probability mass function over the outcomes ``0 .. support_size-1``."""

    def __init__(self, weights: Iterable):
        self._weights = tuple(parse_fraction(w) for w in weights)
        if len(self._weights) == 0:
            raise DomainError('Pmf needs at least one outcome')
        if any(w < 0 for w in self._weights):
            raise DomainError(f'Pmf weights must be nonnegative, got {self}')
        total = sum(self._weights, Fraction(0))
        if total != 1:
            raise DomainError(f'Pmf weights sum to {total}, expected exactly 1')

    @staticmethod
    def uniform(size: int) -> 'Pmf':
        if size < 1:
            raise DomainError(f'Uniform pmf needs a positive size, got {size}')
        return Pmf([Fraction(1, size)] * size)

    @staticmethod
    def point(size: int = 1, outcome: int = 0) -> 'Pmf':
        if not 0 <= outcome < size:
            raise DomainError(f'Outcome {outcome} outside alphabet of size {size}')
        return Pmf([Fraction(int(i == outcome)) for i in range(size)])

    @property
    def weights(self) -> Tuple[Fraction, ...]:
        return self._weights

    @property
    def support_size(self) -> int:
        return len(self._weights)

    @property
    def is_uniform(self) -> bool:
        return all(w == self._weights[0] for w in self._weights)

    def support(self) -> Iterator[Tuple[int, Fraction]]:
        """Outcomes with positive probability, in outcome order."""
        return ((x, w) for x, w in enumerate(self._weights) if w > 0)

    def __getitem__(self, outcome: int) -> Fraction:
        return self._weights[outcome]

    def __len__(self):
        return len(self._weights)

    def __eq__(self, other):
        return isinstance(other, Pmf) and self._weights == other._weights

    def __hash__(self):
        return hash(self._weights)

    def __repr__(self):
        return f'Pmf([{", ".join(str(w) for w in self._weights)}])'


class JointPmf:
    """Joint pmf of named finite variables, storing only positive weights."""

    def __init__(self, variable_ids: Sequence[str], alphabet_sizes: Sequence[int],
                 weights: Mapping[Outcome, Union[Fraction, int]]):
        self.variable_ids = tuple(variable_ids)
        self.alphabet_sizes = tuple(alphabet_sizes)
        if len(set(self.variable_ids)) != len(self.variable_ids):
            raise DomainError(f'Duplicate variable ids in {self.variable_ids}')
        if len(self.variable_ids) != len(self.alphabet_sizes):
            raise DomainError('Every variable needs exactly one alphabet size')
        if any(size < 1 for size in self.alphabet_sizes):
            raise DomainError(f'Alphabet sizes must be positive, got {self.alphabet_sizes}')
        self._index = {v: i for i, v in enumerate(self.variable_ids)}
        self._weights = dict()  # type: Dict[Outcome, Fraction]
        total = Fraction(0)
        for outcome, weight in weights.items():
            weight = Fraction(weight)
            if weight < 0:
                raise DomainError(f'Negative weight {weight} for outcome {outcome}')
            if weight == 0:
                continue
            outcome = tuple(outcome)
            if len(outcome) != len(self.variable_ids) or \
                    any(not 0 <= x < s for x, s in zip(outcome, self.alphabet_sizes)):
                raise DomainError(f'Outcome {outcome} outside alphabets {self.alphabet_sizes}')
            self._weights[outcome] = weight
            total += weight
        if total != 1:
            raise DomainError(f'Joint weights sum to {total}, expected exactly 1')

    @classmethod
    def accumulate(cls, variable_ids: Sequence[str], alphabet_sizes: Sequence[int],
                   outcomes: Iterable[Tuple[Outcome, Fraction]]) -> 'JointPmf':
        """Build a joint from (outcome, weight) pairs, summing repeated outcomes."""
        weights = dict()  # type: Dict[Outcome, Fraction]
        for outcome, weight in outcomes:
            weights[outcome] = weights.get(outcome, Fraction(0)) + weight
        return cls(variable_ids, alphabet_sizes, weights)

    @classmethod
    def independent(cls, pmfs: Mapping[str, Pmf]) -> 'JointPmf':
        variable_ids = tuple(pmfs.keys())
        outcomes = [((), Fraction(1))]  # type: list
        for var in variable_ids:
            outcomes = [(prefix + (x,), weight * w)
                        for prefix, weight in outcomes
                        for x, w in pmfs[var].support()]
        return cls(variable_ids, [pmfs[v].support_size for v in variable_ids], dict(outcomes))

    def positions(self, variables: VarSet) -> Tuple[int, ...]:
        positions = set()
        for var in variables:
            if var not in self._index:
                raise DomainError(f'Unknown variable id "{var}"')
            positions.add(self._index[var])
        return tuple(sorted(positions))

    def items(self) -> Iterator[Tuple[Outcome, Fraction]]:
        return iter(self._weights.items())

    def marginal_weights(self, variables: VarSet) -> Dict[Outcome, Fraction]:
        positions = self.positions(variables)
        result = dict()  # type: Dict[Outcome, Fraction]
        for outcome, weight in self._weights.items():
            key = tuple(outcome[p] for p in positions)
            result[key] = result.get(key, Fraction(0)) + weight
        return result

    def marginal(self, variables: VarSet) -> 'JointPmf':
        positions = self.positions(variables)
        return JointPmf(
            variable_ids=[self.variable_ids[p] for p in positions],
            alphabet_sizes=[self.alphabet_sizes[p] for p in positions],
            weights=self.marginal_weights(self.variable_ids[p] for p in positions),
        )

    def pmf(self, variable: str) -> Pmf:
        position = self.positions([variable])[0]
        weights = self.marginal_weights([variable])
        return Pmf(weights.get((x,), Fraction(0)) for x in range(self.alphabet_sizes[position]))

    def _matches(self, assignment: Mapping[str, int]):
        checks = [(self._index[v], x) for v, x in assignment.items()]
        return lambda outcome: all(outcome[p] == x for p, x in checks)

    def probability(self, assignment: Mapping[str, int]) -> Fraction:
        self.positions(assignment.keys())
        matches = self._matches(assignment)
        return sum((w for o, w in self._weights.items() if matches(o)), Fraction(0))

    def condition(self, assignment: Mapping[str, int]) -> 'JointPmf':
        """Renormalized joint given that every variable in ``assignment`` takes its value."""
        mass = self.probability(assignment)
        if mass == 0:
            raise NullEventError(f'Conditioning on a null event {dict(assignment)}')
        matches = self._matches(assignment)
        return JointPmf(
            variable_ids=self.variable_ids,
            alphabet_sizes=self.alphabet_sizes,
            weights={o: w / mass for o, w in self._weights.items() if matches(o)},
        )

    def __eq__(self, other):
        return isinstance(other, JointPmf) \
            and self.variable_ids == other.variable_ids \
            and self.alphabet_sizes == other.alphabet_sizes \
            and self._weights == other._weights

    def __repr__(self):
        return f'JointPmf({self.variable_ids}, {len(self._weights)} outcomes)'


def entropy(p: JointPmf, variables: VarSet) -> float:
    total = 0.0
    for weight in p.marginal_weights(variables).values():
        q = float(weight)
        total -= q * math.log2(q)
    return max(total, 0.0)


def _clamp(value: float) -> float:
    if -NUMERIC_TOLERANCE < value < 0:
        return 0.0
    return value


def mutual_information(p: JointPmf, a: VarSet, b: VarSet) -> float:
    a, b = set(a), set(b)
    return _clamp(entropy(p, a) + entropy(p, b) - entropy(p, a | b))


def conditional_mutual_information(p: JointPmf, a: VarSet, b: VarSet, c: VarSet) -> float:
    a, b, c = set(a), set(b), set(c)
    return _clamp(entropy(p, a | c) + entropy(p, b | c) - entropy(p, a | b | c) - entropy(p, c))


def conditional_mi_given_event(p: JointPmf, a: VarSet, b: VarSet,
                               cond: Mapping[str, int]) -> float:
    return mutual_information(p.condition(cond), a, b)


def total_variation(p: Pmf, q: Pmf) -> Fraction:
    if p.support_size != q.support_size:
        raise DomainError(f'Total variation needs equal supports, got '
                          f'{p.support_size} and {q.support_size}')
    return sum((abs(x - y) for x, y in zip(p.weights, q.weights)), Fraction(0)) / 2


def binary_entropy(epsilon: Union[float, Fraction]) -> float:
    epsilon = float(epsilon)
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f'Binary entropy needs a probability, got {epsilon}')
    if epsilon in (0.0, 1.0):
        return 0.0
    return -epsilon * math.log2(epsilon) - (1 - epsilon) * math.log2(1 - epsilon)
