from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from code_equivalence.consts import EQUALITY_TOLERANCE
from code_equivalence.exceptions import StructuralError, ValidationError
from code_equivalence.utils import fraction_str, parse_fraction

KEY_VAR = 'key'
BROADCAST_VAR = 'broadcast'
DECODED_VAR = 'decoded'


def message_var(message_id: str) -> str:
    return f'msg:{message_id}'


def key_var(vertex: str) -> str:
    return f'key:{vertex}'


def edge_var(edge_id: str) -> str:
    return f'edge:{edge_id}'


def ordered(items: Iterable[str], order: Sequence[str], what: str) -> Tuple[str, ...]:
    """Deduplicate ``items`` and sort them by their position in ``order``."""
    position = {item: i for i, item in enumerate(order)}
    result = []
    for item in items:
        if item not in position:
            raise StructuralError(f'Unknown {what} "{item}"')
        if item not in result:
            result.append(item)
    return tuple(sorted(result, key=position.__getitem__))


def check_unique(ids: Sequence[str], what: str):
    seen = set()
    for item in ids:
        if item in seen:
            raise ValidationError(
                invariant=f'{what} ids defined exactly once',
                message=f'Duplicate {what} id "{item}"',
            )
        seen.add(item)


class Eavesdropper:
    """Adversary with target messages and observed resources.

    For index coding ``observes`` lists side-information messages, for
    network coding it lists tapped edges.
    """

    def __init__(self, eavesdropper_id, targets, observes):
        self.eavesdropper_id = str(eavesdropper_id)  # type: str
        self.targets = tuple(str(t) for t in targets)  # type: Tuple[str, ...]
        self.observes = tuple(str(o) for o in observes)  # type: Tuple[str, ...]

    def reordered(self, target_order: Sequence[str], observe_order: Sequence[str],
                  observe_what: str) -> 'Eavesdropper':
        return Eavesdropper(
            eavesdropper_id=self.eavesdropper_id,
            targets=ordered(self.targets, target_order, 'message'),
            observes=ordered(self.observes, observe_order, observe_what),
        )

    def __eq__(self, other):
        return isinstance(other, Eavesdropper) \
            and self.eavesdropper_id == other.eavesdropper_id \
            and self.targets == other.targets \
            and self.observes == other.observes

    def __hash__(self):
        return hash((self.eavesdropper_id, self.targets, self.observes))

    def __repr__(self):
        return f'Eavesdropper({self.eavesdropper_id!r}, targets={self.targets}, ' \
               f'observes={self.observes})'


class FeasibilityReport:

    def __init__(self, error: Fraction, leakage: Mapping[str, float], epsilon, eta):
        self.error = error  # type: Fraction
        self.leakage = dict(leakage)  # type: Dict[str, float]
        self.epsilon = parse_fraction(epsilon)  # type: Fraction
        self.eta = float(eta)  # type: float

    @property
    def error_ok(self) -> bool:
        return self.error <= self.epsilon

    @property
    def leakage_ok(self) -> bool:
        return all(value <= self.eta + EQUALITY_TOLERANCE for value in self.leakage.values())

    @property
    def feasible(self) -> bool:
        return self.error_ok and self.leakage_ok

    def __bool__(self):
        return self.feasible

    def as_dict(self) -> dict:
        return {
            'feasible': self.feasible,
            'error': fraction_str(self.error),
            'epsilon': fraction_str(self.epsilon),
            'errorWithinEpsilon': self.error_ok,
            'leakage': dict(self.leakage),
            'eta': self.eta,
            'leakageWithinEta': self.leakage_ok,
        }
