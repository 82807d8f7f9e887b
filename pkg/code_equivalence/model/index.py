"""Secure index coding: instances, codes and their exact evaluation."""
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

from code_equivalence.exceptions import DomainError, EvaluationError, ValidationError
from code_equivalence.model.base import BROADCAST_VAR, DECODED_VAR, KEY_VAR, \
    Eavesdropper, FeasibilityReport, check_unique, message_var, ordered
from code_equivalence.probinfo import JointPmf, Pmf, mutual_information
from code_equivalence.tables import Table
from code_equivalence.utils import product_space


class Receiver:

    def __init__(self, receiver_id, wants, has):
        self.receiver_id = str(receiver_id)  # type: str
        self.wants = tuple(str(w) for w in wants)  # type: Tuple[str, ...]
        self.has = tuple(str(h) for h in has)  # type: Tuple[str, ...]

    def __eq__(self, other):
        return isinstance(other, Receiver) \
            and self.receiver_id == other.receiver_id \
            and self.wants == other.wants \
            and self.has == other.has

    def __hash__(self):
        return hash((self.receiver_id, self.wants, self.has))

    def __repr__(self):
        return f'Receiver({self.receiver_id!r}, wants={self.wants}, has={self.has})'


class IndexInstance:

    def __init__(self, messages: Sequence[Tuple[str, int]], receivers: Sequence[Receiver],
                 eavesdroppers: Sequence[Eavesdropper] = ()):
        self.message_ids = tuple(str(m) for m, _ in messages)  # type: Tuple[str, ...]
        self.alphabet_sizes = {str(m): int(a) for m, a in messages}  # type: Dict[str, int]
        check_unique(self.message_ids, 'message')
        for mid, size in self.alphabet_sizes.items():
            if size < 1:
                raise DomainError(f'Message "{mid}" needs a positive alphabet size, got {size}')
        self.receivers = tuple(
            Receiver(r.receiver_id,
                     ordered(r.wants, self.message_ids, 'message'),
                     ordered(r.has, self.message_ids, 'message'))
            for r in receivers
        )  # type: Tuple[Receiver, ...]
        self.eavesdroppers = tuple(
            e.reordered(self.message_ids, self.message_ids, 'message')
            for e in eavesdroppers
        )  # type: Tuple[Eavesdropper, ...]
        check_unique([r.receiver_id for r in self.receivers], 'receiver')
        check_unique([e.eavesdropper_id for e in self.eavesdroppers], 'eavesdropper')
        for receiver in self.receivers:
            if len(receiver.wants) == 0:
                raise ValidationError('wants nonempty',
                                      f'Receiver "{receiver.receiver_id}" wants nothing')
            if set(receiver.wants) & set(receiver.has):
                raise ValidationError('wants and has disjoint',
                                      f'Receiver "{receiver.receiver_id}" already has '
                                      f'a message it wants')
        for eavesdropper in self.eavesdroppers:
            if set(eavesdropper.targets) & set(eavesdropper.observes):
                raise ValidationError('targets and side information disjoint',
                                      f'Eavesdropper "{eavesdropper.eavesdropper_id}" '
                                      f'observes one of its targets')
        self._receivers = {r.receiver_id: r for r in self.receivers}

    def receiver(self, receiver_id: str) -> Receiver:
        try:
            return self._receivers[receiver_id]
        except KeyError:
            raise DomainError(f'Unknown receiver "{receiver_id}"')

    def alphabet(self, message_id: str) -> int:
        try:
            return self.alphabet_sizes[message_id]
        except KeyError:
            raise DomainError(f'Unknown message "{message_id}"')

    def uniform_pmfs(self) -> Dict[str, Pmf]:
        return {m: Pmf.uniform(self.alphabet_sizes[m]) for m in self.message_ids}

    def __eq__(self, other):
        return isinstance(other, IndexInstance) \
            and self.message_ids == other.message_ids \
            and self.alphabet_sizes == other.alphabet_sizes \
            and self.receivers == other.receivers \
            and self.eavesdroppers == other.eavesdroppers

    def __repr__(self):
        return f'IndexInstance(messages={len(self.message_ids)}, ' \
               f'receivers={len(self.receivers)}, eavesdroppers={len(self.eavesdroppers)})'


class IndexCode:
    """Encoder ``(messages..., key) -> codeword`` and per-receiver decoders
    ``(codeword, side information...) -> estimates``.

    A code is deterministic when its key has a single outcome.
    """

    def __init__(self, codeword_bits: int, encoder: Table, decoders: Mapping[str, Table],
                 key_pmf: Optional[Pmf] = None, linear: bool = False):
        if codeword_bits < 0:
            raise DomainError(f'Codeword length must be nonnegative, got {codeword_bits}')
        self.codeword_bits = codeword_bits  # type: int
        self.encoder = encoder  # type: Table
        self.decoders = dict(decoders)  # type: Dict[str, Table]
        self.key_pmf = key_pmf or Pmf.point(1)  # type: Pmf
        self.linear = linear  # type: bool

    @property
    def codeword_size(self) -> int:
        return 2 ** self.codeword_bits

    @property
    def key_size(self) -> int:
        return self.key_pmf.support_size

    @property
    def is_deterministic(self) -> bool:
        return self.key_size == 1

    def encode(self, messages: Tuple[int, ...], key: int = 0) -> int:
        codeword = self.encoder(*messages, key)
        if not isinstance(codeword, int) or not 0 <= codeword < self.codeword_size:
            raise EvaluationError(f'Encoder output {codeword!r} for input {messages + (key,)} '
                                  f'is outside [2^{self.codeword_bits}]')
        return codeword

    def decode(self, receiver_id: str, codeword: int, side: Tuple[int, ...]) -> Tuple[int, ...]:
        try:
            decoder = self.decoders[receiver_id]
        except KeyError:
            raise EvaluationError(f'No decoder for receiver "{receiver_id}"')
        return tuple(decoder(codeword, *side))

    def validate_for(self, instance: IndexInstance):
        expected = tuple(instance.alphabet(m) for m in instance.message_ids) + (self.key_size,)
        if self.encoder.input_sizes != expected:
            raise EvaluationError(f'Encoder domain {self.encoder.input_sizes} does not match '
                                  f'message alphabets and key {expected}')
        for receiver in instance.receivers:
            decoder = self.decoders.get(receiver.receiver_id)
            if decoder is None:
                raise EvaluationError(f'No decoder for receiver "{receiver.receiver_id}"')
            expected = (self.codeword_size,) + tuple(instance.alphabet(h) for h in receiver.has)
            if decoder.input_sizes != expected:
                raise EvaluationError(f'Decoder of receiver "{receiver.receiver_id}" has domain '
                                      f'{decoder.input_sizes}, expected {expected}')

    def __eq__(self, other):
        return isinstance(other, IndexCode) \
            and self.codeword_bits == other.codeword_bits \
            and self.encoder == other.encoder \
            and self.decoders == other.decoders \
            and self.key_pmf == other.key_pmf \
            and self.linear == other.linear

    def __repr__(self):
        return f'IndexCode(bits={self.codeword_bits}, key={self.key_size}, ' \
               f'decoders={sorted(self.decoders)})'


def decodes_all(instance: IndexInstance, code: IndexCode, messages: Tuple[int, ...],
                codeword: int) -> bool:
    """Whether every receiver recovers what it wants from ``codeword``."""
    values = dict(zip(instance.message_ids, messages))
    for receiver in instance.receivers:
        side = tuple(values[h] for h in receiver.has)
        truth = tuple(values[w] for w in receiver.wants)
        if code.decode(receiver.receiver_id, codeword, side) != truth:
            return False
    return True


def _check_pmfs(instance: IndexInstance, msg_pmfs: Mapping[str, Pmf]):
    for mid in instance.message_ids:
        if mid not in msg_pmfs:
            raise DomainError(f'No pmf given for message "{mid}"')
        if msg_pmfs[mid].support_size != instance.alphabet(mid):
            raise DomainError(f'Pmf of message "{mid}" has {msg_pmfs[mid].support_size} '
                              f'outcomes, alphabet has {instance.alphabet(mid)}')


def _realizations(instance: IndexInstance, code: IndexCode, msg_pmfs: Mapping[str, Pmf]) \
        -> Iterator[Tuple[Tuple[int, ...], int, Fraction]]:
    joint = JointPmf.independent({m: msg_pmfs[m] for m in instance.message_ids})
    for messages, weight in joint.items():
        for key, key_weight in code.key_pmf.support():
            yield messages, key, weight * key_weight


def index_joint(instance: IndexInstance, code: IndexCode,
                msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> JointPmf:
    """Joint of the messages, the key, the broadcast codeword and decode success."""
    msg_pmfs = msg_pmfs if msg_pmfs is not None else instance.uniform_pmfs()
    _check_pmfs(instance, msg_pmfs)
    code.validate_for(instance)

    def outcomes():
        for messages, key, weight in _realizations(instance, code, msg_pmfs):
            codeword = code.encode(messages, key)
            decoded = int(decodes_all(instance, code, messages, codeword))
            yield messages + (key, codeword, decoded), weight

    return JointPmf.accumulate(
        variable_ids=[message_var(m) for m in instance.message_ids]
        + [KEY_VAR, BROADCAST_VAR, DECODED_VAR],
        alphabet_sizes=[instance.alphabet(m) for m in instance.message_ids]
        + [code.key_size, code.codeword_size, 2],
        outcomes=outcomes(),
    )


def error_from_joint(joint: JointPmf) -> Fraction:
    return joint.probability({DECODED_VAR: 0})


def leakage_from_joint(instance: IndexInstance, joint: JointPmf) -> Dict[str, float]:
    return {
        e.eavesdropper_id: mutual_information(
            joint,
            [message_var(a) for a in e.targets],
            [BROADCAST_VAR] + [message_var(b) for b in e.observes],
        )
        for e in instance.eavesdroppers
    }


def eval_index_error(instance: IndexInstance, code: IndexCode,
                     msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> Fraction:
    return error_from_joint(index_joint(instance, code, msg_pmfs))


def eval_index_leakage(instance: IndexInstance, code: IndexCode,
                       msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> Dict[str, float]:
    return leakage_from_joint(instance, index_joint(instance, code, msg_pmfs))


def check_index_feasible(instance: IndexInstance, code: IndexCode,
                         msg_pmfs: Optional[Mapping[str, Pmf]], epsilon, eta) \
        -> FeasibilityReport:
    joint = index_joint(instance, code, msg_pmfs)
    return FeasibilityReport(
        error=error_from_joint(joint),
        leakage=leakage_from_joint(instance, joint),
        epsilon=epsilon,
        eta=eta,
    )


def is_gf2_linear(instance: IndexInstance, code: IndexCode) -> bool:
    """Whether a deterministic encoder is linear over GF(2) on the message bits.

    Messages are read as little-endian bit vectors concatenated in message
    order; every alphabet must be a power of two.
    """
    if not code.is_deterministic:
        return False
    widths = []
    for mid in instance.message_ids:
        size = instance.alphabet(mid)
        if size & (size - 1):
            return False
        widths.append(size.bit_length() - 1)

    def unpack(vector: int) -> Tuple[int, ...]:
        values = []
        for width in widths:
            values.append(vector & ((1 << width) - 1))
            vector >>= width
        return tuple(values)

    total = sum(widths)
    basis = [code.encode(unpack(1 << i)) for i in range(total)]
    if code.encode(unpack(0)) != 0:
        return False
    for vector in range(1 << total):
        expected = 0
        for i in range(total):
            if vector >> i & 1:
                expected ^= basis[i]
        if code.encode(unpack(vector)) != expected:
            return False
    return True


def message_space(instance: IndexInstance, message_ids: Sequence[str]):
    return product_space([instance.alphabet(m) for m in message_ids])
