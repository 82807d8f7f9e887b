"""Network codes instantiated from an index code at a fixed broadcast value.

For an index instance mapped from a deterministic network ``N'`` the index
decoders of the edge receivers become the network encoders and the decoders
of the destination receivers become the network decoders once the broadcast
is pinned to ``sigma``.
"""
import math

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Set, Tuple

from code_equivalence.consts import EQUALITY_TOLERANCE, NUMERIC_TOLERANCE
from code_equivalence.exceptions import DomainError, HypothesisError, InstanceMismatchError, \
    PreconditionError
from code_equivalence.logging import LOGGER
from code_equivalence.mapping import edge_message_id, edge_receiver_id, network_to_index, \
    split_index_messages, vertex_receiver_id
from code_equivalence.model.base import BROADCAST_VAR, DECODED_VAR, edge_var, message_var
from code_equivalence.model.index import IndexCode, IndexInstance, decodes_all, index_joint, \
    message_space
from code_equivalence.model.network import NetworkCode, NetworkInstance, network_joint, \
    leakage_from_joint as network_leakage_from_joint, propagate
from code_equivalence.probinfo import JointPmf, Pmf, conditional_mutual_information, entropy, \
    mutual_information
from code_equivalence.tables import Table
from code_equivalence.utils import fraction_str, space_size

LOG2_E = math.log2(math.e)

Realization = Tuple[int, ...]


def _require_deterministic(code: IndexCode):
    if not code.is_deterministic:
        raise PreconditionError('Index code must be deterministic')


def _check_sigma(code: IndexCode, sigma: int):
    if not isinstance(sigma, int) or not 0 <= sigma < code.codeword_size:
        raise DomainError(f'Broadcast value {sigma!r} outside [2^{code.codeword_bits}]')


class DecodingMap:
    """For every source realization, the decodable edge realizations by broadcast value."""

    def __init__(self, instance: IndexInstance, code: IndexCode):
        _require_deterministic(code)
        code.validate_for(instance)
        self.instance = instance
        self.code = code
        self.source_ids, self.edge_ids = split_index_messages(instance)
        # source realization -> broadcast value -> decodable edge realizations
        self.preimages = dict()  # type: Dict[Realization, Dict[int, List[Realization]]]
        for sources in message_space(instance, self.source_ids):
            by_sigma = dict()  # type: Dict[int, List[Realization]]
            for edges in message_space(instance, self.edge_ids):
                messages = sources + edges
                codeword = code.encode(messages)
                if decodes_all(instance, code, messages, codeword):
                    by_sigma.setdefault(codeword, []).append(edges)
            self.preimages[sources] = by_sigma

    @property
    def source_count(self) -> int:
        return space_size([self.instance.alphabet(m) for m in self.source_ids])

    def decodable(self, sources: Realization) -> Set[Realization]:
        try:
            by_sigma = self.preimages[tuple(sources)]
        except KeyError:
            raise DomainError(f'Source realization {sources} outside the source alphabets')
        return {edges for group in by_sigma.values() for edges in group}

    def good_sources(self, sigma: int) -> Set[Realization]:
        return {s for s, by_sigma in self.preimages.items() if by_sigma.get(sigma)}

    def complement_fraction(self, sigma: int) -> Fraction:
        return 1 - Fraction(len(self.good_sources(sigma)), self.source_count)


def decodable_set(instance: IndexInstance, code: IndexCode,
                  sources: Realization) -> Set[Realization]:
    """Edge realizations for which every receiver decodes correctly given ``sources``."""
    return DecodingMap(instance, code).decodable(sources)


def check_proposition1(instance: IndexInstance, code: IndexCode) \
        -> List[Tuple[Realization, int, List[Realization]]]:
    """All ``(sources, sigma, edges)`` where two decodable edge realizations share a broadcast."""
    decoding = DecodingMap(instance, code)
    violations = []
    for sources, by_sigma in decoding.preimages.items():
        for sigma, group in sorted(by_sigma.items()):
            if len(group) > 1:
                violations.append((sources, sigma, group))
    return violations


def proposition2_witness(instance: IndexInstance, code: IndexCode) -> Tuple[int, Fraction]:
    """Broadcast value decodable for the most source realizations, with that fraction."""
    decoding = DecodingMap(instance, code)
    best_sigma, best = 0, -1
    for sigma in range(code.codeword_size):
        count = len(decoding.good_sources(sigma))
        if count > best:
            best_sigma, best = sigma, count
    return best_sigma, Fraction(best, decoding.source_count)


class SigmaNetworkCode:

    def __init__(self, network: NetworkInstance, code: NetworkCode, sigma: int):
        self.network = network
        self.code = code
        self.sigma = sigma

    def phi(self, sources: Realization) -> Realization:
        """Edge values in edge order for a realization of the network messages."""
        values = propagate(self.network, self.code, dict(zip(self.network.message_ids, sources)))
        return tuple(values[e] for e in self.network.edge_ids)


def _side_inputs(network: NetworkInstance, vertex: str, inputs: Tuple[int, ...]) \
        -> Dict[str, int]:
    in_edges = network.in_edges(vertex)
    values = {edge_message_id(d.edge_id): x for d, x in zip(in_edges, inputs)}
    values.update(zip(network.origin_messages(vertex), inputs[len(in_edges):]))
    return values


def build_network_code_from_sigma(network: NetworkInstance, instance: IndexInstance,
                                  code: IndexCode, sigma: int, uses: int) -> SigmaNetworkCode:
    _require_deterministic(code)
    _check_sigma(code, sigma)
    code.validate_for(instance)
    expected, _ = network_to_index(network, uses)
    if expected != instance:
        raise InstanceMismatchError('Index instance is not the image of the network')
    template = NetworkCode(uses, {}, {})

    encoders = dict()  # type: Dict[str, Table]
    for edge in network.edges:
        receiver = instance.receiver(edge_receiver_id(edge.edge_id))

        def encode(*inputs, receiver=receiver, tail=edge.tail):
            values = _side_inputs(network, tail, inputs[:-1])
            side = tuple(values[h] for h in receiver.has)
            return code.decode(receiver.receiver_id, sigma, side)[0]

        encoders[edge.edge_id] = Table.tabulate(template.encoder_domain(network, edge), encode,
                                                name=f'e[{edge.edge_id}]')
    decoders = dict()  # type: Dict[str, Table]
    for vertex in network.destinations:
        receiver = instance.receiver(vertex_receiver_id(vertex))

        def decode(*inputs, receiver=receiver, vertex=vertex):
            values = _side_inputs(network, vertex, inputs)
            side = tuple(values[h] for h in receiver.has)
            return code.decode(receiver.receiver_id, sigma, side)

        decoders[vertex] = Table.tabulate(template.decoder_domain(network, vertex), decode,
                                          name=f'd[{vertex}]')
    LOGGER.debug(f'Built network code from broadcast value {sigma}')
    return SigmaNetworkCode(network, NetworkCode(uses, encoders, decoders), sigma)


class SigmaDiagnostics:

    def __init__(self, objectives: Mapping[int, float], complements: Mapping[int, Fraction],
                 broadcast_pmf: Pmf, leakage_terms: Mapping[int, Mapping[str, float]]):
        self.objectives = dict(objectives)  # type: Dict[int, float]
        self.complements = dict(complements)  # type: Dict[int, Fraction]
        self.broadcast_pmf = broadcast_pmf  # type: Pmf
        self.leakage_terms = {s: dict(t) for s, t in leakage_terms.items()}

    @property
    def averaged_complement(self) -> Fraction:
        return sum((self.broadcast_pmf[s] * c for s, c in self.complements.items()), Fraction(0))

    def as_dict(self) -> dict:
        return {
            'objectives': {s: self.objectives[s] for s in sorted(self.objectives)},
            'complements': {s: fraction_str(self.complements[s])
                            for s in sorted(self.complements)},
            'averagedComplement': fraction_str(self.averaged_complement),
            'leakageTerms': {s: self.leakage_terms[s] for s in sorted(self.leakage_terms)},
        }


def _uniform_pmfs(instance: IndexInstance, msg_pmfs: Optional[Mapping[str, Pmf]]):
    if msg_pmfs is None:
        return instance.uniform_pmfs()
    for mid in instance.message_ids:
        if mid in msg_pmfs and not msg_pmfs[mid].is_uniform:
            raise HypothesisError(f'Message "{mid}" must be uniformly distributed')
    return dict(msg_pmfs)


def _leakage_term(conditioned: JointPmf, targets, observed) -> float:
    """Decodability-weighted leakage of one eavesdropper at a fixed broadcast value."""
    term = mutual_information(conditioned, targets, [DECODED_VAR]) \
        - conditional_mutual_information(conditioned, targets, [DECODED_VAR], observed)
    for decoded in (0, 1):
        weight = conditioned.probability({DECODED_VAR: decoded})
        if weight > 0:
            term += float(weight) * mutual_information(
                conditioned.condition({DECODED_VAR: decoded}), targets, observed)
    return term


def select_sigma(instance: IndexInstance, code: IndexCode,
                 msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> Tuple[int, SigmaDiagnostics]:
    """Broadcast value minimizing the decoding complement plus the leakage terms.

    Only values broadcast with positive probability compete; the smallest
    value wins ties.
    """
    pmfs = _uniform_pmfs(instance, msg_pmfs)
    decoding = DecodingMap(instance, code)
    joint = index_joint(instance, code, pmfs)
    broadcast = joint.pmf(BROADCAST_VAR)

    objectives, complements, terms = dict(), dict(), dict()
    best = None  # type: Optional[int]
    for sigma, weight in broadcast.support():
        conditioned = joint.condition({BROADCAST_VAR: sigma})
        complements[sigma] = decoding.complement_fraction(sigma)
        terms[sigma] = {
            e.eavesdropper_id: _leakage_term(conditioned,
                                             [message_var(a) for a in e.targets],
                                             [message_var(b) for b in e.observes])
            for e in instance.eavesdroppers
        }
        objectives[sigma] = float(complements[sigma]) + sum(terms[sigma].values())
        LOGGER.debug(f'Broadcast value {sigma}: objective {objectives[sigma]}')
        if best is None or objectives[sigma] < objectives[best] - NUMERIC_TOLERANCE:
            best = sigma
    if best is None:
        raise PreconditionError('No broadcast value has positive probability')
    return best, SigmaDiagnostics(objectives, complements, broadcast, terms)


class Lemma1Check:

    def __init__(self, epsilon_prime: Fraction, lhs: float, rhs: float,
                 prop3_lhs: float, prop3_rhs: float, prop4_lhs: float, prop4_rhs: float):
        self.epsilon_prime = epsilon_prime
        self.lhs = lhs
        self.rhs = rhs
        self.prop3_lhs = prop3_lhs
        self.prop3_rhs = prop3_rhs
        self.prop4_lhs = prop4_lhs
        self.prop4_rhs = prop4_rhs

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + EQUALITY_TOLERANCE

    @property
    def prop3_holds(self) -> bool:
        return self.prop3_lhs <= self.prop3_rhs + EQUALITY_TOLERANCE

    @property
    def prop4_holds(self) -> bool:
        return self.prop4_lhs <= self.prop4_rhs + EQUALITY_TOLERANCE

    @property
    def all_hold(self) -> bool:
        return self.holds and self.prop3_holds and self.prop4_holds

    def as_dict(self) -> dict:
        return {
            'epsilonPrime': fraction_str(self.epsilon_prime),
            'lemma': {'lhs': self.lhs, 'rhs': self.rhs, 'holds': self.holds},
            'entropyOfObservations': {'lhs': self.prop3_lhs, 'rhs': self.prop3_rhs,
                                      'holds': self.prop3_holds},
            'conditionalEntropy': {'lhs': self.prop4_lhs, 'rhs': self.prop4_rhs,
                                   'holds': self.prop4_holds},
        }


def check_lemma1(network: NetworkInstance, instance: IndexInstance, code: IndexCode,
                 sigma: int, eavesdropper_id: str, uses: int) -> Lemma1Check:
    """Compare the network leakage at ``sigma`` with the leakage among good realizations.

    Messages of both instances are uniform.
    """
    _check_sigma(code, sigma)
    decoding = DecodingMap(instance, code)
    epsilon_prime = decoding.complement_fraction(sigma)
    if epsilon_prime == 1:
        raise PreconditionError(f'No source realization decodes at broadcast value {sigma}')
    index_eve = next((e for e in instance.eavesdroppers if e.eavesdropper_id == eavesdropper_id),
                     None)
    network_eve = next((e for e in network.eavesdroppers if e.eavesdropper_id == eavesdropper_id),
                       None)
    if index_eve is None or network_eve is None:
        raise DomainError(f'Unknown eavesdropper "{eavesdropper_id}"')

    built = build_network_code_from_sigma(network, instance, code, sigma, uses)
    network_side = network_joint(network, built.code, network.uniform_pmfs())
    targets = [message_var(a) for a in network_eve.targets]
    observed = [edge_var(b) for b in network_eve.observes]
    lhs = network_leakage_from_joint(network, network_side)[eavesdropper_id]

    good = index_joint(instance, code).condition({BROADCAST_VAR: sigma, DECODED_VAR: 1})
    index_targets = [message_var(a) for a in index_eve.targets]
    index_observed = [message_var(b) for b in index_eve.observes]
    good_leakage = mutual_information(good, index_targets, index_observed)

    eps = float(epsilon_prime)
    log_sources = math.log2(decoding.source_count)
    slack3 = eps * log_sources - math.log2(1 - eps)
    slack4 = eps / (1 - eps) * (LOG2_E + code.codeword_bits)

    prop3_lhs = entropy(network_side, observed) - entropy(good, index_observed)
    prop4_lhs = (entropy(good, index_targets + index_observed) - entropy(good, index_targets)) \
        - (entropy(network_side, targets + observed) - entropy(network_side, targets))
    return Lemma1Check(
        epsilon_prime=epsilon_prime,
        lhs=lhs,
        rhs=good_leakage + slack3 + slack4,
        prop3_lhs=prop3_lhs,
        prop3_rhs=slack3,
        prop4_lhs=prop4_lhs,
        prop4_rhs=slack4,
    )

