"""Seeded random instances and codes, plus the two worked examples.

Everything here draws from the ``random.Random`` handed to
:class:`CodeGenerator`, so a seed string reproduces a trial exactly.
"""
import functools
import random

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import networkx  # type: ignore

from code_equivalence.consts import MAX_GENERATION_ATTEMPTS
from code_equivalence.exceptions import PreconditionError
from code_equivalence.logging import LOGGER
from code_equivalence.mapping import RELAY_IN, RELAY_OUT, index_to_network, network_to_index
from code_equivalence.model.base import Eavesdropper
from code_equivalence.model.index import IndexCode, IndexInstance, Receiver, eval_index_error
from code_equivalence.model.network import Edge, Message, NetworkCode, NetworkInstance, \
    augment, default_edge_id, eval_network_error, normalize_instance, propagate
from code_equivalence.probinfo import JointPmf, Pmf
from code_equivalence.tables import Table
from code_equivalence.translation.codes import translate_n2i_code
from code_equivalence.translation.sigma import DecodingMap
from code_equivalence.utils import product_space

MAX_VERTICES = 4
MAX_EDGES = 4
MAX_EDGE_BITS = 3
MAX_CODEWORD_BITS = 3
MAX_KEY_SIZE = 2


def _map_table(sizes: Sequence[int], samples, width: int, name: str) -> Table:
    """Decoder answering, for every input, the most likely estimate (smallest on ties)."""
    scores = dict()  # type: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Fraction]]
    for inputs, wanted, weight in samples:
        row = scores.setdefault(inputs, {})
        row[wanted] = row.get(wanted, Fraction(0)) + weight
    entries = dict()
    for inputs in product_space(sizes):
        row = scores.get(inputs)
        if row is None:
            entries[inputs] = (0,) * width
        else:
            entries[inputs] = min(row.items(), key=lambda item: (-item[1], item[0]))[0]
    return Table(sizes, entries, name=name)


def optimal_index_decoders(instance: IndexInstance, encoder: Table, key_pmf: Pmf,
                           codeword_bits: int) -> Dict[str, Table]:
    joint = JointPmf.independent(instance.uniform_pmfs())
    samples = {r.receiver_id: [] for r in instance.receivers}  # type: Dict[str, List]
    for messages, weight in joint.items():
        values = dict(zip(instance.message_ids, messages))
        for key, key_weight in key_pmf.support():
            codeword = encoder(*messages, key)
            for receiver in instance.receivers:
                samples[receiver.receiver_id].append((
                    (codeword,) + tuple(values[h] for h in receiver.has),
                    tuple(values[w] for w in receiver.wants),
                    weight * key_weight,
                ))
    return {
        r.receiver_id: _map_table([2 ** codeword_bits] + [instance.alphabet(h) for h in r.has],
                                  samples[r.receiver_id], len(r.wants), f'd[{r.receiver_id}]')
        for r in instance.receivers
    }


def optimal_network_decoders(network: NetworkInstance, code: NetworkCode,
                             msg_pmfs: Optional[Dict[str, Pmf]] = None) -> Dict[str, Table]:
    msg_pmfs = msg_pmfs or network.uniform_pmfs()
    keyed = [v for v in network.vertices if code.key_pmf(v).support_size > 1]
    joint = JointPmf.independent({**{f'm{i}': msg_pmfs[m]
                                     for i, m in enumerate(network.message_ids)},
                                  **{f'k{i}': code.key_pmf(v) for i, v in enumerate(keyed)}})
    count = len(network.message_ids)
    samples = {v: [] for v in network.destinations}  # type: Dict[str, List]
    for outcome, weight in joint.items():
        messages = dict(zip(network.message_ids, outcome[:count]))
        values = propagate(network, code, messages, dict(zip(keyed, outcome[count:])))
        for vertex in network.destinations:
            samples[vertex].append((
                tuple(values[d.edge_id] for d in network.in_edges(vertex))
                + tuple(messages[m] for m in network.origin_messages(vertex)),
                tuple(messages[m] for m in network.demanded_at(vertex)),
                weight,
            ))
    return {
        v: _map_table(code.decoder_domain(network, v), samples[v], len(network.demanded_at(v)),
                      f'd[{v}]')
        for v in network.destinations
    }


def _xor(values: Sequence[int]) -> int:
    return functools.reduce(lambda a, b: a ^ b, values, 0)


class CodeGenerator:

    def __init__(self, rng: random.Random, max_attempts: int = MAX_GENERATION_ATTEMPTS):
        self.rng = rng
        self.max_attempts = max_attempts

    def _random_table(self, sizes: Sequence[int], output_size: int, name: str) -> Table:
        return Table.tabulate(sizes, lambda *_: self.rng.randrange(output_size), name=name)

    def _linear_table(self, sizes: Sequence[int], output_size: int, name: str) -> Table:
        if output_size == 1:
            return Table.constant(sizes, 0, name=name)
        chosen = [i for i, size in enumerate(sizes) if size > 1 and self.rng.random() < 0.5]
        return Table.tabulate(sizes, lambda *inputs: _xor([inputs[i] for i in chosen]),
                              name=name)

    def _attempts(self, what: str):
        for attempt in range(self.max_attempts):
            yield attempt
        raise PreconditionError(f'Could not generate {what} in {self.max_attempts} attempts')

    # index coding

    def index_code(self, instance: IndexInstance, max_bits: int = MAX_CODEWORD_BITS,
                   max_key: int = MAX_KEY_SIZE) -> IndexCode:
        bits = self.rng.randint(1, max_bits)
        key_pmf = Pmf.uniform(self.rng.randint(1, max_key))
        encoder = self._random_table(
            [instance.alphabet(m) for m in instance.message_ids] + [key_pmf.support_size],
            2 ** bits, 'e',
        )
        decoders = optimal_index_decoders(instance, encoder, key_pmf, bits)
        return IndexCode(bits, encoder, decoders, key_pmf=key_pmf)

    def mapped_network_code(self, instance: IndexInstance,
                            max_bits: int = MAX_CODEWORD_BITS) -> Tuple[NetworkInstance,
                                                                        NetworkCode]:
        """Code on the mapped network whose sources forward their message unchanged."""
        bits = self.rng.randint(1, max_bits)
        network = index_to_network(instance, codeword_bits=bits)
        keys = {RELAY_IN: Pmf.uniform(self.rng.randint(1, MAX_KEY_SIZE)),
                RELAY_OUT: Pmf.uniform(self.rng.randint(1, MAX_KEY_SIZE))}
        template = NetworkCode(1, {}, {}, keys)
        encoders = dict()
        for edge in network.edges:
            domain = template.encoder_domain(network, edge)
            if edge.tail == RELAY_IN:
                encoders[edge.edge_id] = self._random_table(domain, 2 ** bits, edge.edge_id)
            elif edge.tail == RELAY_OUT:
                permutations = []
                for _ in range(keys[RELAY_OUT].support_size):
                    permutation = list(range(2 ** bits))
                    self.rng.shuffle(permutation)
                    permutations.append(permutation)
                encoders[edge.edge_id] = Table.tabulate(
                    domain, lambda x, z, p=permutations: p[z][x], name=edge.edge_id)
            else:
                encoders[edge.edge_id] = Table.tabulate(domain, lambda x, z: x,
                                                        name=edge.edge_id)
        code = NetworkCode(1, encoders, {}, keys)
        return network, NetworkCode(1, encoders, optimal_network_decoders(network, code), keys)

    # network coding

    def dag_instance(self, eavesdroppers: bool = True) -> NetworkInstance:
        """Small normalized DAG with binary sources and one unit of capacity per used bit."""
        for _ in self._attempts('a network instance'):
            instance = self._dag_candidate(eavesdroppers)
            if instance is not None:
                return instance

    def _dag_candidate(self, with_eavesdroppers: bool) -> Optional[NetworkInstance]:
        rng = self.rng
        count = rng.randint(2, MAX_VERTICES)
        vertices = [f'v{i}' for i in range(1, count + 1)]
        edges, edge_ids, budget = [], [], MAX_EDGE_BITS
        for _ in range(rng.randint(1, MAX_EDGES)):
            i = rng.randrange(count - 1)
            j = rng.randrange(i + 1, count)
            capacity = 1 if budget > 0 and rng.random() < 0.8 else 0
            budget -= capacity
            edge_id = default_edge_id(vertices[i], vertices[j], edge_ids)
            edge_ids.append(edge_id)
            edges.append(Edge(edge_id, vertices[i], vertices[j], capacity))
        graph = NetworkInstance(vertices, edges, []).graph

        heads = {e.head for e in edges}
        tails = {e.tail for e in edges}
        origins = [v for v in vertices if v in tails and v not in heads]
        message_ids = [str(i) for i in range(1, len(origins) + 1)]
        destinations = {m: [] for m in message_ids}  # type: Dict[str, List[str]]
        for vertex in vertices:
            if vertex not in heads:
                continue
            ancestors = networkx.ancestors(graph, vertex)
            available = [m for m, o in zip(message_ids, origins) if o in ancestors]
            if available and (vertex not in tails or rng.random() < 0.3):
                destinations[rng.choice(available)].append(vertex)
        for message_id, origin in zip(message_ids, origins):
            if not destinations[message_id]:
                descendants = sorted(networkx.descendants(graph, origin), key=vertices.index)
                destinations[message_id].append(rng.choice(descendants))
        messages = [Message(m, 2, o, destinations[m]) for m, o in zip(message_ids, origins)]

        eavesdroppers = []
        if with_eavesdroppers:
            for k in range(rng.randint(1, 2)):
                eavesdroppers.append(Eavesdropper(
                    f'r{k + 1}',
                    rng.sample(message_ids, rng.randint(1, len(message_ids))),
                    rng.sample(edge_ids, rng.randint(1, min(2, len(edge_ids)))),
                ))
        instance = normalize_instance(NetworkInstance(vertices, edges, messages, eavesdroppers))
        if not instance.edges or not instance.messages \
                or any(not m.destinations for m in instance.messages):
            return None
        return instance

    def network_code(self, network: NetworkInstance, uses: int = 1, keyed: bool = False,
                     linear: bool = False) -> NetworkCode:
        key_pmfs = dict()
        if keyed and not linear:
            key_pmfs = {v: Pmf.uniform(MAX_KEY_SIZE) for v in network.vertices
                        if network.out_edges(v) and self.rng.random() < 0.5}
        template = NetworkCode(uses, {}, {}, key_pmfs)
        table = self._linear_table if linear else self._random_table
        encoders = {
            e.edge_id: table(template.encoder_domain(network, e), e.alphabet_size(uses),
                             f'e[{e.edge_id}]')
            for e in network.edges
        }
        code = NetworkCode(uses, encoders, {}, key_pmfs)
        return NetworkCode(uses, encoders, optimal_network_decoders(network, code), key_pmfs)

    def perfect_network(self, keyed: bool = True, eavesdroppers: bool = True) \
            -> Tuple[NetworkInstance, NetworkCode]:
        """DAG instance with a code decoding without error."""
        for _ in self._attempts('a zero-error network code'):
            network = self.dag_instance(eavesdroppers)
            code = self.network_code(network, keyed=keyed)
            if eval_network_error(network, code) == 0:
                return network, code

    # backward translation inputs

    @staticmethod
    def padded_index_code(network: NetworkInstance, code: NetworkCode, uses: int = 1,
                          linear: bool = False) \
            -> Tuple[NetworkInstance, IndexInstance, IndexCode]:
        """Deterministic network, its mapped index instance and the padded-broadcast code."""
        if not code.is_deterministic:
            network, code = augment(network, code)
        instance, _ = network_to_index(network, uses)
        index_code = translate_n2i_code(network, code, instance, uses)
        if linear:
            index_code = IndexCode(index_code.codeword_bits, index_code.encoder,
                                   index_code.decoders, linear=True)
        return network, instance, index_code

    def perfect_index_code(self) -> Tuple[NetworkInstance, IndexInstance, IndexCode]:
        return self.padded_index_code(*self.perfect_network())

    def perturb(self, instance: IndexInstance, code: IndexCode) -> Optional[IndexCode]:
        """Copy of ``code`` with one decoder answer changed at a reachable input."""
        candidates = [r for r in instance.receivers
                      if any(instance.alphabet(w) > 1 for w in r.wants)]
        if not candidates:
            return None
        receiver = self.rng.choice(candidates)
        messages = tuple(self.rng.randrange(instance.alphabet(m)) for m in instance.message_ids)
        values = dict(zip(instance.message_ids, messages))
        codeword = code.encode(messages)
        inputs = (codeword,) + tuple(values[h] for h in receiver.has)
        estimate = list(code.decode(receiver.receiver_id, codeword, inputs[1:]))
        position = self.rng.choice([i for i, w in enumerate(receiver.wants)
                                    if instance.alphabet(w) > 1])
        estimate[position] = (estimate[position] + 1) % instance.alphabet(receiver.wants[position])
        table = code.decoders[receiver.receiver_id]
        entries = dict(table.items())
        entries[inputs] = tuple(estimate)
        decoders = dict(code.decoders)
        decoders[receiver.receiver_id] = Table(table.input_sizes, entries, name=table.name)
        return IndexCode(code.codeword_bits, code.encoder, decoders, code.key_pmf, code.linear)

    def imperfect_index_code(self, epsilon_limit: Fraction = Fraction(1, 2)) \
            -> Tuple[NetworkInstance, IndexInstance, IndexCode]:
        """Padded-broadcast code made imperfect, with error in ``(0, epsilon_limit]``."""
        for _ in self._attempts('an imperfect index code'):
            network, instance, code = self.perfect_index_code()
            for _ in range(self.rng.randint(1, 2)):
                code = self.perturb(instance, code) or code
            error = eval_index_error(instance, code)
            if 0 < error <= epsilon_limit:
                LOGGER.debug(f'Generated an index code with error {error}')
                return network, instance, code

    def linear_index_code(self, epsilon_limit: Fraction = Fraction(1, 2)) \
            -> Tuple[NetworkInstance, IndexInstance, IndexCode]:
        """Padded-broadcast code of a GF(2)-linear network code, marked linear."""
        for _ in self._attempts('a linear index code'):
            network = self.dag_instance()
            code = self.network_code(network, linear=True)
            network, instance, index_code = self.padded_index_code(network, code, linear=True)
            if eval_index_error(instance, index_code) <= epsilon_limit:
                return network, instance, index_code

    def lemma1_case(self, epsilon_limit: Fraction = Fraction(1, 2)) \
            -> Tuple[NetworkInstance, IndexInstance, IndexCode, int, str]:
        """Imperfect code, a broadcast value with some decodable source and an eavesdropper."""
        for _ in self._attempts('a broadcast value with decodable sources'):
            network, instance, code = self.imperfect_index_code(epsilon_limit)
            if not instance.eavesdroppers:
                continue
            decoding = DecodingMap(instance, code)
            sigmas = [s for s in range(code.codeword_size) if decoding.complement_fraction(s) < 1]
            if sigmas:
                eavesdropper = self.rng.choice(instance.eavesdroppers)
                return network, instance, code, self.rng.choice(sigmas), \
                    eavesdropper.eavesdropper_id


def side_information_example() -> Tuple[IndexInstance, IndexCode]:
    """Four binary messages, three receivers and one eavesdropper holding message 4.

    The broadcast ``(x1^x2, x3^x4, x2^x3)`` lets every receiver decode.
    """
    instance = IndexInstance(
        messages=[('1', 2), ('2', 2), ('3', 2), ('4', 2)],
        receivers=[
            Receiver('1', wants=['1'], has=['2']),
            Receiver('2', wants=['2', '4'], has=['3']),
            Receiver('3', wants=['3'], has=['1', '4']),
        ],
        eavesdroppers=[Eavesdropper('r1', targets=['2'], observes=['4'])],
    )
    encoder = Table.tabulate(
        [2, 2, 2, 2, 1],
        lambda x1, x2, x3, x4, z: (x1 ^ x2) | (x3 ^ x4) << 1 | (x2 ^ x3) << 2,
        name='e',
    )
    decoders = {
        '1': Table.tabulate([8, 2], lambda c, x2: ((c & 1) ^ x2,), name='d[1]'),
        '2': Table.tabulate([8, 2], lambda c, x3: ((c >> 2 & 1) ^ x3, (c >> 1 & 1) ^ x3),
                            name='d[2]'),
        '3': Table.tabulate([8, 2, 2], lambda c, x1, x4: ((c >> 1 & 1) ^ x4,), name='d[3]'),
    }
    return instance, IndexCode(3, encoder, decoders, linear=True)


def one_time_pad_example() -> Tuple[NetworkInstance, NetworkCode]:
    """Two parallel unit edges carrying ``x ^ z`` and ``z``, each tapped by one eavesdropper."""
    instance = NetworkInstance(
        vertices=['1', '2'],
        edges=[Edge('e1', '1', '2', 1), Edge('e2', '1', '2', 1)],
        messages=[Message('1', 2, '1', ['2'])],
        eavesdroppers=[
            Eavesdropper('r1', targets=['1'], observes=['e1']),
            Eavesdropper('r2', targets=['1'], observes=['e2']),
        ],
    )
    code = NetworkCode(
        uses=1,
        encoders={
            'e1': Table.tabulate([2, 2], lambda x, z: x ^ z, name='e[e1]'),
            'e2': Table.tabulate([2, 2], lambda x, z: z, name='e[e2]'),
        },
        decoders={'2': Table.tabulate([2, 2], lambda y1, y2: (y1 ^ y2,), name='d[2]')},
        key_pmfs={'1': Pmf.uniform(2)},
    )
    return instance, code
