"""Secure network coding on acyclic multigraphs.

Edge values are computed edge by edge following a topological order of the
edge tails; every edge ``e`` carries a symbol of ``[2^floor(c_e n)]``.
"""
import math

from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

import networkx  # type: ignore

from code_equivalence.exceptions import DomainError, EvaluationError, StructuralError, \
    ValidationError
from code_equivalence.logging import LOGGER
from code_equivalence.model.base import DECODED_VAR, Eavesdropper, FeasibilityReport, \
    check_unique, edge_var, key_var, message_var, ordered
from code_equivalence.probinfo import JointPmf, Pmf, mutual_information
from code_equivalence.tables import Table
from code_equivalence.utils import parse_fraction, product_space


class Edge:

    def __init__(self, edge_id, tail, head, capacity):
        self.edge_id = str(edge_id)  # type: str
        self.tail = str(tail)  # type: str
        self.head = str(head)  # type: str
        self.capacity = parse_fraction(capacity)  # type: Fraction
        if self.capacity < 0:
            raise DomainError(f'Edge "{self.edge_id}" has negative capacity {self.capacity}')

    def bits(self, uses: int) -> int:
        return math.floor(self.capacity * uses)

    def alphabet_size(self, uses: int) -> int:
        return 2 ** self.bits(uses)

    def __eq__(self, other):
        return isinstance(other, Edge) \
            and (self.edge_id, self.tail, self.head, self.capacity) \
            == (other.edge_id, other.tail, other.head, other.capacity)

    def __hash__(self):
        return hash((self.edge_id, self.tail, self.head, self.capacity))

    def __repr__(self):
        return f'Edge({self.edge_id!r}, {self.tail!r}->{self.head!r}, c={self.capacity})'


class Message:

    def __init__(self, message_id, alphabet_size, origin, destinations=()):
        self.message_id = str(message_id)  # type: str
        self.alphabet_size = int(alphabet_size)  # type: int
        self.origin = str(origin)  # type: str
        self.destinations = tuple(str(d) for d in destinations)  # type: Tuple[str, ...]
        if self.alphabet_size < 1:
            raise DomainError(f'Message "{self.message_id}" needs a positive alphabet size')

    def __eq__(self, other):
        return isinstance(other, Message) \
            and (self.message_id, self.alphabet_size, self.origin, self.destinations) \
            == (other.message_id, other.alphabet_size, other.origin, other.destinations)

    def __hash__(self):
        return hash((self.message_id, self.alphabet_size, self.origin, self.destinations))

    def __repr__(self):
        return f'Message({self.message_id!r}, |X|={self.alphabet_size}, ' \
               f'{self.origin!r} -> {self.destinations})'


def default_edge_id(tail: str, head: str, existing: Sequence[str]) -> str:
    """``tail->head`` for the first edge between two vertices, ``tail->head#k`` after."""
    base = f'{tail}->{head}'
    if base not in existing:
        return base
    k = 2
    while f'{base}#{k}' in existing:
        k += 1
    return f'{base}#{k}'


class NetworkInstance:

    def __init__(self, vertices: Sequence[str], edges: Sequence[Edge],
                 messages: Sequence[Message], eavesdroppers: Sequence[Eavesdropper] = ()):
        self.vertices = tuple(str(v) for v in vertices)  # type: Tuple[str, ...]
        self.edges = tuple(edges)  # type: Tuple[Edge, ...]
        self.edge_ids = tuple(e.edge_id for e in self.edges)  # type: Tuple[str, ...]
        check_unique(self.vertices, 'vertex')
        check_unique(self.edge_ids, 'edge')
        vertex_set = set(self.vertices)
        for edge in self.edges:
            if edge.tail not in vertex_set or edge.head not in vertex_set:
                raise StructuralError(f'Edge "{edge.edge_id}" joins unknown vertices')
        messages = tuple(messages)
        check_unique([m.message_id for m in messages], 'message')
        for message in messages:
            if message.origin not in vertex_set:
                raise StructuralError(f'Message "{message.message_id}" originates at '
                                      f'unknown vertex "{message.origin}"')
        self.messages = tuple(
            Message(m.message_id, m.alphabet_size, m.origin,
                    ordered(m.destinations, self.vertices, 'vertex'))
            for m in messages
        )  # type: Tuple[Message, ...]
        self.message_ids = tuple(m.message_id for m in self.messages)  # type: Tuple[str, ...]
        self.eavesdroppers = tuple(
            e.reordered(self.message_ids, self.edge_ids, 'edge') for e in eavesdroppers
        )  # type: Tuple[Eavesdropper, ...]
        check_unique([e.eavesdropper_id for e in self.eavesdroppers], 'eavesdropper')
        self._edges = {e.edge_id: e for e in self.edges}
        self._messages = {m.message_id: m for m in self.messages}
        self._graph = None  # type: Optional[networkx.MultiDiGraph]

    @property
    def graph(self) -> networkx.MultiDiGraph:
        if self._graph is None:
            graph = networkx.MultiDiGraph()
            graph.add_nodes_from(self.vertices)
            for edge in self.edges:
                graph.add_edge(edge.tail, edge.head, key=edge.edge_id)
            self._graph = graph
        return self._graph

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise DomainError(f'Unknown edge "{edge_id}"')

    def message(self, message_id: str) -> Message:
        try:
            return self._messages[message_id]
        except KeyError:
            raise DomainError(f'Unknown message "{message_id}"')

    def in_edges(self, vertex: str) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.head == vertex)

    def out_edges(self, vertex: str) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.tail == vertex)

    def origin_messages(self, vertex: str) -> Tuple[str, ...]:
        return tuple(m.message_id for m in self.messages if m.origin == vertex)

    def demanded_at(self, vertex: str) -> Tuple[str, ...]:
        return tuple(m.message_id for m in self.messages if vertex in m.destinations)

    @property
    def destinations(self) -> Tuple[str, ...]:
        """Vertices demanding at least one message, in vertex order."""
        return tuple(v for v in self.vertices if self.demanded_at(v))

    def is_normalized(self) -> bool:
        return all(
            (self.in_edges(v) or self.origin_messages(v))
            and (self.out_edges(v) or self.demanded_at(v))
            for v in self.vertices
        )

    def uniform_pmfs(self) -> Dict[str, Pmf]:
        return {m.message_id: Pmf.uniform(m.alphabet_size) for m in self.messages}

    def __eq__(self, other):
        return isinstance(other, NetworkInstance) \
            and self.vertices == other.vertices \
            and self.edges == other.edges \
            and self.messages == other.messages \
            and self.eavesdroppers == other.eavesdroppers

    def __repr__(self):
        return f'NetworkInstance(vertices={len(self.vertices)}, edges={len(self.edges)}, ' \
               f'messages={len(self.messages)}, eavesdroppers={len(self.eavesdroppers)})'


class NetworkCode:
    """Local encoders ``(in-edge values..., origin messages..., key) -> value``
    per edge and decoders ``(in-edge values..., origin messages...) -> estimates``
    per destination vertex.
    """

    def __init__(self, uses: int, encoders: Mapping[str, Table], decoders: Mapping[str, Table],
                 key_pmfs: Optional[Mapping[str, Pmf]] = None):
        if uses < 1:
            raise DomainError(f'Number of uses must be positive, got {uses}')
        self.uses = uses  # type: int
        self.encoders = dict(encoders)  # type: Dict[str, Table]
        self.decoders = dict(decoders)  # type: Dict[str, Table]
        self.key_pmfs = {v: p for v, p in (key_pmfs or {}).items()
                         if p.support_size > 1}  # type: Dict[str, Pmf]

    def key_pmf(self, vertex: str) -> Pmf:
        return self.key_pmfs.get(vertex, Pmf.point(1))

    @property
    def is_deterministic(self) -> bool:
        return not self.key_pmfs

    def encoder(self, edge_id: str) -> Table:
        try:
            return self.encoders[edge_id]
        except KeyError:
            raise EvaluationError(f'No encoder for edge "{edge_id}"')

    def decoder(self, vertex: str) -> Table:
        try:
            return self.decoders[vertex]
        except KeyError:
            raise EvaluationError(f'No decoder at destination "{vertex}"')

    def encoder_domain(self, instance: NetworkInstance, edge: Edge) -> Tuple[int, ...]:
        return tuple(d.alphabet_size(self.uses) for d in instance.in_edges(edge.tail)) \
            + tuple(instance.message(m).alphabet_size
                    for m in instance.origin_messages(edge.tail)) \
            + (self.key_pmf(edge.tail).support_size,)

    def decoder_domain(self, instance: NetworkInstance, vertex: str) -> Tuple[int, ...]:
        return tuple(d.alphabet_size(self.uses) for d in instance.in_edges(vertex)) \
            + tuple(instance.message(m).alphabet_size for m in instance.origin_messages(vertex))

    def validate_for(self, instance: NetworkInstance):
        for edge in instance.edges:
            expected = self.encoder_domain(instance, edge)
            if self.encoder(edge.edge_id).input_sizes != expected:
                raise EvaluationError(f'Encoder of edge "{edge.edge_id}" has domain '
                                      f'{self.encoders[edge.edge_id].input_sizes}, '
                                      f'expected {expected}')
        for vertex in instance.destinations:
            expected = self.decoder_domain(instance, vertex)
            if self.decoder(vertex).input_sizes != expected:
                raise EvaluationError(f'Decoder at "{vertex}" has domain '
                                      f'{self.decoders[vertex].input_sizes}, expected {expected}')

    def __eq__(self, other):
        return isinstance(other, NetworkCode) \
            and self.uses == other.uses \
            and self.encoders == other.encoders \
            and self.decoders == other.decoders \
            and self.key_pmfs == other.key_pmfs

    def __repr__(self):
        return f'NetworkCode(uses={self.uses}, encoders={len(self.encoders)}, ' \
               f'decoders={len(self.decoders)}, keys={sorted(self.key_pmfs)})'


def _cycle_error(instance: NetworkInstance) -> StructuralError:
    cycle = networkx.find_cycle(instance.graph)
    path = ' -> '.join([cycle[0][0]] + [step[1] for step in cycle])
    return StructuralError(f'Network contains a cycle: {path}')


def topological_order(instance: NetworkInstance) -> Tuple[str, ...]:
    """Kahn's order; among available vertices the earliest declared comes first."""
    if not networkx.is_directed_acyclic_graph(instance.graph):
        raise _cycle_error(instance)
    position = {v: i for i, v in enumerate(instance.vertices)}
    return tuple(networkx.lexicographical_topological_sort(instance.graph,
                                                           key=position.__getitem__))


def _check_order(instance: NetworkInstance, order: Sequence[str]) -> Tuple[str, ...]:
    order = tuple(order)
    if sorted(order) != sorted(instance.vertices):
        raise StructuralError(f'Order {order} is not a permutation of the vertices')
    position = {v: i for i, v in enumerate(order)}
    for edge in instance.edges:
        if position[edge.tail] >= position[edge.head]:
            raise StructuralError(f'Order {order} is not topological: edge "{edge.edge_id}" '
                                  f'goes backwards')
    return order


def normalize_instance(instance: NetworkInstance) -> NetworkInstance:
    """Drop vertices that neither receive nor originate anything and sinks
    that demand nothing, until no such vertex remains.

    Messages originating at a removed vertex are dropped with it.
    """
    topological_order(instance)
    current = instance
    while True:
        removable = [v for v in current.vertices
                     if (not current.in_edges(v) and not current.origin_messages(v))
                     or (not current.out_edges(v) and not current.demanded_at(v))]
        if not removable:
            return current
        LOGGER.debug(f'Normalization removes vertices {removable}')
        gone = set(removable)
        vertices = [v for v in current.vertices if v not in gone]
        edges = [e for e in current.edges if e.tail not in gone and e.head not in gone]
        edge_ids = {e.edge_id for e in edges}
        messages = [Message(m.message_id, m.alphabet_size, m.origin,
                            [d for d in m.destinations if d not in gone])
                    for m in current.messages if m.origin not in gone]
        message_ids = {m.message_id for m in messages}
        eavesdroppers = [Eavesdropper(e.eavesdropper_id,
                                      [t for t in e.targets if t in message_ids],
                                      [o for o in e.observes if o in edge_ids])
                         for e in current.eavesdroppers]
        current = NetworkInstance(vertices, edges, messages, eavesdroppers)


def propagate(instance: NetworkInstance, code: NetworkCode, messages: Mapping[str, int],
              keys: Optional[Mapping[str, int]] = None,
              order: Optional[Sequence[str]] = None) -> Dict[str, int]:
    """Value of every edge for one realization of the messages and keys."""
    keys = keys or {}
    order = _check_order(instance, order) if order is not None \
        else topological_order(instance)
    values = dict()  # type: Dict[str, int]
    for vertex in order:
        for edge in instance.out_edges(vertex):
            inputs = tuple(values[d.edge_id] for d in instance.in_edges(vertex)) \
                + tuple(messages[m] for m in instance.origin_messages(vertex)) \
                + (keys.get(vertex, 0),)
            try:
                value = code.encoder(edge.edge_id)(*inputs)
            except EvaluationError:
                raise EvaluationError(f'Encoder of edge "{edge.edge_id}" has no entry for '
                                      f'input {inputs}')
            if not isinstance(value, int) or not 0 <= value < edge.alphabet_size(code.uses):
                raise EvaluationError(f'Encoder of edge "{edge.edge_id}" returned {value!r} '
                                      f'for input {inputs}, outside '
                                      f'[2^{edge.bits(code.uses)}]')
            values[edge.edge_id] = value
    return values


def decoded_correctly(instance: NetworkInstance, code: NetworkCode,
                      messages: Mapping[str, int], edge_values: Mapping[str, int]) -> bool:
    for vertex in instance.destinations:
        inputs = tuple(edge_values[d.edge_id] for d in instance.in_edges(vertex)) \
            + tuple(messages[m] for m in instance.origin_messages(vertex))
        estimate = tuple(code.decoder(vertex)(*inputs))
        if estimate != tuple(messages[m] for m in instance.demanded_at(vertex)):
            return False
    return True


def _realizations(instance: NetworkInstance, code: NetworkCode,
                  msg_pmfs: Mapping[str, Pmf]) -> Iterator[Tuple[Dict, Dict, Fraction]]:
    keyed = [v for v in instance.vertices if code.key_pmf(v).support_size > 1]
    source = JointPmf.independent(
        {**{message_var(m): msg_pmfs[m] for m in instance.message_ids},
         **{key_var(v): code.key_pmf(v) for v in keyed}}
    )
    count = len(instance.message_ids)
    for outcome, weight in source.items():
        yield dict(zip(instance.message_ids, outcome[:count])), \
            dict(zip(keyed, outcome[count:])), weight


def _check_pmfs(instance: NetworkInstance, msg_pmfs: Mapping[str, Pmf]):
    for message in instance.messages:
        pmf = msg_pmfs.get(message.message_id)
        if pmf is None:
            raise DomainError(f'No pmf given for message "{message.message_id}"')
        if pmf.support_size != message.alphabet_size:
            raise DomainError(f'Pmf of message "{message.message_id}" has {pmf.support_size} '
                              f'outcomes, alphabet has {message.alphabet_size}')


def global_encodings(instance: NetworkInstance, code: NetworkCode,
                     order: Optional[Sequence[str]] = None) -> Dict[str, Table]:
    """Per-edge tables over ``(messages in message order..., keys in vertex order...)``."""
    order = _check_order(instance, order) if order is not None \
        else topological_order(instance)
    sizes = [m.alphabet_size for m in instance.messages] \
        + [code.key_pmf(v).support_size for v in instance.vertices]
    count = len(instance.messages)
    rows = dict()  # type: Dict[str, Dict[Tuple[int, ...], int]]
    for inputs in product_space(sizes):
        values = propagate(instance, code,
                           dict(zip(instance.message_ids, inputs[:count])),
                           dict(zip(instance.vertices, inputs[count:])),
                           order)
        for edge_id, value in values.items():
            rows.setdefault(edge_id, {})[inputs] = value
    return {e.edge_id: Table(sizes, rows.get(e.edge_id, {}), name=f'g[{e.edge_id}]')
            for e in instance.edges}


def network_joint(instance: NetworkInstance, code: NetworkCode,
                  msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> JointPmf:
    """Joint of messages, node keys, edge values and decode success."""
    msg_pmfs = msg_pmfs if msg_pmfs is not None else instance.uniform_pmfs()
    _check_pmfs(instance, msg_pmfs)
    code.validate_for(instance)
    order = topological_order(instance)

    def outcomes():
        for messages, keys, weight in _realizations(instance, code, msg_pmfs):
            values = propagate(instance, code, messages, keys, order)
            decoded = int(decoded_correctly(instance, code, messages, values))
            yield tuple(messages[m] for m in instance.message_ids) \
                + tuple(keys.get(v, 0) for v in instance.vertices) \
                + tuple(values[e] for e in instance.edge_ids) \
                + (decoded,), weight

    return JointPmf.accumulate(
        variable_ids=[message_var(m) for m in instance.message_ids]
        + [key_var(v) for v in instance.vertices]
        + [edge_var(e) for e in instance.edge_ids]
        + [DECODED_VAR],
        alphabet_sizes=[m.alphabet_size for m in instance.messages]
        + [code.key_pmf(v).support_size for v in instance.vertices]
        + [e.alphabet_size(code.uses) for e in instance.edges]
        + [2],
        outcomes=outcomes(),
    )


def error_from_joint(joint: JointPmf) -> Fraction:
    return joint.probability({DECODED_VAR: 0})


def leakage_from_joint(instance: NetworkInstance, joint: JointPmf) -> Dict[str, float]:
    return {
        e.eavesdropper_id: mutual_information(
            joint,
            [message_var(a) for a in e.targets],
            [edge_var(b) for b in e.observes],
        )
        for e in instance.eavesdroppers
    }


def eval_network_error(instance: NetworkInstance, code: NetworkCode,
                       msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> Fraction:
    return error_from_joint(network_joint(instance, code, msg_pmfs))


def eval_network_leakage(instance: NetworkInstance, code: NetworkCode,
                         msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> Dict[str, float]:
    return leakage_from_joint(instance, network_joint(instance, code, msg_pmfs))


def check_network_feasible(instance: NetworkInstance, code: NetworkCode,
                           msg_pmfs: Optional[Mapping[str, Pmf]], epsilon, eta) \
        -> FeasibilityReport:
    joint = network_joint(instance, code, msg_pmfs)
    return FeasibilityReport(
        error=error_from_joint(joint),
        leakage=leakage_from_joint(instance, joint),
        epsilon=epsilon,
        eta=eta,
    )


class AugmentedInstance(NetworkInstance):
    """Network instance whose node keys became extra source messages.

    The key message of vertex ``v`` originates at ``v``, is demanded by
    nobody and is distributed like the key ``Z_v``; a vertex without
    out-edges gets the single-symbol alphabet.
    """

    def __init__(self, base: NetworkInstance, key_messages: Mapping[str, str],
                 key_pmfs: Mapping[str, Pmf]):
        self.base = base  # type: NetworkInstance
        self.key_messages = {v: key_messages[v] for v in base.vertices
                             if v in key_messages}  # type: Dict[str, str]
        self.key_pmfs = dict(key_pmfs)  # type: Dict[str, Pmf]
        for vertex, message_id in self.key_messages.items():
            if message_id not in self.key_pmfs:
                raise DomainError(f'No pmf for key message "{message_id}" of vertex "{vertex}"')
            if not base.out_edges(vertex) and self.key_pmfs[message_id].support_size != 1:
                raise ValidationError('sinks carry the single-symbol key',
                                      f'Vertex "{vertex}" has no out-edges but a key message '
                                      f'with {self.key_pmfs[message_id].support_size} symbols')
        messages = list(base.messages) + [
            Message(message_id, self.key_pmfs[message_id].support_size, vertex, ())
            for vertex, message_id in self.key_messages.items()
        ]
        super().__init__(base.vertices, base.edges, messages, base.eavesdroppers)

    def is_key_message(self, message_id: str) -> bool:
        return message_id in self.key_pmfs

    def message_pmfs(self, base_pmfs: Optional[Mapping[str, Pmf]] = None) -> Dict[str, Pmf]:
        base_pmfs = base_pmfs if base_pmfs is not None else self.base.uniform_pmfs()
        result = {m: base_pmfs[m] for m in self.base.message_ids}
        result.update(self.key_pmfs)
        return result

    def __eq__(self, other):
        return super().__eq__(other) \
            and isinstance(other, AugmentedInstance) \
            and self.key_messages == other.key_messages \
            and self.key_pmfs == other.key_pmfs


def _key_message_ids(instance: NetworkInstance) -> Dict[str, str]:
    taken = set(instance.message_ids)
    result = dict()
    count = len(instance.message_ids)
    for index, vertex in enumerate(instance.vertices, start=1):
        candidate = str(count + index)
        if candidate in taken:
            candidate = f'key:{vertex}'
        taken.add(candidate)
        result[vertex] = candidate
    return result


def augment(instance: NetworkInstance, code: NetworkCode) \
        -> Tuple[AugmentedInstance, NetworkCode]:
    """Move all node randomness into key messages; the returned code is deterministic."""
    code.validate_for(instance)
    key_messages = _key_message_ids(instance)
    key_pmfs = {
        key_messages[v]: code.key_pmf(v) if instance.out_edges(v) else Pmf.point(1)
        for v in instance.vertices
    }
    augmented = AugmentedInstance(instance, key_messages, key_pmfs)
    deterministic = NetworkCode(code.uses, {}, {})
    encoders = dict()
    for edge in augmented.edges:
        original = code.encoder(edge.edge_id)
        encoders[edge.edge_id] = Table.tabulate(
            deterministic.encoder_domain(augmented, edge),
            lambda *inputs, table=original: table(*inputs[:-1]),
            name=f'e[{edge.edge_id}]',
        )
    decoders = dict()
    for vertex in augmented.destinations:
        original = code.decoder(vertex)
        decoders[vertex] = Table.tabulate(
            deterministic.decoder_domain(augmented, vertex),
            lambda *inputs, table=original: table(*inputs[:-1]),
            name=f'd[{vertex}]',
        )
    LOGGER.debug(f'Augmented {instance} with key messages {list(key_messages.values())}')
    return augmented, NetworkCode(code.uses, encoders, decoders)
