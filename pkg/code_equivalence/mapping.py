"""Instance mappings between secure index coding and secure network coding."""
from fractions import Fraction
from typing import Dict, Optional, Tuple

from code_equivalence.exceptions import InstanceMismatchError, ValidationError
from code_equivalence.logging import LOGGER
from code_equivalence.model.base import Eavesdropper
from code_equivalence.model.index import IndexInstance, Receiver
from code_equivalence.model.network import AugmentedInstance, Edge, Message, \
    NetworkInstance, topological_order
from code_equivalence.utils import bits_for

RELAY_IN = '1'
RELAY_OUT = '2'
EDGE_MESSAGE_PREFIX = 'edge:'


def source_vertex(message_id: str) -> str:
    return f's{message_id}'


def receiver_vertex(receiver_id: str) -> str:
    return f't{receiver_id}'


def edge_message_id(edge_id: str) -> str:
    return f'{EDGE_MESSAGE_PREFIX}{edge_id}'


def vertex_receiver_id(vertex: str) -> str:
    return f't:{vertex}'


def edge_receiver_id(edge_id: str) -> str:
    return f't:{EDGE_MESSAGE_PREFIX}{edge_id}'


def source_capacity(alphabet_size: int, uses: int) -> Fraction:
    """Smallest per-use capacity carrying a message of the given alphabet."""
    return Fraction(bits_for(alphabet_size), uses)


def index_to_network(instance: IndexInstance, uses: int = 1,
                     codeword_bits: Optional[int] = None) -> NetworkInstance:
    """Network with a source per message, a sink per receiver and the
    bottleneck ``1 -> 2`` carrying the broadcast.

    Without ``codeword_bits`` the bottleneck and relay edges get one bit per
    use; with it they get ``codeword_bits / uses``.
    """
    bottleneck = Fraction(1) if codeword_bits is None else Fraction(codeword_bits, uses)
    sources = [source_vertex(m) for m in instance.message_ids]
    sinks = [receiver_vertex(r.receiver_id) for r in instance.receivers]
    vertices = sources + sinks + [RELAY_IN, RELAY_OUT]

    edges = []
    for mid in instance.message_ids:
        capacity = source_capacity(instance.alphabet(mid), uses)
        edges.append(Edge(f'{source_vertex(mid)}->{RELAY_IN}', source_vertex(mid), RELAY_IN,
                          capacity))
        for receiver in instance.receivers:
            if mid in receiver.has:
                tail, head = source_vertex(mid), receiver_vertex(receiver.receiver_id)
                edges.append(Edge(f'{tail}->{head}', tail, head, capacity))
    edges.append(Edge(f'{RELAY_IN}->{RELAY_OUT}', RELAY_IN, RELAY_OUT, bottleneck))
    for receiver in instance.receivers:
        head = receiver_vertex(receiver.receiver_id)
        edges.append(Edge(f'{RELAY_OUT}->{head}', RELAY_OUT, head, bottleneck))

    messages = [
        Message(mid, instance.alphabet(mid), source_vertex(mid),
                [receiver_vertex(r.receiver_id) for r in instance.receivers if mid in r.wants])
        for mid in instance.message_ids
    ]
    eavesdroppers = [
        Eavesdropper(
            e.eavesdropper_id,
            e.targets,
            [f'{RELAY_IN}->{RELAY_OUT}'] + [edge.edge_id for edge in edges
                                            if edge.tail in {source_vertex(b) for b in e.observes}],
        )
        for e in instance.eavesdroppers
    ]
    network = NetworkInstance(vertices, edges, messages, eavesdroppers)
    LOGGER.debug(f'Mapped {instance} to {network}')
    return network


class MappedNetwork:
    """Locates the parts of ``index_to_network(instance)`` inside a network."""

    def __init__(self, instance: IndexInstance, network: NetworkInstance):
        self.instance = instance
        self.network = network

    @classmethod
    def resolve(cls, instance: IndexInstance, network: NetworkInstance) -> 'MappedNetwork':
        expected = index_to_network(instance)
        if _shape(expected) != _shape(network):
            raise InstanceMismatchError('Network is not the image of the index instance')
        return cls(instance, network)

    def _edge(self, tail: str, head: str) -> Edge:
        for edge in self.network.out_edges(tail):
            if edge.head == head:
                return edge
        raise InstanceMismatchError(f'Network has no edge {tail} -> {head}')

    @property
    def bottleneck(self) -> Edge:
        return self._edge(RELAY_IN, RELAY_OUT)

    def side_edge(self, message_id: str, receiver_id: str) -> Edge:
        return self._edge(source_vertex(message_id), receiver_vertex(receiver_id))

    def relay_edge(self, receiver_id: str) -> Edge:
        return self._edge(RELAY_OUT, receiver_vertex(receiver_id))


def _shape(network: NetworkInstance):
    return (
        sorted(network.vertices),
        sorted((e.tail, e.head) for e in network.edges),
        sorted((m.message_id, m.alphabet_size, m.origin, tuple(sorted(m.destinations)))
               for m in network.messages),
        sorted((e.eavesdropper_id, tuple(sorted(e.targets)),
                tuple(sorted((network.edge(b).tail, network.edge(b).head) for b in e.observes)))
               for e in network.eavesdroppers),
    )


def is_index_image(instance: IndexInstance, network: NetworkInstance) -> bool:
    """Whether ``network`` has the shape of the mapped instance, capacities aside."""
    return _shape(index_to_network(instance)) == _shape(network)


def network_to_index(instance: NetworkInstance, uses: int) -> Tuple[IndexInstance, int]:
    """Index instance with a message per source and per edge, a receiver per
    destination and per edge, and the codeword length ``sum floor(c_e n)``.
    """
    topological_order(instance)
    if not instance.is_normalized():
        raise ValidationError('normalized network',
                              'Network must be normalized before mapping it')
    for message in instance.messages:
        if isinstance(instance, AugmentedInstance) and instance.is_key_message(message.message_id):
            continue
        if not message.destinations:
            raise ValidationError('every message has a destination',
                                  f'Message "{message.message_id}" is demanded nowhere')

    messages = [(m.message_id, m.alphabet_size) for m in instance.messages] \
        + [(edge_message_id(e.edge_id), e.alphabet_size(uses)) for e in instance.edges]
    receivers = []
    for vertex in instance.destinations:
        receivers.append(Receiver(
            vertex_receiver_id(vertex),
            wants=instance.demanded_at(vertex),
            has=[edge_message_id(d.edge_id) for d in instance.in_edges(vertex)]
            + list(instance.origin_messages(vertex)),
        ))
    for edge in instance.edges:
        receivers.append(Receiver(
            edge_receiver_id(edge.edge_id),
            wants=[edge_message_id(edge.edge_id)],
            has=[edge_message_id(d.edge_id) for d in instance.in_edges(edge.tail)]
            + list(instance.origin_messages(edge.tail)),
        ))
    eavesdroppers = [
        Eavesdropper(e.eavesdropper_id, e.targets, [edge_message_id(b) for b in e.observes])
        for e in instance.eavesdroppers
    ]
    codeword_bits = sum(e.bits(uses) for e in instance.edges)
    mapped = IndexInstance(messages, receivers, eavesdroppers)
    LOGGER.debug(f'Mapped {instance} to {mapped} with codeword length {codeword_bits}')
    return mapped, codeword_bits


def split_index_messages(instance: IndexInstance) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Source message ids and edge message ids of a mapped index instance."""
    sources = tuple(m for m in instance.message_ids if not m.startswith(EDGE_MESSAGE_PREFIX))
    edges = tuple(m for m in instance.message_ids if m.startswith(EDGE_MESSAGE_PREFIX))
    return sources, edges


def edge_bits(instance: IndexInstance) -> Dict[str, int]:
    """Bits carried by each edge, read off the edge-message alphabets."""
    _, edges = split_index_messages(instance)
    return {m[len(EDGE_MESSAGE_PREFIX):]: instance.alphabet(m).bit_length() - 1 for m in edges}
