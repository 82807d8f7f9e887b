"""Code translations between the two problem classes.

``translate_i2n`` and ``translate_n2i`` work on an index instance and its
mapped network; ``translate_n2i_code`` turns a deterministic code on an
augmented network into an index code on its mapped index instance.
"""
from typing import Dict, Mapping, Optional, Tuple

from code_equivalence.exceptions import InstanceMismatchError, PreconditionError
from code_equivalence.logging import LOGGER
from code_equivalence.mapping import RELAY_IN, RELAY_OUT, MappedNetwork, edge_message_id, \
    edge_receiver_id, network_to_index, receiver_vertex, source_vertex, vertex_receiver_id
from code_equivalence.model.index import IndexCode, IndexInstance
from code_equivalence.model.network import NetworkCode, NetworkInstance, eval_network_error, \
    propagate
from code_equivalence.probinfo import Pmf
from code_equivalence.tables import Table


def translate_i2n(instance: IndexInstance, code: IndexCode, network: NetworkInstance,
                  uses: int = 1) -> NetworkCode:
    """Network code on the mapped network behaving exactly like ``code``."""
    mapped = MappedNetwork.resolve(instance, network)
    code.validate_for(instance)
    bottleneck = mapped.bottleneck
    if bottleneck.bits(uses) < code.codeword_bits:
        raise PreconditionError(f'Edge "{bottleneck.edge_id}" carries {bottleneck.bits(uses)} '
                                f'bits, the codeword needs {code.codeword_bits}')
    result = NetworkCode(uses, {}, {}, key_pmfs={RELAY_IN: code.key_pmf})
    encoders = dict()  # type: Dict[str, Table]

    for mid in instance.message_ids:
        for edge in network.out_edges(source_vertex(mid)):
            if edge.alphabet_size(uses) < instance.alphabet(mid):
                raise PreconditionError(f'Edge "{edge.edge_id}" cannot carry message "{mid}"')
            encoders[edge.edge_id] = Table.tabulate(
                result.encoder_domain(network, edge),
                lambda x, z: x,
                name=f'e[{edge.edge_id}]',
            )

    in_positions = {e.tail: i for i, e in enumerate(network.in_edges(RELAY_IN))}
    positions = [in_positions[source_vertex(m)] for m in instance.message_ids]
    alphabets = [instance.alphabet(m) for m in instance.message_ids]

    def broadcast(*inputs):
        values, key = inputs[:-1], inputs[-1]
        messages = tuple(values[p] for p in positions)
        if any(x >= a for x, a in zip(messages, alphabets)):
            return 0
        return code.encode(messages, key)

    encoders[bottleneck.edge_id] = Table.tabulate(
        result.encoder_domain(network, bottleneck), broadcast, name=f'e[{bottleneck.edge_id}]')

    for edge in network.out_edges(RELAY_OUT):
        if edge.alphabet_size(uses) < bottleneck.alphabet_size(uses):
            raise PreconditionError(f'Edge "{edge.edge_id}" cannot copy "{bottleneck.edge_id}"')
        encoders[edge.edge_id] = Table.tabulate(
            result.encoder_domain(network, edge), lambda x, z: x, name=f'e[{edge.edge_id}]')

    decoders = dict()  # type: Dict[str, Table]
    for receiver in instance.receivers:
        vertex = receiver_vertex(receiver.receiver_id)
        in_edges = [e.edge_id for e in network.in_edges(vertex)]
        relay = in_edges.index(mapped.relay_edge(receiver.receiver_id).edge_id)
        side = [in_edges.index(mapped.side_edge(h, receiver.receiver_id).edge_id)
                for h in receiver.has]
        side_alphabets = [instance.alphabet(h) for h in receiver.has]
        fallback = (0,) * len(receiver.wants)

        def decode(*inputs, receiver_id=receiver.receiver_id, relay=relay, side=side,
                   side_alphabets=side_alphabets, fallback=fallback):
            codeword = inputs[relay]
            values = tuple(inputs[p] for p in side)
            if codeword >= code.codeword_size \
                    or any(x >= a for x, a in zip(values, side_alphabets)):
                return fallback
            return code.decode(receiver_id, codeword, values)

        decoders[vertex] = Table.tabulate(result.decoder_domain(network, vertex), decode,
                                          name=f'd[{vertex}]')
    LOGGER.debug(f'Translated {code} to a network code with {len(encoders)} encoders')
    return NetworkCode(uses, encoders, decoders, key_pmfs={RELAY_IN: code.key_pmf})


def _is_identity_relay(network: NetworkInstance, code: NetworkCode) -> bool:
    if code.key_pmf(RELAY_OUT).support_size != 1:
        return False
    for edge in network.out_edges(RELAY_OUT):
        table = code.encoder(edge.edge_id)
        if any(value != inputs[0] for inputs, value in table.items()):
            return False
    return True


def rewrite_relay(instance: IndexInstance, network: NetworkInstance, code: NetworkCode,
                  msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> NetworkCode:
    """Make every out-edge of vertex 2 copy the bottleneck.

    The relay key is fixed to the value giving the smallest decoding error
    and each sink decoder absorbs the replaced relay encoder. No eavesdropper
    observes the relay out-edges, so leakage is unchanged.
    """
    mapped = MappedNetwork.resolve(instance, network)
    code.validate_for(network)
    if _is_identity_relay(network, code):
        return code
    bottleneck = mapped.bottleneck
    for edge in network.out_edges(RELAY_OUT):
        if edge.alphabet_size(code.uses) < bottleneck.alphabet_size(code.uses):
            raise PreconditionError(f'Edge "{edge.edge_id}" cannot copy "{bottleneck.edge_id}"')

    best = None  # type: Optional[Tuple]
    for relay_key, _ in code.key_pmf(RELAY_OUT).support():
        candidate = _fixed_relay(instance, mapped, code, relay_key)
        error = eval_network_error(network, candidate, msg_pmfs)
        LOGGER.debug(f'Relay key {relay_key} gives decoding error {error}')
        if best is None or error < best[0]:
            best = (error, candidate)
    return best[1]


def _fixed_relay(instance: IndexInstance, mapped: MappedNetwork, code: NetworkCode,
                 relay_key: int) -> NetworkCode:
    network = mapped.network
    encoders = dict(code.encoders)
    for edge in network.out_edges(RELAY_OUT):
        encoders[edge.edge_id] = Table.tabulate((mapped.bottleneck.alphabet_size(code.uses), 1),
                                                lambda x, z: x, name=f'e[{edge.edge_id}]')
    decoders = dict(code.decoders)
    for receiver in instance.receivers:
        vertex = receiver_vertex(receiver.receiver_id)
        relay_edge = mapped.relay_edge(receiver.receiver_id)
        position = [e.edge_id for e in network.in_edges(vertex)].index(relay_edge.edge_id)
        original = code.decoder(vertex)
        relay_encoder = code.encoder(relay_edge.edge_id)
        carried = mapped.bottleneck.alphabet_size(code.uses)

        def decode(*inputs, original=original, relay_encoder=relay_encoder, position=position,
                   carried=carried):
            value = inputs[position] if inputs[position] < carried else 0
            replaced = relay_encoder(value, relay_key)
            return original(*(inputs[:position] + (replaced,) + inputs[position + 1:]))

        decoders[vertex] = Table.tabulate(original.input_sizes, decode, name=f'd[{vertex}]')
    key_pmfs = {v: p for v, p in code.key_pmfs.items() if v != RELAY_OUT}
    return NetworkCode(code.uses, encoders, decoders, key_pmfs)


def translate_n2i(instance: IndexInstance, network: NetworkInstance, code: NetworkCode,
                  msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> IndexCode:
    """Index code broadcasting the bottleneck value of ``code``."""
    mapped = MappedNetwork.resolve(instance, network)
    code.validate_for(network)
    for mid in instance.message_ids:
        vertex = source_vertex(mid)
        if code.key_pmf(vertex).support_size == 1:
            continue
        for edge in network.out_edges(vertex):
            table = code.encoder(edge.edge_id)
            if table.depends_on(len(table.input_sizes) - 1):
                raise PreconditionError(f'Encoder of source edge "{edge.edge_id}" depends on '
                                        f'the key of vertex "{vertex}"')
    code = rewrite_relay(instance, network, code, msg_pmfs)
    bottleneck = mapped.bottleneck
    key_pmf = code.key_pmf(RELAY_IN)

    def broadcast(*inputs):
        messages = dict(zip(instance.message_ids, inputs[:-1]))
        return propagate(network, code, messages, {RELAY_IN: inputs[-1]})[bottleneck.edge_id]

    encoder = Table.tabulate(
        [instance.alphabet(m) for m in instance.message_ids] + [key_pmf.support_size],
        broadcast, name='e',
    )
    codeword_bits = bottleneck.bits(code.uses)

    decoders = dict()
    for receiver in instance.receivers:
        vertex = receiver_vertex(receiver.receiver_id)
        relay_edge = mapped.relay_edge(receiver.receiver_id).edge_id
        side_edges = {mapped.side_edge(h, receiver.receiver_id).edge_id: i
                      for i, h in enumerate(receiver.has)}
        in_edges = [e.edge_id for e in network.in_edges(vertex)]
        original = code.decoder(vertex)

        def decode(codeword, *side, original=original, in_edges=in_edges,
                   relay_edge=relay_edge, side_edges=side_edges):
            values = []
            for edge_id in in_edges:
                if edge_id == relay_edge:
                    values.append(codeword)
                else:
                    values.append(code.encoder(edge_id)(side[side_edges[edge_id]], 0))
            return tuple(original(*values))

        decoders[receiver.receiver_id] = Table.tabulate(
            [2 ** codeword_bits] + [instance.alphabet(h) for h in receiver.has],
            decode, name=f'd[{receiver.receiver_id}]',
        )
    LOGGER.debug(f'Translated network code to an index code of {codeword_bits} bits')
    return IndexCode(codeword_bits, encoder, decoders, key_pmf=key_pmf)


class CodewordLayout:
    """Places the component of each edge in the broadcast, first edge lowest."""

    def __init__(self, network: NetworkInstance, uses: int):
        self.bits = {e.edge_id: e.bits(uses) for e in network.edges}  # type: Dict[str, int]
        self.offsets = dict()  # type: Dict[str, int]
        offset = 0
        for edge in network.edges:
            self.offsets[edge.edge_id] = offset
            offset += self.bits[edge.edge_id]
        self.total_bits = offset

    def pack(self, components: Mapping[str, int]) -> int:
        return sum(components[e] << self.offsets[e] for e in self.offsets)

    def unpack(self, codeword: int) -> Dict[str, int]:
        return {e: (codeword >> self.offsets[e]) & ((1 << self.bits[e]) - 1)
                for e in self.offsets}

    def modulus(self, edge_id: str) -> int:
        return 1 << self.bits[edge_id]


def translate_n2i_code(network: NetworkInstance, code: NetworkCode, instance: IndexInstance,
                       uses: int) -> IndexCode:
    """Index code whose broadcast pads every edge value with its edge message.

    Component ``e`` of the broadcast is ``x_e + g_e(x_S) mod 2^floor(c_e n)``.
    """
    if not code.is_deterministic:
        raise PreconditionError('Network code is randomized, augment the instance first')
    expected, codeword_bits = network_to_index(network, uses)
    if expected != instance:
        raise InstanceMismatchError('Index instance is not the image of the network')
    if code.uses != uses:
        raise PreconditionError(f'Network code uses {code.uses} channel uses, expected {uses}')
    code.validate_for(network)
    layout = CodewordLayout(network, uses)
    sources = network.message_ids

    def broadcast(*inputs):
        values = dict(zip(instance.message_ids, inputs[:-1]))
        flows = propagate(network, code, {m: values[m] for m in sources})
        return layout.pack({
            e: (values[edge_message_id(e)] + flows[e]) % layout.modulus(e)
            for e in network.edge_ids
        })

    encoder = Table.tabulate([instance.alphabet(m) for m in instance.message_ids] + [1],
                             broadcast, name='e')

    def recovered_flows(components, side_values, edges):
        return tuple((components[d.edge_id] - side_values[edge_message_id(d.edge_id)])
                     % layout.modulus(d.edge_id) for d in edges)

    decoders = dict()
    for edge in network.edges:
        rid = edge_receiver_id(edge.edge_id)
        receiver = instance.receiver(rid)

        def decode_edge(codeword, *side, receiver=receiver, edge=edge):
            components = layout.unpack(codeword)
            side_values = dict(zip(receiver.has, side))
            inputs = recovered_flows(components, side_values, network.in_edges(edge.tail)) \
                + tuple(side_values[m] for m in network.origin_messages(edge.tail)) + (0,)
            flow = code.encoder(edge.edge_id)(*inputs)
            return ((components[edge.edge_id] - flow) % layout.modulus(edge.edge_id),)

        decoders[rid] = Table.tabulate(
            [2 ** codeword_bits] + [instance.alphabet(h) for h in receiver.has],
            decode_edge, name=f'd[{rid}]',
        )
    for vertex in network.destinations:
        rid = vertex_receiver_id(vertex)
        receiver = instance.receiver(rid)

        def decode_vertex(codeword, *side, receiver=receiver, vertex=vertex):
            components = layout.unpack(codeword)
            side_values = dict(zip(receiver.has, side))
            inputs = recovered_flows(components, side_values, network.in_edges(vertex)) \
                + tuple(side_values[m] for m in network.origin_messages(vertex))
            return tuple(code.decoder(vertex)(*inputs))

        decoders[rid] = Table.tabulate(
            [2 ** codeword_bits] + [instance.alphabet(h) for h in receiver.has],
            decode_vertex, name=f'd[{rid}]',
        )
    LOGGER.debug(f'Translated deterministic network code to {codeword_bits}-bit index code')
    return IndexCode(codeword_bits, encoder, decoders)
