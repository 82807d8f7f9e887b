from fractions import Fraction

import pytest

from code_equivalence.exceptions import InstanceMismatchError, ValidationError
from code_equivalence.mapping import MappedNetwork, edge_bits, index_to_network, \
    is_index_image, network_to_index, split_index_messages
from code_equivalence.model.network import Edge, Message, NetworkInstance


class TestIndexToNetwork:

    def test_side_information_image(self, side_information):
        instance, _ = side_information
        network = index_to_network(instance)
        assert network.vertices == ('s1', 's2', 's3', 's4', 't1', 't2', 't3', '1', '2')
        assert len(network.edges) == 12
        assert all(e.capacity == 1 for e in network.edges)
        assert network.message('4').destinations == ('t2',)
        eavesdropper = network.eavesdroppers[0]
        assert eavesdropper.targets == ('2',)
        assert set(eavesdropper.observes) == {'s4->1', 's4->t3', '1->2'}

    def test_codeword_bits_set_bottleneck(self, side_information):
        instance, _ = side_information
        network = index_to_network(instance, uses=2, codeword_bits=3)
        assert network.edge('1->2').capacity == Fraction(3, 2)
        assert network.edge('2->t1').capacity == Fraction(3, 2)
        assert network.edge('s1->1').capacity == Fraction(1, 2)

    def test_resolve(self, side_information):
        instance, _ = side_information
        mapped = MappedNetwork.resolve(instance, index_to_network(instance, codeword_bits=3))
        assert mapped.bottleneck.edge_id == '1->2'
        assert mapped.side_edge('4', '3').edge_id == 's4->t3'
        assert mapped.relay_edge('2').head == 't2'

    def test_resolve_rejects_other_network(self, side_information, one_time_pad):
        instance, _ = side_information
        network, _ = one_time_pad
        assert not is_index_image(instance, network)
        with pytest.raises(InstanceMismatchError, match='not the image'):
            MappedNetwork.resolve(instance, network)


class TestNetworkToIndex:

    def test_one_time_pad(self, one_time_pad):
        network, _ = one_time_pad
        instance, codeword_bits = network_to_index(network, uses=1)
        assert codeword_bits == 2
        assert instance.message_ids == ('1', 'edge:e1', 'edge:e2')
        assert instance.receiver('t:2').has == ('edge:e1', 'edge:e2')
        assert instance.receiver('t:edge:e2').wants == ('edge:e2',)
        assert instance.receiver('t:edge:e2').has == ('1',)
        assert instance.eavesdroppers[1].observes == ('edge:e2',)

    def test_more_uses_widen_edge_messages(self, one_time_pad):
        network, _ = one_time_pad
        instance, codeword_bits = network_to_index(network, uses=3)
        assert codeword_bits == 6
        assert edge_bits(instance) == {'e1': 3, 'e2': 3}
        assert split_index_messages(instance) == (('1',), ('edge:e1', 'edge:e2'))

    def test_augmented_keys_need_no_destination(self, one_time_pad_augmented):
        augmented, _ = one_time_pad_augmented
        instance, _ = network_to_index(augmented, uses=1)
        assert instance.message_ids == ('1', '2', '3', 'edge:e1', 'edge:e2')
        assert instance.receiver('t:2').has == ('3', 'edge:e1', 'edge:e2')
        assert instance.receiver('t:edge:e1').has == ('1', '2')

    def test_requires_normalized_network(self):
        network = NetworkInstance(
            vertices=['a', 'b', 'idle'],
            edges=[Edge('ab', 'a', 'b', 1)],
            messages=[Message('x', 2, 'a', ['b'])],
        )
        with pytest.raises(ValidationError, match='normalized'):
            network_to_index(network, uses=1)

    def test_message_without_destination(self):
        network = NetworkInstance(
            vertices=['a', 'b'],
            edges=[Edge('ab', 'a', 'b', 1)],
            messages=[Message('x', 2, 'a', ['b']), Message('y', 2, 'a', [])],
        )
        with pytest.raises(ValidationError, match='demanded nowhere'):
            network_to_index(network, uses=1)
