from fractions import Fraction

import pytest

from code_equivalence.exceptions import DomainError, EquivalenceError, HypothesisError, \
    PreconditionError
from code_equivalence.model.index import IndexCode
from code_equivalence.model.network import eval_network_error, eval_network_leakage
from code_equivalence.probinfo import Pmf
from code_equivalence.tables import Table
from code_equivalence.translation import DecodingMap, build_network_code_from_sigma, \
    check_lemma1, check_proposition1, decodable_set, proposition2_witness, select_sigma


def _broken_edge_decoder(instance, code):
    """The edge receiver answers 0 whatever it sees."""
    decoders = dict(code.decoders)
    table = code.decoders['t:edge:e']
    decoders['t:edge:e'] = Table.constant(table.input_sizes, (0,))
    return IndexCode(code.codeword_bits, code.encoder, decoders)


class TestDecodingMap:

    def test_every_edge_value_decodes(self, single_edge_index):
        _, instance, code = single_edge_index
        assert decodable_set(instance, code, (0,)) == {(0,), (1,)}
        assert check_proposition1(instance, code) == []

    def test_witness(self, single_edge_index):
        _, instance, code = single_edge_index
        assert proposition2_witness(instance, code) == (0, Fraction(1))

    def test_imperfect_code(self, single_edge_index):
        _, instance, code = single_edge_index
        broken = _broken_edge_decoder(instance, code)
        decoding = DecodingMap(instance, broken)
        assert decoding.decodable((1,)) == {(0,)}
        assert decoding.good_sources(0) == {(0,)}
        assert decoding.complement_fraction(1) == Fraction(1, 2)

    def test_randomized_code_is_rejected(self, single_edge_index):
        _, instance, code = single_edge_index
        keyed = IndexCode(code.codeword_bits,
                          Table.tabulate([2, 2, 2], lambda x, xe, z: x ^ xe),
                          code.decoders, key_pmf=Pmf.uniform(2))
        with pytest.raises(PreconditionError, match='deterministic'):
            DecodingMap(instance, keyed)

    def test_unknown_sources(self, single_edge_index):
        _, instance, code = single_edge_index
        with pytest.raises(DomainError, match='outside the source alphabets'):
            decodable_set(instance, code, (2,))


class TestBuildFromSigma:

    @pytest.mark.parametrize('sigma', [0, 1])
    def test_every_value_decodes(self, single_edge_index, sigma):
        network, instance, code = single_edge_index
        built = build_network_code_from_sigma(network, instance, code, sigma, uses=1)
        assert built.sigma == sigma
        assert built.phi((1,)) == (sigma ^ 1,)
        assert eval_network_error(network, built.code) == 0
        assert eval_network_leakage(network, built.code) == {'r': pytest.approx(1.0)}

    def test_sigma_outside_codeword_space(self, single_edge_index):
        network, instance, code = single_edge_index
        with pytest.raises(DomainError, match='outside'):
            build_network_code_from_sigma(network, instance, code, 2, uses=1)

    def test_instance_must_be_the_image(self, single_edge_index, side_information):
        network, _, code = single_edge_index
        other, _ = side_information
        with pytest.raises(EquivalenceError):
            build_network_code_from_sigma(network, other, code, 0, uses=1)


class TestSelectSigma:

    def test_ties_go_to_the_smallest_value(self, single_edge_index):
        _, instance, code = single_edge_index
        sigma, diagnostics = select_sigma(instance, code)
        assert sigma == 0
        assert diagnostics.complements == {0: 0, 1: 0}
        assert diagnostics.averaged_complement == 0
        assert set(diagnostics.as_dict()) == {'objectives', 'complements',
                                              'averagedComplement', 'leakageTerms'}

    def test_imperfect_code_complements(self, single_edge_index):
        _, instance, code = single_edge_index
        sigma, diagnostics = select_sigma(instance, _broken_edge_decoder(instance, code))
        assert sigma in (0, 1)
        assert diagnostics.complements == {0: Fraction(1, 2), 1: Fraction(1, 2)}

    def test_needs_uniform_messages(self, single_edge_index):
        _, instance, code = single_edge_index
        with pytest.raises(HypothesisError, match='uniformly'):
            select_sigma(instance, code, {'x': Pmf(['1/4', '3/4'])})


class TestLemma1:

    def test_holds_for_a_perfect_code(self, single_edge_index):
        network, instance, code = single_edge_index
        check = check_lemma1(network, instance, code, 1, 'r', uses=1)
        assert check.epsilon_prime == 0
        assert check.lhs == pytest.approx(1.0)
        assert check.all_hold
        assert check.as_dict()['lemma']['holds']

    def test_unknown_eavesdropper(self, single_edge_index):
        network, instance, code = single_edge_index
        with pytest.raises(DomainError, match='Unknown eavesdropper "nobody"'):
            check_lemma1(network, instance, code, 0, 'nobody', uses=1)

    def test_generated_cases_hold(self, generator):
        for _ in range(3):
            network, instance, code, sigma, eavesdropper_id = generator.lemma1_case()
            assert check_lemma1(network, instance, code, sigma, eavesdropper_id, 1).holds
