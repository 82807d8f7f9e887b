from fractions import Fraction

import pytest

from code_equivalence.consts import Theorem
from code_equivalence.exceptions import DomainError, HypothesisError, PreconditionError
from code_equivalence.generators import CodeGenerator
from code_equivalence.model.index import IndexCode
from code_equivalence.tables import Table
from code_equivalence.translation import TranslationReport, verify_theorem


class TestForward:

    def test_side_information(self, side_information):
        instance, code = side_information
        report = verify_theorem(Theorem.THM1_FWD, instance=instance, code=code)
        assert report.satisfied
        assert report.target_error == 0
        assert report.target_leakage == {'r1': pytest.approx(1.0)}

    def test_random_codes(self, side_information, generator):
        instance, _ = side_information
        for _ in range(3):
            code = generator.index_code(instance)
            assert verify_theorem(Theorem.THM1_FWD, instance=instance, code=code).satisfied


class TestBackward:

    def test_mapped_network_code(self, side_information, generator):
        instance, _ = side_information
        network, code = generator.mapped_network_code(instance)
        report = verify_theorem(Theorem.THM1_BWD, instance=instance, network=network, code=code)
        assert report.checks['errorWithin']
        assert report.checks['roundTrip']
        assert report.satisfied


class TestPaddedBroadcast:

    def test_one_time_pad(self, one_time_pad):
        network, code = one_time_pad
        report = verify_theorem(Theorem.THM2_P1, network=network, code=code, uses=1)
        assert report.satisfied
        assert report.target_error == 0
        assert report.details['codewordBits'] == 2
        assert max(report.target_leakage.values()) == pytest.approx(0.0, abs=1e-9)

    def test_random_network(self, generator):
        network = generator.dag_instance()
        code = generator.network_code(network, keyed=True)
        assert verify_theorem(Theorem.THM2_P1, network=network, code=code, uses=1).satisfied


class TestPerfectDecoding:

    def test_one_time_pad(self, one_time_pad):
        network, instance, code = CodeGenerator.padded_index_code(*one_time_pad)
        report = verify_theorem(Theorem.THM2_P2A, network=network, instance=instance,
                                code=code, uses=1)
        assert report.satisfied
        assert report.checks['zeroErrorEverySigma']
        assert report.chosen_sigma is not None

    def test_requires_zero_error(self, single_edge_index):
        network, instance, code = single_edge_index
        decoders = dict(code.decoders)
        decoders['t:b'] = Table.constant(code.decoders['t:b'].input_sizes, (0,))
        broken = IndexCode(code.codeword_bits, code.encoder, decoders)
        with pytest.raises(HypothesisError, match='without error'):
            verify_theorem(Theorem.THM2_P2A, network=network, instance=instance, code=broken,
                           uses=1)

    def test_every_forced_sigma_decodes(self, one_time_pad):
        network, instance, code = CodeGenerator.padded_index_code(*one_time_pad)
        for sigma in range(code.codeword_size):
            report = verify_theorem(Theorem.THM2_P2A, network=network, instance=instance,
                                    code=code, uses=1, sigma=sigma)
            assert report.chosen_sigma == sigma
            assert report.target_error == 0
            assert report.details['forcedSigma']
            assert report.satisfied

    def test_forced_sigma_out_of_range(self, single_edge_index):
        network, instance, code = single_edge_index
        with pytest.raises(DomainError, match='outside'):
            verify_theorem(Theorem.THM2_P2A, network=network, instance=instance, code=code,
                           uses=1, sigma=code.codeword_size)


class TestImperfectDecoding:

    def test_generated_code_respects_the_bounds(self, generator):
        network, instance, code = generator.imperfect_index_code()
        report = verify_theorem(Theorem.THM2_P2B, network=network, instance=instance, code=code,
                                uses=1)
        assert 0 < report.source_error <= Fraction(1, 2)
        assert report.bound_zeta is not None
        assert report.satisfied

    def test_forced_sigma(self, generator):
        network, instance, code = generator.imperfect_index_code()
        report = verify_theorem(Theorem.THM2_P2B, network=network, instance=instance, code=code,
                                uses=1, sigma=0)
        assert report.chosen_sigma == 0
        assert report.details['forcedSigma']

    def test_forced_sigma_on_perfect_code(self, single_edge_index):
        network, instance, code = single_edge_index
        report = verify_theorem(Theorem.THM2_P2B, network=network, instance=instance, code=code,
                                uses=1, sigma=1)
        assert report.theorem == Theorem.THM2_P2A
        assert report.chosen_sigma == 1
        assert report.target_error == 0
        assert report.satisfied

    def test_averaged_complement_within_zeta(self, generator):
        network, instance, code = generator.imperfect_index_code()
        report = verify_theorem(Theorem.THM2_P2B, network=network, instance=instance, code=code,
                                uses=1)
        complement = Fraction(report.details['averagedComplement'])
        assert complement > 0
        assert float(complement) <= report.bound_zeta + 1e-12
        assert report.checks['averagedComplementWithinZeta']

    def test_averaged_complement_above_zeta(self):
        report = TranslationReport(Theorem.THM2_P2B, Fraction(1, 4), {'r': 0.0},
                                   Fraction(0), {'r': 0.0}, bound_zeta=0.25, bound_gamma=1.0,
                                   details={'averagedComplement': '1/2'})
        assert report.checks['errorBound']
        assert not report.checks['averagedComplementWithinZeta']
        assert not report.satisfied

    def test_perfect_code_is_out_of_scope(self, single_edge_index):
        network, instance, code = single_edge_index
        with pytest.raises(HypothesisError, match=r'\(0, 1/2\]'):
            verify_theorem(Theorem.THM2_P2B, network=network, instance=instance, code=code,
                           uses=1)


class TestLinear:

    def test_single_edge(self, single_edge_index):
        network, instance, code = single_edge_index
        report = verify_theorem(Theorem.COR1, network=network, instance=instance, code=code,
                                uses=1)
        assert report.checks['uniformBroadcast']
        assert report.satisfied

    def test_requires_linear_mark(self, single_edge_index):
        network, instance, code = single_edge_index
        unmarked = IndexCode(code.codeword_bits, code.encoder, code.decoders)
        with pytest.raises(HypothesisError, match='not marked linear'):
            verify_theorem(Theorem.COR1, network=network, instance=instance, code=unmarked,
                           uses=1)


class TestVerifyTheorem:

    def test_unknown_theorem(self):
        with pytest.raises(DomainError, match='Unknown theorem "thm9"'):
            verify_theorem('thm9')

    def test_wrong_inputs(self, side_information):
        instance, _ = side_information
        with pytest.raises(PreconditionError, match='Wrong inputs for thm1_fwd'):
            verify_theorem(Theorem.THM1_FWD, instance=instance)

    def test_report_as_dict(self, side_information):
        instance, code = side_information
        data = verify_theorem(Theorem.THM1_FWD, instance=instance, code=code).as_dict()
        assert data['theorem'] == Theorem.THM1_FWD
        assert data['checks'] == {'errorEqual': True, 'leakageEqual': True}
        assert data['targetError'] == '0'

    def test_failed_check(self):
        report = TranslationReport(Theorem.THM1_FWD, Fraction(0), {'r': 0.0},
                                   Fraction(1, 4), {'r': 0.0})
        assert report.checks == {'errorEqual': False, 'leakageEqual': True}
        assert not report.satisfied
