from fractions import Fraction

import pytest

from code_equivalence.exceptions import DomainError, EvaluationError, ValidationError
from code_equivalence.model.base import BROADCAST_VAR, Eavesdropper
from code_equivalence.model.index import IndexCode, IndexInstance, Receiver, \
    check_index_feasible, decodes_all, eval_index_error, eval_index_leakage, index_joint, \
    is_gf2_linear
from code_equivalence.probinfo import Pmf
from code_equivalence.tables import Table


def _single_message(code_bits=1):
    instance = IndexInstance([('x', 2)], [Receiver('r', wants=['x'], has=[])])
    encoder = Table.tabulate([2, 1], lambda x, z: x, name='e')
    decoders = {'r': Table.tabulate([2 ** code_bits], lambda c: (c % 2,), name='d[r]')}
    return instance, IndexCode(code_bits, encoder, decoders)


class TestIndexInstance:

    def test_receivers_kept_in_message_order(self, side_information):
        instance, _ = side_information
        assert instance.receiver('3').has == ('1', '4')
        assert instance.receiver('2').wants == ('2', '4')

    def test_wants_must_not_be_empty(self):
        with pytest.raises(ValidationError, match='wants nonempty'):
            IndexInstance([('x', 2)], [Receiver('r', wants=[], has=['x'])])

    def test_wants_and_has_disjoint(self):
        with pytest.raises(ValidationError, match='disjoint'):
            IndexInstance([('x', 2)], [Receiver('r', wants=['x'], has=['x'])])

    def test_duplicate_message(self):
        with pytest.raises(ValidationError, match='Duplicate message id "x"'):
            IndexInstance([('x', 2), ('x', 3)], [Receiver('r', wants=['x'], has=[])])

    def test_unknown_message(self):
        instance, _ = _single_message()
        with pytest.raises(DomainError, match='Unknown message "y"'):
            instance.alphabet('y')


class TestIndexEvaluation:

    def test_side_information_code_decodes(self, side_information):
        instance, code = side_information
        assert eval_index_error(instance, code) == 0
        for messages in [(0, 1, 1, 0), (1, 1, 0, 1)]:
            assert decodes_all(instance, code, messages, code.encode(messages))

    def test_side_information_leaks_the_target(self, side_information):
        instance, code = side_information
        assert eval_index_leakage(instance, code) == {'r1': pytest.approx(1.0)}

    def test_broken_decoder_error(self):
        instance, _ = _single_message()
        encoder = Table.tabulate([2, 1], lambda x, z: x)
        decoders = {'r': Table.tabulate([2], lambda c: (0,))}
        code = IndexCode(1, encoder, decoders)
        assert eval_index_error(instance, code) == Fraction(1, 2)
        skewed = {'x': Pmf(['3/4', '1/4'])}
        assert eval_index_error(instance, code, skewed) == Fraction(1, 4)

    def test_key_hides_message(self):
        instance = IndexInstance([('x', 2), ('y', 2)], [Receiver('r', wants=['x'], has=['y'])],
                                 [Eavesdropper('eve', targets=['x'], observes=[])])
        encoder = Table.tabulate([2, 2, 2], lambda x, y, z: x ^ z)
        decoders = {'r': Table.tabulate([2, 2], lambda c, y: (c,))}
        code = IndexCode(1, encoder, decoders, key_pmf=Pmf.uniform(2))
        report = check_index_feasible(instance, code, None, Fraction(1, 2), 0)
        assert report.leakage == {'eve': pytest.approx(0.0, abs=1e-9)}
        assert report.error == Fraction(1, 2)
        assert report.feasible

    def test_encoder_output_outside_codeword_space(self):
        instance, _ = _single_message()
        encoder = Table.tabulate([2, 1], lambda x, z: 2 + x)
        decoders = {'r': Table.tabulate([2], lambda c: (c,))}
        with pytest.raises(EvaluationError, match='outside'):
            eval_index_error(instance, IndexCode(1, encoder, decoders))

    def test_encoder_domain_mismatch(self):
        instance, _ = _single_message()
        encoder = Table.tabulate([3, 1], lambda x, z: 0)
        decoders = {'r': Table.tabulate([2], lambda c: (c,))}
        with pytest.raises(EvaluationError, match='Encoder domain'):
            eval_index_error(instance, IndexCode(1, encoder, decoders))

    def test_pmf_alphabet_mismatch(self):
        instance, code = _single_message()
        with pytest.raises(DomainError, match='outcomes'):
            index_joint(instance, code, {'x': Pmf.uniform(3)})

    def test_broadcast_marginal(self, side_information):
        instance, code = side_information
        joint = index_joint(instance, code)
        assert joint.pmf(BROADCAST_VAR).is_uniform


class TestLinearity:

    def test_side_information_code_is_linear(self, side_information):
        instance, code = side_information
        assert code.linear
        assert is_gf2_linear(instance, code)

    def test_affine_code_is_not_linear(self):
        instance, _ = _single_message()
        encoder = Table.tabulate([2, 1], lambda x, z: x ^ 1)
        decoders = {'r': Table.tabulate([2], lambda c: (c ^ 1,))}
        assert not is_gf2_linear(instance, IndexCode(1, encoder, decoders))

    def test_randomized_code_is_not_linear(self):
        instance, _ = _single_message()
        encoder = Table.tabulate([2, 2], lambda x, z: x)
        decoders = {'r': Table.tabulate([2], lambda c: (c,))}
        code = IndexCode(1, encoder, decoders, key_pmf=Pmf.uniform(2))
        assert not is_gf2_linear(instance, code)
