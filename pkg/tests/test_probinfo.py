import math

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from code_equivalence.exceptions import DomainError, NullEventError
from code_equivalence.probinfo import JointPmf, Pmf, binary_entropy, \
    conditional_mi_given_event, conditional_mutual_information, entropy, \
    mutual_information, total_variation


@st.composite
def joints(draw, variables=('a', 'b', 'c'), max_size=3):
    sizes = [draw(st.integers(min_value=1, max_value=max_size)) for _ in variables]
    outcomes = [(x, y, z) for x in range(sizes[0]) for y in range(sizes[1])
                for z in range(sizes[2])]
    raw = draw(st.lists(st.integers(min_value=0, max_value=5),
                        min_size=len(outcomes), max_size=len(outcomes)))
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    return JointPmf(variables, sizes,
                    {o: Fraction(w, total) for o, w in zip(outcomes, raw)})


@st.composite
def pmfs(draw, size):
    raw = draw(st.lists(st.integers(min_value=0, max_value=7), min_size=size, max_size=size))
    if sum(raw) == 0:
        raw[-1] = 1
    return Pmf(Fraction(w, sum(raw)) for w in raw)


class TestPmf:

    def test_uniform_and_point(self):
        assert Pmf.uniform(4).weights == (Fraction(1, 4),) * 4
        assert Pmf.uniform(4).is_uniform
        assert Pmf.point(3, 1).weights == (0, 1, 0)
        assert Pmf.point().is_uniform

    def test_rejects_weights_not_summing_to_one(self):
        with pytest.raises(DomainError, match='sum to'):
            Pmf([Fraction(1, 2), Fraction(1, 3)])

    def test_rejects_negative_weight(self):
        with pytest.raises(DomainError, match='nonnegative'):
            Pmf([Fraction(3, 2), Fraction(-1, 2)])

    def test_accepts_rational_strings(self):
        assert Pmf(['1/4', '3/4']) == Pmf([Fraction(1, 4), Fraction(3, 4)])


class TestJointPmf:

    def test_independent_product(self):
        joint = JointPmf.independent({'x': Pmf.uniform(2), 'y': Pmf(['1/4', '3/4'])})
        assert joint.probability({'x': 1, 'y': 1}) == Fraction(3, 8)
        assert joint.pmf('y') == Pmf(['1/4', '3/4'])

    def test_accumulate_sums_repeated_outcomes(self):
        joint = JointPmf.accumulate(['x'], [2], [((0,), Fraction(1, 4)), ((0,), Fraction(1, 4)),
                                                 ((1,), Fraction(1, 2))])
        assert joint.pmf('x').is_uniform

    def test_condition_on_null_event(self):
        joint = JointPmf(['x'], [2], {(0,): 1})
        with pytest.raises(NullEventError):
            joint.condition({'x': 1})

    def test_unknown_variable(self):
        joint = JointPmf(['x'], [2], {(0,): 1})
        with pytest.raises(DomainError, match='Unknown variable id "y"'):
            entropy(joint, ['y'])

    def test_outcome_outside_alphabet(self):
        with pytest.raises(DomainError, match='outside alphabets'):
            JointPmf(['x'], [2], {(2,): 1})


class TestInformationMeasures:

    def test_entropy_of_uniform(self):
        joint = JointPmf.independent({'x': Pmf.uniform(8)})
        assert entropy(joint, ['x']) == pytest.approx(3.0)

    def test_one_time_pad_has_no_leakage(self):
        weights = {(x, z, x ^ z): Fraction(1, 4) for x in range(2) for z in range(2)}
        joint = JointPmf(['x', 'z', 'y'], [2, 2, 2], weights)
        assert mutual_information(joint, ['x'], ['y']) == 0.0
        assert mutual_information(joint, ['x'], ['y', 'z']) == pytest.approx(1.0)

    def test_conditional_mi_given_event(self):
        weights = {(x, z, x ^ z): Fraction(1, 4) for x in range(2) for z in range(2)}
        joint = JointPmf(['x', 'z', 'y'], [2, 2, 2], weights)
        assert conditional_mi_given_event(joint, ['x'], ['y'], {'z': 0}) == pytest.approx(1.0)

    def test_binary_entropy(self):
        assert binary_entropy(0) == 0.0
        assert binary_entropy(Fraction(1, 2)) == pytest.approx(1.0)
        with pytest.raises(DomainError):
            binary_entropy(1.5)

    def test_total_variation(self):
        assert total_variation(Pmf.uniform(2), Pmf.point(2)) == Fraction(1, 2)
        with pytest.raises(DomainError, match='equal supports'):
            total_variation(Pmf.uniform(2), Pmf.uniform(3))

    @settings(max_examples=60, deadline=None)
    @given(joints())
    def test_entropy_bounds(self, joint):
        for var, size in zip(joint.variable_ids, joint.alphabet_sizes):
            assert 0.0 <= entropy(joint, [var]) <= math.log2(size) + 1e-9

    @settings(max_examples=60, deadline=None)
    @given(joints())
    def test_mutual_information_symmetric_and_nonnegative(self, joint):
        ab = mutual_information(joint, ['a'], ['b'])
        assert ab >= 0.0
        assert ab == pytest.approx(mutual_information(joint, ['b'], ['a']), abs=1e-9)
        assert ab <= min(entropy(joint, ['a']), entropy(joint, ['b'])) + 1e-9

    @settings(max_examples=60, deadline=None)
    @given(joints())
    def test_chain_rule(self, joint):
        whole = mutual_information(joint, ['a'], ['b', 'c'])
        split = mutual_information(joint, ['a'], ['c']) \
            + conditional_mutual_information(joint, ['a'], ['b'], ['c'])
        assert whole == pytest.approx(split, abs=1e-9)

    @settings(max_examples=60, deadline=None)
    @given(joints())
    def test_marginal_preserves_entropy(self, joint):
        marginal = joint.marginal(['a', 'c'])
        assert entropy(marginal, ['a', 'c']) == pytest.approx(entropy(joint, ['a', 'c']))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=5).flatmap(lambda n: st.tuples(pmfs(n), pmfs(n))))
    def test_total_variation_is_a_distance(self, pair):
        p, q = pair
        assert 0 <= total_variation(p, q) <= 1
        assert total_variation(p, q) == total_variation(q, p)
        assert total_variation(p, p) == 0
