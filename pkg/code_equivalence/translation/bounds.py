"""Closed-form ceilings for the imperfect-decoding backward translation.

All quantities are in bits. ``zeta`` bounds the error of the network code
built from a well chosen broadcast value, ``gamma`` its leakage; ``gamma_prime``
is ``gamma`` for codes whose broadcast is exactly uniform.
"""
import math

from fractions import Fraction
from typing import Union

from code_equivalence.consts import TV_COEFFICIENT, TvCoefficient, ZetaBranch
from code_equivalence.exceptions import DomainError, HypothesisError
from code_equivalence.probinfo import binary_entropy
from code_equivalence.utils import parse_fraction

Real = Union[float, Fraction, int, str]

LOG2_E = math.log2(math.e)


def _probability(name: str, value: Real) -> float:
    try:
        result = float(parse_fraction(value))
    except DomainError:
        raise DomainError(f'{name} must be a number, got {value!r}')
    if not 0.0 <= result <= 1.0:
        raise DomainError(f'{name} must lie in [0, 1], got {result}')
    return result


def resolve_tv_coefficient(coefficient: Union[str, float, int], codeword_bits: int) -> float:
    """Coefficient of the total-variation term: ``'2'``, ``'exp'`` (2^(n+1)) or a number."""
    name = TvCoefficient.get(coefficient)
    if name == TvCoefficient.EXPONENTIAL:
        return float(2 ** (codeword_bits + 1))
    try:
        value = float(parse_fraction(name))
    except DomainError:
        raise DomainError(f'Unknown total variation coefficient {coefficient!r}')
    if value < 0:
        raise DomainError(f'Total variation coefficient must be nonnegative, got {value}')
    return value


def _branches(epsilon: Real, codeword_bits: int, tv: Real, coefficient) -> dict:
    if codeword_bits < 0:
        raise DomainError(f'Codeword length must be nonnegative, got {codeword_bits}')
    eps = _probability('epsilon', epsilon)
    distance = _probability('total variation', tv)
    factor = resolve_tv_coefficient(coefficient, codeword_bits)
    return {
        ZetaBranch.TOTAL_VARIATION: eps * (1 + factor * distance),
        ZetaBranch.ERROR_SQUARED: eps * (1 + eps * 2 ** codeword_bits),
        ZetaBranch.TRIVIAL: 1.0,
    }


def zeta(epsilon: Real, codeword_bits: int, tv: Real,
         coefficient: Union[str, float, int] = TV_COEFFICIENT) -> float:
    return min(_branches(epsilon, codeword_bits, tv, coefficient).values())


def zeta_branch(epsilon: Real, codeword_bits: int, tv: Real,
                coefficient: Union[str, float, int] = TV_COEFFICIENT) -> str:
    """Name of the branch attaining ``zeta``; earlier branches win ties."""
    branches = _branches(epsilon, codeword_bits, tv, coefficient)
    best = min(branches.values())
    return next(name for name, value in branches.items() if value == best)


def gamma(epsilon: Real, eta: Real, eavesdropper_count: int, codeword_bits: int,
          log_source_alphabet: float, zeta_value: Real) -> float:
    eps = float(parse_fraction(epsilon))
    if eps < 0:
        raise DomainError(f'epsilon must be nonnegative, got {eps}')
    if eps > 0.5:
        raise HypothesisError(f'Leakage ceiling needs epsilon in [0, 0.5], got {eps}')
    eta = float(eta)
    if eta < 0 or eavesdropper_count < 0 or log_source_alphabet < 0:
        raise DomainError('eta, the eavesdropper count and the source alphabet logarithm '
                          'must be nonnegative')
    slack = eavesdropper_count * eta + float(parse_fraction(zeta_value))
    if slack >= 1:
        return float(codeword_bits)
    first = slack * (1 / (1 - eps) + (LOG2_E + codeword_bits) / (1 - slack) + log_source_alphabet) \
        + eavesdropper_count * binary_entropy(eps) / (1 - eps) \
        - math.log2(1 - slack)
    return min(max(0.0, first), float(codeword_bits))


def gamma_prime(epsilon: Real, eta: Real, eavesdropper_count: int, codeword_bits: int,
                log_source_alphabet: float) -> float:
    return gamma(epsilon, eta, eavesdropper_count, codeword_bits, log_source_alphabet, epsilon)
