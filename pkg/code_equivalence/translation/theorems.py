"""Run a translation, evaluate both sides and check the promised guarantees."""
import inspect
import math

from fractions import Fraction
from typing import Callable, Dict, Mapping, Optional

from code_equivalence.consts import BOUND_TOLERANCE, EQUALITY_TOLERANCE, NUMERIC_TOLERANCE, \
    TV_COEFFICIENT, Theorem
from code_equivalence.exceptions import DomainError, HypothesisError, PreconditionError
from code_equivalence.logging import LOGGER
from code_equivalence.mapping import index_to_network, network_to_index, split_index_messages
from code_equivalence.model.base import BROADCAST_VAR
from code_equivalence.model.index import IndexCode, IndexInstance, check_index_feasible, \
    index_joint, is_gf2_linear
from code_equivalence.model.network import AugmentedInstance, NetworkCode, NetworkInstance, \
    augment, check_network_feasible
from code_equivalence.probinfo import Pmf, total_variation
from code_equivalence.translation.bounds import gamma, gamma_prime, zeta, zeta_branch
from code_equivalence.translation.codes import translate_i2n, translate_n2i, translate_n2i_code
from code_equivalence.translation.sigma import build_network_code_from_sigma, select_sigma
from code_equivalence.utils import fraction_str


class TranslationReport:
    """Numbers measured on both sides of a translation and the checks derived from them."""

    def __init__(self, theorem: str, source_error: Fraction, source_leakage: Mapping[str, float],
                 target_error: Fraction, target_leakage: Mapping[str, float],
                 chosen_sigma: Optional[int] = None, bound_zeta: Optional[float] = None,
                 bound_gamma: Optional[float] = None, bound_gamma_prime: Optional[float] = None,
                 details: Optional[dict] = None):
        self.theorem = theorem
        self.source_error = Fraction(source_error)
        self.source_leakage = dict(source_leakage)  # type: Dict[str, float]
        self.target_error = Fraction(target_error)
        self.target_leakage = dict(target_leakage)  # type: Dict[str, float]
        self.chosen_sigma = chosen_sigma
        self.bound_zeta = bound_zeta
        self.bound_gamma = bound_gamma
        self.bound_gamma_prime = bound_gamma_prime
        self.details = dict(details or {})
        self.checks = dict()  # type: Dict[str, bool]
        self.evaluate_checks()

    @property
    def eta(self) -> float:
        return max(self.source_leakage.values(), default=0.0)

    @property
    def eavesdropper_count(self) -> int:
        return len(self.source_leakage)

    @property
    def satisfied(self) -> bool:
        return all(self.checks.values())

    def evaluate_checks(self) -> Dict[str, bool]:
        try:
            checker = CHECKS[self.theorem]
        except KeyError:
            raise DomainError(f'Unknown theorem "{self.theorem}"')
        self.checks = checker(self)
        return self.checks

    def as_dict(self) -> dict:
        return {
            'theorem': self.theorem,
            'satisfied': self.satisfied,
            'checks': dict(self.checks),
            'sourceError': fraction_str(self.source_error),
            'sourceLeakage': dict(self.source_leakage),
            'targetError': fraction_str(self.target_error),
            'targetLeakage': dict(self.target_leakage),
            'chosenSigma': self.chosen_sigma,
            'bounds': {
                'zeta': self.bound_zeta,
                'gamma': self.bound_gamma,
                'gammaPrime': self.bound_gamma_prime,
            },
            'details': dict(self.details),
        }

    def __repr__(self):
        return f'TranslationReport({self.theorem}, satisfied={self.satisfied})'


def _leakage_equal(first: Mapping[str, float], second: Mapping[str, float]) -> bool:
    return first.keys() == second.keys() \
        and all(abs(first[r] - second[r]) <= EQUALITY_TOLERANCE for r in first)


def _leakage_within(target: Mapping[str, float], source: Mapping[str, float]) -> bool:
    return all(target[r] <= source[r] + EQUALITY_TOLERANCE for r in target)


def _leakage_below(leakage: Mapping[str, float], ceiling: float, tolerance: float) -> bool:
    return all(value <= ceiling + tolerance for value in leakage.values())


def _checks_thm1_fwd(report: TranslationReport) -> Dict[str, bool]:
    return {
        'errorEqual': report.target_error == report.source_error,
        'leakageEqual': _leakage_equal(report.target_leakage, report.source_leakage),
    }


def _checks_thm1_bwd(report: TranslationReport) -> Dict[str, bool]:
    round_trip = report.details.get('roundTrip', {})
    return {
        'errorWithin': report.target_error <= report.source_error,
        'leakageWithin': _leakage_within(report.target_leakage, report.source_leakage),
        'leakageEqual': _leakage_equal(report.target_leakage, report.source_leakage),
        'roundTrip': Fraction(round_trip.get('error', -1)) == report.target_error
        and _leakage_equal(round_trip.get('leakage', {}), report.target_leakage),
    }


def _checks_thm2_p1(report: TranslationReport) -> Dict[str, bool]:
    return {
        'errorWithin': report.target_error <= report.source_error,
        'leakageEqual': _leakage_equal(report.target_leakage, report.source_leakage),
    }


def _checks_thm2_p2a(report: TranslationReport) -> Dict[str, bool]:
    sigma_errors = report.details.get('sigmaErrors', {})
    sigma_leakage = report.details.get('sigmaLeakage', {})
    return {
        'zeroErrorEverySigma': bool(sigma_errors)
        and all(Fraction(e) == 0 for e in sigma_errors.values()),
        'sigmaExists': any(_leakage_below(leakage, report.eta, EQUALITY_TOLERANCE)
                           for leakage in sigma_leakage.values()),
        'leakageWithin': report.details.get('forcedSigma', False)
        or _leakage_below(report.target_leakage, report.eta, EQUALITY_TOLERANCE),
    }


def _checks_bounded(report: TranslationReport, error_slack: Optional[float],
                    ceiling: Optional[float]) -> Dict[str, bool]:
    if error_slack is None or ceiling is None:
        return {'errorBound': False, 'leakageBound': False}
    bound = report.eavesdropper_count * report.eta + error_slack
    return {
        'errorBound': float(report.target_error) <= bound + NUMERIC_TOLERANCE,
        'leakageBound': _leakage_below(report.target_leakage, ceiling, BOUND_TOLERANCE),
    }


def _checks_thm2_p2b(report: TranslationReport) -> Dict[str, bool]:
    checks = _checks_bounded(report, report.bound_zeta, report.bound_gamma)
    complement = report.details.get('averagedComplement')
    checks['averagedComplementWithinZeta'] = complement is not None \
        and report.bound_zeta is not None \
        and float(Fraction(complement)) <= report.bound_zeta + NUMERIC_TOLERANCE
    return checks


def _checks_cor1(report: TranslationReport) -> Dict[str, bool]:
    checks = _checks_bounded(report, float(report.source_error), report.bound_gamma_prime)
    checks['uniformBroadcast'] = Fraction(report.details.get('totalVariation', 1)) == 0
    return checks


CHECKS = {
    Theorem.THM1_FWD: _checks_thm1_fwd,
    Theorem.THM1_BWD: _checks_thm1_bwd,
    Theorem.THM2_P1: _checks_thm2_p1,
    Theorem.THM2_P2A: _checks_thm2_p2a,
    Theorem.THM2_P2B: _checks_thm2_p2b,
    Theorem.COR1: _checks_cor1,
}  # type: Dict[str, Callable[[TranslationReport], Dict[str, bool]]]


def _network_pmfs(network: NetworkInstance, msg_pmfs: Optional[Mapping[str, Pmf]]):
    if msg_pmfs is None:
        return network.uniform_pmfs()
    return {m: msg_pmfs[m] for m in network.message_ids}


def verify_thm1_fwd(instance: IndexInstance, code: IndexCode,
                    msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> TranslationReport:
    """Index code to network code: error and leakage carry over exactly."""
    network = index_to_network(instance, codeword_bits=code.codeword_bits)
    network_code = translate_i2n(instance, code, network)
    source = check_index_feasible(instance, code, msg_pmfs, 0, 0)
    target = check_network_feasible(network, network_code, msg_pmfs, 0, 0)
    return TranslationReport(Theorem.THM1_FWD, source.error, source.leakage,
                             target.error, target.leakage)


def verify_thm1_bwd(instance: IndexInstance, network: NetworkInstance, code: NetworkCode,
                    msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> TranslationReport:
    """Network code on a mapped network to index code, followed by the way back."""
    source = check_network_feasible(network, code, msg_pmfs, 0, 0)
    index_code = translate_n2i(instance, network, code, msg_pmfs)
    target = check_index_feasible(instance, index_code, msg_pmfs, 0, 0)
    back = translate_i2n(instance, index_code, network, code.uses)
    round_trip = check_network_feasible(network, back, msg_pmfs, 0, 0)
    return TranslationReport(
        Theorem.THM1_BWD, source.error, source.leakage, target.error, target.leakage,
        details={
            'codewordBits': index_code.codeword_bits,
            'roundTrip': {'error': fraction_str(round_trip.error),
                          'leakage': round_trip.leakage},
        },
    )


def _deterministic(network: NetworkInstance, code: NetworkCode,
                   msg_pmfs: Optional[Mapping[str, Pmf]]):
    if isinstance(network, AugmentedInstance) or code.is_deterministic:
        return network, code, _network_pmfs(network, msg_pmfs)
    augmented, deterministic = augment(network, code)
    return augmented, deterministic, augmented.message_pmfs(_network_pmfs(network, msg_pmfs))


def verify_thm2_p1(network: NetworkInstance, code: NetworkCode, uses: int,
                   msg_pmfs: Optional[Mapping[str, Pmf]] = None) -> TranslationReport:
    """Deterministic (or augmented) network code to index code with padded broadcast."""
    source = check_network_feasible(network, code, msg_pmfs, 0, 0)
    augmented, deterministic, pmfs = _deterministic(network, code, msg_pmfs)
    instance, codeword_bits = network_to_index(augmented, uses)
    index_code = translate_n2i_code(augmented, deterministic, instance, uses)
    index_pmfs = instance.uniform_pmfs()
    index_pmfs.update(pmfs)
    target = check_index_feasible(instance, index_code, index_pmfs, 0, 0)
    return TranslationReport(Theorem.THM2_P1, source.error, source.leakage,
                             target.error, target.leakage,
                             details={'codewordBits': codeword_bits})


def _index_side(instance: IndexInstance, code: IndexCode):
    if not code.is_deterministic:
        raise HypothesisError('Backward translation needs a deterministic index code')
    joint = index_joint(instance, code)
    source = check_index_feasible(instance, code, None, 0, 0)
    return joint, source


def verify_thm2_p2a(network: NetworkInstance, instance: IndexInstance, code: IndexCode,
                    uses: int, sigma: Optional[int] = None) -> TranslationReport:
    """Zero-error index code back to a network code, for every broadcast value.

    ``sigma`` forces a broadcast value; its leakage is reported but only the
    existence of some value within the source leakage is required.
    """
    _, source = _index_side(instance, code)
    if source.error != 0:
        raise HypothesisError(f'Index code must decode without error, its error is '
                              f'{source.error}')
    sigma_errors, sigma_leakage = dict(), dict()
    for candidate in range(code.codeword_size):
        built = build_network_code_from_sigma(network, instance, code, candidate, uses)
        result = check_network_feasible(network, built.code, None, 0, 0)
        sigma_errors[candidate] = fraction_str(result.error)
        sigma_leakage[candidate] = result.leakage
    if sigma is not None:
        if sigma not in sigma_errors:
            raise DomainError(f'Broadcast value {sigma!r} outside [2^{code.codeword_bits}]')
        chosen = sigma
    else:
        chosen, _ = select_sigma(instance, code)
        eta = max(source.leakage.values(), default=0.0)
        within = [s for s, leakage in sigma_leakage.items()
                  if _leakage_below(leakage, eta, EQUALITY_TOLERANCE)]
        if within and chosen not in within:
            LOGGER.debug(f'Selected broadcast value {chosen} exceeds the leakage, '
                         f'using {within[0]}')
            chosen = within[0]
    return TranslationReport(
        Theorem.THM2_P2A, source.error, source.leakage,
        Fraction(sigma_errors[chosen]), sigma_leakage[chosen],
        chosen_sigma=chosen,
        details={'sigmaErrors': sigma_errors, 'sigmaLeakage': sigma_leakage,
                 'forcedSigma': sigma is not None},
    )


def _source_bits(instance: IndexInstance) -> float:
    sources, _ = split_index_messages(instance)
    return sum(math.log2(instance.alphabet(m)) for m in sources)


def _broadcast_distance(joint, code: IndexCode) -> Fraction:
    return total_variation(joint.pmf(BROADCAST_VAR), Pmf.uniform(code.codeword_size))


def verify_thm2_p2b(network: NetworkInstance, instance: IndexInstance, code: IndexCode,
                    uses: int, tv_coefficient=TV_COEFFICIENT,
                    sigma: Optional[int] = None) -> TranslationReport:
    """Imperfect index code back to a network code at the selected broadcast value.

    ``sigma`` forces a broadcast value instead of the selected one. A forced
    value on a zero-error code is checked as the zero-error translation.
    """
    joint, source = _index_side(instance, code)
    if source.error == 0 and sigma is not None:
        LOGGER.debug(f'Index code decodes without error, checking broadcast value {sigma} '
                     f'as a zero-error translation')
        return verify_thm2_p2a(network, instance, code, uses, sigma=sigma)
    if not 0 < source.error <= Fraction(1, 2):
        raise HypothesisError(f'Index code error must lie in (0, 1/2], got {source.error}')
    chosen, diagnostics = select_sigma(instance, code)
    if sigma is not None:
        chosen = sigma
    built = build_network_code_from_sigma(network, instance, code, chosen, uses)
    target = check_network_feasible(network, built.code, None, 0, 0)

    tv = _broadcast_distance(joint, code)
    eta = max(source.leakage.values(), default=0.0)
    count = len(source.leakage)
    bound_zeta = zeta(source.error, code.codeword_bits, tv, tv_coefficient)
    bound_gamma = gamma(source.error, eta, count, code.codeword_bits, _source_bits(instance),
                        bound_zeta)
    return TranslationReport(
        Theorem.THM2_P2B, source.error, source.leakage, target.error, target.leakage,
        chosen_sigma=chosen, bound_zeta=bound_zeta, bound_gamma=bound_gamma,
        details={
            'totalVariation': fraction_str(tv),
            'tvCoefficient': str(tv_coefficient),
            'zetaBranch': zeta_branch(source.error, code.codeword_bits, tv, tv_coefficient),
            'averagedComplement': fraction_str(diagnostics.averaged_complement),
            'forcedSigma': sigma is not None,
        },
    )


def verify_cor1(network: NetworkInstance, instance: IndexInstance, code: IndexCode,
                uses: int) -> TranslationReport:
    """Linear index code back to a network code, bounded with a uniform broadcast."""
    if not code.linear:
        raise HypothesisError('Index code is not marked linear')
    if not is_gf2_linear(instance, code):
        raise HypothesisError('Index code is marked linear but its encoder is not GF(2)-linear')
    joint, source = _index_side(instance, code)
    if source.error > Fraction(1, 2):
        raise HypothesisError(f'Index code error must lie in [0, 1/2], got {source.error}')
    chosen, _ = select_sigma(instance, code)
    built = build_network_code_from_sigma(network, instance, code, chosen, uses)
    target = check_network_feasible(network, built.code, None, 0, 0)
    eta = max(source.leakage.values(), default=0.0)
    bound = gamma_prime(source.error, eta, len(source.leakage), code.codeword_bits,
                        _source_bits(instance))
    return TranslationReport(
        Theorem.COR1, source.error, source.leakage, target.error, target.leakage,
        chosen_sigma=chosen, bound_zeta=float(source.error), bound_gamma_prime=bound,
        details={'totalVariation': fraction_str(_broadcast_distance(joint, code))},
    )


VERIFIERS = {
    Theorem.THM1_FWD: verify_thm1_fwd,
    Theorem.THM1_BWD: verify_thm1_bwd,
    Theorem.THM2_P1: verify_thm2_p1,
    Theorem.THM2_P2A: verify_thm2_p2a,
    Theorem.THM2_P2B: verify_thm2_p2b,
    Theorem.COR1: verify_cor1,
}  # type: Dict[str, Callable[..., TranslationReport]]


def verify_theorem(which: str, **inputs) -> TranslationReport:
    try:
        verifier = VERIFIERS[which]
    except KeyError:
        raise DomainError(f'Unknown theorem "{which}", expected one of '
                          f'{", ".join(VERIFIERS)}')
    try:
        inspect.signature(verifier).bind(**inputs)
    except TypeError as e:
        raise PreconditionError(f'Wrong inputs for {which}: {e}')
    report = verifier(**inputs)
    LOGGER.debug(f'{report}: {report.checks}')
    return report
