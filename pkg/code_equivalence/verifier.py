import functools
import random

from fractions import Fraction
from typing import Callable, Dict, List, Optional

from code_equivalence.connection.sentry import SentryReporter
from code_equivalence.consts import MAX_GENERATION_ATTEMPTS, TV_COEFFICIENT, Theorem
from code_equivalence.context import Context
from code_equivalence.exceptions import DomainError, EquivalenceError, HypothesisError, \
    TrialException, create_trial_exception
from code_equivalence.generators import CodeGenerator, side_information_example
from code_equivalence.model.index import eval_index_error
from code_equivalence.translation import check_lemma1, check_proposition1, \
    proposition2_witness, verify_theorem
from code_equivalence.utils import TrialTimeoutError, parse_fraction, timeout

EPSILON_LIMIT = Fraction(1, 2)


def handle_trial_step(message):
    def decorator(func):
        @functools.wraps(func)
        def handled_step(trial, *args, **kwargs):
            try:
                return func(trial, *args, **kwargs)
            except TrialTimeoutError as e:
                raise e  # handled by the timeout context manager
            except Exception as e:
                trial.log.debug('Handling exception', exc_info=True)
                raise create_trial_exception(
                    trial_id=trial.trial_id,
                    message=message,
                    exc=e,
                )
        return handled_step
    return decorator


class TrialResult:

    def __init__(self, index: int, seed_string: str, checks: Dict[str, bool],
                 error: Optional[str] = None):
        self.index = index
        self.seed_string = seed_string
        self.checks = checks
        self.error = error

    @property
    def passed(self) -> bool:
        return self.error is None and all(self.checks.values())

    @property
    def failed_checks(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def as_dict(self) -> dict:
        return {
            'trial': self.index,
            'seed': self.seed_string,
            'failedChecks': self.failed_checks,
            'error': self.error,
        }


class Trial:
    """One randomized instance of a theorem: generate inputs, then check them."""

    def __init__(self, theorem: str, seed: int, index: int,
                 epsilon_limit: Fraction = EPSILON_LIMIT, tv_coefficient=TV_COEFFICIENT,
                 max_attempts: int = MAX_GENERATION_ATTEMPTS):
        self.log = Context.logger
        self.theorem = theorem
        self.index = index
        self.trial_id = str(index)
        self.seed_string = f'{theorem}:{seed}:{index}'
        self.epsilon_limit = epsilon_limit
        self.tv_coefficient = tv_coefficient
        self.generator = CodeGenerator(random.Random(self.seed_string), max_attempts)
        self.inputs = dict()  # type: dict
        self.checks = dict()  # type: Dict[str, bool]

    @handle_trial_step('Failed to generate trial inputs')
    def generate(self):
        self.log.debug(f'Generating inputs from seed "{self.seed_string}"')
        self.inputs = self._generators()[self.theorem]()

    @handle_trial_step('Failed to check the generated inputs')
    def check(self):
        self.checks = self._checkers()[self.theorem]()
        self.log.debug(f'Checks: {self.checks}')

    def _generators(self) -> Dict[str, Callable[[], dict]]:
        gen = self.generator
        return {
            Theorem.THM1_FWD: self._fig1_index_code,
            Theorem.THM1_BWD: self._fig1_network_code,
            Theorem.THM2_P1: self._dag_network_code,
            Theorem.THM2_P2A: lambda: self._backward(*gen.perfect_index_code()),
            Theorem.THM2_P2B: lambda: self._backward(
                *gen.imperfect_index_code(self.epsilon_limit),
                tv_coefficient=self.tv_coefficient,
            ),
            Theorem.COR1: lambda: self._backward(*gen.linear_index_code(self.epsilon_limit)),
            Theorem.LEMMA1: self._lemma1_case,
            Theorem.PROP1: self._prop1_case,
        }

    def _checkers(self) -> Dict[str, Callable[[], Dict[str, bool]]]:
        checkers = {t: self._check_clause for t in Theorem.CLAUSES}
        checkers[Theorem.LEMMA1] = self._check_lemma1
        checkers[Theorem.PROP1] = self._check_prop1
        return checkers

    def _fig1_index_code(self) -> dict:
        instance, _ = side_information_example()
        return {'instance': instance, 'code': self.generator.index_code(instance)}

    def _fig1_network_code(self) -> dict:
        instance, _ = side_information_example()
        network, code = self.generator.mapped_network_code(instance)
        return {'instance': instance, 'network': network, 'code': code}

    def _dag_network_code(self) -> dict:
        network = self.generator.dag_instance()
        keyed = self.generator.rng.random() < 0.5
        code = self.generator.network_code(network, keyed=keyed)
        return {'network': network, 'code': code, 'uses': 1}

    @staticmethod
    def _backward(network, instance, code, **options) -> dict:
        return {'network': network, 'instance': instance, 'code': code, 'uses': 1, **options}

    def _lemma1_case(self) -> dict:
        network, instance, code, sigma, eavesdropper_id = \
            self.generator.lemma1_case(self.epsilon_limit)
        return {'network': network, 'instance': instance, 'code': code, 'sigma': sigma,
                'eavesdropper_id': eavesdropper_id, 'uses': 1}

    def _prop1_case(self) -> dict:
        if self.generator.rng.random() < 0.5:
            _, instance, code = self.generator.perfect_index_code()
        else:
            _, instance, code = self.generator.imperfect_index_code(self.epsilon_limit)
        return {'instance': instance, 'code': code}

    def _check_clause(self) -> Dict[str, bool]:
        report = verify_theorem(self.theorem, **self.inputs)
        return report.checks

    def _check_lemma1(self) -> Dict[str, bool]:
        result = check_lemma1(**self.inputs)
        return {
            'lemma': result.holds,
            'entropyOfObservations': result.prop3_holds,
            'conditionalEntropy': result.prop4_holds,
        }

    def _check_prop1(self) -> Dict[str, bool]:
        instance, code = self.inputs['instance'], self.inputs['code']
        violations = check_proposition1(instance, code)
        _, fraction = proposition2_witness(instance, code)
        error = eval_index_error(instance, code)
        return {
            'distinctPreimages': not violations,
            'witnessFraction': fraction >= 1 - error,
        }

    def _run(self, trial_timeout: Optional[int]):
        try:
            with timeout(trial_timeout):
                self.generate()
                self.check()
        except TimeoutError:
            raise create_trial_exception(
                trial_id=self.trial_id,
                message=f'Trial exceeded the time limit of {trial_timeout} s',
            )

    def run(self, trial_timeout: Optional[int] = None) -> TrialResult:
        try:
            self._run(trial_timeout)
        except TrialException as e:
            self.log.error(e.log_message())
            if e.exc is not None and not isinstance(e.exc, EquivalenceError):
                SentryReporter.capture_exception(e.exc)
            return TrialResult(self.index, self.seed_string, self.checks, e.report_message())
        result = TrialResult(self.index, self.seed_string, self.checks)
        if result.passed:
            self.log.info('Trial passed')
        else:
            self.log.error(f'Trial failed checks: {", ".join(result.failed_checks)}')
        return result


class VerificationSummary:

    def __init__(self, theorem: str, seed: int, results: List[TrialResult]):
        self.theorem = theorem
        self.seed = seed
        self.results = results

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.passed)

    @property
    def failed(self) -> int:
        return len(self.results) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def as_dict(self) -> dict:
        return {
            'theorem': self.theorem,
            'seed': self.seed,
            'trials': len(self.results),
            'passed': self.passed,
            'failed': self.failed,
            'ok': self.ok,
            'failures': [r.as_dict() for r in self.results if not r.passed],
        }


class VerificationRunner:
    """Runs seeded trials of one theorem and aggregates their outcome in trial order."""

    def __init__(self, theorem: str, trials: int, seed: int, epsilon=None,
                 tv_coefficient=TV_COEFFICIENT, trial_timeout: Optional[int] = None,
                 max_attempts: int = MAX_GENERATION_ATTEMPTS):
        if theorem not in Theorem.ALL:
            raise DomainError(f'Unknown theorem "{theorem}", expected one of '
                              f'{", ".join(Theorem.ALL)}')
        if trials < 0:
            raise DomainError(f'Number of trials must not be negative, got {trials}')
        self.theorem = theorem
        self.trials = trials
        self.seed = seed
        self.epsilon_limit = self._epsilon_limit(theorem, epsilon)
        self.tv_coefficient = tv_coefficient
        self.trial_timeout = trial_timeout
        self.max_attempts = max_attempts

    @staticmethod
    def _epsilon_limit(theorem: str, epsilon) -> Fraction:
        if epsilon is None:
            return EPSILON_LIMIT
        limit = parse_fraction(epsilon)
        if theorem in (Theorem.THM2_P2B, Theorem.COR1) and limit > EPSILON_LIMIT:
            raise HypothesisError(f'Error limit {limit} exceeds 1/2, the bounds of {theorem} '
                                  f'do not apply')
        if not 0 < limit <= 1:
            raise DomainError(f'Error limit must lie in (0, 1], got {limit}')
        return limit

    def run(self) -> VerificationSummary:
        Context.update_theorem(self.theorem)
        results = []
        for index in range(self.trials):
            Context.update_trial_id(str(index))
            trial = Trial(
                theorem=self.theorem,
                seed=self.seed,
                index=index,
                epsilon_limit=self.epsilon_limit,
                tv_coefficient=self.tv_coefficient,
                max_attempts=self.max_attempts,
            )
            Context.update_trial_seed(trial.seed_string)
            results.append(trial.run(self.trial_timeout))
        Context.reset()
        summary = VerificationSummary(self.theorem, self.seed, results)
        Context.logger.info(f'Verified {self.theorem}: {summary.passed} passed, '
                            f'{summary.failed} failed')
        return summary
