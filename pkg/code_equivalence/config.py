import yaml
from typing import List, Optional

from code_equivalence.consts import MAX_GENERATION_ATTEMPTS, TV_COEFFICIENT


class MissingConfigurationError(Exception):

    def __init__(self, missing: List[str]):
        self.missing = missing


class GeneralConfig:

    def __init__(self, environment: str):
        self.environment = environment

    def __str__(self):
        return f'GeneralConfig\n' \
               f'- environment = {self.environment} ({type(self.environment)})\n'


class SentryConfig:

    def __init__(self, enabled: bool, dsn: Optional[str]):
        self.enabled = enabled
        self.dsn = dsn

    def __str__(self):
        return f'SentryConfig\n' \
               f'- enabled = {self.enabled} ({type(self.enabled)})\n' \
               f'- dsn = {self.dsn} ({type(self.dsn)})\n'


class LoggingConfig:

    def __init__(self, level: str, global_level: str, message_format: str):
        self.level = level
        self.global_level = global_level
        self.message_format = message_format

    def __str__(self):
        return f'LoggingConfig\n' \
               f'- level = {self.level} ({type(self.level)})\n' \
               f'- global_level = {self.global_level} ({type(self.global_level)})\n' \
               f'- message_format = {self.message_format} ({type(self.message_format)})\n'


class VerificationConfig:

    def __init__(self, trials: int, seed: int, trial_timeout: Optional[int],
                 max_generation_attempts: int):
        self.trials = trials
        self.seed = seed
        self.trial_timeout = trial_timeout
        self.max_generation_attempts = max_generation_attempts

    def __str__(self):
        return f'VerificationConfig\n' \
               f'- trials = {self.trials}\n' \
               f'- seed = {self.seed}\n' \
               f'- trial_timeout = {self.trial_timeout}\n' \
               f'- max_generation_attempts = {self.max_generation_attempts}\n'


class BoundsConfig:

    def __init__(self, tv_coefficient: str):
        self.tv_coefficient = str(tv_coefficient)

    def __str__(self):
        return f'BoundsConfig\n' \
               f'- tv_coefficient = {self.tv_coefficient}\n'


class EquivalenceConfig:

    def __init__(self, log: LoggingConfig, verification: VerificationConfig,
                 bounds: BoundsConfig,
                 sentry: SentryConfig, general: GeneralConfig):
        self.log = log
        self.verification = verification
        self.bounds = bounds
        self.sentry = sentry
        self.general = general

    def __str__(self):
        return f'EquivalenceConfig\n' \
               f'====================\n' \
               f'{self.log}' \
               f'{self.verification}' \
               f'{self.bounds}' \
               f'{self.sentry}' \
               f'{self.general}' \
               f'====================\n'


class EquivalenceConfigParser:

    LOGGING_SECTION = 'logging'
    VERIFICATION_SECTION = 'verification'
    BOUNDS_SECTION = 'bounds'
    SENTRY_SECTION = 'sentry'
    GENERAL_SECTION = 'general'

    DEFAULTS = {
        LOGGING_SECTION: {
            'level': 'WARNING',
            'globalLevel': 'WARNING',
            'format': '%(asctime)s | %(levelname)8s | %(name)s: '
                      '[%(theorem)s#%(trialId)s %(trialSeed)s] %(message)s',
        },
        VERIFICATION_SECTION: {
            'trials': 100,
            'seed': 7,
            'trialTimeout': None,
            'maxGenerationAttempts': MAX_GENERATION_ATTEMPTS,
        },
        BOUNDS_SECTION: {
            'tvCoefficient': TV_COEFFICIENT,
        },
        SENTRY_SECTION: {
            'enabled': False,
            'dsn': None,
        },
        GENERAL_SECTION: {
            'environment': 'Production',
        },
    }

    REQUIRED = []  # type: List[List[str]]

    def __init__(self):
        self.cfg = dict()

    @staticmethod
    def can_read(content):
        try:
            yaml.safe_load(content)
            return True
        except Exception:
            return False

    def read_string(self, content):
        self.cfg = yaml.safe_load(content) or dict()

    def has(self, *path):
        x = self.cfg
        for p in path:
            if not hasattr(x, 'keys') or p not in x.keys():
                return False
            x = x[p]
        return True

    def _get_default(self, *path):
        x = self.DEFAULTS
        for p in path:
            x = x[p]
        return x

    def get_or_default(self, *path):
        x = self.cfg
        for p in path:
            if not hasattr(x, 'keys') or p not in x.keys():
                return self._get_default(*path)
            x = x[p]
        if x is None:
            return self._get_default(*path)
        return x

    def validate(self):
        missing = []
        for path in self.REQUIRED:
            if not self.has(*path):
                missing.append('.'.join(path))
        if len(missing) > 0:
            raise MissingConfigurationError(missing)

    @property
    def logging(self) -> LoggingConfig:
        return LoggingConfig(
            level=self.get_or_default(self.LOGGING_SECTION, 'level'),
            global_level=self.get_or_default(self.LOGGING_SECTION, 'globalLevel'),
            message_format=self.get_or_default(self.LOGGING_SECTION, 'format'),
        )

    @property
    def verification(self) -> VerificationConfig:
        return VerificationConfig(
            trials=self.get_or_default(self.VERIFICATION_SECTION, 'trials'),
            seed=self.get_or_default(self.VERIFICATION_SECTION, 'seed'),
            trial_timeout=self.get_or_default(self.VERIFICATION_SECTION, 'trialTimeout'),
            max_generation_attempts=self.get_or_default(self.VERIFICATION_SECTION,
                                                        'maxGenerationAttempts'),
        )

    @property
    def bounds(self) -> BoundsConfig:
        return BoundsConfig(
            tv_coefficient=self.get_or_default(self.BOUNDS_SECTION, 'tvCoefficient'),
        )

    @property
    def sentry(self) -> SentryConfig:
        return SentryConfig(
            enabled=self.get_or_default(self.SENTRY_SECTION, 'enabled'),
            dsn=self.get_or_default(self.SENTRY_SECTION, 'dsn'),
        )

    @property
    def general(self) -> GeneralConfig:
        return GeneralConfig(
            environment=self.get_or_default(self.GENERAL_SECTION, 'environment'),
        )

    @property
    def config(self) -> EquivalenceConfig:
        return EquivalenceConfig(
            log=self.logging,
            verification=self.verification,
            bounds=self.bounds,
            sentry=self.sentry,
            general=self.general,
        )
