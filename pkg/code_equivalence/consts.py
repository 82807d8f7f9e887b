DEFAULT_ENCODING = 'utf-8'
EXIT_SUCCESS = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_INPUT_ERROR = 2
PACKAGE_VERSION = '1.0.0'
PROG_NAME = 'sce'
LOGGER_NAME = 'sce'
FILE_EXTENSION = '.sce'
ENV_LOG = 'SCE_LOG'
ENV_CONFIG = 'SCE_CONFIG'

# clamp for tiny negative mutual informations
NUMERIC_TOLERANCE = 1e-12
# equality of entropies and leakages
EQUALITY_TOLERANCE = 1e-9
# leakage against the closed-form ceilings
BOUND_TOLERANCE = 1e-6

TV_COEFFICIENT = '2'
MAX_GENERATION_ATTEMPTS = 200


class Theorem:
    THM1_FWD = 'thm1_fwd'
    THM1_BWD = 'thm1_bwd'
    THM2_P1 = 'thm2_p1'
    THM2_P2A = 'thm2_p2a'
    THM2_P2B = 'thm2_p2b'
    COR1 = 'cor1'
    LEMMA1 = 'lemma1'
    PROP1 = 'prop1'

    CLAUSES = (THM1_FWD, THM1_BWD, THM2_P1, THM2_P2A, THM2_P2B, COR1)
    ALL = CLAUSES + (LEMMA1, PROP1)


class FileKind:
    INDEX = 'index'
    NETWORK = 'network'

    ALL = (INDEX, NETWORK)


class MapDirection:
    I2N = 'i2n'
    N2I = 'n2i'

    ALL = (I2N, N2I)


class TranslateDirection:
    I2N = 'i2n'
    N2I = 'n2i'
    N2I_AUGMENTED = 'n2i-augmented'
    I2N_SIGMA = 'i2n-sigma'

    ALL = (I2N, N2I, N2I_AUGMENTED, I2N_SIGMA)


class ZetaBranch:
    TOTAL_VARIATION = 'total-variation'
    ERROR_SQUARED = 'error-squared'
    TRIVIAL = 'trivial'


class TvCoefficient:
    THEOREM = '2'
    EXPONENTIAL = 'exp'

    _NAMES = {
        'theorem': THEOREM,
        '2': THEOREM,
        'exp': EXPONENTIAL,
        'exponential': EXPONENTIAL,
        'derivation': EXPONENTIAL,
    }

    @classmethod
    def get(cls, name: str) -> str:
        return cls._NAMES.get(str(name).strip().lower(), str(name).strip())


_DEFAULT_BUILT_AT = 'BUILT_AT'
BUILT_AT = '--BUILT_AT--'
_DEFAULT_VERSION = 'VERSION'
VERSION = '--VERSION--'


BUILD_INFO = {
    'name': PROG_NAME,
    'packageVersion': PACKAGE_VERSION,
    'version': VERSION if VERSION != f'--{_DEFAULT_VERSION}--' else 'unknown',
    'builtAt': BUILT_AT if BUILT_AT != f'--{_DEFAULT_BUILT_AT}--' else 'unknown',
}
