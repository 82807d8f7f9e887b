import contextlib
import itertools
import signal

from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple, Union

from code_equivalence.exceptions import DomainError

Rational = Union[Fraction, int, str]


def bits_for(alphabet_size: int) -> int:
    """Smallest number of bits able to index an alphabet, i.e. ceil(log2 size)."""
    if alphabet_size < 1:
        raise DomainError(f'Alphabet size must be positive, got {alphabet_size}')
    return (alphabet_size - 1).bit_length()


def parse_fraction(value: Union[Rational, float]) -> Fraction:
    if isinstance(value, bool):
        raise DomainError(f'Expected a rational number, got {value!r}')
    if isinstance(value, Fraction):
        return value
    try:
        if isinstance(value, float):
            return Fraction(repr(value))
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise DomainError(f'Expected a rational number, got {value!r}')


def fraction_str(value: Fraction) -> str:
    return str(Fraction(value))


def product_space(sizes: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    return itertools.product(*(range(size) for size in sizes))


def space_size(sizes: Sequence[int]) -> int:
    total = 1
    for size in sizes:
        total *= size
    return total


class TrialTimeoutError(TimeoutError):
    pass


def _raise_timeout(signum, frame):
    raise TrialTimeoutError


@contextlib.contextmanager
def timeout(t: Optional[int]):
    if t is not None:
        signal.signal(signal.SIGALRM, _raise_timeout)
        signal.alarm(t)
    reached_timeout = False
    try:
        yield
    except TrialTimeoutError:
        reached_timeout = True
    finally:
        if t is not None:
            signal.alarm(0)
            signal.signal(signal.SIGALRM, signal.SIG_IGN)
    if reached_timeout:
        raise TimeoutError
