import pathlib
import random

import pytest

from code_equivalence.generators import CodeGenerator, one_time_pad_example, \
    side_information_example
from code_equivalence.model.base import Eavesdropper
from code_equivalence.model.network import Edge, Message, NetworkCode, NetworkInstance, augment
from code_equivalence.tables import Table

TESTS_DIR = pathlib.Path(__file__).parent
FIXTURES_DIR = TESTS_DIR / 'fixtures'
GOLDENS_DIR = TESTS_DIR / 'goldens'


@pytest.fixture
def fixtures_dir() -> pathlib.Path:
    return FIXTURES_DIR


@pytest.fixture
def goldens_dir() -> pathlib.Path:
    return GOLDENS_DIR


@pytest.fixture
def side_information():
    """Four binary messages, three receivers, eavesdropper holding message 4."""
    return side_information_example()


@pytest.fixture
def one_time_pad():
    """Two parallel edges carrying ``x ^ z`` and ``z``."""
    return one_time_pad_example()


@pytest.fixture
def one_time_pad_augmented(one_time_pad):
    return augment(*one_time_pad)


@pytest.fixture
def generator() -> CodeGenerator:
    return CodeGenerator(random.Random('tests'))


@pytest.fixture
def single_edge():
    """One unit edge forwarding a binary message, tapped by one eavesdropper."""
    network = NetworkInstance(
        vertices=['a', 'b'],
        edges=[Edge('e', 'a', 'b', 1)],
        messages=[Message('x', 2, 'a', ['b'])],
        eavesdroppers=[Eavesdropper('r', targets=['x'], observes=['e'])],
    )
    code = NetworkCode(
        uses=1,
        encoders={'e': Table.tabulate([2, 1], lambda x, z: x, name='e[e]')},
        decoders={'b': Table.tabulate([2], lambda y: (y,), name='d[b]')},
    )
    return network, code


@pytest.fixture
def single_edge_index(single_edge):
    """Mapped index instance of ``single_edge`` with the padded broadcast ``x ^ x_e``."""
    return CodeGenerator.padded_index_code(*single_edge, linear=True)
