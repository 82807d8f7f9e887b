from fractions import Fraction

import pytest

from code_equivalence.consts import FileKind
from code_equivalence.exceptions import InstanceFileError
from code_equivalence.files import InstanceFile
from code_equivalence.mapping import index_to_network
from code_equivalence.model.network import AugmentedInstance
from code_equivalence.probinfo import Pmf

NETWORK_HEADER = """kind: network
instance:
  vertices: [a, b]
  edges:
  - {id: e, tail: a, head: b, capacity: 1}
  messages:
  - {id: x, alphabet: 2, origin: a, destinations: [b]}
"""


class TestLoad:

    def test_index_instance_without_code(self, fixtures_dir, side_information):
        file = InstanceFile.load(fixtures_dir / 'fig1a.sce')
        assert file.kind == FileKind.INDEX
        assert file.code is None
        assert file.instance == side_information[0]

    def test_flow_style_network(self, fixtures_dir, one_time_pad):
        file = InstanceFile.load(fixtures_dir / 'fig2a.sce')
        network, code = one_time_pad
        assert file.instance == network
        assert file.code == code
        assert not file.is_augmented

    def test_augmented(self, fixtures_dir, one_time_pad_augmented):
        file = InstanceFile.load(fixtures_dir / 'fig2b.sce')
        augmented, code = one_time_pad_augmented
        assert isinstance(file.instance, AugmentedInstance)
        assert file.instance == augmented
        assert file.code == code
        assert file.message_pmfs()['3'] == Pmf.point(1)

    def test_pmfs_and_rationals(self):
        text = NETWORK_HEADER.replace('capacity: 1', "capacity: '3/2'") + """pmfs:
  x: [1/4, 3/4]
"""
        file = InstanceFile.loads(text)
        assert file.instance.edge('e').capacity == Fraction(3, 2)
        assert file.message_pmfs() == {'x': Pmf(['1/4', '3/4'])}

    def test_missing_file(self, tmp_path):
        with pytest.raises(InstanceFileError, match='Cannot read'):
            InstanceFile.load(tmp_path / 'nope.sce')


class TestLoadErrors:

    def test_malformed_yaml_reports_position(self):
        with pytest.raises(InstanceFileError) as excinfo:
            InstanceFile.loads('kind: index\ninstance: [a, b\n')
        assert excinfo.value.line is not None
        assert 'line' in str(excinfo.value)

    def test_unknown_kind(self):
        with pytest.raises(InstanceFileError, match='Unknown kind "graph"'):
            InstanceFile.loads('kind: graph\ninstance: {}\n')

    def test_missing_key_names_the_path(self):
        text = NETWORK_HEADER.replace('head: b, ', '')
        with pytest.raises(InstanceFileError, match=r'Missing required key "head" \(at '
                                                    r'instance.edges\[0\]\)'):
            InstanceFile.loads(text)

    def test_incomplete_table(self):
        text = NETWORK_HEADER + """code:
  uses: 1
  encoders:
    e: ['0 0 -> 0']
  decoders:
    b: ['0 -> 0', '1 -> 1']
"""
        with pytest.raises(InstanceFileError, match=r'no row for inputs \(1, 0\)'):
            InstanceFile.loads(text)

    def test_row_outside_domain(self):
        text = NETWORK_HEADER + """code:
  uses: 1
  encoders:
    e: ['0 0 -> 0', '1 0 -> 1', '2 0 -> 1']
  decoders:
    b: ['0 -> 0', '1 -> 1']
"""
        with pytest.raises(InstanceFileError, match=r'code.encoders.e\[2\]'):
            InstanceFile.loads(text)

    def test_duplicate_row(self):
        text = NETWORK_HEADER + """code:
  uses: 1
  encoders:
    e: ['0 0 -> 0', '0 0 -> 1', '1 0 -> 1']
  decoders:
    b: ['0 -> 0', '1 -> 1']
"""
        with pytest.raises(InstanceFileError, match='defined twice'):
            InstanceFile.loads(text)

    def test_missing_decoder(self):
        text = NETWORK_HEADER + """code:
  uses: 1
  encoders:
    e: ['0 0 -> 0', '1 0 -> 1']
"""
        with pytest.raises(InstanceFileError, match='No decoder at destination "b"'):
            InstanceFile.loads(text)

    def test_pmf_not_summing_to_one(self):
        text = NETWORK_HEADER + 'pmfs:\n  x: [1/2, 1/4]\n'
        with pytest.raises(InstanceFileError, match=r'pmfs.x'):
            InstanceFile.loads(text)


class TestDump:

    def test_golden_is_byte_stable(self, goldens_dir):
        text = (goldens_dir / 'fig2b.sce').read_text(encoding='utf-8')
        assert InstanceFile.loads(text).dumps() == text

    def test_numeric_ids_are_quoted(self, side_information):
        instance, code = side_information
        text = InstanceFile(instance, code).dumps()
        assert "- id: '1'" in text
        assert '- 0 0 0 0 0 -> 0' in text
        assert 'key:' not in text

    def test_store_and_load(self, tmp_path, side_information):
        instance, code = side_information
        network = index_to_network(instance, codeword_bits=3)
        original = InstanceFile(network, pmfs={'1': Pmf(['1/3', '2/3'])})
        original.store(tmp_path / 'fig1b.sce')
        assert InstanceFile.load(tmp_path / 'fig1b.sce') == original

    def test_randomized_index_code_keeps_its_key(self, generator, side_information):
        instance, _ = side_information
        code = generator.index_code(instance, max_key=2)
        loaded = InstanceFile.loads(InstanceFile(instance, code).dumps())
        assert loaded.code == code
