import pytest
import yaml
from click.testing import CliRunner

from code_equivalence import main
from code_equivalence.consts import PACKAGE_VERSION
from code_equivalence.files import InstanceFile
from code_equivalence.generators import CodeGenerator


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _read(path) -> str:
    return path.read_text(encoding='utf-8')


class TestMap:

    def test_index_to_network_golden(self, runner, tmp_path, fixtures_dir, goldens_dir):
        out = tmp_path / 'fig1b.sce'
        result = runner.invoke(main, ['map', str(fixtures_dir / 'fig1a.sce'),
                                      '--direction', 'i2n', '--output', str(out)])
        assert result.exit_code == 0, result.output
        assert _read(out) == _read(goldens_dir / 'fig1b.sce')

    def test_network_to_index_golden(self, runner, tmp_path, goldens_dir):
        out = tmp_path / 'fig2c.sce'
        result = runner.invoke(main, ['map', str(goldens_dir / 'fig2b.sce'),
                                      '--direction', 'n2i', '--n', '1', '--output', str(out)])
        assert result.exit_code == 0, result.output
        assert _read(out) == _read(goldens_dir / 'fig2c.sce')

    def test_network_to_index_needs_uses(self, runner, goldens_dir):
        result = runner.invoke(main, ['map', str(goldens_dir / 'fig2b.sce'),
                                      '--direction', 'n2i'])
        assert result.exit_code == 2
        assert 'needs --n' in result.output

    def test_wrong_kind(self, runner, fixtures_dir):
        result = runner.invoke(main, ['map', str(fixtures_dir / 'fig1a.sce'),
                                      '--direction', 'n2i', '--n', '1'])
        assert result.exit_code == 2
        assert 'must be a network file' in result.output

    def test_malformed_file(self, runner, tmp_path):
        broken = tmp_path / 'broken.sce'
        broken.write_text('kind: [index\n', encoding='utf-8')
        result = runner.invoke(main, ['map', str(broken), '--direction', 'i2n'])
        assert result.exit_code == 2
        assert 'Error: Malformed file' in result.output


class TestAugment:

    def test_golden(self, runner, tmp_path, fixtures_dir, goldens_dir):
        out = tmp_path / 'fig2b.sce'
        result = runner.invoke(main, ['augment', str(fixtures_dir / 'fig2a.sce'),
                                      '--output', str(out)])
        assert result.exit_code == 0, result.output
        assert _read(out) == _read(goldens_dir / 'fig2b.sce')


class TestTranslate:

    def test_index_to_network(self, runner, tmp_path, side_information):
        source, out, report = tmp_path / 'fig1.sce', tmp_path / 'out.sce', tmp_path / 'r.yml'
        InstanceFile(*side_information).store(source)
        result = runner.invoke(main, ['translate', str(source), '--direction', 'i2n',
                                      '--output', str(out), '--report', str(report)])
        assert result.exit_code == 0, result.output
        assert InstanceFile.load(out).kind == 'network'
        assert yaml.safe_load(_read(report))['satisfied'] is True

    def test_augmented_network_to_index(self, runner, tmp_path, fixtures_dir):
        out, report = tmp_path / 'out.sce', tmp_path / 'r.yml'
        result = runner.invoke(main, ['translate', str(fixtures_dir / 'fig2a.sce'),
                                      '--direction', 'n2i-augmented', '--output', str(out),
                                      '--report', str(report)])
        assert result.exit_code == 0, result.output
        translated = InstanceFile.load(out)
        assert translated.codeword_bits == 2
        assert translated.code.codeword_bits == 2
        assert yaml.safe_load(_read(report))['checks'] == {'errorWithin': True,
                                                           'leakageEqual': True}

    def test_sigma_direction(self, runner, tmp_path, single_edge):
        network, instance, code = CodeGenerator.padded_index_code(*single_edge, linear=True)
        source, companion = tmp_path / 'index.sce', tmp_path / 'network.sce'
        InstanceFile(instance, code).store(source)
        InstanceFile(network).store(companion)
        out, report = tmp_path / 'out.sce', tmp_path / 'r.yml'
        result = runner.invoke(main, ['translate', str(source), '--direction', 'i2n-sigma',
                                      '--companion', str(companion), '--output', str(out),
                                      '--report', str(report)])
        assert result.exit_code == 0, result.output
        assert yaml.safe_load(_read(report))['theorem'] == 'thm2_p2a'
        assert InstanceFile.load(out).code is not None

    def test_forced_sigma_on_perfect_code(self, runner, tmp_path, single_edge):
        network, instance, code = CodeGenerator.padded_index_code(*single_edge, linear=True)
        source, companion = tmp_path / 'index.sce', tmp_path / 'network.sce'
        InstanceFile(instance, code).store(source)
        InstanceFile(network).store(companion)
        out, report = tmp_path / 'out.sce', tmp_path / 'r.yml'
        result = runner.invoke(main, ['translate', str(source), '--direction', 'i2n-sigma',
                                      '--companion', str(companion), '--sigma', '1',
                                      '--output', str(out), '--report', str(report)])
        assert result.exit_code == 0, result.output
        data = yaml.safe_load(_read(report))
        assert data['theorem'] == 'thm2_p2a'
        assert data['chosenSigma'] == 1
        assert data['targetError'] == '0'

    def test_report_follows_the_code_on_stdout(self, tmp_path, single_edge):
        network, instance, code = CodeGenerator.padded_index_code(*single_edge, linear=True)
        source, companion = tmp_path / 'index.sce', tmp_path / 'network.sce'
        InstanceFile(instance, code).store(source)
        InstanceFile(network).store(companion)
        result = CliRunner(mix_stderr=False).invoke(main, [
            'translate', str(source), '--direction', 'i2n-sigma', '--companion', str(companion),
        ])
        assert result.exit_code == 0, result.stderr
        translated, report = yaml.safe_load_all(result.stdout)
        assert translated['kind'] == 'network'
        assert report['theorem'] == 'thm2_p2a'

    def test_sigma_out_of_range(self, runner, tmp_path, single_edge):
        network, instance, code = CodeGenerator.padded_index_code(*single_edge, linear=True)
        source, companion = tmp_path / 'index.sce', tmp_path / 'network.sce'
        InstanceFile(instance, code).store(source)
        InstanceFile(network).store(companion)
        result = runner.invoke(main, ['translate', str(source), '--direction', 'i2n-sigma',
                                      '--companion', str(companion), '--sigma', '5'])
        assert result.exit_code == 2

    def test_missing_companion(self, runner, fixtures_dir):
        result = runner.invoke(main, ['translate', str(fixtures_dir / 'fig2a.sce'),
                                      '--direction', 'n2i'])
        assert result.exit_code == 2
        assert '--companion' in result.output


class TestEvaluate:

    def test_one_time_pad(self, runner, tmp_path, fixtures_dir):
        out = tmp_path / 'report.yml'
        result = runner.invoke(main, ['evaluate', str(fixtures_dir / 'fig2a.sce'),
                                      '--output', str(out)])
        assert result.exit_code == 0, result.output
        data = yaml.safe_load(_read(out))
        assert data['feasible'] is True
        assert data['error'] == '0'

    def test_file_without_code(self, runner, fixtures_dir):
        result = runner.invoke(main, ['evaluate', str(fixtures_dir / 'fig1a.sce')])
        assert result.exit_code == 2
        assert 'holds no code' in result.output


class TestVerify:

    def test_passes(self, runner, tmp_path):
        out = tmp_path / 'summary.yml'
        result = runner.invoke(main, ['verify', 'prop1', '--trials', '2', '--seed', '3',
                                      '--output', str(out)])
        assert result.exit_code == 0, result.output
        summary = yaml.safe_load(_read(out))
        assert summary['ok'] is True
        assert summary['trials'] == 2

    def test_error_limit_above_half(self, runner):
        result = runner.invoke(main, ['verify', 'thm2_p2b', '--trials', '1',
                                      '--epsilon', '0.6'])
        assert result.exit_code == 2
        assert 'exceeds 1/2' in result.output

    def test_unknown_theorem(self, runner):
        result = runner.invoke(main, ['verify', 'thm9'])
        assert result.exit_code == 2


class TestBounds:

    def test_zero_error(self, runner):
        result = runner.invoke(main, ['bounds', '--epsilon', '0', '--codeword-bits', '3'])
        assert result.exit_code == 0, result.output
        data = yaml.safe_load(result.output)
        assert data['zeta'] == 0.0
        assert data['gamma'] == 0.0
        assert data['gammaPrime'] == 0.0

    def test_error_above_half(self, runner):
        result = runner.invoke(main, ['bounds', '--epsilon', '0.6', '--codeword-bits', '3'])
        assert result.exit_code == 2


def test_version(runner):
    result = runner.invoke(main, ['--version'])
    assert result.exit_code == 0
    assert PACKAGE_VERSION in result.output


def test_config_file(runner, tmp_path):
    config = tmp_path / 'config.yml'
    config.write_text('bounds:\n  tvCoefficient: exp\n', encoding='utf-8')
    result = runner.invoke(main, ['--config', str(config), 'bounds', '--epsilon', '1/10',
                                  '--codeword-bits', '2', '--tv', '1/10'])
    assert result.exit_code == 0, result.output
    assert yaml.safe_load(result.output)['zetaBranch'] == 'error-squared'
