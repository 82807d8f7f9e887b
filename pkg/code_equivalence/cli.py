import contextlib
import pathlib
import sys

import click  # type: ignore
from typing import IO, Optional

from code_equivalence.config import EquivalenceConfig, EquivalenceConfigParser, \
    MissingConfigurationError
from code_equivalence.connection.sentry import SentryReporter
from code_equivalence.consts import DEFAULT_ENCODING, ENV_CONFIG, EXIT_INPUT_ERROR, \
    EXIT_SUCCESS, EXIT_VERIFICATION_FAILURE, FileKind, MapDirection, PACKAGE_VERSION, \
    PROG_NAME, Theorem, TranslateDirection
from code_equivalence.context import Context
from code_equivalence.exceptions import EquivalenceError, PreconditionError
from code_equivalence.files import InstanceFile, dump_yaml
from code_equivalence.mapping import index_to_network, network_to_index
from code_equivalence.model.index import check_index_feasible, eval_index_error
from code_equivalence.model.network import augment, check_network_feasible
from code_equivalence.translation import build_network_code_from_sigma, gamma, gamma_prime, \
    translate_i2n, translate_n2i, translate_n2i_code, verify_theorem, zeta, zeta_branch
from code_equivalence.translation.theorems import TranslationReport
from code_equivalence.verifier import VerificationRunner


def validate_config(ctx, param, value: Optional[IO]) -> EquivalenceConfig:
    parser = EquivalenceConfigParser()
    if value is None:
        return parser.config
    content = value.read()
    if not parser.can_read(content):
        click.echo('Error: Cannot parse config file', err=True)
        sys.exit(EXIT_INPUT_ERROR)

    try:
        parser.read_string(content)
        parser.validate()
        return parser.config
    except MissingConfigurationError as e:
        click.echo('Error: Missing configuration', err=True)
        for missing_item in e.missing:
            click.echo(f' - {missing_item}', err=True)
        sys.exit(EXIT_INPUT_ERROR)


@contextlib.contextmanager
def handle_errors():
    try:
        yield
    except EquivalenceError as e:
        Context.logger.debug('Handling exception', exc_info=True)
        click.echo(f'Error: {e}', err=True)
        sys.exit(EXIT_INPUT_ERROR)
    except Exception as e:
        SentryReporter.capture_exception(e)
        click.echo(f'Ended with error: {e} ({type(e).__name__})', err=True)
        sys.exit(EXIT_INPUT_ERROR)


def _expect(file: InstanceFile, kind: str, what: str) -> InstanceFile:
    if file.kind != kind:
        raise PreconditionError(f'{what} must be a {kind} file, got a {file.kind} file')
    return file


def _emit(text: str, output: Optional[str]):
    if output is None:
        click.echo(text, nl=False)
    else:
        pathlib.Path(output).write_text(text, encoding=DEFAULT_ENCODING)
        Context.logger.info(f'Written {output}')


def _non_uniform(pmfs: dict) -> Optional[dict]:
    result = {m: p for m, p in pmfs.items() if not p.is_uniform}
    return result or None


def _config(ctx: click.Context) -> EquivalenceConfig:
    return ctx.obj


@click.group(name=PROG_NAME)
@click.version_option(version=PACKAGE_VERSION)
@click.option('--config', envvar=ENV_CONFIG, default=None,
              type=click.File('r', encoding=DEFAULT_ENCODING),
              callback=validate_config, help='YAML configuration file.')
@click.pass_context
def main(ctx: click.Context, config: EquivalenceConfig):
    """Translate codes between secure index coding and secure network coding."""
    Context.initialize(config)
    if config.sentry.enabled and config.sentry.dsn is not None:
        SentryReporter.initialize(
            dsn=config.sentry.dsn,
            environment=config.general.environment,
        )
    ctx.obj = config


@main.command(name='map', help='Map an instance to the other problem.')
@click.argument('input_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--direction', required=True, type=click.Choice(MapDirection.ALL))
@click.option('--n', 'uses', type=click.IntRange(min=1), default=None,
              help='Number of network uses (required for n2i).')
@click.option('--output', type=click.Path(dir_okay=False), default=None)
def cmd_map(input_file: str, direction: str, uses: Optional[int], output: Optional[str]):
    with handle_errors():
        source = InstanceFile.load(input_file)
        if direction == MapDirection.I2N:
            _expect(source, FileKind.INDEX, 'Input of i2n')
            codeword_bits = source.codeword_bits
            if codeword_bits is None and source.code is not None:
                codeword_bits = source.code.codeword_bits
            network = index_to_network(source.instance, uses=uses or 1,
                                       codeword_bits=codeword_bits)
            result = InstanceFile(network, pmfs=source.pmfs)
        else:
            _expect(source, FileKind.NETWORK, 'Input of n2i')
            if uses is None:
                raise PreconditionError('Mapping a network to an index instance needs --n')
            instance, codeword_bits = network_to_index(source.instance, uses)
            result = InstanceFile(instance, pmfs=_non_uniform(source.message_pmfs()),
                                  codeword_bits=codeword_bits)
        _emit(result.dumps(), output)


@main.command(name='augment', help='Turn node randomness into key messages.')
@click.argument('input_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--output', type=click.Path(dir_okay=False), default=None)
def cmd_augment(input_file: str, output: Optional[str]):
    with handle_errors():
        source = _expect(InstanceFile.load(input_file), FileKind.NETWORK, 'Input of augment')
        augmented, code = augment(source.instance, source.require_code())
        _emit(InstanceFile(augmented, code, pmfs=source.pmfs).dumps(), output)


def _translate_i2n(source: InstanceFile, companion: Optional[InstanceFile], uses: int):
    instance, code = source.instance, source.require_code()
    if companion is not None:
        network = _expect(companion, FileKind.NETWORK, 'Companion of i2n').instance
    else:
        network = index_to_network(instance, uses=uses, codeword_bits=code.codeword_bits)
    network_code = translate_i2n(instance, code, network, uses)
    pmfs = source.message_pmfs()
    index_side = check_index_feasible(instance, code, pmfs, 0, 0)
    network_side = check_network_feasible(network, network_code, pmfs, 0, 0)
    report = TranslationReport(Theorem.THM1_FWD, index_side.error, index_side.leakage,
                               network_side.error, network_side.leakage)
    return InstanceFile(network, network_code, pmfs=source.pmfs), report


def _translate_n2i(source: InstanceFile, companion: Optional[InstanceFile]):
    if companion is None:
        raise PreconditionError('Direction n2i needs the index instance as --companion')
    instance = _expect(companion, FileKind.INDEX, 'Companion of n2i').instance
    network, code, pmfs = source.instance, source.require_code(), source.message_pmfs()
    index_code = translate_n2i(instance, network, code, pmfs)
    report = verify_theorem(Theorem.THM1_BWD, instance=instance, network=network, code=code,
                            msg_pmfs=pmfs)
    return InstanceFile(instance, index_code, pmfs=source.pmfs), report


def _translate_n2i_augmented(source: InstanceFile, uses: int):
    network, code, pmfs = source.instance, source.require_code(), source.message_pmfs()
    report = verify_theorem(Theorem.THM2_P1, network=network, code=code, uses=uses,
                            msg_pmfs=pmfs)
    if not code.is_deterministic:
        network, code = augment(network, code)
        pmfs = network.message_pmfs(pmfs)
    instance, codeword_bits = network_to_index(network, uses)
    index_code = translate_n2i_code(network, code, instance, uses)
    result = InstanceFile(instance, index_code, pmfs=_non_uniform(pmfs),
                          codeword_bits=codeword_bits)
    return result, report


def _translate_i2n_sigma(source: InstanceFile, companion: Optional[InstanceFile], uses: int,
                         sigma: Optional[int], tv_coefficient: str):
    if companion is None:
        raise PreconditionError('Direction i2n-sigma needs the deterministic network as '
                                '--companion')
    network = _expect(companion, FileKind.NETWORK, 'Companion of i2n-sigma').instance
    instance, code = source.instance, source.require_code()
    inputs = dict(network=network, instance=instance, code=code, uses=uses)
    if eval_index_error(instance, code) == 0:
        report = verify_theorem(Theorem.THM2_P2A, sigma=sigma, **inputs)
    elif code.linear and sigma is None:
        report = verify_theorem(Theorem.COR1, **inputs)
    else:
        report = verify_theorem(Theorem.THM2_P2B, tv_coefficient=tv_coefficient, sigma=sigma,
                                **inputs)
    chosen = sigma if sigma is not None else report.chosen_sigma
    built = build_network_code_from_sigma(network, instance, code, chosen, uses)
    return InstanceFile(network, built.code), report


@main.command(name='translate', help='Translate a code to the other problem.')
@click.argument('input_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--direction', required=True, type=click.Choice(TranslateDirection.ALL))
@click.option('--companion', type=click.Path(exists=True, dir_okay=False), default=None,
              help='Instance on the other side (index instance for n2i, '
                   'deterministic network for i2n-sigma).')
@click.option('--n', 'uses', type=click.IntRange(min=1), default=1,
              help='Number of network uses.')
@click.option('--sigma', type=int, default=None, help='Force the broadcast value (i2n-sigma).')
@click.option('--tv-coefficient', default=None, help="Total variation coefficient: '2', "
                                                     "'exp' or a number.")
@click.option('--output', type=click.Path(dir_okay=False), default=None,
              help='Translated file (standard output when omitted).')
@click.option('--report', 'report_file', type=click.Path(dir_okay=False), default=None,
              help='Translation report (standard output when omitted).')
@click.pass_context
def cmd_translate(ctx: click.Context, input_file: str, direction: str, companion: Optional[str],
                  uses: int, sigma: Optional[int], tv_coefficient: Optional[str],
                  output: Optional[str], report_file: Optional[str]):
    tv_coefficient = tv_coefficient or _config(ctx).bounds.tv_coefficient
    with handle_errors():
        source = InstanceFile.load(input_file)
        other = InstanceFile.load(companion) if companion is not None else None
        Context.update_theorem(direction)
        if direction == TranslateDirection.I2N:
            _expect(source, FileKind.INDEX, 'Input of i2n')
            result, report = _translate_i2n(source, other, uses)
        elif direction == TranslateDirection.N2I:
            _expect(source, FileKind.NETWORK, 'Input of n2i')
            result, report = _translate_n2i(source, other)
        elif direction == TranslateDirection.N2I_AUGMENTED:
            _expect(source, FileKind.NETWORK, 'Input of n2i-augmented')
            result, report = _translate_n2i_augmented(source, uses)
        else:
            _expect(source, FileKind.INDEX, 'Input of i2n-sigma')
            result, report = _translate_i2n_sigma(source, other, uses, sigma, tv_coefficient)
        Context.logger.info(f'Translated with {report}')
        _emit(result.dumps(), output)
        report_text = dump_yaml(report.as_dict())
        if report_file is not None:
            _emit(report_text, report_file)
        elif output is None:
            # second document of the same stream
            _emit('---\n' + report_text, None)
        else:
            _emit(report_text, None)
        Context.reset()


@main.command(name='evaluate', help='Measure the error and leakage of a code.')
@click.argument('input_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--epsilon', default='0', help='Error ceiling (rational).')
@click.option('--eta', type=float, default=0.0, help='Leakage ceiling in bits.')
@click.option('--output', type=click.Path(dir_okay=False), default=None)
def cmd_evaluate(input_file: str, epsilon: str, eta: float, output: Optional[str]):
    with handle_errors():
        source = InstanceFile.load(input_file)
        if source.kind == FileKind.INDEX:
            report = check_index_feasible(source.instance, source.require_code(),
                                          source.message_pmfs(), epsilon, eta)
        else:
            report = check_network_feasible(source.instance, source.require_code(),
                                            source.message_pmfs(), epsilon, eta)
        _emit(dump_yaml(report.as_dict()), output)


@main.command(name='verify', help='Check a theorem on seeded random trials.')
@click.argument('theorem', type=click.Choice(Theorem.ALL))
@click.option('--trials', type=click.IntRange(min=0), default=None)
@click.option('--seed', type=int, default=None)
@click.option('--epsilon', default=None, help='Largest error of generated imperfect codes.')
@click.option('--tv-coefficient', default=None, help="Total variation coefficient: '2', "
                                                     "'exp' or a number.")
@click.option('--output', type=click.Path(dir_okay=False), default=None)
@click.pass_context
def cmd_verify(ctx: click.Context, theorem: str, trials: Optional[int], seed: Optional[int],
               epsilon: Optional[str], tv_coefficient: Optional[str], output: Optional[str]):
    cfg = _config(ctx)
    with handle_errors():
        runner = VerificationRunner(
            theorem=theorem,
            trials=trials if trials is not None else cfg.verification.trials,
            seed=seed if seed is not None else cfg.verification.seed,
            epsilon=epsilon,
            tv_coefficient=tv_coefficient or cfg.bounds.tv_coefficient,
            trial_timeout=cfg.verification.trial_timeout,
            max_attempts=cfg.verification.max_generation_attempts,
        )
        summary = runner.run()
        _emit(dump_yaml(summary.as_dict()), output)
    sys.exit(EXIT_SUCCESS if summary.ok else EXIT_VERIFICATION_FAILURE)


@main.command(name='bounds', help='Evaluate the error and leakage ceilings.')
@click.option('--epsilon', required=True, help='Error of the index code.')
@click.option('--eta', type=float, default=0.0, help='Leakage of the index code in bits.')
@click.option('--eavesdroppers', type=click.IntRange(min=0), default=1)
@click.option('--codeword-bits', type=click.IntRange(min=0), required=True)
@click.option('--source-bits', type=float, default=0.0,
              help='Logarithm of the source alphabet size.')
@click.option('--tv', default='0', help='Total variation distance of the broadcast.')
@click.option('--tv-coefficient', default=None, help="Total variation coefficient: '2', "
                                                     "'exp' or a number.")
@click.pass_context
def cmd_bounds(ctx: click.Context, epsilon: str, eta: float, eavesdroppers: int,
               codeword_bits: int, source_bits: float, tv: str,
               tv_coefficient: Optional[str]):
    tv_coefficient = tv_coefficient or _config(ctx).bounds.tv_coefficient
    with handle_errors():
        zeta_value = zeta(epsilon, codeword_bits, tv, tv_coefficient)
        result = {
            'zeta': zeta_value,
            'zetaBranch': zeta_branch(epsilon, codeword_bits, tv, tv_coefficient),
            'gamma': gamma(epsilon, eta, eavesdroppers, codeword_bits, source_bits,
                           zeta_value),
            'gammaPrime': gamma_prime(epsilon, eta, eavesdroppers, codeword_bits,
                                      source_bits),
        }
        _emit(dump_yaml(result), None)
