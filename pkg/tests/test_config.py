import logging

import pytest

from code_equivalence.config import EquivalenceConfigParser, MissingConfigurationError
from code_equivalence.consts import MAX_GENERATION_ATTEMPTS
from code_equivalence.context import Context, ContextNotInitializedError
from code_equivalence.logging import EquivalenceLogFilter


class TestConfigParser:

    def test_defaults(self):
        config = EquivalenceConfigParser().config
        assert config.verification.trials == 100
        assert config.verification.trial_timeout is None
        assert config.verification.max_generation_attempts == MAX_GENERATION_ATTEMPTS
        assert config.bounds.tv_coefficient == '2'
        assert not config.sentry.enabled

    def test_partial_file(self):
        parser = EquivalenceConfigParser()
        parser.read_string('verification:\n  seed: 11\nbounds:\n  tvCoefficient: exp\n')
        config = parser.config
        assert config.verification.seed == 11
        assert config.verification.trials == 100
        assert config.bounds.tv_coefficient == 'exp'

    def test_null_values_fall_back(self):
        parser = EquivalenceConfigParser()
        parser.read_string('logging:\n  level:\n')
        assert parser.config.log.level == 'WARNING'

    def test_can_read(self):
        assert EquivalenceConfigParser.can_read('a: 1')
        assert not EquivalenceConfigParser.can_read('a: [1')

    def test_missing_required(self):
        parser = EquivalenceConfigParser()
        parser.REQUIRED = [['sentry', 'dsn']]
        with pytest.raises(MissingConfigurationError) as excinfo:
            parser.validate()
        assert excinfo.value.missing == ['sentry.dsn']

    def test_str_lists_sections(self):
        text = str(EquivalenceConfigParser().config)
        assert 'VerificationConfig' in text
        assert 'tv_coefficient = 2' in text


class TestContext:

    def test_trial_fields(self):
        Context.initialize(EquivalenceConfigParser().config)
        Context.update_theorem('thm1_fwd')
        Context.update_trial_id('3')
        assert Context.get().run.theorem == 'thm1_fwd'
        assert Context.logger.trial_id == '3'
        Context.reset()
        assert Context.get().run.trial_id == '-'

    def test_trial_seed(self):
        Context.initialize(EquivalenceConfigParser().config)
        Context.update_trial_seed('thm2_p2b:7:3')
        assert Context.logger.trial_seed == 'thm2_p2b:7:3'
        assert Context.get().run.trial_seed == 'thm2_p2b:7:3'
        Context.reset()
        assert Context.get().run.trial_seed == '-'

    def test_filter_fills_missing_attributes(self):
        record = logging.LogRecord('sce', logging.INFO, __file__, 1, 'message', None, None)
        assert EquivalenceLogFilter().filter(record)
        assert (record.theorem, record.trialId, record.trialSeed) == ('-', '-', '-')

    def test_not_initialized(self, monkeypatch):
        monkeypatch.setattr(Context, '_instance', None)
        assert not Context.is_initialized()
        with pytest.raises(ContextNotInitializedError):
            Context.get()
