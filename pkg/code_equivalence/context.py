import logging
import os
import sys

from typing import Optional

from code_equivalence.config import EquivalenceConfig
from code_equivalence.consts import ENV_LOG
from code_equivalence.logging import LOGGER, EquivalenceLogFilter, EquivalenceLogger


class ContextNotInitializedError(RuntimeError):

    def __init__(self):
        super().__init__('Context cannot be retrieved, not initialized')


class AppContext:

    def __init__(self, cfg):
        self.cfg = cfg  # type: EquivalenceConfig


class RunContext:

    def __init__(self, theorem: str, trial_id: str, trial_seed: str = '-'):
        self.theorem = theorem
        self.trial_id = trial_id
        self.trial_seed = trial_seed


class _Context:

    def __init__(self, app: AppContext, run: RunContext):
        self.app = app
        self.run = run


class Context:

    _instance = None  # type: Optional[_Context]
    logger = LOGGER

    @classmethod
    def get(cls) -> _Context:
        if cls._instance is None:
            raise ContextNotInitializedError()
        return cls._instance

    @classmethod
    def is_initialized(cls) -> bool:
        return cls._instance is not None

    @classmethod
    def update_trial_id(cls, trial_id: str):
        cls.logger.trial_id = trial_id
        if cls._instance is not None:
            cls._instance.run.trial_id = trial_id

    @classmethod
    def update_trial_seed(cls, trial_seed: str):
        cls.logger.trial_seed = trial_seed
        if cls._instance is not None:
            cls._instance.run.trial_seed = trial_seed

    @classmethod
    def update_theorem(cls, theorem: str):
        cls.logger.theorem = theorem
        if cls._instance is not None:
            cls._instance.run.theorem = theorem

    @classmethod
    def reset(cls):
        cls.update_trial_id('-')
        cls.update_theorem('-')
        cls.update_trial_seed('-')

    @classmethod
    def initialize(cls, config: EquivalenceConfig):
        cls._instance = _Context(
            app=AppContext(
                cfg=config,
            ),
            run=RunContext(
                theorem='-',
                trial_id='-',
            ),
        )
        prepare_logging(config)


def prepare_logging(config: EquivalenceConfig):
    level = os.environ.get(ENV_LOG, config.log.level).upper()
    logging.basicConfig(
        stream=sys.stderr,
        level=config.log.global_level,
        format=config.log.message_format,
    )
    Context.logger.set_level(level)
    log_filter = EquivalenceLogFilter()
    logging.getLogger().addFilter(filter=log_filter)
    for handler in logging.getLogger().handlers:
        handler.addFilter(filter=log_filter)
    loggers = (logging.getLogger(n)
               for n in logging.root.manager.loggerDict.keys())
    for logger in loggers:
        logger.addFilter(filter=log_filter)
    logging.setLoggerClass(EquivalenceLogger)
