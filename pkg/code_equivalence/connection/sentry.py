import platform

import sentry_sdk

from code_equivalence.consts import BUILD_INFO


class SentryReporter:

    enabled = False

    @classmethod
    def initialize(cls, dsn: str, environment: str, server_name: str = platform.node()):
        sentry_sdk.init(
            dsn=dsn,
            traces_sample_rate=1.0,
            release=BUILD_INFO['version'],
            server_name=server_name,
            environment=environment,
        )
        sentry_sdk.set_tag('program', BUILD_INFO['name'])
        cls.enabled = True

    @classmethod
    def capture_exception(cls, *args, **kwargs):
        if cls.enabled:
            sentry_sdk.capture_exception(*args, **kwargs)
