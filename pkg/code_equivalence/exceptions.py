from typing import Optional


class EquivalenceError(Exception):

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return self.message


class DomainError(EquivalenceError):
    pass


class NullEventError(DomainError):
    pass


class StructuralError(EquivalenceError):
    pass


class ValidationError(EquivalenceError):

    def __init__(self, invariant: str, message: str):
        super().__init__(f'{message} (violates: {invariant})')
        self.invariant = invariant


class EvaluationError(EquivalenceError):
    pass


class PreconditionError(EquivalenceError):
    pass


class InstanceMismatchError(PreconditionError):
    pass


class HypothesisError(EquivalenceError):
    pass


class InstanceFileError(EquivalenceError):

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, path: Optional[str] = None):
        location = ''
        if line is not None:
            location = f' (line {line}, column {column})'
        elif path:
            location = f' (at {path})'
        super().__init__(f'{message}{location}')
        self.line = line
        self.column = column
        self.path = path


class TrialException(Exception):

    def __init__(self, trial_id: str, msg: str, exc=None):
        self.trial_id = trial_id
        self.msg = msg
        self.exc = exc

    def log_message(self):
        if self.exc is None:
            return self.msg
        else:
            return f'{self.msg}: [{type(self.exc).__name__}] {str(self.exc)}'

    def report_message(self):
        if self.exc is None:
            return self.msg
        return f'{self.msg} (caused by {type(self.exc).__name__}: {str(self.exc)})'


def create_trial_exception(trial_id: str, message: str, exc=None):
    if isinstance(exc, TrialException):
        return exc

    return TrialException(
        trial_id=trial_id,
        msg=message,
        exc=exc,
    )
