"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A parameter violates its invariant.

    ``key`` names the offending configuration key.
    """

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


class ParseError(ValueError):
    """A configuration file is missing or malformed."""

    def __init__(self, message, line=None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line


class NumericalError(RuntimeError):
    """Base class for failures of the time-stepping machinery."""

    def __init__(self, message, step=None):
        if step is not None:
            message = f"{message} at step {step}"
        super().__init__(message)
        self.step = step


class SingularMatrix(NumericalError):
    pass


class NewtonDiverged(NumericalError):
    pass


class NoThreshold(LookupError):
    """No consecutive pair of amplitudes shows the required energy jump."""


class IndexOutOfRange(IndexError):
    pass
