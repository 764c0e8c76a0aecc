# src/errors.py
"""
Exception hierarchy for RareLoom.

Errors describing bad values also subclass ValueError so plain
``except ValueError`` handlers keep working.
"""


class RareLoomError(Exception):
    """Base class for every error raised by the package."""


class InvalidMeasureError(RareLoomError, ValueError):
    pass


class InvalidDensityError(RareLoomError, ValueError):
    pass


class InvalidConfigurationError(RareLoomError, ValueError):
    pass


class UnsupportedDensityError(RareLoomError, ValueError):
    pass


class MismatchedSourceError(RareLoomError, ValueError):
    pass


class DegenerateInputError(RareLoomError, ValueError):
    pass


class NumericFailureError(RareLoomError, ArithmeticError):
    pass


class BudgetExceededError(RareLoomError):
    pass


class UnboundedFunctionError(RareLoomError, ValueError):
    pass


class ScheduleError(RareLoomError, ValueError):
    pass


class InsufficientCoverageError(RareLoomError, ValueError):
    pass


class ConfigError(RareLoomError, ValueError):
    """Configuration file could not be parsed or validated."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.message = message
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)


class ExperimentError(RareLoomError):
    """A module error raised inside one (n, seed) task of an experiment."""

    def __init__(self, n: int, seed: int, cause: Exception):
        self.n = n
        self.seed = seed
        self.cause = cause
        super().__init__(f"n={n}, seed={seed}: {type(cause).__name__}: {cause}")
