"""Exception hierarchy.

Each family maps onto one CLI exit code, so the front end can translate any
failure without inspecting messages.
"""


class PadicError(Exception):
    """Base class for every error raised by the library."""

    exit_code = 5


class ParseError(PadicError, ValueError):
    """Malformed input: bad JSON, bad rational, unknown descriptor."""

    exit_code = 2


class PreconditionError(PadicError, ValueError):
    """An operation was called outside its domain."""

    exit_code = 3


class FieldMismatchError(PreconditionError):
    pass


class NotInvertibleError(PreconditionError, ZeroDivisionError):
    pass


class HypothesisError(PreconditionError):
    """A mathematical hypothesis of an algorithm fails on the given window."""


class BudgetError(PreconditionError):
    pass


class PrecisionError(PadicError, ArithmeticError):
    """The truncation order is too small to certify or extract a result."""

    exit_code = 4


class UnknownCoefficientError(PrecisionError):
    pass


class IterationError(PrecisionError):
    pass
