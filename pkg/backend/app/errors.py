"""Exception hierarchy shared by the library and the command line.

Every class carries the exit code the CLI uses when the exception escapes a
command; library code only ever raises.
"""


class PentatileError(Exception):
    exit_code = 1


class DomainError(PentatileError, ValueError):
    """A parameter lies outside the domain of the requested operation."""

    exit_code = 2


class BranchCutError(DomainError):
    """The resolvent was evaluated on its cut."""


class OutOfBandError(DomainError):
    """A band density was requested outside the open band (a, b)."""


class IrrationalValueError(DomainError):
    """An exact result is irrational and no working precision was given."""


class IrrationalWeightError(IrrationalValueError):
    """A configuration weight is not a rational number."""


class ConfigurationError(PentatileError):
    exit_code = 2


class FeasibilityError(PentatileError):
    """A configurable computation cap was exceeded."""

    exit_code = 3


class SizeLimitError(FeasibilityError):
    pass


class TermCapError(FeasibilityError):
    pass


class LossOfSignificanceError(FeasibilityError, ArithmeticError):
    """The floating determinant cannot be trusted to 32 bits.

    The computed value and the relative error estimate travel with the
    exception so callers can still report a flagged result.
    """

    def __init__(self, message, value=None, estimate=None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class OracleMismatchError(PentatileError, AssertionError):
    exit_code = 1
