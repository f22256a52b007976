"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class VFracError(Exception):
    """Base class for all errors raised by :mod:`vfrac`."""


# -- parameter validation ----------------------------------------------------


class ParameterError(VFracError, ValueError):
    """An invalid parameter tuple."""


class NonPositiveParameter(ParameterError):
    pass


class OrderOutOfRange(ParameterError):
    pass


class ConditionViolated(ParameterError):
    pass


class TruncationTooSmall(ParameterError):
    pass


# -- numerics ----------------------------------------------------------------


class DomainError(VFracError, ValueError):
    """An argument lies outside the domain of a function."""


class Overflow(VFracError, OverflowError):
    """A result exceeds the double precision range."""


class NonConvergence(VFracError, ArithmeticError):
    """An extrapolated limit failed its convergence gate."""


class ToleranceNotMet(VFracError, ArithmeticError):
    """Adaptive quadrature ran out of subdivisions.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class ExpressionBlowup(VFracError):
    """A symbolic expression grew beyond the node budget."""


class ConjugateExponentError(VFracError, ValueError):
    pass


class DirectionMismatch(VFracError, ValueError):
    pass


# -- expression language -----------------------------------------------------


class ExprSyntaxError(VFracError, ValueError):
    """Base for errors that carry a source offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class LexError(ExprSyntaxError):
    pass


class ParseError(ExprSyntaxError):
    pass


class NonConstantExponent(ParseError):
    pass


class UnknownFunction(ParseError):
    pass


class UnknownVariable(ParseError):
    pass


# -- command line ----------------------------------------------------------


class UsageError(VFracError, ValueError):
    """Bad command-line input: unknown flag, missing value, bad number."""


class ReportIOError(VFracError, OSError):
    """A report could not be written to its destination."""
