"""Exception hierarchy shared by every module."""

from __future__ import annotations


class DTWallError(Exception):
    """Base class for all errors raised by dtwall."""


class InputError(DTWallError, ValueError):
    """Malformed or out-of-contract input."""


class UnsupportedInputError(InputError):
    """Input that is well formed but outside what the engine handles,
    e.g. a pole at an irrational location."""


class NonEquivariantPoleError(DTWallError, ArithmeticError):
    """The integrand has a pole along the hyperplane class itself."""


class MalformedChartError(InputError):
    """A nonzero-weight component could not be divided by the exceptional
    coordinate."""


class TruncationInconclusive(DTWallError):
    """A verdict could not be certified at the current truncation order.

    Re-run with a larger truncation.
    """


class VerificationError(DTWallError, AssertionError):
    """Two routes that must agree produced different values."""
