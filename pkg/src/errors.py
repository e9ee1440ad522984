"""
Exception hierarchy for mhsolve.

Algorithm-level "fail" outcomes are returned as values by the orchestration
functions; the exceptions below signal the concrete reason underneath.
"""

from typing import Optional


class MhsolveError(Exception):
    """Base class for all mhsolve errors."""


class DomainError(MhsolveError, ValueError):
    """A value cannot be represented in the requested coefficient domain."""


class NotInvertible(MhsolveError, ZeroDivisionError):
    """An element (or polynomial modulo another) has no inverse."""


class SingularSystem(MhsolveError):
    """A linear system or Jacobian is singular where it must not be."""


class CharacteristicTooSmall(MhsolveError, ValueError):
    """The field characteristic is below a degree bound the algorithm needs."""


class ReconstructionFailed(MhsolveError):
    """Padé or rational reconstruction did not produce a consistent answer."""


class RationalReconstructionError(ReconstructionFailed):
    """No fraction u/v within the bound matches the residue."""


class NotSeparating(MhsolveError):
    """A linear form takes the same value on two distinct points."""


class InvalidValuation(MhsolveError):
    """A coordinate keeps a pole at t = 1 after scaling by (t - 1)^e."""


class ChowArrayTooLarge(MhsolveError, ValueError):
    """The dense truncated Chow ring array would exceed the size cap."""


class ConfigError(MhsolveError, ValueError):
    """Invalid configuration value."""


class SystemFileError(MhsolveError, ValueError):
    """Malformed system file."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column or 0}: {message}"
        super().__init__(message)
