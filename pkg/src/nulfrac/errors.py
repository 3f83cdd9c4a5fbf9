"""Exception and warning types raised by :mod:`nulfrac`."""

from __future__ import annotations


class NulfracError(Exception):
    """Base class for every error raised by the package."""


class PoleError(NulfracError):
    """A (q-)Gamma function was evaluated at a pole that does not cancel."""


class DivergenceError(NulfracError):
    """An infinite product or series failed to reach its tolerance."""


class DomainError(NulfracError):
    """Arguments fall outside the domain where a formula is defined."""


class SizeError(NulfracError):
    """A grid function is too short for the requested operation."""


class IntegerOrderError(NulfracError):
    """A formula that requires a non-integer order received an integer one."""


class FamilyError(NulfracError):
    """The operation is not available for the given lattice family."""


class AlignmentError(NulfracError):
    """Grid points of two functions (or a summation limit) do not line up."""


class OrderError(NulfracError):
    """The fractional order lies outside the range accepted by an operation."""


class DegenerateError(NulfracError):
    """A polynomial or system is degenerate (e.g. zero leading coefficient)."""


class ConfigError(NulfracError):
    """Invalid or inconsistent configuration."""


class ParseError(NulfracError):
    """Malformed input file."""


class SpacingError(ParseError):
    """Grid samples are not unit spaced."""


class EmptyError(ParseError):
    """Input file contains no samples."""


class IoError(NulfracError):
    """Refused or failed output operation."""


class ConditioningWarning(UserWarning):
    """Kernel values span a dynamic range that endangers double precision."""


class RepeatedRootWarning(UserWarning):
    """A characteristic polynomial has (numerically) repeated roots."""


__all__ = [
    "NulfracError",
    "PoleError",
    "DivergenceError",
    "DomainError",
    "SizeError",
    "IntegerOrderError",
    "FamilyError",
    "AlignmentError",
    "OrderError",
    "DegenerateError",
    "ConfigError",
    "ParseError",
    "SpacingError",
    "EmptyError",
    "IoError",
    "ConditioningWarning",
    "RepeatedRootWarning",
]
