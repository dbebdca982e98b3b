"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class AnticheckersError(Exception):
    """Base class for every error raised by the package."""


class DomainError(AnticheckersError, ValueError):
    """An argument lies outside the domain of the requested function."""


class SizeError(AnticheckersError, ValueError):
    """A request is too large for an exact or brute-force method."""


class NumericError(AnticheckersError, ArithmeticError):
    """An iterative numerical method failed to converge.

    Parameters
    ----------
    message : str
        Human readable description.
    partial : object, optional
        Last available estimate or a trace of the iteration.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateLatticeError(AnticheckersError, ArithmeticError):
    """The transfer system of a finite lattice is singular."""


class OrderOfLimitsError(DegenerateLatticeError):
    """The regulator limit was requested on a torus where it does not exist."""
