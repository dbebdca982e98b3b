"""Model parameters and lattice-coordinate helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class LatticeParams:
    """Physical knobs of the lattice model.

    Attributes
    ----------
    m : float
        Particle mass, nonnegative.
    eps : float
        Lattice step, positive.
    delta : float
        Small imaginary mass in ``(0, 1)``; only the finite torus uses it.
    """

    m: float = 1.0
    eps: float = 1.0
    delta: float = 0.5

    def __post_init__(self):
        if not self.eps > 0:
            raise DomainError("lattice step must be positive")
        if not self.m >= 0:
            raise DomainError("mass must be nonnegative")
        if not 0.0 <= self.delta < 1.0:
            raise DomainError("delta must lie in [0, 1)")

    @property
    def me(self) -> float:
        """Dimensionless mass ``m * eps``."""
        return self.m * self.eps


def to_steps(value: float, eps: float, what: str = "coordinate") -> int:
    """Convert a multiple of ``eps`` to an integer, rejecting non-multiples."""
    q = value / eps
    n = round(q)
    if abs(q - n) > 1e-9 * max(1.0, abs(q)):
        raise DomainError(f"{what} {value} is not a multiple of eps={eps}")
    return int(n)


def ceil_steps(value: float, step: float) -> int:
    """``ceil(value/step)`` that ignores floating-point noise at integers."""
    q = value / step
    n = round(q)
    if abs(q - n) <= 1e-9 * max(1.0, abs(q)):
        return int(n)
    return int(math.ceil(q))
