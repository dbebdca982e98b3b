"""Feynman's original checkers model.

The amplitude ``a(x, t)`` is the sum over checker paths from ``(0, 0)`` to
``(x, t)`` whose first move goes to ``(eps, eps)``.  A path with ``n`` points
and ``turns`` turns contributes ``(1 + m^2 eps^2)^(1 - n/2) * i * (-i m eps)^turns``.
Amplitudes are returned as complex numbers ``a1 + i*a2``.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import DomainError, SizeError
from .params import LatticeParams, to_steps

MAX_BRUTEFORCE_STEPS = 22


def _path_weights(me: float, n_steps: int) -> np.ndarray:
    """Arrow of one path with ``n_steps`` moves as a function of its turn count."""
    norm = (1.0 + me * me) ** (1.0 - (n_steps + 1) / 2.0)
    turns = np.arange(n_steps)
    return norm * 1j * (-1j * me) ** turns


def a_bruteforce(x: float, t: float, params: LatticeParams) -> complex:
    """Checkers amplitude by enumerating all paths.

    Raises
    ------
    DomainError
        If ``t <= 0`` or the point is off the lattice.
    SizeError
        If ``t/eps`` exceeds 22.
    """
    n = to_steps(t, params.eps, "t")
    ix = to_steps(x, params.eps, "x")
    if n <= 0:
        raise DomainError("checkers amplitude needs t > 0")
    if n > MAX_BRUTEFORCE_STEPS:
        raise SizeError(f"t/eps = {n} too large for path enumeration")
    counts = kernels.path_turn_histogram(n - 1, ix)
    return complex(np.dot(counts.astype(float), _path_weights(params.me, n)))


def a_dp_rows(n_steps: int, me: float) -> tuple[np.ndarray, np.ndarray]:
    """March the two-component recurrence up to ``t = n_steps * eps``.

    Returns
    -------
    a1, a2 : numpy.ndarray
        Real arrays indexed by ``x/eps + n_steps`` covering ``|x| <= t``.
    """
    if n_steps < 1:
        raise DomainError("checkers amplitude needs t > 0")
    width = 2 * n_steps + 3
    a1 = np.zeros(width)
    a2 = np.zeros(width)
    a2[n_steps + 1 + 1] = 1.0  # a(eps, eps) = i, stored with one spare cell each side
    norm = 1.0 / math.sqrt(1.0 + me * me)
    for _ in range(n_steps - 1):
        new1 = np.zeros(width)
        new2 = np.zeros(width)
        new1[:-1] = (a1[1:] + me * a2[1:]) * norm
        new2[1:] = (a2[:-1] - me * a1[:-1]) * norm
        a1, a2 = new1, new2
    return a1[1:-1], a2[1:-1]


def a_dp(x: float, t: float, params: LatticeParams) -> complex:
    """Checkers amplitude from the lattice Dirac recurrence."""
    n = to_steps(t, params.eps, "t")
    ix = to_steps(x, params.eps, "x")
    if n <= 0:
        raise DomainError("checkers amplitude needs t > 0")
    if abs(ix) > n:
        return 0j
    a1, a2 = a_dp_rows(n, params.me)
    return complex(a1[ix + n], a2[ix + n])
