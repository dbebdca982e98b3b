"""Lattice propagator of a spin-1/2 particle in 1+1 dimensions.

The package computes the propagator on a checkerboard lattice by several
independent routes, compares it with the continuum and its large-time
asymptotics, builds the same propagator from loop configurations on a finite
torus, and treats small multiparticle systems.
"""

__version__ = "0.1.0"

from .errors import (
    AnticheckersError,
    DegenerateLatticeError,
    DomainError,
    NumericError,
    OrderOfLimitsError,
    SizeError,
)
from .params import LatticeParams
from .checkers import a_bruteforce, a_dp
from .propagator import PropagatorPair, identity_suite, propagate, propagate_row
from .continuum import ContinuumPoint, convergence_experiment, feynman_continuum
from .torus import LimitSchedule, TorusLattice, infinite_limit, infinite_limit_grid
from .multiparticle import FermiParams, fermi_arrow, two_electron_amplitude

__all__ = [
    "__version__",
    "AnticheckersError",
    "DegenerateLatticeError",
    "DomainError",
    "NumericError",
    "OrderOfLimitsError",
    "SizeError",
    "LatticeParams",
    "a_bruteforce",
    "a_dp",
    "PropagatorPair",
    "identity_suite",
    "propagate",
    "propagate_row",
    "ContinuumPoint",
    "convergence_experiment",
    "feynman_continuum",
    "LimitSchedule",
    "TorusLattice",
    "infinite_limit",
    "infinite_limit_grid",
    "FermiParams",
    "fermi_arrow",
    "two_electron_amplitude",
]
