"""Several particles: two identical checkers electrons, multi-point arrows and Fermi coupling."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import DegenerateLatticeError, DomainError, SizeError
from .params import LatticeParams
from .torus import EdgeId, TorusLattice, _Enumerator

RIGHT = +1
LEFT = -1
MAX_TWO_ELECTRON_T = 12
MAX_ENUM_PATH_T = 8


# -- two electrons in the original checkers model -------------------------------------


@dataclass(frozen=True)
class TwoElectronQuery:
    """Final data for two electrons emitted from ``(0, 0)`` and ``(x0, 0)``.

    ``last`` and ``last_prime`` are the directions of the final moves into
    ``F = (x, t)`` and ``F' = (x', t)``: ``+1`` for a move to the right,
    ``-1`` for a move to the left.  Both first moves go up-right.
    """

    x0: int
    x: int
    x_prime: int
    t: int
    last: int = RIGHT
    last_prime: int = RIGHT

    def __post_init__(self):
        if self.x0 == 0:
            raise DomainError("the two sources must differ (x0 != 0)")
        if self.t < 1:
            raise DomainError("t must be positive")
        if self.last not in (RIGHT, LEFT) or self.last_prime not in (RIGHT, LEFT):
            raise DomainError("final moves are +1 or -1")


@lru_cache(maxsize=64)
def _end_amplitudes(t: int) -> np.ndarray:
    """Path sums from ``(0, 0)`` with first move up-right, split by the last move.

    Returns an array ``amp[d, x + t]`` with ``d = 0`` for a last move to the
    right and ``d = 1`` to the left; ``m = eps = 1``.
    """
    if t < 1:
        raise DomainError("t must be positive")
    if t > MAX_TWO_ELECTRON_T:
        raise SizeError(f"t <= {MAX_TWO_ELECTRON_T} required")
    width = 2 * t + 1
    amp = np.zeros((2, width), dtype=complex)
    amp[0, t + 1] = 1j
    step = 1 / math.sqrt(2)
    for _ in range(t - 1):
        new = np.zeros_like(amp)
        for d in (0, 1):
            new[0, 1:] += step * (1 if d == 0 else -1j) * amp[d, :-1]
            new[1, :-1] += step * (1 if d == 1 else -1j) * amp[d, 1:]
        amp = new
    amp.setflags(write=False)
    return amp


def path_sum_dp(x: int, t: int, last: int) -> complex:
    """Sum of ``a(s)`` over paths from ``(0, 0)`` starting up-right and ending at ``(x, t)``."""
    amp = _end_amplitudes(t)
    if abs(x) > t:
        return 0j
    return complex(amp[0 if last == RIGHT else 1, x + t])


def path_sum_enum(x: int, t: int, last: int) -> complex:
    """Same as :func:`path_sum_dp` by listing every path (``t <= 8``)."""
    if t > MAX_ENUM_PATH_T:
        raise SizeError(f"t <= {MAX_ENUM_PATH_T} required for enumeration")
    total = 0j
    for rest in itertools.product((RIGHT, LEFT), repeat=t - 1):
        moves = (RIGHT,) + rest
        if sum(moves) != x or moves[-1] != last:
            continue
        turns = sum(1 for u, v in zip(moves, moves[1:]) if u != v)
        total += 1j * (-1j) ** turns * 2 ** ((1 - t) / 2)
    return total


def two_electron_amplitude(q: TwoElectronQuery, path_sum=path_sum_dp) -> complex:
    """Antisymmetrized amplitude to find the electrons with the given final moves."""
    direct = path_sum(q.x, q.t, q.last) * path_sum(q.x_prime - q.x0, q.t, q.last_prime)
    swapped = path_sum(q.x_prime, q.t, q.last_prime) * path_sum(q.x - q.x0, q.t, q.last)
    return direct - swapped


def two_electron_probability(q: TwoElectronQuery) -> float:
    return abs(two_electron_amplitude(q)) ** 2


def final_states(t: int, x0: int):
    """Unordered pairs of distinct final states ``((x, last), (x', last'))``."""
    lo, hi = min(0, x0) - t, max(0, x0) + t
    states = [(x, d) for x in range(lo, hi + 1) for d in (RIGHT, LEFT)]
    return itertools.combinations(states, 2)


def total_probability(t: int, x0: int) -> float:
    """Sum of the two-electron probabilities over all distinct final states."""
    return sum(
        two_electron_probability(TwoElectronQuery(x0, x, xp, t, d, dp))
        for (x, d), (xp, dp) in final_states(t, x0)
    )


# -- multi-point arrows on the torus ---------------------------------------------------


def det_arrow(lat: TorusLattice, sources, sinks) -> complex:
    """``A(a_1..a_n -> f_1..f_n)`` as the determinant of single-pair arrows.

    Returns 0 if two sources or two sinks coincide.
    """
    sources, sinks = list(sources), list(sinks)
    if len(sources) != len(sinks):
        raise DomainError("need as many sources as sinks")
    if len(set(sources)) < len(sources) or len(set(sinks)) < len(sinks):
        return 0j
    mat = np.array([[lat.arrow(a, f) for f in sinks] for a in sources], dtype=complex)
    return complex(np.linalg.det(mat)) if len(sources) else 1 + 0j


def bruteforce_multi_arrow(lat: TorusLattice, sources, sinks) -> complex:
    """Multi-point arrow by enumerating loop configurations (``T <= 2``)."""
    num = sum((c.arrow for c in _Enumerator(lat, sources, sinks).configs()), 0j)
    den = sum((c.arrow for c in _Enumerator(lat, (), ()).configs()), 0j)
    return num / den


def pass_arrow(lat: TorusLattice, a: EdgeId, e: EdgeId, f: EdgeId) -> complex:
    """``A(a -> f pass e) = A(a -> f)/2 + A(a -> e) A(e -> f)``."""
    return 0.5 * lat.arrow(a, f) + lat.arrow(a, e) * lat.arrow(e, f)


def pass_arrow_loop_form(lat: TorusLattice, a: EdgeId, e: EdgeId, f: EdgeId) -> complex:
    """``A(a -> f pass e) = A(a -> f) A(e -> e) + A(a -> e) A(e -> f)``."""
    return lat.arrow(a, f) * lat.arrow(e, e) + lat.arrow(a, e) * lat.arrow(e, f)


def half_sum_check(lat: TorusLattice, e: EdgeId) -> tuple[complex, complex]:
    """Sum of arrows of configurations through ``e`` and half the sum over all."""
    bit = 1 << lat.index(e)
    configs = list(_Enumerator(lat, (), ()).configs())
    through = sum((c.arrow for c in configs if c.mask & bit), 0j)
    return through, 0.5 * sum((c.arrow for c in configs), 0j)


# -- Fermi coupling --------------------------------------------------------------------


@dataclass(frozen=True)
class FermiParams:
    """Coupling, the two masses and the shared lattice."""

    g: float = 0.0
    m_e: float = 1.0
    m_mu: float = 2.0
    eps: float = 1.0
    delta: float = 0.3
    T: int = 1

    def lattice(self, species: str) -> TorusLattice:
        m = self.m_e if species == "e" else self.m_mu
        return TorusLattice(self.T, LatticeParams(m, self.eps, self.delta))


def _mask_weights(lat: TorusLattice, sources, sinks) -> tuple[np.ndarray, np.ndarray]:
    """Configurations aggregated by edge set: distinct masks and summed arrows."""
    acc: dict[int, complex] = {}
    for c in _Enumerator(lat, sources, sinks).configs():
        acc[c.mask] = acc.get(c.mask, 0j) + c.arrow
    masks = np.array(sorted(acc), dtype=np.int64)
    weights = np.array([acc[m] for m in masks.tolist()], dtype=complex)
    return masks, weights


@dataclass(frozen=True)
class FermiPolynomials:
    """Numerator and denominator of the coupled arrow as polynomials in ``1 + g``.

    ``numerator[k]`` sums the products of arrows over configuration pairs
    sharing exactly ``k`` edges.
    """

    numerator: np.ndarray
    denominator: np.ndarray

    def value(self, g: float) -> complex:
        powers = (1.0 + g) ** np.arange(len(self.numerator))
        den = complex(np.dot(self.denominator, powers))
        if abs(den) < 1e-300:
            raise DegenerateLatticeError(f"Fermi denominator vanishes at g={g}")
        return complex(np.dot(self.numerator, powers)) / den

    def denominator_at(self, g: float) -> complex:
        return complex(np.dot(self.denominator, (1.0 + g) ** np.arange(len(self.denominator))))


def fermi_polynomials(fp: FermiParams, a_e: EdgeId, a_mu: EdgeId, f_e: EdgeId, f_mu: EdgeId) -> FermiPolynomials:
    """Exact double enumeration of the coupled model (``T <= 2``)."""
    lat_e, lat_mu = fp.lattice("e"), fp.lattice("mu")
    n_bits = lat_e.n_edges
    num = kernels.overlap_histogram(
        *_mask_weights(lat_e, [a_e], [f_e]), *_mask_weights(lat_mu, [a_mu], [f_mu]), n_bits
    )
    den = kernels.overlap_histogram(*_mask_weights(lat_e, (), ()), *_mask_weights(lat_mu, (), ()), n_bits)
    return FermiPolynomials(np.asarray(num), np.asarray(den))


def fermi_arrow(fp: FermiParams, a_e: EdgeId, a_mu: EdgeId, f_e: EdgeId, f_mu: EdgeId) -> complex:
    """Arrow from ``(a_e, a_mu)`` to ``(f_e, f_mu)`` with coupling ``fp.g``."""
    return fermi_polynomials(fp, a_e, a_mu, f_e, f_mu).value(fp.g)


def first_order_terms(fp: FermiParams, a_e: EdgeId, a_mu: EdgeId, f_e: EdgeId, f_mu: EdgeId) -> tuple[complex, dict]:
    """Zeroth-order product and the three first-order diagram families.

    Returns
    -------
    zeroth : complex
    first : dict
        ``exchange`` (both species pass through ``e``), ``electron_loop`` and
        ``muon_loop`` (one species closes a loop at ``e``), each summed over ``e``.
    """
    lat_e, lat_mu = fp.lattice("e"), fp.lattice("mu")
    Ae, Am = lat_e.propagator_matrix, lat_mu.propagator_matrix
    ie = {k: lat_e.index(v) for k, v in (("a_e", a_e), ("f_e", f_e))}
    im = {k: lat_mu.index(v) for k, v in (("a_mu", a_mu), ("f_mu", f_mu))}
    e_in = Ae[:, ie["a_e"]]  # A(a_e -> e)
    e_out = Ae[ie["f_e"], :]  # A(e -> f_e)
    m_in = Am[:, im["a_mu"]]
    m_out = Am[im["f_mu"], :]
    e_direct = Ae[ie["f_e"], ie["a_e"]]
    m_direct = Am[im["f_mu"], im["a_mu"]]
    e_loop = np.diag(Ae)
    m_loop = np.diag(Am)
    first = {
        "exchange": complex(np.sum(e_in * e_out * m_in * m_out)),
        "electron_loop": complex(np.sum(e_direct * e_loop * m_in * m_out)),
        "muon_loop": complex(np.sum(e_in * e_out * m_direct * m_loop)),
    }
    return complex(e_direct * m_direct), first


@dataclass(frozen=True)
class PerturbationReport:
    """Remainders of the first-order expansion on a grid of couplings."""

    gs: tuple[float, ...]
    remainders: tuple[float, ...]
    slope: float
    min_slope: float
    denominator_slope: float

    @property
    def passed(self) -> bool:
        return self.slope >= self.min_slope and self.denominator_slope >= self.min_slope

    def as_dict(self) -> dict:
        return {
            "gs": list(self.gs),
            "remainders": list(self.remainders),
            "slope": self.slope,
            "denominator_slope": self.denominator_slope,
            "passed": self.passed,
        }


def perturbation_check(
    fp: FermiParams,
    a_e: EdgeId,
    a_mu: EdgeId,
    f_e: EdgeId,
    f_mu: EdgeId,
    gs=(1e-2, 1e-3, 1e-4),
    min_slope: float = 1.8,
) -> PerturbationReport:
    """Fit the decay of ``|exact(g) - first_order(g)|``; slope near 2 means ``O(g^2)``.

    The denominator is checked the same way against ``Z_e Z_mu (1 + n_edges g / 4)``.
    """
    poly = fermi_polynomials(fp, a_e, a_mu, f_e, f_mu)
    zeroth, first = first_order_terms(fp, a_e, a_mu, f_e, f_mu)
    slope_sum = sum(first.values())
    rem = [abs(poly.value(g) - (zeroth + g * slope_sum)) for g in gs]
    z0 = poly.denominator_at(0.0)
    n_edges = fp.lattice("e").n_edges
    den_rem = [abs(poly.denominator_at(g) - z0 * (1 + n_edges * g / 4)) for g in gs]
    logg = np.log(np.asarray(gs))
    slope = float(np.polyfit(logg, np.log(rem), 1)[0])
    dslope = float(np.polyfit(logg, np.log(den_rem), 1)[0])
    return PerturbationReport(tuple(gs), tuple(rem), slope, min_slope, dslope)
