"""Finite torus lattice: transfer matrix, loop expansion, Fourier closed forms and limits.

Coordinates are kept in half steps: a point is ``(hx, ht)`` with
``hx, ht`` in ``Z / 2T`` and ``hx + ht`` even, standing for
``(hx * eps / 2, ht * eps / 2)``.  A point is even when ``hx`` is even.
Edges are indexed ``(ht * T + hx // 2) * 2 + dir`` with ``dir`` 0 for the
up-right and 1 for the up-left edge, so matrices are reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import DegenerateLatticeError, DomainError, NumericError, OrderOfLimitsError, SizeError
from .params import LatticeParams, to_steps
from .propagator import IdentityReport, PropagatorPair

UP_RIGHT = 0
UP_LEFT = 1
MAX_DENSE_T = 64
MAX_ENUM_T = 2
COND_LIMIT = 1e12


@dataclass(frozen=True)
class EdgeId:
    """Edge of the torus given by its starting point (half steps) and direction."""

    hx: int
    ht: int
    dir: int

    def end(self, size: int) -> tuple[int, int]:
        """Endpoint on a torus of size ``size``."""
        dx = 1 if self.dir == UP_RIGHT else -1
        return (self.hx + dx) % (2 * size), (self.ht + 1) % (2 * size)


@dataclass(frozen=True)
class TorusLattice:
    """The ``T x T`` torus with ``2 T^2`` points and ``4 T^2`` edges.

    Parameters
    ----------
    T : int
        Lattice size.
    params : LatticeParams
        Mass, step and small imaginary mass ``delta``.
    turn_sign : int
        Multiplies every turn weight; ``-1`` deliberately breaks the model
        and exists only for mutation tests.
    """

    T: int
    params: LatticeParams = field(default_factory=LatticeParams)
    turn_sign: int = 1

    def __post_init__(self):
        if not (isinstance(self.T, (int, np.integer)) and self.T >= 1):
            raise DomainError("lattice size must be a positive integer")
        if self.turn_sign not in (1, -1):
            raise DomainError("turn_sign must be +1 or -1")

    # -- geometry ------------------------------------------------------------

    @property
    def n_edges(self) -> int:
        return 4 * self.T * self.T

    @property
    def n_points(self) -> int:
        return 2 * self.T * self.T

    def edge(self, hx: int, ht: int, direction: int) -> EdgeId:
        """Edge starting at ``(hx, ht)`` (half steps, reduced mod ``2T``)."""
        if (hx + ht) % 2:
            raise DomainError("hx + ht must be even for a lattice point")
        if direction not in (UP_RIGHT, UP_LEFT):
            raise DomainError("direction must be 0 (up-right) or 1 (up-left)")
        n = 2 * self.T
        return EdgeId(hx % n, ht % n, direction)

    def index(self, e: EdgeId) -> int:
        return (e.ht * self.T + e.hx // 2) * 2 + e.dir

    def edge_at(self, index: int) -> EdgeId:
        pos, direction = divmod(index, 2)
        ht, col = divmod(pos, self.T)
        hx = 2 * col + (ht % 2)
        return EdgeId(hx, ht, direction)

    def point_index(self, hx: int, ht: int) -> int:
        n = 2 * self.T
        return (ht % n) * self.T + (hx % n) // 2

    def successors(self, e: EdgeId) -> tuple[EdgeId, EdgeId]:
        """The two edges starting at the endpoint of ``e``."""
        hx, ht = e.end(self.T)
        return EdgeId(hx, ht, UP_RIGHT), EdgeId(hx, ht, UP_LEFT)

    def predecessors(self, f: EdgeId) -> tuple[EdgeId, EdgeId]:
        """The two edges ending at the starting point of ``f``."""
        n = 2 * self.T
        return (
            EdgeId((f.hx - 1) % n, (f.ht - 1) % n, UP_RIGHT),
            EdgeId((f.hx + 1) % n, (f.ht - 1) % n, UP_LEFT),
        )

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Start and end point indices of every edge."""
        starts = np.empty(self.n_edges, dtype=np.int64)
        ends = np.empty(self.n_edges, dtype=np.int64)
        for j in range(self.n_edges):
            e = self.edge_at(j)
            starts[j] = self.point_index(e.hx, e.ht)
            ends[j] = self.point_index(*e.end(self.T))
        return starts, ends

    # -- weights ---------------------------------------------------------------

    def node_weight(self, e: EdgeId, f: EdgeId) -> complex:
        """Weight of the node ``(e, f)``.

        The endpoint ``P`` of ``e`` decides: at even ``P`` a straight move has
        weight ``1/sqrt(1-delta^2)`` and a turn ``-delta/sqrt(1-delta^2)``; at odd
        ``P`` they are ``1/sqrt(1+m^2 eps^2)`` and ``-i m eps/sqrt(1+m^2 eps^2)``.

        Raises
        ------
        DomainError
            If ``f`` does not start at the endpoint of ``e``.
        """
        if e.end(self.T) != (f.hx, f.ht):
            raise DomainError("edges do not form a node")
        me, delta = self.params.me, self.params.delta
        if e.end(self.T)[0] % 2 == 0:
            norm = 1.0 / math.sqrt(1.0 - delta * delta)
            turn = -delta
        else:
            norm = 1.0 / math.sqrt(1.0 + me * me)
            turn = -1j * me
        if e.dir == f.dir:
            return complex(norm)
        return complex(self.turn_sign * turn * norm)

    @cached_property
    def transfer_matrix(self) -> np.ndarray:
        """``U[f, e] = A(ef)`` for consecutive edges, zero otherwise."""
        if self.T > MAX_DENSE_T:
            raise SizeError(f"dense transfer matrix limited to T <= {MAX_DENSE_T}")
        u = np.zeros((self.n_edges, self.n_edges), dtype=complex)
        for j in range(self.n_edges):
            e = self.edge_at(j)
            for f in self.successors(e):
                u[self.index(f), j] = self.node_weight(e, f)
        return u

    # -- loop expansion ----------------------------------------------------------

    def partition_function(self) -> complex:
        """``Z = det(I - U)``, the sum of arrows of all loop configurations."""
        return complex(np.linalg.det(np.eye(self.n_edges) - self.transfer_matrix))

    def partition_product(self) -> complex:
        """``Z`` from the product over the discrete Fourier modes."""
        me, delta, T = self.params.me, self.params.delta, self.T
        n = math.sqrt(1 - delta * delta) * math.sqrt(1 + me * me)
        k = 2 * np.pi * np.arange(T) / T
        p, w = np.meshgrid(k, k, indexing="ij")
        factors = 2.0 * (np.cos(w) - (np.cos(p) + 1j * me * delta) / n)
        return complex(np.prod(factors))

    @cached_property
    def propagator_matrix(self) -> np.ndarray:
        """``A = (I - U)^-1`` with ``A[f, a] = A(a -> f)``.

        Raises
        ------
        DegenerateLatticeError
            If ``I - U`` is numerically singular (``Z`` vanishes).
        """
        m = np.eye(self.n_edges) - self.transfer_matrix
        if np.linalg.cond(m) > COND_LIMIT:
            raise DegenerateLatticeError(
                f"I - U is singular (T={self.T}, delta={self.params.delta}); Z vanishes"
            )
        return np.linalg.inv(m)

    def arrow(self, a: EdgeId, f: EdgeId) -> complex:
        """Finite-lattice propagator ``A(a -> f)``."""
        return complex(self.propagator_matrix[self.index(f), self.index(a)])


# -- distinguished edges ---------------------------------------------------------


def f_edge(lat: TorusLattice, k: int, hx: int, ht: int) -> EdgeId:
    """Edge starting at the point: ``k=1`` up-left, ``k=2`` up-right."""
    return lat.edge(hx, ht, UP_LEFT if k == 1 else UP_RIGHT)


def e_edge(lat: TorusLattice, k: int, hx: int, ht: int) -> EdgeId:
    """Edge ending at the point: ``k=1`` up-left, ``k=2`` up-right."""
    if k == 1:
        return lat.edge(hx + 1, ht - 1, UP_LEFT)
    return lat.edge(hx - 1, ht - 1, UP_RIGHT)


def origin_edge(lat: TorusLattice) -> EdgeId:
    """The up-right edge leaving the origin."""
    return f_edge(lat, 2, 0, 0)


def edge_into_origin(lat: TorusLattice, k: int) -> EdgeId:
    """The edge ending at the origin, up-left for ``k=1`` and up-right for ``k=2``."""
    return e_edge(lat, k, 0, 0)


# -- Fourier closed forms -------------------------------------------------------------


class _ModeCache:
    """Per-momentum data for the closed-form frequency sum."""

    def __init__(self, lat: TorusLattice):
        me, delta, T = lat.params.me, lat.params.delta, lat.T
        if delta <= 0:
            raise OrderOfLimitsError("the closed-form frequency sum needs delta > 0")
        self.T = T
        self.me = me
        self.delta = delta
        self.sq_d = math.sqrt(1 - delta * delta)
        self.sq_m = math.sqrt(1 + me * me)
        self.n = self.sq_d * self.sq_m
        self.p = 2 * np.pi * np.arange(T) / T
        q = (np.cos(self.p) + 1j * me * delta) / self.n
        z = q - np.sqrt(q * q - 1)
        outside = np.abs(z) > 1
        z[outside] = 1 / z[outside]
        self.logz = np.log(z)
        denom = 1 - np.exp(T * self.logz)
        if np.min(np.abs(denom)) < 1e-14:
            raise DegenerateLatticeError("frequency sum is singular")
        self.pref = 2 / (self.n * (z - 1 / z) * denom)

    def phi(self, s: int) -> np.ndarray:
        """``(1/T) sum_w exp(-i w s) / D(p, w)`` for every momentum ``p``."""
        r = s % self.T
        return self.pref * (np.exp(r * self.logz) + np.exp((self.T - r) * self.logz))


def _row_coefficients(modes: _ModeCache, k: int, odd: bool, s: int) -> tuple[np.ndarray, complex]:
    """Momentum coefficients ``g`` and scalar factor for ``A(b2 -> e_k)`` on a row."""
    p = modes.p
    if not odd:
        if k == 1:
            return (modes.me - 1j * modes.delta * np.exp(1j * p)) * modes.phi(s), -0.5j
        g = modes.n * (modes.phi(s - 1) - modes.phi(s + 1)) / 2j + np.sin(p) * modes.phi(s)
        return g, -0.5j
    if k == 1:
        g = modes.me * modes.sq_d * modes.phi(s - 1) - 1j * modes.delta * modes.sq_m * modes.phi(s)
        return g, -0.5j
    g = modes.sq_m * np.exp(-1j * p) * modes.phi(s) - modes.sq_d * modes.phi(s - 1)
    return g, 0.5


def _split_point(hx: int, ht: int) -> tuple[bool, int, int]:
    """Parity and the integer step coordinates used in the Fourier sums."""
    if (hx + ht) % 2:
        raise DomainError("hx + ht must be even for a lattice point")
    odd = hx % 2 == 1
    if odd:
        return True, (hx + 1) // 2, (ht + 1) // 2
    return False, hx // 2, ht // 2


def _literal_dft(lat: TorusLattice, k: int, hx: int, ht: int) -> complex:
    me, delta, T = lat.params.me, lat.params.delta, lat.T
    sq_d = math.sqrt(1 - delta * delta)
    sq_m = math.sqrt(1 + me * me)
    n = sq_d * sq_m
    grid = 2 * np.pi * np.arange(T) / T
    p, w = np.meshgrid(grid, grid, indexing="ij")
    den = n * np.cos(w) - np.cos(p) - 1j * me * delta
    if np.min(np.abs(den)) < 1e-13:
        if delta == 0 and T % 4 == 0:
            raise OrderOfLimitsError(f"delta -> 0 limit does not exist for T={T} divisible by 4")
        raise DegenerateLatticeError("Fourier denominator vanishes")
    odd, x, t = _split_point(hx, ht)
    phase = np.exp(1j * p * x - 1j * w * t)
    if not odd and k == 1:
        val = -0.5j * np.sum((me - 1j * delta * np.exp(1j * p)) / den * phase)
    elif not odd:
        val = -0.5j * np.sum((n * np.sin(w) + np.sin(p)) / den * phase)
    elif k == 1:
        val = -0.5j * np.sum((me * sq_d * np.exp(1j * w) - 1j * delta * sq_m) / den * phase)
    else:
        val = 0.5 * np.sum((sq_m * np.exp(-1j * p) - sq_d * np.exp(1j * w)) / den * phase)
    val /= T * T
    if not odd and k == 2 and x % T == 0 and t % T == 0:
        val += 0.5
    return complex(val)


def arrow_dft(lat: TorusLattice, k: int, hx: int, ht: int, method: str = "closed") -> complex:
    """``A(b2 -> e_k(point))`` from the discrete Fourier representation.

    Parameters
    ----------
    k : {1, 2}
        ``e_1`` is the up-left and ``e_2`` the up-right edge ending at the point.
    hx, ht : int
        The point in half steps.
    method : {"closed", "literal"}
        ``"literal"`` sums the ``T^2`` modes directly.  ``"closed"`` does the
        frequency sum in closed form, costing ``O(T)`` per point.
    """
    if k not in (1, 2):
        raise DomainError("k must be 1 or 2")
    if method == "literal":
        return _literal_dft(lat, k, hx, ht)
    if method != "closed":
        raise DomainError(f"unknown method {method!r}")
    modes = _ModeCache(lat)
    odd, x, t = _split_point(hx, ht)
    g, scale = _row_coefficients(modes, k, odd, t)
    val = scale * np.sum(g * np.exp(1j * modes.p * x)) / lat.T
    if not odd and k == 2 and x % lat.T == 0 and t % lat.T == 0:
        val += 0.5
    return complex(val)


def _dft_row(modes: _ModeCache, k: int, t: int) -> np.ndarray:
    """``A(b2 -> e_k(x, t))`` at the integer points of a row, indexed by ``x mod T``."""
    g, scale = _row_coefficients(modes, k, False, t)
    row = scale * np.fft.ifft(g)
    if t % modes.T == 0 and k == 2:
        row = row.copy()
        row[0] += 0.5
    return row


def _origin_to_f(lat: TorusLattice, k: int, ix: int, it: int, fetch) -> complex:
    """Combine arrows from the two edges into the origin into ``A(a0 -> f_k)``.

    ``fetch(j, x, t)`` must return ``A(b2 -> e_j(x, t))`` at an integer point.
    The arrow from ``b1`` is obtained by the reflection ``x -> -x``.
    """
    delta = lat.params.delta
    norm = 1.0 / math.sqrt(1.0 - delta * delta)
    weight = {1: lat.turn_sign * -delta * norm, 2: norm}
    T = lat.T
    at_origin = ix % T == 0 and it % T == 0
    total = 0j
    for l in (1, 2):
        for j in (1, 2):
            value = fetch(j, ix, it) if l == 2 else fetch(3 - j, -ix, it)
            if at_origin and j == l:
                value -= 1.0
            total += (-1) ** l * weight[l] * value * (norm if j == k else weight[1])
    if at_origin and k == 2:
        total += 1.0
    return total


def origin_arrow(lat: TorusLattice, k: int, ix: int, it: int, method: str = "dft") -> complex:
    """``A(a0 -> f_k(x, t))`` at an integer point given in lattice steps.

    ``method="matrix"`` reads the inverse matrix directly; ``"dft"`` combines
    the Fourier closed forms through the Dirac equations.
    """
    if method == "matrix":
        return lat.arrow(origin_edge(lat), f_edge(lat, k, 2 * ix, 2 * it))
    if method != "dft":
        raise DomainError(f"unknown method {method!r}")
    return _origin_to_f(lat, k, ix, it, lambda j, x, t: arrow_dft(lat, j, 2 * x, 2 * t))


def loop_propagator(lat: TorusLattice, ix: int, it: int, method: str = "dft") -> PropagatorPair:
    """``-2 (-i)^k A(a0 -> f_k(x, t))`` on a fixed finite lattice."""
    a1 = -2 * (-1j) * origin_arrow(lat, 1, ix, it, method)
    a2 = -2 * (-1j) ** 2 * origin_arrow(lat, 2, ix, it, method)
    return PropagatorPair(complex(a1), complex(a2))


# -- limits -------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitSchedule:
    """Sizes and regulators for the ``T -> infinity`` then ``delta -> 0`` limit.

    Attributes
    ----------
    sizes : tuple of int
        Increasing torus sizes, none divisible by 4.  The last two must
        agree within ``saturation_tol``.
    deltas : tuple of float
        Decreasing regulators; a polynomial through them is evaluated at zero.
    saturation_tol : float
        Allowed change between the two largest sizes.
    """

    sizes: tuple[int, ...] = (40001, 80001)
    deltas: tuple[float, ...] = (4e-3, 2e-3, 1e-3)
    saturation_tol: float = 1e-9

    def __post_init__(self):
        if len(self.sizes) < 2 or any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise DomainError("sizes must be increasing with at least two entries")
        if any(s % 4 == 0 for s in self.sizes):
            raise OrderOfLimitsError("sizes divisible by 4 make the regulator limit ill-defined")
        if not self.deltas or any(b >= a for a, b in zip(self.deltas, self.deltas[1:])):
            raise DomainError("deltas must be decreasing")
        if not all(0 < d < 1 for d in self.deltas):
            raise DomainError("deltas must lie in (0, 1)")


def extrapolate_to_zero(hs, values) -> complex:
    """Neville evaluation at ``h = 0`` of the polynomial through ``(hs, values)``."""
    hs = list(hs)
    p = [complex(v) for v in values]
    n = len(hs)
    for level in range(1, n):
        for i in range(n - level):
            j = i + level
            p[i] = (hs[j] * p[i] - hs[i] * p[i + 1]) / (hs[j] - hs[i])
    return p[0]


def infinite_limit_grid(points, params: LatticeParams, schedule: LimitSchedule | None = None, trace: list | None = None) -> dict:
    """Evaluate the loop definition of the propagator at many integer points.

    Parameters
    ----------
    points : iterable of (int, int)
        Points in lattice steps.
    trace : list, optional
        Receives one record per ``(delta, T)`` with the values at every point.

    Returns
    -------
    dict
        ``(ix, it) -> PropagatorPair``.

    Raises
    ------
    NumericError
        If the two largest sizes differ by more than ``saturation_tol``; the
        trace is attached as ``partial``.
    """
    schedule = schedule or LimitSchedule()
    points = [(int(x), int(y)) for x, y in points]
    rows = sorted({t for _, t in points})
    per_delta = []
    log = [] if trace is None else trace
    for delta in schedule.deltas:
        by_size = []
        for size in schedule.sizes:
            lat = TorusLattice(size, LatticeParams(params.m, params.eps, delta))
            modes = _ModeCache(lat)
            values = {}
            for t in rows:
                cache = {j: _dft_row(modes, j, t) for j in (1, 2)}

                def fetch(j, x, tt, cache=cache):
                    return cache[j][x % size]

                for ix, it in points:
                    if it != t:
                        continue
                    a1 = -2 * (-1j) * _origin_to_f(lat, 1, ix, it, fetch)
                    a2 = 2 * _origin_to_f(lat, 2, ix, it, fetch)
                    values[(ix, it)] = (a1, a2)
            by_size.append(values)
            log.append({"delta": delta, "T": size, "values": values})
        last, prev = by_size[-1], by_size[-2]
        gap = max(max(abs(last[p][0] - prev[p][0]), abs(last[p][1] - prev[p][1])) for p in points)
        if gap > schedule.saturation_tol:
            raise NumericError(
                f"T-limit not saturated at delta={delta}: change {gap:.3g}", partial=log
            )
        per_delta.append(last)
    out = {}
    for p in points:
        a1 = extrapolate_to_zero(schedule.deltas, [v[p][0] for v in per_delta])
        a2 = extrapolate_to_zero(schedule.deltas, [v[p][1] for v in per_delta])
        out[p] = PropagatorPair(a1, a2)
    return out


def infinite_limit(x: float, t: float, params: LatticeParams, schedule: LimitSchedule | None = None, trace: list | None = None) -> PropagatorPair:
    """Propagator from the loop definition: ``T -> infinity`` first, then ``delta -> 0``."""
    ix = to_steps(x, params.eps, "x")
    it = to_steps(t, params.eps, "t")
    return infinite_limit_grid([(ix, it)], params, schedule, trace)[(ix, it)]


def regulator_limit(T: int, ix: int, it: int, params: LatticeParams, deltas=(4e-3, 2e-3, 1e-3)) -> PropagatorPair:
    """``delta -> 0`` at a fixed torus size, the order the definition forbids.

    Raises
    ------
    OrderOfLimitsError
        For ``T`` divisible by 4, where the limit does not exist.
    """
    if T % 4 == 0:
        raise OrderOfLimitsError(
            f"delta -> 0 at fixed T={T} diverges for T divisible by 4; take T -> infinity first"
        )
    vals = [
        loop_propagator(TorusLattice(T, LatticeParams(params.m, params.eps, d)), ix, it) for d in deltas
    ]
    return PropagatorPair(
        extrapolate_to_zero(deltas, [v.A1 for v in vals]),
        extrapolate_to_zero(deltas, [v.A2 for v in vals]),
    )


# -- brute-force enumeration ---------------------------------------------------------


@dataclass(frozen=True)
class LoopConfig:
    """A loop configuration with optional source-to-sink paths.

    Attributes
    ----------
    loops : tuple of tuple of int
        Each loop as edge indices, rotated to start at its smallest edge.
    paths : tuple of tuple of int
        Paths ordered by source, each from its source to its sink.
    arrow : complex
        Signed weight including the permutation sign and the loop signs.
    """

    loops: tuple[tuple[int, ...], ...]
    paths: tuple[tuple[int, ...], ...]
    arrow: complex

    @property
    def mask(self) -> int:
        m = 0
        for chain in self.loops + self.paths:
            for j in chain:
                m |= 1 << j
        return m


def _mask_of(lat: TorusLattice, edges) -> int:
    m = 0
    for e in edges:
        m |= 1 << lat.index(e)
    return m


def _perm_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class _Enumerator:
    """Shared machinery for loop-configuration and current sums on tiny tori."""

    def __init__(self, lat: TorusLattice, sources, sinks):
        if lat.T > MAX_ENUM_T:
            raise SizeError(f"enumeration limited to T <= {MAX_ENUM_T}")
        self.lat = lat
        self.sources = [lat.index(a) for a in sources]
        self.sinks = [lat.index(f) for f in sinks]
        if len(self.sources) != len(self.sinks):
            raise DomainError("need as many sources as sinks")
        self.src_mask = sum(1 << j for j in set(self.sources))
        self.snk_mask = sum(1 << j for j in set(self.sinks))
        self.degenerate = len(set(self.sources)) < len(self.sources) or len(set(self.sinks)) < len(self.sinks)
        starts, ends = lat.edge_arrays
        self.starts, self.ends = starts, ends
        self.edges = [lat.edge_at(j) for j in range(lat.n_edges)]
        self.out_of = [[] for _ in range(lat.n_points)]
        self.into = [[] for _ in range(lat.n_points)]
        for j in range(lat.n_edges):
            self.out_of[starts[j]].append(j)
            self.into[ends[j]].append(j)
        self.weight = {}
        for j, e in enumerate(self.edges):
            for f in lat.successors(e):
                self.weight[(j, lat.index(f))] = lat.node_weight(e, f)

    def subsets(self) -> np.ndarray:
        if self.degenerate:
            return np.zeros(0, dtype=np.int64)
        return kernels.balanced_subsets(
            self.starts,
            self.ends,
            self.lat.n_points,
            self.src_mask | self.snk_mask,
            self.src_mask,
            self.snk_mask,
        )

    def local(self, mask: int):
        """Per point: (non-sink incoming, non-source outgoing) edges of ``mask``."""
        out = []
        for pt in range(self.lat.n_points):
            ins = [j for j in self.into[pt] if (mask >> j) & 1 and not (self.snk_mask >> j) & 1]
            outs = [j for j in self.out_of[pt] if (mask >> j) & 1 and not (self.src_mask >> j) & 1]
            out.append((ins, outs))
        return out

    def pairings(self, ins, outs):
        """Successor maps realizable at one point: straight first, then crossed."""
        if not ins:
            return [{}]
        if len(ins) == 1:
            return [{ins[0]: outs[0]}]
        straight = {}
        crossed = {}
        for e in ins:
            for f in outs:
                if self.edges[e].dir == self.edges[f].dir:
                    straight[e] = f
                else:
                    crossed[e] = f
        return [straight, crossed]

    def structure(self, mask: int, succ: dict):
        """Paths (by source), loops and the sink permutation along ``succ``."""
        used = set()
        paths = []
        sink_pos = {f: i for i, f in enumerate(self.sinks)}
        perm = []
        for a in self.sources:
            chain = [a]
            used.add(a)
            while chain[-1] not in sink_pos:
                chain.append(succ[chain[-1]])
                used.add(chain[-1])
            perm.append(sink_pos[chain[-1]])
            paths.append(tuple(chain))
        loops = []
        for j in range(self.lat.n_edges):
            if not (mask >> j) & 1 or j in used:
                continue
            chain = [j]
            used.add(j)
            while succ[chain[-1]] != j:
                chain.append(succ[chain[-1]])
                used.add(chain[-1])
            loops.append(tuple(chain))
        return paths, loops, _perm_sign(perm)

    def decompose(self, mask: int, succ: dict) -> LoopConfig:
        """Split ``mask`` into paths and loops along ``succ`` and weigh it."""
        paths, loops, sign = self.structure(mask, succ)
        weight = complex(sign * (-1) ** len(loops))
        for chain in paths:
            for e, f in zip(chain, chain[1:]):
                weight *= self.weight[(e, f)]
        for chain in loops:
            for e, f in zip(chain, chain[1:] + chain[:1]):
                weight *= self.weight[(e, f)]
        return LoopConfig(tuple(loops), tuple(paths), weight)

    def configs(self):
        for mask in self.subsets().tolist():
            choices = [self.pairings(ins, outs) for ins, outs in self.local(mask)]
            for combo in itertools.product(*choices):
                succ = {}
                for part in combo:
                    succ.update(part)
                yield self.decompose(mask, succ)

    def current_arrow(self, mask: int) -> complex:
        """Arrow of a current.

        Nodes at singularities carry no weight; the sign comes from the loop
        decomposition that goes straight through every singularity.
        """
        succ = {}
        weight = 1 + 0j
        for ins, outs in self.local(mask):
            if len(ins) == 2:
                succ.update(self.pairings(ins, outs)[0])
            elif ins:
                succ[ins[0]] = outs[0]
                weight *= self.weight[(ins[0], outs[0])]
        _, loops, sign = self.structure(mask, succ)
        return sign * (-1) ** len(loops) * weight


def enumerate_loop_configs(lat: TorusLattice, sources=(), sinks=()) -> list[LoopConfig]:
    """All loop configurations with the given sources and sinks (``T <= 2``)."""
    return list(_Enumerator(lat, sources, sinks).configs())


def bruteforce_loop_configs(lat: TorusLattice, sources=(), sinks=()) -> tuple[complex, complex]:
    """Numerator and denominator of the multi-point arrow by direct enumeration."""
    num = sum((c.arrow for c in enumerate_loop_configs(lat, sources, sinks)), 0j)
    den = sum((c.arrow for c in enumerate_loop_configs(lat)), 0j)
    return num, den


def bruteforce_pass(lat: TorusLattice, a: EdgeId, e: EdgeId, f: EdgeId) -> complex:
    """``A(a -> f pass e)``: only configurations containing ``e`` in the numerator."""
    bit = 1 << lat.index(e)
    num = sum((c.arrow for c in enumerate_loop_configs(lat, [a], [f]) if c.mask & bit), 0j)
    den = sum((c.arrow for c in enumerate_loop_configs(lat)), 0j)
    return num / den


def current_arrow(lat: TorusLattice, mask: int, sources=(), sinks=()) -> complex:
    """Arrow of the current given by an edge bitmask."""
    return _Enumerator(lat, sources, sinks).current_arrow(mask)


def complement_current(lat: TorusLattice, mask: int, sources=(), sinks=()) -> int:
    """Complement current: sources, sinks and the edges outside ``mask``.

    In the complement the sinks of ``mask`` act as sources and the sources as
    sinks, so evaluate it with the two lists swapped.
    """
    full = (1 << lat.n_edges) - 1
    ends = _mask_of(lat, list(sources) + list(sinks))
    return (full & ~mask) | ends


def enumerate_currents(lat: TorusLattice, sources=(), sinks=()) -> list[tuple[int, complex]]:
    """All currents with the given sources and sinks as ``(mask, arrow)``."""
    en = _Enumerator(lat, sources, sinks)
    return [(m, en.current_arrow(m)) for m in en.subsets().tolist()]


def bruteforce_currents(lat: TorusLattice, sources=(), sinks=()) -> tuple[complex, complex]:
    """Numerator and denominator of the multi-point arrow summed over currents."""
    num = sum((w for _, w in enumerate_currents(lat, sources, sinks)), 0j)
    den = sum((w for _, w in enumerate_currents(lat)), 0j)
    return num, den


def flip(lat: TorusLattice, config: LoopConfig, hx: int, ht: int) -> LoopConfig:
    """Exchange the two successor choices at a point used by two nodes of ``config``.

    Raises
    ------
    DomainError
        If the configuration does not pass the point twice.
    """
    pt = lat.point_index(hx, ht)
    succ = {}
    for chain in config.loops:
        for i, j in enumerate(chain):
            succ[j] = chain[(i + 1) % len(chain)]
    for chain in config.paths:
        for i in range(len(chain) - 1):
            succ[chain[i]] = chain[i + 1]
    starts, ends = lat.edge_arrays
    ins = [e for e in succ if ends[e] == pt]
    if len(ins) != 2:
        raise DomainError("flip needs two nodes at the point")
    e1, e2 = ins
    succ[e1], succ[e2] = succ[e2], succ[e1]
    sources = [lat.edge_at(p[0]) for p in config.paths]
    sinks = sorted({p[-1] for p in config.paths})
    en = _Enumerator(lat, sources, [lat.edge_at(j) for j in sinks])
    return en.decompose(config.mask, succ)


def loop_word(config: LoopConfig, labels: dict[int, str]) -> str:
    """Readable name like ``{aca,bdb}`` using one letter per edge index."""
    words = []
    for chain in config.loops:
        k = min(range(len(chain)), key=lambda i: labels[chain[i]])
        rot = chain[k:] + chain[:k]
        words.append("".join(labels[j] for j in rot) + labels[rot[0]])
    return "{" + ",".join(sorted(words, key=lambda w: (len(w), w))) + "}"


# -- closed forms on small tori-----------------------------------------------------------


def labels_1x1(lat: TorusLattice) -> dict[str, EdgeId]:
    """Letters for the four edges of the size-1 torus."""
    if lat.T != 1:
        raise DomainError("labels exist only for T = 1")
    return {
        "a": lat.edge(0, 0, UP_RIGHT),
        "b": lat.edge(1, 1, UP_LEFT),
        "c": lat.edge(1, 1, UP_RIGHT),
        "d": lat.edge(0, 0, UP_LEFT),
    }


def table_1x1(params: LatticeParams) -> dict[str, complex]:
    """Closed-form arrows of all nine loop configurations on the size-1 torus."""
    me, d = params.me, params.delta
    n = math.sqrt(1 - d * d) * math.sqrt(1 + me * me)
    return {
        "{}": 1 + 0j,
        "{aba}": -1j * me * d / n,
        "{cdc}": -1j * me * d / n,
        "{aca}": complex(-1 / n),
        "{bdb}": complex(-1 / n),
        "{abdca}": complex(me * me / n**2),
        "{acdba}": complex(-d * d / n**2),
        "{aba,cdc}": complex(-(me * me) * d * d / n**2),
        "{aca,bdb}": complex(1 / n**2),
    }


def arrows_1x1(params: LatticeParams) -> dict[str, complex]:
    """Closed forms of ``A(a -> a), A(a -> b), A(a -> c), A(a -> d)`` for ``T = 1``."""
    me, d = params.me, params.delta
    sd, sm = math.sqrt(1 - d * d), math.sqrt(1 + me * me)
    den = 2 * (sm * sd - 1 - 1j * me * d)
    return {
        "a": 0.5 + 0j,
        "b": (-1j * me * sd - d * sm) / den,
        "c": (sd - sm) / den,
        "d": (-1j * me - d) / den,
    }


def charge_sums_2x2(lat: TorusLattice) -> tuple[float, float]:
    """Sums of ``|A(a0 -> f)|^2`` over edges ``f`` starting on ``t = 0`` and on ``t = eps``."""
    if lat.T != 2:
        raise DomainError("defined for T = 2")
    a = origin_edge(lat)
    rows = {0: 0.0, 2: 0.0}
    for j in range(lat.n_edges):
        f = lat.edge_at(j)
        if f.ht in rows:
            rows[f.ht] += abs(lat.arrow(a, f)) ** 2
    return rows[0], rows[2]


def charge_sums_2x2_closed(params: LatticeParams) -> tuple[float, float]:
    """Closed forms of :func:`charge_sums_2x2`."""
    me2, d2 = params.me**2, params.delta**2
    base = (1 + me2) / (4 * (me2 + d2))
    return (1 + d2) * base, (1 - d2) * base


# -- identities ---------------------------------------------------------------------


def _paths_ending(lat: TorusLattice, f: int, length: int) -> list[tuple[list[int], complex]]:
    """Paths of ``length`` distinct edges ending with edge index ``f``."""
    out = []

    def grow(chain, weight):
        if len(chain) == length:
            out.append((chain, weight))
            return
        head = lat.edge_at(chain[0])
        for e in lat.predecessors(head):
            j = lat.index(e)
            if j in chain:
                continue
            grow([j] + chain, weight * lat.node_weight(e, head))

    grow([f], 1 + 0j)
    return out


def finite_identity_suite(lat: TorusLattice, tol: float = 1e-10) -> IdentityReport:
    """Residuals of the exact identities of the finite-lattice propagator."""
    A = lat.propagator_matrix
    U = lat.transfer_matrix
    n = lat.n_edges
    eye = np.eye(n)
    res = {}
    res["initial_value"] = float(np.max(np.abs(np.diag(A) - 0.5)))
    par = np.array([[lat.edge_at(i).dir == lat.edge_at(j).dir for j in range(n)] for i in range(n)])
    sign = np.where(par, -1.0, 1.0)
    off = ~np.eye(n, dtype=bool)
    res["skew_symmetry"] = float(np.max(np.abs(A - sign * A.T)[off]))
    res["dirac"] = float(np.max(np.abs(A - U @ A - eye)))
    adj = 0.0
    for fi in range(n):
        f = lat.edge_at(fi)
        preds = lat.predecessors(f)
        e = next(p for p in preds if p.dir == f.dir)
        ep = next(p for p in preds if p.dir != f.dir)
        ie, iep = lat.index(e), lat.index(ep)
        row = lat.node_weight(e, f) * (A[:, ie] - eye[:, ie]) - lat.node_weight(ep, f) * (A[:, iep] - eye[:, iep])
        adj = max(adj, float(np.max(np.abs(A[:, fi] - row))))
    res["adjoint_dirac"] = adj
    hmax = 0.0
    power = eye.copy()
    partial = np.zeros_like(A)
    for k in range(1, 2 * lat.T + 1):
        # paths of k edges carry k-1 node weights: U^(k-1)
        rhs = power @ A + partial
        hmax = max(hmax, float(np.max(np.abs(A - rhs))))
        partial = partial + power
        power = U @ power
    res["huygens"] = hmax
    if lat.T <= MAX_ENUM_T:
        emax = 0.0
        for length in range(1, 2 * lat.T + 1):
            for fi in range(n):
                paths = _paths_ending(lat, fi, length)
                first = sum((A[chain[0], :] * w for chain, w in paths), np.zeros(n, dtype=complex))
                shorter = np.zeros(n, dtype=complex)
                for ln in range(1, length):
                    for chain, w in _paths_ending(lat, fi, ln):
                        shorter[chain[0]] += w
                emax = max(emax, float(np.max(np.abs(A[fi, :] - first - shorter))))
        res["huygens_paths"] = emax
    z = lat.partition_function()
    res["inverse_determinant"] = abs(z * np.linalg.det(A) - 1)
    res["product_formula"] = abs(z - lat.partition_product()) / max(1.0, abs(z))
    return IdentityReport(tol=tol, residuals=res, excluded={})
