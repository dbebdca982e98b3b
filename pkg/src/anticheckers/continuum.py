"""Continuum Feynman propagator, continuum-limit experiments and large-time asymptotics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import bessel
from .params import LatticeParams, ceil_steps, to_steps
from .propagator import PropagatorPair, massless_heavy, propagate_quadrature, propagate_row

LIGHT_CONE_BAND = 4.0
DEFAULT_MARGIN = 0.05
DEFAULT_C = 10.0


@dataclass(frozen=True)
class ContinuumPoint:
    """A point of the plane together with the mass."""

    x: float
    t: float
    m: float

    @property
    def s(self) -> float:
        """Interval ``sqrt(|t^2 - x^2|)``."""
        return math.sqrt(abs(self.t * self.t - self.x * self.x))

    @property
    def delta(self) -> float:
        """Error scale ``1/||x| - |t|| + m^2 (|x| + |t|)`` of the continuum limit."""
        ax, at = abs(self.x), abs(self.t)
        return 1.0 / abs(ax - at) + self.m**2 * (ax + at)


def feynman_continuum(pt: ContinuumPoint) -> np.ndarray:
    """Spin-1/2 Feynman propagator as a 2x2 complex matrix.

    Raises
    ------
    DomainError
        On the light cone ``|x| = |t|``.
    """
    x, t, m = pt.x, pt.t, pt.m
    if abs(abs(x) - abs(t)) <= 1e-14 * max(1.0, abs(x), abs(t)):
        raise DomainError("the propagator is singular on the light cone")
    if m < 0:
        raise DomainError("mass must be nonnegative")
    g = np.zeros((2, 2), dtype=complex)
    if m == 0:
        g[0, 1] = 1j / (2 * math.pi * (x - t))
        g[1, 0] = 1j / (2 * math.pi * (x + t))
        return g
    s = pt.s
    z = m * s
    if abs(x) < abs(t):
        h0 = bessel("J", 0, z) - 1j * bessel("Y", 0, z)
        h1 = bessel("J", 1, z) - 1j * bessel("Y", 1, z)
        g[0, 0] = g[1, 1] = m / 4 * h0
        g[0, 1] = -m / 4 * (t + x) / s * h1
        g[1, 0] = m / 4 * (t - x) / s * h1
    else:
        k0 = bessel("K", 0, z)
        k1 = bessel("K", 1, z)
        g[0, 0] = g[1, 1] = 1j * m / (2 * math.pi) * k0
        g[0, 1] = 1j * m / (2 * math.pi) * (t + x) / s * k1
        g[1, 0] = 1j * m / (2 * math.pi) * (x - t) / s * k1
    return g


def lattice_point_of(x: float, t: float, eps: float) -> tuple[float, float]:
    """Round a point up to the lattice ``2 eps Z^2``."""
    step = 2.0 * eps
    return step * ceil_steps(x, step), step * ceil_steps(t, step)


def _lattice_pair(x: float, t: float, m: float, eps: float) -> PropagatorPair:
    if m == 0:
        return massless_heavy(x, t, "massless", eps)
    return propagate_quadrature(x, t, LatticeParams(m, eps))


def normalized_values(pt: ContinuumPoint, eps: float) -> dict[str, complex]:
    """Lattice quantities that converge to the continuum propagator.

    Returns
    -------
    dict
        ``re_g11``, ``im_g11``, ``im_g12``, ``re_g12`` (complex lattice values
        divided by ``4 eps``) and ``density``.
    """
    xe, te = lattice_point_of(pt.x, pt.t, eps)
    shifted = _lattice_pair(xe + eps, te, pt.m, eps)
    here = _lattice_pair(xe, te, pt.m, eps)
    return {
        "re_g11": shifted.A1 / (4 * eps),
        "im_g11": here.A1 / (4 * eps),
        "im_g12": shifted.A2 / (4 * eps),
        "re_g12": here.A2 / (4 * eps),
        "density": (here.charge + shifted.charge) / (8 * eps * eps),
    }


def continuum_targets(pt: ContinuumPoint) -> dict[str, complex]:
    """Continuum limits matching the keys of :func:`normalized_values`."""
    g = feynman_continuum(pt)
    return {
        "re_g11": complex(g[0, 0].real, 0.0),
        "im_g11": complex(0.0, g[0, 0].imag),
        "im_g12": complex(0.0, g[0, 1].imag),
        "re_g12": complex(g[0, 1].real, 0.0),
        "density": abs(g[0, 0]) ** 2 + abs(g[0, 1]) ** 2,
    }


def convergence_experiment(pt: ContinuumPoint, eps_list) -> list[dict]:
    """Errors of the normalized lattice values for a decreasing list of steps.

    Each record holds the step, the lattice values, the targets, per-quantity
    absolute errors, the maximum error and its ratio to the previous record.
    """
    eps_list = list(eps_list)
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise DomainError("eps_list must be decreasing")
    if abs(abs(pt.x) - abs(pt.t)) < 1e-14:
        raise DomainError("point on the light cone")
    target = continuum_targets(pt)
    records = []
    prev = None
    for eps in eps_list:
        vals = normalized_values(pt, eps)
        errs = {key: abs(vals[key] - target[key]) for key in vals}
        worst = max(errs.values())
        records.append(
            {
                "eps": eps,
                "values": vals,
                "targets": target,
                "errors": errs,
                "max_error": worst,
                "ratio": None if prev is None else prev / worst,
            }
        )
        prev = worst
    return records


def charge_density_profile(m: float, t: float, eps: float, x_values) -> tuple[np.ndarray, np.ndarray]:
    """Normalized lattice charge density and its continuum limit along a row.

    Parameters
    ----------
    x_values : array_like
        Positions; each is rounded up to ``2 eps Z`` as in the uniform limit.

    Returns
    -------
    lattice, continuum : numpy.ndarray
    """
    x_values = np.asarray(x_values, dtype=float)
    te = lattice_point_of(0.0, t, eps)[1]
    params = LatticeParams(m, eps)
    row = propagate_row(te, params, float(np.max(np.abs(x_values))) + 4 * eps)
    lattice = np.empty(len(x_values))
    cont = np.empty(len(x_values))
    for j, x in enumerate(x_values):
        xe = lattice_point_of(x, t, eps)[0]
        ix = to_steps(xe, eps)
        lattice[j] = (row[ix].charge + row[ix + 1].charge) / (8 * eps * eps)
        g = feynman_continuum(ContinuumPoint(x, t, m))
        cont[j] = abs(g[0, 0]) ** 2 + abs(g[0, 1]) ** 2
    return lattice, cont


def outside_light_cone_band(x: float, t: float, eps: float, band: float = LIGHT_CONE_BAND) -> bool:
    """True if the point is at least ``band * eps`` away from the light cone."""
    return abs(abs(x) - abs(t)) >= band * eps


# -- large-time asymptotics ----------------------------------------------------


@dataclass(frozen=True)
class AsymptoticZone:
    """Which large-time formula applies at a point, with its phase."""

    zone: str
    theta: float


def theta_between_peaks(x: float, t: float, params: LatticeParams) -> float:
    """Phase of the oscillating regime, written with arcsines."""
    m, eps = params.m, params.eps
    me = params.me
    d = t * t - x * x
    return (t / eps) * math.asin(me * t / math.sqrt((1 + me * me) * d)) - (x / eps) * math.asin(
        me * x / math.sqrt(d)
    )


def theta_airy(x: float, t: float, params: LatticeParams) -> float:
    """Phase of the uniform (Airy-type) regime, written with arctangents."""
    eps, me = params.eps, params.me
    root = math.sqrt(t * t - (1 + me * me) * x * x)
    val = (t / eps) * math.atan(root / (me * t))
    if x != 0:
        val -= (x / eps) * math.atan(root / (me * x))
    return val


def classify(x: float, t: float, params: LatticeParams, margin: float = DEFAULT_MARGIN, c: float = DEFAULT_C) -> AsymptoticZone:
    """Zone tag for the large-time formulas."""
    v = abs(x) / t if t > 0 else math.inf
    peak = 1.0 / math.sqrt(1.0 + params.me**2)
    if t > 0 and v < peak - margin and params.eps <= 1.0 / params.m and t > c / params.m:
        return AsymptoticZone("between_peaks", theta_between_peaks(x, t, params))
    if t > 0 and 0 < v < peak:
        return AsymptoticZone("airy", theta_airy(x, t, params))
    return AsymptoticZone("forbidden", math.nan)


def asymptotic_between_peaks(
    x: float, t: float, params: LatticeParams, margin: float = DEFAULT_MARGIN, c: float = DEFAULT_C
) -> PropagatorPair:
    """Large-time approximation well inside the peaks.

    Raises
    ------
    DomainError
        If ``|x|/t >= 1/sqrt(1+m^2 eps^2) - margin``, ``eps > 1/m`` or ``t <= c/m``.
    """
    m, eps, me = params.m, params.eps, params.me
    if not (t > 0 and abs(x) / t < 1.0 / math.sqrt(1 + me * me) - margin):
        raise DomainError("point is not between the peaks")
    if eps > 1.0 / m or t <= c / m:
        raise DomainError("need eps <= 1/m and t > C/m")
    ix = to_steps(x, eps, "x")
    it = to_steps(t, eps, "t")
    th = theta_between_peaks(x, t, params)
    amp = eps * math.sqrt(2 * m / math.pi) / (t * t - (1 + me * me) * x * x) ** 0.25
    ratio = math.sqrt((t + x) / (t - x))
    sn, cs = math.sin(th + math.pi / 4), math.cos(th + math.pi / 4)
    if (ix + it) % 2:
        return PropagatorPair(complex(amp * sn), complex(0.0, -ratio * amp * sn))
    return PropagatorPair(complex(0.0, amp * cs), complex(ratio * amp * cs))


def asymptotic_airy(x: float, t: float, params: LatticeParams) -> PropagatorPair:
    """Large-time approximation through Bessel functions of order 1/3.

    Raises
    ------
    DomainError
        Unless ``0 < |x/t| < 1/sqrt(1 + m^2 eps^2)`` and ``t > 0``.
    """
    m, eps, me = params.m, params.eps, params.me
    if not (t > 0 and 0 < abs(x) / t < 1.0 / math.sqrt(1 + me * me)):
        raise DomainError("point is outside the zone of the Airy-type formula")
    ix = to_steps(x, eps, "x")
    it = to_steps(t, eps, "t")
    th = theta_airy(x, t, params)
    amp = eps * math.sqrt(m) * math.sqrt(th) / (math.sqrt(3.0) * (t * t - (1 + me * me) * x * x) ** 0.25)
    amp *= bessel("J", 1.0 / 3.0, th) + bessel("J", -1.0 / 3.0, th)
    a1 = 1j ** ((abs(ix) - abs(it) + 1) % 4) * amp
    a2 = math.sqrt((t + x) / (t - x)) * 1j ** ((abs(ix) - abs(it)) % 4) * amp
    return PropagatorPair(complex(a1), complex(a2))


def asymptotic_outside_peaks(x: float, t: float, params: LatticeParams) -> PropagatorPair:
    """Experimental large-time formula beyond the peaks through K of order 1/3.

    This is a conjectured form and is not used by any acceptance check.
    """
    m, eps, me = params.m, params.eps, params.me
    if not (t > 0 and 1.0 / math.sqrt(1 + me * me) < abs(x) / t < 1.0):
        raise DomainError("point is outside the zone of the conjectured formula")
    ix = to_steps(x, eps, "x")
    it = to_steps(t, eps, "t")
    root = math.sqrt((1 + me * me) * x * x - t * t)
    th = -(t / eps) * math.atanh(root / (me * t)) + (x / eps) * math.atanh(root / (me * x))
    amp = eps * math.sqrt(m) * math.sqrt(th) / (math.pi * root**0.5) * bessel("K", 1.0 / 3.0, th)
    a1 = 1j ** ((abs(ix) - abs(it) + 1) % 4) * amp
    a2 = math.sqrt((t + x) / (t - x)) * 1j ** ((abs(ix) - abs(it)) % 4) * amp
    return PropagatorPair(complex(a1), complex(a2))
