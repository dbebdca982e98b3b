"""The infinite-lattice propagator by three independent methods.

All functions work in lattice units internally: ``X = x/eps``, ``S = t/eps``
and ``M = m*eps``; the propagator depends on ``(x, t, m, eps)`` only through
these three numbers.

Methods
-------
quadrature
    Trapezoid sum of the one-dimensional momentum integral.
hypergeometric
    Closed form through generalised binomials and the Gauss function.
dp
    Row ``t = 0`` from quadrature, then the Dirac equation marched upwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import DomainError, NumericError, SizeError
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    gauss_constant,
    gen_binomial,
    hyp2f1,
    inverse_lemniscate_constant,
    periodic_trapezoid,
)
from .params import LatticeParams, to_steps

# below this value of m*eps the quadrature clusters nodes near p*eps = 0, pi
_CLUSTER_BELOW = 0.25
TRUNCATION = 40.0


@dataclass(frozen=True)
class PropagatorPair:
    """Both components of the propagator at one lattice point."""

    A1: complex
    A2: complex

    @property
    def charge(self) -> float:
        """Expected charge ``(|A1|^2 + |A2|^2)/2``."""
        return 0.5 * (abs(self.A1) ** 2 + abs(self.A2) ** 2)

    def __getitem__(self, k: int) -> complex:
        if k == 1:
            return self.A1
        if k == 2:
            return self.A2
        raise IndexError("components are numbered 1 and 2")


def dispersion(p, params: LatticeParams):
    """Lattice energy ``arccos(cos(p eps)/sqrt(1 + m^2 eps^2))/eps``."""
    eps = params.eps
    return np.arccos(np.cos(np.asarray(p) * eps) / math.sqrt(1.0 + params.me**2)) / eps


def _omega(q: np.ndarray, me: float) -> np.ndarray:
    return np.arccos(np.cos(q) / math.sqrt(1.0 + me * me))


def _is_real(ix: int, it: int, k: int) -> bool:
    """Reality class: real iff ``x/eps + t/eps + k`` is even."""
    return (ix + it + k) % 2 == 0


def _project(value: complex, real: bool) -> complex:
    return complex(value.real, 0.0) if real else complex(0.0, value.imag)


def _integral(ix: int, it: int, me: float, spec: QuadratureSpec) -> tuple[complex, complex]:
    """The two momentum integrals in lattice units, before any sign rule."""
    cluster = 1.0 if me < _CLUSTER_BELOW else 0.0

    def f1(q):
        return np.exp(1j * (q * ix - _omega(q, me) * it)) / np.sqrt(me * me + np.sin(q) ** 2)

    def f2(q):
        s = np.sin(q)
        return (1.0 + s / np.sqrt(me * me + s * s)) * np.exp(1j * (q * ix - _omega(q, me) * it))

    i1 = periodic_trapezoid(f1, 1.0, spec, cluster)
    i2 = periodic_trapezoid(f2, 1.0, spec, cluster)
    return 1j * me / (2 * math.pi) * i1, i2 / (2 * math.pi)


def _quadrature_steps(ix: int, it: int, me: float, spec: QuadratureSpec, signed: bool) -> PropagatorPair:
    if it < 0 and not signed:
        # skew symmetry: A1(x,t) = A1(x,-t), A2(x,t) = -A2(-x,-t)
        up1 = _quadrature_steps(ix, -it, me, spec, False)
        up2 = _quadrature_steps(-ix, -it, me, spec, False)
        return PropagatorPair(up1.A1, -up2.A2)
    a1, a2 = _integral(ix, it, me, spec)
    if it < 0:
        if _is_real(ix, it, 1):
            a1 = -a1
        if _is_real(ix, it, 2):
            a2 = -a2
    return PropagatorPair(_project(a1, _is_real(ix, it, 1)), _project(a2, _is_real(ix, it, 2)))


def _check_mass(params: LatticeParams) -> None:
    if not params.m > 0:
        raise DomainError("this method needs m > 0; use massless_heavy for m = 0")


def propagate_quadrature(
    x: float,
    t: float,
    params: LatticeParams,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    signed: bool = False,
) -> PropagatorPair:
    """Propagator from the momentum integral.

    Parameters
    ----------
    x, t : float
        Lattice point, multiples of ``params.eps``.
    params : LatticeParams
    spec : QuadratureSpec
        Trapezoid controls.
    signed : bool
        For ``t < 0``, evaluate the integral with the sign rule instead of
        reflecting the ``t > 0`` values.  Used to cross-check the two routes.
    """
    _check_mass(params)
    ix = to_steps(x, params.eps, "x")
    it = to_steps(t, params.eps, "t")
    return _quadrature_steps(ix, it, params.me, spec, signed)


def propagate_row(
    t: float,
    params: LatticeParams,
    x_max: float,
    rel_tol: float = 1e-13,
    max_nodes: int = 1 << 22,
) -> dict[int, PropagatorPair]:
    """All points ``|x| <= x_max`` of one time row at once.

    The trapezoid sums for every ``x`` share their nodes, so the whole row is a
    single FFT.  The node count doubles until the row stops changing.

    Returns
    -------
    dict
        Maps ``x/eps`` to the propagator at ``(x, t)``.
    """
    _check_mass(params)
    it = to_steps(t, params.eps, "t")
    xm = int(math.floor(x_max / params.eps + 1e-9))
    if xm < 0:
        raise DomainError("empty row")
    if it < 0:
        up = propagate_row(-t, params, x_max, rel_tol, max_nodes)
        return {ix: PropagatorPair(up[ix].A1, -up[-ix].A2) for ix in up}
    me = params.me
    xs = np.arange(-xm, xm + 1)
    n = 64
    while n < 4 * (it + xm + 8):
        n *= 2
    prev = None
    while True:
        q = -math.pi + 2 * math.pi * np.arange(n) / n
        phase = np.exp(-1j * _omega(q, me) * it)
        s = np.sin(q)
        root = np.sqrt(me * me + s * s)
        g1 = phase / root
        g2 = (1.0 + s / root) * phase
        # sum_j g_j exp(i q_j X) = (-1)^X * n * ifft(g)[X mod n]
        sign = np.where(xs % 2 == 0, 1.0, -1.0)
        c1 = np.fft.ifft(g1)[xs % n] * sign
        c2 = np.fft.ifft(g2)[xs % n] * sign
        row1 = 1j * me * c1
        row2 = c2
        if prev is not None:
            scale = max(np.abs(row1).max(), np.abs(row2).max(), 1e-300)
            diff = max(np.abs(row1 - prev[0]).max(), np.abs(row2 - prev[1]).max())
            if diff <= rel_tol * scale:
                break
        if n >= max_nodes:
            raise NumericError("row quadrature did not converge", partial=(row1, row2))
        prev = (row1, row2)
        n *= 2
    out = {}
    for j, ix in enumerate(xs.tolist()):
        out[ix] = PropagatorPair(
            _project(complex(row1[j]), _is_real(ix, it, 1)),
            _project(complex(row2[j]), _is_real(ix, it, 2)),
        )
    return out


def propagate_hypergeometric(x: float, t: float, params: LatticeParams) -> PropagatorPair:
    """Propagator from the closed hypergeometric form."""
    _check_mass(params)
    ix = to_steps(x, params.eps, "x")
    it = to_steps(t, params.eps, "t")
    me = params.me
    ax = abs(ix)
    prefactor = (-1j * me) ** (it - ax) / (1.0 + me * me) ** (it / 2.0)
    z = -1.0 / (me * me)
    h = (ax - it) / 2.0
    a1 = 1j * prefactor * gen_binomial((it + ax) / 2.0 - 0.5, ax) * hyp2f1(0.5 + h, 0.5 + h, 1.0 + ax, z)
    step = 1.0 if ix >= 0 else 0.0
    a2 = prefactor * gen_binomial((it + ax) / 2.0 - 1.0 + step, ax) * hyp2f1(h, 1.0 + h, 1.0 + ax, z)
    if it < 0:
        if _is_real(ix, it, 1):
            a1 = -a1
        if _is_real(ix, it, 2):
            a2 = -a2
    return PropagatorPair(_project(complex(a1), _is_real(ix, it, 1)), _project(complex(a2), _is_real(ix, it, 2)))


@dataclass(frozen=True)
class GridRequest:
    """A rectangular window of lattice points for table builders."""

    x_min: float
    x_max: float
    t: float
    params: LatticeParams
    method: str = "quadrature"

    def x_steps(self) -> range:
        lo = to_steps(self.x_min, self.params.eps, "x_min")
        hi = to_steps(self.x_max, self.params.eps, "x_max")
        if hi < lo:
            raise DomainError("empty x range")
        return range(lo, hi + 1)


def dirac_step(row1: np.ndarray, row2: np.ndarray, me: float) -> tuple[np.ndarray, np.ndarray]:
    """Advance one time step with the source-free Dirac equation.

    ``row1[j]``, ``row2[j]`` hold the components at consecutive ``x``.  The
    result is one cell shorter on each side.
    """
    norm = 1.0 / math.sqrt(1.0 + me * me)
    new1 = (row1[2:] + me * row2[1:-1]) * norm
    new2 = (row2[:-2] - me * row1[1:-1]) * norm
    return new1, new2


def propagate_dp(request: GridRequest, seed_window: int | None = None) -> dict[int, PropagatorPair]:
    """Propagator on a window of one row by marching the Dirac equation.

    Parameters
    ----------
    request : GridRequest
    seed_window : int, optional
        Half-width (in steps) of the ``t = 0`` row used as seed.  Defaults to
        the minimum ``max|x|/eps + t/eps``; a smaller value raises SizeError.
    """
    params = request.params
    _check_mass(params)
    xs = request.x_steps()
    it = to_steps(request.t, params.eps, "t")
    if it < 0:
        mirrored = GridRequest(-request.x_max, -request.x_min, -request.t, params, request.method)
        up = propagate_dp(mirrored, seed_window)
        up1 = propagate_dp(GridRequest(request.x_min, request.x_max, -request.t, params), seed_window)
        return {ix: PropagatorPair(up1[ix].A1, -up[-ix].A2) for ix in xs}
    lo, hi = xs.start - it, xs.stop - 1 + it
    need = max(abs(lo), abs(hi))
    if seed_window is None:
        seed_window = need
    if seed_window < need:
        raise SizeError(f"seed window {seed_window} smaller than required {need}")
    seed = propagate_row(0.0, params, seed_window * params.eps)
    row1 = np.array([seed[ix].A1 for ix in range(lo, hi + 1)])
    row2 = np.array([seed[ix].A2 for ix in range(lo, hi + 1)])
    for _ in range(it):
        row1, row2 = dirac_step(row1, row2, params.me)
    out = {}
    for j, ix in enumerate(xs):
        out[ix] = PropagatorPair(
            _project(complex(row1[j]), _is_real(ix, it, 1)),
            _project(complex(row2[j]), _is_real(ix, it, 2)),
        )
    return out


def propagate(x: float, t: float, params: LatticeParams, method: str = "quadrature") -> PropagatorPair:
    """Dispatch to one of the three methods for a single point."""
    if method == "quadrature":
        return propagate_quadrature(x, t, params)
    if method == "hypergeometric":
        return propagate_hypergeometric(x, t, params)
    if method == "dp":
        ix = to_steps(x, params.eps, "x")
        return propagate_dp(GridRequest(x, x, t, params))[ix]
    raise DomainError(f"unknown method {method!r}")


def massless_heavy(x: float, t: float, which: str, eps: float = 1.0) -> PropagatorPair:
    """Exact propagator of the massless model or of the infinitely heavy limit.

    Parameters
    ----------
    which : {"massless", "heavy"}
    """
    ix = to_steps(x, eps, "x")
    it = to_steps(t, eps, "t")
    if which == "massless":
        if ix == it:
            a2 = 1.0 + 0j if it >= 0 else -1.0 + 0j
        elif (ix + it) % 2:
            a2 = 2j / (math.pi * (ix - it))
        else:
            a2 = 0j
        return PropagatorPair(0j, a2)
    if which == "heavy":
        vals = []
        for k in (1, 2):
            if ix != 0:
                vals.append(0j)
            else:
                vals.append((-1j) ** (abs(it + k - 1) - 1))
        return PropagatorPair(complex(vals[0]), complex(vals[1]))
    raise DomainError(f"unknown limit {which!r}")


def expected_charge(x: float, t: float, params: LatticeParams) -> float:
    """Expected charge in a segment of length eps around ``(x, t)``."""
    return propagate_quadrature(x, t, params).charge


# -- exact values at m = eps = 1 ---------------------------------------------


@dataclass(frozen=True)
class GLValue:
    """Exact ``2^(|t|/2) * A`` at ``m = eps = 1``: ``re + i*(g*G + l*L')``."""

    re: Fraction
    g: Fraction
    l: Fraction

    def __add__(self, other: "GLValue") -> "GLValue":
        return GLValue(self.re + other.re, self.g + other.g, self.l + other.l)

    def __sub__(self, other: "GLValue") -> "GLValue":
        return GLValue(self.re - other.re, self.g - other.g, self.l - other.l)

    def scale(self, c: Fraction) -> "GLValue":
        return GLValue(self.re * c, self.g * c, self.l * c)

    def numeric(self, t_steps: int) -> complex:
        im = float(self.g) * gauss_constant() + float(self.l) * inverse_lemniscate_constant()
        return complex(float(self.re), im) / 2.0 ** (abs(t_steps) / 2.0)


_ZERO = GLValue(Fraction(0), Fraction(0), Fraction(0))


def exact_unit_table(x_max: int, t_max: int) -> dict[tuple[int, int, int], GLValue]:
    """Exact values of ``2^(|t|/2) * A_k(x, t, 1, 1)`` for ``|x| <= x_max``, ``|t| <= t_max``.

    Built from ``A1(0,0) = iG``, ``A2(0,0) = 1`` and ``A2(1,0) = iL'`` using the
    equal-time mixed recurrences along ``t = 0`` and the Dirac equation
    upwards; negative times follow from the skew symmetry.
    """
    width = x_max + t_max + 2
    row1: dict[int, GLValue] = {}
    row2: dict[int, GLValue] = {}
    one = Fraction(1)
    row1[0] = GLValue(Fraction(0), one, Fraction(0))
    row2[0] = GLValue(one, Fraction(0), Fraction(0))
    row2[1] = GLValue(Fraction(0), Fraction(0), one)
    row2[-1] = GLValue(Fraction(0), Fraction(0), -one)
    for ix in range(-width - 1, width + 2):
        if ix % 2:
            row1[ix] = _ZERO
        elif ix:
            row2[ix] = _ZERO
    # A1(x+1,0) = A1(x-1,0) - 2 A2(x,0) and
    # A2(x+1,0) = ((x-1) A2(x-1,0) - 2x A1(x,0)) / (x+1), for x != 0
    for ix in range(1, width + 1):
        if ix % 2:
            row1[ix + 1] = row1[ix - 1] - row2[ix].scale(Fraction(2))
            row1[-ix - 1] = row1[ix + 1]
        else:
            row2[ix + 1] = (row2[ix - 1].scale(Fraction(ix - 1)) - row1[ix].scale(Fraction(2 * ix))).scale(
                Fraction(1, ix + 1)
            )
            row2[-ix - 1] = row2[ix + 1].scale(Fraction(-1))
    table: dict[tuple[int, int, int], GLValue] = {}
    for ix in range(-width, width + 1):
        table[(1, ix, 0)] = row1[ix]
        table[(2, ix, 0)] = row2[ix]
    # 2^(t/2) A1(x,t) = 2^((t-1)/2) (A1(x+1,t-1) + A2(x,t-1)), similarly A2
    cur1, cur2 = row1, row2
    for it in range(1, t_max + 1):
        lim = width - it
        new1 = {ix: cur1[ix + 1] + cur2[ix] for ix in range(-lim, lim + 1)}
        new2 = {ix: cur2[ix - 1] - cur1[ix] for ix in range(-lim, lim + 1)}
        for ix in range(-lim, lim + 1):
            table[(1, ix, it)] = new1[ix]
            table[(2, ix, it)] = new2[ix]
        cur1, cur2 = new1, new2
    for it in range(1, t_max + 1):
        for ix in range(-x_max, x_max + 1):
            table[(1, ix, -it)] = table[(1, ix, it)]
            table[(2, ix, -it)] = table[(2, -ix, it)].scale(Fraction(-1))
    return {key: val for key, val in table.items() if abs(key[1]) <= x_max and abs(key[2]) <= t_max}


def recover_rational(value: float, max_den: int = 15, max_num: int = 400) -> tuple[Fraction, Fraction, float]:
    """Write ``value = alpha*G + beta*L'`` with small-denominator rationals.

    Every ``alpha`` with denominator at most ``max_den`` and numerator at most
    ``max_num`` is tried; ``beta`` is the continued-fraction rounding of the
    least-squares solution for that ``alpha``.  The best pair is returned with
    its residual.
    """
    g = gauss_constant()
    lp = inverse_lemniscate_constant()
    best = (Fraction(0), Fraction(0), math.inf)
    for den in range(1, max_den + 1):
        for num in range(-max_num, max_num + 1):
            if math.gcd(num, den) != 1:
                continue
            alpha = Fraction(num, den)
            beta = Fraction((value - float(alpha) * g) / lp).limit_denominator(max_den)
            res = abs(value - float(alpha) * g - float(beta) * lp)
            if res < best[2]:
                best = (alpha, beta, res)
    return best


# -- identities ---------------------------------------------------------------


@dataclass
class IdentityReport:
    """Maximum residual of each identity and the overall verdict."""

    tol: float
    residuals: dict[str, float]
    excluded: dict[str, list]

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.residuals.values())

    def as_dict(self) -> dict:
        return {
            name: {"max_residual": val, "pass": val <= self.tol} for name, val in self.residuals.items()
        }


class _Table:
    """Cached propagator values on a window, filled one FFT row at a time."""

    def __init__(self, params: LatticeParams, x_max: int):
        self.params = params
        self.x_max = x_max
        self.rows: dict[int, dict[int, PropagatorPair]] = {}

    def __call__(self, k: int, ix: int, it: int) -> complex:
        if it not in self.rows:
            self.rows[it] = propagate_row(it * self.params.eps, self.params, self.x_max * self.params.eps)
        row = self.rows[it]
        if ix not in row:
            raise SizeError(f"x/eps = {ix} outside the cached window")
        return row[ix][k]


def truncation_steps(me: float) -> int:
    """Light-cone margin ``40/(m eps)`` used to truncate infinite sums."""
    return int(math.ceil(TRUNCATION / me))


def identity_suite(params: LatticeParams, window: int = 6, tol: float = 1e-9, charge_t_max: int = 0) -> IdentityReport:
    """Check the exact identities of the propagator on ``|x|, |t| <= window*eps``.

    Parameters
    ----------
    params : LatticeParams
    window : int
        Half-width of the window in lattice steps.
    tol : float
        Pass threshold for each maximum residual.
    charge_t_max : int
        If positive, also check charge conservation for ``t/eps`` up to this.
    """
    me = params.me
    cut = truncation_steps(me)
    big = 2 * window + cut + 4
    A = _Table(params, big + window + 4)
    s = math.sqrt(1.0 + me * me)
    res: dict[str, float] = {}
    excluded: dict[str, list] = {"klein_gordon": [], "skew_symmetry": []}
    W = range(-window, window + 1)

    r = 0.0
    for ix in W:
        for it in W:
            d = 1.0 if (ix, it) == (0, 0) else 0.0
            r = max(r, abs(A(1, ix, it) - (A(1, ix + 1, it - 1) + me * A(2, ix, it - 1)) / s))
            r = max(r, abs(A(2, ix, it) - (A(2, ix - 1, it - 1) - me * A(1, ix, it - 1)) / s - 2 * d))
    res["dirac"] = r

    r = 0.0
    for k in (1, 2):
        for ix in W:
            for it in W:
                if (k == 1 and (ix, it) == (0, 0)) or (k == 2 and (ix, it) in ((-1, 0), (0, -1))):
                    excluded["klein_gordon"].append((k, ix, it))
                    continue
                val = s * (A(k, ix, it + 1) + A(k, ix, it - 1)) - A(k, ix + 1, it) - A(k, ix - 1, it)
                r = max(r, abs(val))
    res["klein_gordon"] = r

    r = 0.0
    for ix in W:
        for it in W:
            if (ix, it) == (0, 0):
                excluded["skew_symmetry"].append((ix, it))
                continue
            a = A(1, ix, it)
            r = max(r, abs(a - A(1, -ix, it)), abs(a - A(1, ix, -it)), abs(a - A(1, -ix, -it)))
            r = max(r, abs(A(2, ix, it) + A(2, -ix, -it)))
            r = max(r, abs((it - ix) * A(2, ix, it) - (it + ix) * A(2, -ix, it)))
    res["skew_symmetry"] = r

    r = 0.0
    for ix in W:
        for it in W:
            r = max(
                r,
                abs(2 * me * ix * A(1, ix, it) - (ix - it - 1) * A(2, ix - 1, it) + (ix - it + 1) * A(2, ix + 1, it)),
            )
            r = max(r, abs(2 * me * ix * A(2, ix, it) - (ix + it) * (A(1, ix - 1, it) - A(1, ix + 1, it))))
    res["mixed_recurrence"] = r

    r = 0.0
    c = 1.0 + 2.0 * me * me
    for ix in W:
        for it in W:
            lhs1 = (ix + 1) * ((ix - 1) ** 2 - it**2) * A(1, ix - 2, it) + (ix - 1) * (
                (ix + 1) ** 2 - it**2
            ) * A(1, ix + 2, it)
            rhs1 = 2 * ix * (c * (ix * ix - 1) - it**2) * A(1, ix, it)
            lhs2 = (ix + 1) * ((ix - 1) ** 2 - (it + 1) ** 2) * A(2, ix - 2, it) + (ix - 1) * (
                (ix + 1) ** 2 - (it - 1) ** 2
            ) * A(2, ix + 2, it)
            rhs2 = 2 * ix * (c * (ix * ix - 1) - it**2 + 1) * A(2, ix, it)
            r = max(r, abs(lhs1 - rhs1), abs(lhs2 - rhs2))
    res["three_term_recurrence"] = r

    # Huygens: t >= t' >= 0
    r1 = 0.0
    r2 = 0.0
    for it in range(0, window + 1):
        for itp in range(0, it + 1):
            span = range(-(itp + cut), itp + cut + 1)
            for ix in W:
                h1 = 0.5 * sum(
                    A(2, xp, itp) * A(1, ix - xp, it - itp) + A(1, xp, itp) * A(2, xp - ix, it - itp) for xp in span
                )
                h2 = 0.5 * sum(
                    A(2, xp, itp) * A(2, ix - xp, it - itp) - A(1, xp, itp) * A(1, xp - ix, it - itp) for xp in span
                )
                r1 = max(r1, abs(A(1, ix, it) - h1), abs(A(2, ix, it) - h2))
                g1 = sum(A(2, xp, itp) * A(1, ix - xp, it - itp) for xp in span if (ix + xp + it + itp) % 2)
                g1 += sum(A(1, xp, itp) * A(2, xp - ix, it - itp) for xp in span if (ix + xp + it + itp) % 2 == 0)
                g2 = sum(A(2, xp, itp) * A(2, ix - xp, it - itp) for xp in span if (ix + xp + it + itp) % 2 == 0)
                g2 -= sum(A(1, xp, itp) * A(1, xp - ix, it - itp) for xp in span if (ix + xp + it + itp) % 2)
                r2 = max(r2, abs(A(1, ix, it) - g1), abs(A(2, ix, it) - g2))
    res["huygens_first"] = r1
    res["huygens_second"] = r2

    r = 0.0
    for ix in W:
        k_real = 2 if ix % 2 == 0 else 1
        expect = 1.0 if ix == 0 else 0.0
        r = max(r, abs(A(k_real, ix, 0) - (expect if k_real == 2 else 0.0)))
    res["initial_value"] = r

    report = IdentityReport(tol, res, excluded)
    if charge_t_max > 0:
        report.residuals["charge_conservation"] = max(
            abs(total_charge(it * params.eps, params) - 1.0) for it in range(1, charge_t_max + 1)
        )
    return report


def total_charge(t: float, params: LatticeParams, margin: float = TRUNCATION) -> float:
    """Sum of the expected charge over ``|x| <= |t| + margin/m``."""
    x_max = abs(t) + margin / params.m
    row = propagate_row(t, params, x_max)
    return math.fsum(pair.charge for pair in row.values())


def table(points: Iterable[tuple[float, float]], params: LatticeParams, method: str = "quadrature") -> list:
    """Evaluate the propagator at each point with one method."""
    return [propagate(x, t, params, method) for x, t in points]
