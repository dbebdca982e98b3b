"""Special functions and periodic quadrature.

Everything here works on Python floats (and numpy arrays for the quadrature
integrands).  The set of supported functions is deliberately small: the Gamma
function, generalised binomials, the Gauss hypergeometric function on the real
half-line ``z < 1``, the two complete elliptic integrals at the imaginary unit,
and Bessel functions of orders 0, 1 and +-1/3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError

EULER_GAMMA = 0.57721566490153286061
_MACHINE_EPS = np.finfo(float).eps

# Lanczos coefficients for g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(z: float) -> float:
    """Gamma function of a real argument.

    Parameters
    ----------
    z : float
        Argument, not a nonpositive integer.

    Returns
    -------
    float

    Raises
    ------
    DomainError
        If ``z`` is a pole.
    """
    z = float(z)
    if z <= 0 and z == math.floor(z):
        raise DomainError(f"gamma has a pole at {z}")
    if z == math.floor(z) and z <= 21:
        return float(math.factorial(int(z) - 1))
    if z < 0.5:
        return math.pi / (math.sin(math.pi * z) * gamma(1.0 - z))
    z -= 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    w = z + _LANCZOS_G + 0.5
    # split the power to avoid overflow near |z| = 30 and beyond
    half = w ** ((z + 0.5) / 2.0)
    return math.sqrt(2.0 * math.pi) * half * half * math.exp(-w) * acc


def gen_binomial(z: float, n: int) -> float:
    """Generalised binomial coefficient ``prod_{j=1..n} (z - j + 1) / n!``."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    acc = 1.0
    for j in range(1, n + 1):
        acc *= (z - j + 1) / j
    return acc


def _is_nonpositive_integer(v: float) -> bool:
    return v <= 0 and v == math.floor(v)


def _hyp_series(a: float, b: float, c: float, w: float, max_terms: int) -> float:
    """Sum the Gauss series at ``|w| < 1`` with compensated accumulation."""
    term = 1.0
    total = 1.0
    comp = 0.0
    small = 0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * w
        if term == 0.0:
            return total + comp
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NumericError("hypergeometric series did not converge", partial=total)


def hyp2f1(a: float, b: float, c: float, z: float, max_terms: int = 200000) -> float:
    """Gauss hypergeometric function for real parameters and ``z < 1``.

    For ``z < -1/2`` the Pfaff transformation moves the argument to
    ``z / (z - 1)`` in ``(1/3, 1)``, where the series converges.

    Raises
    ------
    DomainError
        If ``c`` is a nonpositive integer or ``z >= 1``.
    NumericError
        If the series does not converge within ``max_terms`` terms.
    """
    if _is_nonpositive_integer(c):
        raise DomainError(f"c = {c} is a pole of the hypergeometric function")
    if z >= 1.0:
        raise DomainError("only z < 1 is supported")
    if z == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    if z >= -0.5:
        return _hyp_series(a, b, c, z, max_terms)
    # keep a terminating parameter in the first slot so Pfaff preserves it
    if _is_nonpositive_integer(b) and not _is_nonpositive_integer(a):
        a, b = b, a
    w = z / (z - 1.0)
    return (1.0 - z) ** (-a) * _hyp_series(a, c - b, c, w, max_terms)


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for :func:`periodic_trapezoid`.

    Attributes
    ----------
    initial_nodes : int
        Number of nodes of the first estimate.
    rel_tol : float
        Stop when successive estimates differ by at most this much, relative
        to the L1 norm of the integrand.
    max_doublings : int
        Give up after this many node doublings.
    """

    initial_nodes: int = 64
    rel_tol: float = 1e-11
    max_doublings: int = 18

    def __post_init__(self):
        if self.initial_nodes < 1 or self.max_doublings < 1:
            raise DomainError("node counts must be positive")
        if self.rel_tol < 100 * _MACHINE_EPS:
            raise DomainError("rel_tol below 100 machine epsilons")


DEFAULT_QUADRATURE = QuadratureSpec()


def periodic_trapezoid(
    f: Callable[[np.ndarray], np.ndarray],
    eps: float = 1.0,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    cluster: float = 0.0,
) -> complex:
    """Integrate a smooth ``2*pi/eps``-periodic function over one period.

    Parameters
    ----------
    f : callable
        Vectorised integrand taking an array of momenta.
    eps : float
        Lattice step; the period is ``2*pi/eps``.
    spec : QuadratureSpec
        Tolerance and node-count controls.
    cluster : float
        Strength in ``[0, 1]`` of the periodic substitution
        ``p = u - cluster*sin(2*u*eps)/(2*eps)``, which packs nodes around
        ``p*eps = 0`` and ``p*eps = pi``.  Useful when the integrand has
        singularities close to those points.

    Returns
    -------
    complex

    Raises
    ------
    NumericError
        If the estimates do not settle within ``spec.max_doublings`` doublings;
        the last estimate is attached as ``partial``.
    """
    if not 0.0 <= cluster <= 1.0:
        raise DomainError("cluster must lie in [0, 1]")
    period = 2.0 * math.pi / eps

    def mapped(u: np.ndarray) -> np.ndarray:
        if cluster == 0.0:
            return np.asarray(f(u), dtype=complex)
        p = u - cluster * np.sin(2.0 * eps * u) / (2.0 * eps)
        jac = 1.0 - cluster * np.cos(2.0 * eps * u)
        return np.asarray(f(p), dtype=complex) * jac

    n = spec.initial_nodes
    u = -math.pi / eps + period * np.arange(n) / n
    vals = mapped(u)
    total = vals.sum()
    l1 = np.abs(vals).sum()
    estimate = total * period / n
    for _ in range(spec.max_doublings):
        mid = u + 0.5 * period / n
        vals = mapped(mid)
        total = total + vals.sum()
        l1 = l1 + np.abs(vals).sum()
        u = np.concatenate([u, mid])
        n *= 2
        new = total * period / n
        scale = max(abs(new), l1 * period / n)
        if abs(new - estimate) <= spec.rel_tol * scale:
            return complex(new)
        estimate = new
    raise NumericError("periodic trapezoid did not converge", partial=complex(estimate))


# -- elliptic integrals at the imaginary unit ---------------------------------


def _agm_k_e(k: float) -> tuple[float, float]:
    """Complete elliptic integrals K(k), E(k) for real ``0 <= k < 1`` by AGM."""
    a, b = 1.0, math.sqrt(1.0 - k * k)
    c = k
    acc = 0.5 * c * c
    power = 0.5
    for _ in range(64):
        if abs(a - b) <= 4.0 * _MACHINE_EPS * a:
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        acc += power * c * c
    kk = math.pi / (2.0 * a)
    return kk, kk * (1.0 - acc)


def elliptic_K_imag(method: str = "agm") -> float:
    """K(i), the complete elliptic integral of the first kind at modulus i.

    ``method="agm"`` uses the imaginary-modulus transformation
    ``K(i) = K(1/sqrt 2)/sqrt 2`` and the arithmetic-geometric mean;
    ``method="quadrature"`` integrates ``1/sqrt(1 + sin^2)`` directly.
    """
    if method == "agm":
        return _agm_k_e(math.sqrt(0.5))[0] / math.sqrt(2.0)
    if method == "quadrature":
        val = periodic_trapezoid(lambda th: 1.0 / np.sqrt(1.0 + np.sin(th) ** 2))
        return val.real / 4.0
    raise DomainError(f"unknown method {method!r}")


def elliptic_E_imag(method: str = "agm") -> float:
    """E(i), the complete elliptic integral of the second kind at modulus i."""
    if method == "agm":
        return _agm_k_e(math.sqrt(0.5))[1] * math.sqrt(2.0)
    if method == "quadrature":
        val = periodic_trapezoid(lambda th: np.sqrt(1.0 + np.sin(th) ** 2))
        return val.real / 4.0
    raise DomainError(f"unknown method {method!r}")


def gauss_constant() -> float:
    """``G = Gamma(1/4)^2 / (2 pi)^(3/2)``, equal to ``(2/pi) K(i)``."""
    return gamma(0.25) ** 2 / (2.0 * math.pi) ** 1.5


def inverse_lemniscate_constant() -> float:
    """``L' = 2 sqrt(2 pi) / Gamma(1/4)^2``, equal to ``1/(pi G)``."""
    return 2.0 * math.sqrt(2.0 * math.pi) / gamma(0.25) ** 2


# -- Bessel functions ---------------------------------------------------------

BESSEL_CROSSOVER = 12.0
_K_CROSSOVER = 2.0
_ORDERS = (0.0, 1.0, 1.0 / 3.0, -1.0 / 3.0)


def _check_order(order: float) -> float:
    for o in _ORDERS:
        if abs(order - o) < 1e-12:
            return o
    raise DomainError(f"order {order} not supported")


def _series_j(nu: float, z: float, sign: float = -1.0) -> float:
    """Power series of J_nu (``sign=-1``) or I_nu (``sign=+1``)."""
    h = 0.5 * z
    q = sign * h * h
    term = h**nu / gamma(nu + 1.0)
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > h:
            return total
        if k > 500:
            raise NumericError("Bessel series did not converge", partial=total)


def _series_y_int(n: int, z: float) -> float:
    """Power series of Y_n for n in {0, 1}."""
    h = 0.5 * z
    q = -h * h
    log_part = 2.0 / math.pi * math.log(h) * _series_j(float(n), z)
    head = 0.0
    if n == 1:
        head = -1.0 / (math.pi * h)
    # digamma at positive integers: psi(k+1) = -gamma + H_k
    psi_a = -EULER_GAMMA
    psi_b = -EULER_GAMMA + (1.0 if n == 1 else 0.0)
    term = h**n / math.factorial(n)
    total = (psi_a + psi_b) * term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        psi_a += 1.0 / k
        psi_b += 1.0 / (k + n)
        piece = (psi_a + psi_b) * term
        total += piece
        if abs(piece) <= 1e-17 * abs(total) and k > h:
            break
        if k > 500:
            raise NumericError("Bessel series did not converge", partial=total)
    return head + log_part - total / math.pi


def _hankel_pq(nu: float, z: float) -> tuple[float, float]:
    """Asymptotic P, Q sums with truncation at the smallest term."""
    mu = 4.0 * nu * nu
    p, q = 1.0, 0.0
    term = 1.0
    prev = math.inf
    k = 0
    while k < 200:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        if term == 0.0:
            break
        if abs(term) >= prev:
            break
        prev = abs(term)
        if k % 2 == 1:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += -term if (k // 2) % 2 == 1 else term
    return p, q


def _asym_jy(nu: float, z: float) -> tuple[float, float]:
    p, q = _hankel_pq(nu, z)
    chi = z - (0.5 * nu + 0.25) * math.pi
    amp = math.sqrt(2.0 / (math.pi * z))
    c, s = math.cos(chi), math.sin(chi)
    return amp * (p * c - q * s), amp * (p * s + q * c)


def _small_k(nu: float, z: float) -> float:
    """K_nu by power series, intended for z <= 2."""
    if nu in (0.0, 1.0):
        n = int(nu)
        h = 0.5 * z
        q = h * h
        log_part = (-1.0) ** (n + 1) * math.log(h) * _series_j(nu, z, sign=1.0)
        head = 0.0 if n == 0 else 0.5 / h
        psi_a = -EULER_GAMMA
        psi_b = -EULER_GAMMA + (1.0 if n == 1 else 0.0)
        term = h**n / math.factorial(n)
        total = (psi_a + psi_b) * term
        k = 0
        while k < 200:
            k += 1
            term *= q / (k * (k + n))
            psi_a += 1.0 / k
            psi_b += 1.0 / (k + n)
            piece = (psi_a + psi_b) * term
            total += piece
            if abs(piece) <= 1e-17 * abs(total):
                break
        return head + log_part + (-1.0) ** n * 0.5 * total
    a = abs(nu)
    return 0.5 * math.pi * (_series_j(-a, z, 1.0) - _series_j(a, z, 1.0)) / math.sin(a * math.pi)


def _steed_k(mu: float, x: float) -> tuple[float, float]:
    """K_mu and K_{mu+1} for |mu| <= 1/2 and x >= 2 by Steed's continued fraction."""
    xmu2 = mu * mu
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - xmu2
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 100000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 1e-17:
            break
    else:
        raise NumericError("continued fraction for K did not converge")
    h = a1 * h
    kmu = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) / s
    k1 = kmu * (mu + x + 0.5 - h) / x
    return kmu, k1


def _bessel_scalar(kind: str, order: float, z: float) -> float:
    if kind == "J":
        if z == 0.0:
            if order == 0.0:
                return 1.0
            if order > 0:
                return 0.0
            raise DomainError("J_{-1/3} is singular at 0")
        if z < 0:
            raise DomainError("z must be positive")
        if z < BESSEL_CROSSOVER:
            return _series_j(order, z)
        return _asym_jy(order, z)[0]
    if z <= 0:
        raise DomainError(f"{kind} is singular for z <= 0")
    if kind == "Y":
        if z >= BESSEL_CROSSOVER:
            return _asym_jy(order, z)[1]
        if order in (0.0, 1.0):
            return _series_y_int(int(order), z)
        sn, cs = math.sin(order * math.pi), math.cos(order * math.pi)
        return (_series_j(order, z) * cs - _series_j(-order, z)) / sn
    if kind == "K":
        a = abs(order)
        if z <= _K_CROSSOVER:
            return _small_k(a, z)
        if a == 1.0:
            return _steed_k(0.0, z)[1]
        return _steed_k(a, z)[0]
    raise DomainError(f"unknown Bessel kind {kind!r}")


def bessel(kind: str, order: float, z):
    """Bessel functions J, Y and modified K of orders 0, 1, 1/3 and -1/3.

    Parameters
    ----------
    kind : {"J", "Y", "K"}
    order : float
        One of 0, 1, 1/3, -1/3.
    z : float or array_like
        Positive argument (``J`` also accepts 0).

    Returns
    -------
    float or numpy.ndarray
        Same shape as ``z``.

    Notes
    -----
    ``J`` and ``Y`` use power series below ``z = 12`` and the Hankel
    asymptotic expansion above.  ``K`` uses power series up to ``z = 2`` and
    Steed's continued fraction beyond, since neither the series nor the
    asymptotic expansion is accurate in between.
    """
    order = _check_order(order)
    if np.ndim(z) == 0:
        return _bessel_scalar(kind, order, float(z))
    arr = np.asarray(z, dtype=float)
    out = np.empty_like(arr)
    for idx, v in np.ndenumerate(arr):
        out[idx] = _bessel_scalar(kind, order, float(v))
    return out
