import math

import mpmath
import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given
from hypothesis import strategies as st

from anticheckers import numerics as nm
from anticheckers.errors import DomainError, NumericError


@given(st.floats(0.05, 30.0))
def test_gamma_matches_math(z):
    assert nm.gamma(z) == pytest.approx(math.gamma(z), rel=1e-13)


@given(st.floats(-6.5, 0.45).filter(lambda z: abs(z - round(z)) > 1e-3))
def test_gamma_reflection_region(z):
    assert nm.gamma(z) == pytest.approx(math.gamma(z), rel=1e-12)


def test_gamma_pole():
    with pytest.raises(DomainError):
        nm.gamma(-2.0)


@given(st.floats(-5, 5), st.integers(0, 12))
def test_gen_binomial_matches_scipy(z, n):
    assert nm.gen_binomial(z, n) == pytest.approx(sp.binom(z, n), rel=1e-12, abs=1e-12)


@given(
    st.floats(-4, 4),
    st.floats(-4, 4),
    st.floats(0.3, 5),
    st.floats(-0.95, 0.9),
)
def test_hyp2f1_matches_mpmath(a, b, c, z):
    ref = float(mpmath.hyp2f1(a, b, c, z))
    assert nm.hyp2f1(a, b, c, z) == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_hyp2f1_terminating_large_negative_argument():
    # polynomial in z: Pfaff must keep the terminating parameter
    ref = float(mpmath.hyp2f1(-5, 2.5, 1.5, -20.0))
    assert nm.hyp2f1(-5, 2.5, 1.5, -20.0) == pytest.approx(ref, rel=1e-11)


def test_hyp2f1_domain():
    with pytest.raises(DomainError):
        nm.hyp2f1(1, 1, -2, 0.3)
    with pytest.raises(DomainError):
        nm.hyp2f1(1, 1, 2, 1.0)


def test_trapezoid_exact_on_trig_polynomial():
    val = nm.periodic_trapezoid(lambda p: np.cos(p) ** 2 + 1j * np.sin(3 * p))
    assert val == pytest.approx(math.pi, abs=1e-13)


def test_trapezoid_period_scales_with_eps():
    val = nm.periodic_trapezoid(lambda p: np.ones_like(p), eps=0.5)
    assert val == pytest.approx(4 * math.pi, rel=1e-14)


def test_trapezoid_clustering_preserves_value():
    f = lambda p: 1 / np.sqrt(0.01 + np.sin(p) ** 2)
    plain = nm.periodic_trapezoid(f)
    packed = nm.periodic_trapezoid(f, cluster=0.9)
    assert packed == pytest.approx(plain, rel=1e-10)


def test_trapezoid_reports_failure_with_partial():
    spec = nm.QuadratureSpec(initial_nodes=4, max_doublings=2)
    with pytest.raises(NumericError) as info:
        nm.periodic_trapezoid(lambda p: np.abs(p) ** 0.5, spec=spec)
    assert info.value.partial is not None


def test_elliptic_constants_two_routes():
    k_ref = float(mpmath.ellipk(-1))
    e_ref = float(mpmath.ellipe(-1))
    for method in ("agm", "quadrature"):
        assert nm.elliptic_K_imag(method) == pytest.approx(k_ref, rel=1e-13)
        assert nm.elliptic_E_imag(method) == pytest.approx(e_ref, rel=1e-13)


def test_gauss_and_lemniscate_constants():
    g = nm.gauss_constant()
    lp = nm.inverse_lemniscate_constant()
    assert g == pytest.approx(2 / math.pi * nm.elliptic_K_imag(), abs=1e-12)
    assert lp == pytest.approx(2 / math.pi * (nm.elliptic_E_imag() - nm.elliptic_K_imag()), abs=1e-12)
    assert g * lp == pytest.approx(1 / math.pi, abs=1e-12)
    assert round(g, 5) == 0.83463
    assert round(lp, 5) == 0.38138


SCIPY_BESSEL = {"J": sp.jv, "Y": sp.yv, "K": sp.kv}


@pytest.mark.parametrize("kind", ["J", "Y", "K"])
@pytest.mark.parametrize("order", [0.0, 1.0, 1 / 3, -1 / 3])
def test_bessel_against_scipy(kind, order):
    zs = np.concatenate([np.linspace(0.01, 40, 400), [1.999, 2.0, 2.001, 11.99, 12.0, 12.01]])
    got = nm.bessel(kind, order, zs)
    ref = SCIPY_BESSEL[kind](order, zs)
    scale = np.maximum(1.0, np.abs(ref)) if kind != "K" else np.abs(ref)
    assert np.max(np.abs(got - ref) / scale) < 1e-11


@given(st.floats(0.1, 30))
def test_bessel_wronskian(z):
    # J1 Y0 - J0 Y1 = 2/(pi z)
    w = nm.bessel("J", 1, z) * nm.bessel("Y", 0, z) - nm.bessel("J", 0, z) * nm.bessel("Y", 1, z)
    assert w == pytest.approx(2 / (math.pi * z), rel=1e-10)


def test_bessel_rejects_unsupported_order():
    with pytest.raises(DomainError):
        nm.bessel("J", 2.5, 1.0)
