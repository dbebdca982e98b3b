import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticheckers.checkers import a_dp
from anticheckers.errors import DomainError, SizeError
from anticheckers.multiparticle import (
    LEFT,
    RIGHT,
    FermiParams,
    TwoElectronQuery,
    bruteforce_multi_arrow,
    det_arrow,
    fermi_arrow,
    fermi_polynomials,
    final_states,
    first_order_terms,
    half_sum_check,
    pass_arrow,
    pass_arrow_loop_form,
    path_sum_dp,
    path_sum_enum,
    perturbation_check,
    total_probability,
    two_electron_amplitude,
    two_electron_probability,
)
from anticheckers.params import LatticeParams
from anticheckers.torus import TorusLattice, bruteforce_pass, origin_edge

UNIT = LatticeParams(1, 1)


@pytest.mark.parametrize("t", range(1, 6))
@pytest.mark.parametrize("x0", [1, 3, 7])
def test_probability_conservation(t, x0):
    assert total_probability(t, x0) == pytest.approx(1.0, abs=1e-12)


def test_ordered_pairs_count_twice():
    t, x0 = 4, 3
    states = [(x, d) for x in range(-t, x0 + t + 1) for d in (RIGHT, LEFT)]
    total = sum(
        two_electron_probability(TwoElectronQuery(x0, a[0], b[0], t, a[1], b[1])) for a in states for b in states
    )
    assert total == pytest.approx(2.0, abs=1e-12)


def test_final_states_are_distinct_unordered_pairs():
    pairs = list(final_states(2, 3))
    assert all(a != b for a, b in pairs)
    assert len(pairs) == len(set(pairs)) == math.comb(2 * (3 + 2 * 2 + 1), 2)


@given(st.integers(1, 8), st.integers(-9, 9))
def test_path_sums_split_checkers_amplitude(t, x):
    total = path_sum_dp(x, t, RIGHT) + path_sum_dp(x, t, LEFT)
    assert abs(total - a_dp(x, t, UNIT)) < 1e-14


@given(st.integers(1, 8), st.integers(-9, 9), st.sampled_from([RIGHT, LEFT]))
def test_path_sum_dp_matches_enumeration(t, x, last):
    assert abs(path_sum_dp(x, t, last) - path_sum_enum(x, t, last)) < 1e-13


@given(st.integers(1, 5), st.data())
def test_locality_far_apart(t, data):
    x0 = data.draw(st.integers(2 * t, 2 * t + 6))
    x = data.draw(st.integers(-t, t))
    xp = data.draw(st.integers(x0 - t, x0 + t))
    d, dp = data.draw(st.sampled_from([RIGHT, LEFT])), data.draw(st.sampled_from([RIGHT, LEFT]))
    amp = two_electron_amplitude(TwoElectronQuery(x0, x, xp, t, d, dp))
    assert amp == path_sum_dp(x, t, d) * path_sum_dp(xp - x0, t, dp)


def test_antisymmetry():
    q = TwoElectronQuery(3, 1, 2, 4, RIGHT, LEFT)
    swapped = TwoElectronQuery(3, 2, 1, 4, LEFT, RIGHT)
    assert two_electron_amplitude(q) == pytest.approx(-two_electron_amplitude(swapped))
    assert two_electron_amplitude(TwoElectronQuery(3, 1, 1, 4)) == 0


def test_two_electron_errors():
    with pytest.raises(DomainError):
        TwoElectronQuery(0, 1, 2, 3)
    with pytest.raises(DomainError):
        TwoElectronQuery(2, 1, 2, 0)
    with pytest.raises(SizeError):
        path_sum_dp(0, 13, RIGHT)


def _edges(lat):
    return [lat.edge_at(j) for j in range(lat.n_edges)]


@pytest.mark.parametrize("T", [1, 2])
def test_determinant_formula(T):
    lat = TorusLattice(T, LatticeParams(0.8, 1, 0.35))
    edges = _edges(lat)
    rng = np.random.default_rng(7)
    for _ in range(12):
        a = [edges[j] for j in rng.choice(len(edges), 2, replace=False)]
        f = [edges[j] for j in rng.choice(len(edges), 2, replace=False)]
        assert abs(det_arrow(lat, a, f) - bruteforce_multi_arrow(lat, a, f)) < 1e-10


def test_determinant_vanishes_for_repeated_sink():
    lat = TorusLattice(1, LatticeParams(0.8, 1, 0.35))
    e = _edges(lat)
    assert det_arrow(lat, [e[0], e[1]], [e[2], e[2]]) == 0
    assert abs(bruteforce_multi_arrow(lat, [e[0], e[1]], [e[2], e[2]])) < 1e-14


@pytest.mark.parametrize("T", [1, 2])
def test_pass_or_loop(T):
    lat = TorusLattice(T, LatticeParams(1.1, 1, 0.4))
    edges = _edges(lat)
    a = origin_edge(lat)
    for e in edges[:: max(1, len(edges) // 6)]:
        for f in edges[:: max(1, len(edges) // 5)]:
            brute = bruteforce_pass(lat, a, e, f)
            assert abs(pass_arrow(lat, a, e, f) - brute) < 1e-12
            assert abs(pass_arrow_loop_form(lat, a, e, f) - brute) < 1e-12


@pytest.mark.parametrize("T", [1, 2])
def test_half_of_configurations_pass_each_edge(T):
    lat = TorusLattice(T, LatticeParams(0.5, 1, 0.6))
    for e in _edges(lat)[:4]:
        through, half = half_sum_check(lat, e)
        assert abs(through - half) < 1e-12


def _fermi_case(T):
    fp = FermiParams(m_e=1.0, m_mu=2.0, eps=1.0, delta=0.3, T=T)
    lat = fp.lattice("e")
    a = origin_edge(lat)
    f = lat.edge_at(lat.n_edges // 2 + 1)
    return fp, a, a, f, f


@pytest.mark.parametrize("T", [1, 2])
def test_zero_coupling_factorizes(T):
    fp, a_e, a_mu, f_e, f_mu = _fermi_case(T)
    expect = fp.lattice("e").arrow(a_e, f_e) * fp.lattice("mu").arrow(a_mu, f_mu)
    assert abs(fermi_arrow(fp, a_e, a_mu, f_e, f_mu) - expect) < 1e-12


def test_denominator_at_zero_is_product_of_partition_functions():
    fp, *edges = _fermi_case(1)
    poly = fermi_polynomials(fp, *edges)
    z = fp.lattice("e").partition_function() * fp.lattice("mu").partition_function()
    assert abs(poly.denominator_at(0.0) - z) < 1e-12


@pytest.mark.parametrize("T", [1, 2])
def test_first_order_remainder_is_quadratic(T):
    fp, *edges = _fermi_case(T)
    rep = perturbation_check(fp, *edges)
    assert rep.passed, rep.as_dict()
    assert rep.slope >= 1.8 and rep.denominator_slope >= 1.8


@pytest.mark.parametrize("T", [1, 2])
def test_first_order_terms_match_derivative(T):
    fp, *edges = _fermi_case(T)
    zeroth, first = first_order_terms(fp, *edges)
    assert set(first) == {"exchange", "electron_loop", "muon_loop"}
    poly = fermi_polynomials(fp, *edges)
    h = 1e-5
    derivative = (poly.value(h) - poly.value(-h)) / (2 * h)
    assert abs(poly.value(0.0) - zeroth) < 1e-12
    assert abs(derivative - sum(first.values())) < 1e-8


def test_denominator_first_order():
    fp, *edges = _fermi_case(2)
    poly = fermi_polynomials(fp, *edges)
    h = 1e-5
    derivative = (poly.denominator_at(h) - poly.denominator_at(-h)) / (2 * h)
    n_edges = fp.lattice("e").n_edges
    assert abs(derivative - poly.denominator_at(0.0) * n_edges / 4) < 1e-8 * abs(poly.denominator_at(0.0))
