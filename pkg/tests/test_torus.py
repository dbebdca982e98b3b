import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticheckers.errors import DegenerateLatticeError, DomainError, NumericError, OrderOfLimitsError, SizeError
from anticheckers.params import LatticeParams
from anticheckers.propagator import propagate
from anticheckers.torus import (
    UP_LEFT,
    UP_RIGHT,
    LimitSchedule,
    TorusLattice,
    arrow_dft,
    bruteforce_currents,
    bruteforce_loop_configs,
    charge_sums_2x2,
    complement_current,
    current_arrow,
    e_edge,
    edge_into_origin,
    enumerate_currents,
    enumerate_loop_configs,
    extrapolate_to_zero,
    f_edge,
    finite_identity_suite,
    flip,
    infinite_limit,
    infinite_limit_grid,
    labels_1x1,
    loop_word,
    origin_arrow,
    origin_edge,
    regulator_limit,
)
from unit_values import GAUSS

params_st = st.tuples(st.floats(0.1, 3.0), st.floats(0.5, 1.5), st.floats(0.05, 0.9)).map(
    lambda p: LatticeParams(*p)
)


def known_configurations(me, d):
    n = math.sqrt(1 - d * d) * math.sqrt(1 + me * me)
    return {
        "{}": 1,
        "{aba}": -1j * me * d / n,
        "{cdc}": -1j * me * d / n,
        "{aca}": -1 / n,
        "{bdb}": -1 / n,
        "{abdca}": me * me / n**2,
        "{acdba}": -d * d / n**2,
        "{aba,cdc}": -me * me * d * d / n**2,
        "{aca,bdb}": 1 / n**2,
    }


def known_arrows(me, d):
    sd, sm = math.sqrt(1 - d * d), math.sqrt(1 + me * me)
    den = 2 * (sm * sd - 1 - 1j * me * d)
    return {"a": 0.5, "b": (-1j * me * sd - d * sm) / den, "c": (sd - sm) / den, "d": (-1j * me - d) / den}


def _names(lat):
    return {lat.index(e): k for k, e in labels_1x1(lat).items()}


@given(params_st)
def test_size_one_configurations(params):
    lat = TorusLattice(1, params)
    got = {loop_word(c, _names(lat)): c.arrow for c in enumerate_loop_configs(lat)}
    expected = known_configurations(params.me, params.delta)
    assert set(got) == set(expected)
    for key, val in expected.items():
        assert abs(got[key] - val) < 1e-12, key
    assert abs(sum(got.values()) - lat.partition_function()) < 1e-12


@given(params_st)
def test_size_one_arrows(params):
    lat = TorusLattice(1, params)
    lab = labels_1x1(lat)
    for key, val in known_arrows(params.me, params.delta).items():
        assert abs(lat.arrow(lab["a"], lab[key]) - val) < 1e-12


def test_size_one_path_arrows():
    me, d = 0.8, 0.4
    lat = TorusLattice(1, LatticeParams(me, 1, d))
    lab = labels_1x1(lat)

    def path(word):
        w = 1
        for u, v in zip(word, word[1:]):
            w *= lat.node_weight(lab[u], lab[v])
        return w

    sd2, m2 = 1 - d * d, 1 + me * me
    assert path("abdc") == pytest.approx(-me * me / (math.sqrt(sd2) * m2))
    assert path("acdb") == pytest.approx(-d / (math.sqrt(sd2) * m2))
    assert path("bacd") == pytest.approx(d * d / (sd2 * math.sqrt(m2)))


def test_node_weight_examples():
    lat = TorusLattice(2, LatticeParams(1, 1, 0.5))
    odd_in = lat.edge(0, 0, UP_RIGHT)  # ends at the odd point (1, 1)
    assert lat.node_weight(odd_in, lat.edge(1, 1, UP_RIGHT)) == pytest.approx(1 / math.sqrt(2))
    even_in = lat.edge(1, 1, UP_RIGHT)  # ends at the even point (2, 2)
    assert lat.node_weight(even_in, lat.edge(2, 2, UP_LEFT)) == pytest.approx(-0.5 / math.sqrt(0.75))
    with pytest.raises(DomainError):
        lat.node_weight(odd_in, lat.edge(2, 2, UP_LEFT))


@pytest.mark.parametrize("T", [1, 2, 3])
def test_graph_is_well_formed(T):
    lat = TorusLattice(T, LatticeParams(1, 1, 0.3))
    assert lat.n_edges == 4 * T * T
    for j in range(lat.n_edges):
        e = lat.edge_at(j)
        assert lat.index(e) == j
        assert len(set(lat.successors(e))) == 2 and len(set(lat.predecessors(e))) == 2
        for f in lat.successors(e):
            assert e in lat.predecessors(f)


def test_edge_index_is_lexicographic():
    lat = TorusLattice(3, LatticeParams())
    keys = [(e.ht, e.hx, e.dir) for e in map(lat.edge_at, range(lat.n_edges))]
    assert keys == sorted(keys)


@pytest.mark.parametrize("T", [1, 2, 3])
def test_initial_value_every_edge(T):
    lat = TorusLattice(T, LatticeParams(0.7, 1, 0.3))
    amat = lat.propagator_matrix
    assert np.max(np.abs(np.diag(amat) - 0.5)) < 1e-12


@pytest.mark.parametrize("T", [1, 2, 3, 5, 6])
def test_product_formula(T):
    lat = TorusLattice(T, LatticeParams(0.9, 1, 0.2))
    assert abs(lat.partition_function() - lat.partition_product()) < 1e-10


def test_partition_function_vanishes_for_multiple_of_four():
    zs = [abs(TorusLattice(4, LatticeParams(1, 1, d)).partition_function()) for d in (1e-2, 1e-3, 1e-4)]
    assert zs[0] > zs[1] > zs[2] and zs[2] < 1e-6
    with pytest.raises(DegenerateLatticeError):
        TorusLattice(4, LatticeParams(1, 1, 0.0)).propagator_matrix


@pytest.mark.parametrize("T", [1, 2, 3])
def test_inverse_relation(T):
    lat = TorusLattice(T, LatticeParams(1.1, 1, 0.4))
    z = lat.partition_function()
    assert abs(z * np.linalg.det(lat.propagator_matrix) - 1) < 1e-10


@pytest.mark.parametrize("T", [1, 2])
def test_three_oracles_agree(T):
    params = LatticeParams(0.8, 1, 0.35)
    lat = TorusLattice(T, params)
    a = origin_edge(lat)
    _, den = bruteforce_loop_configs(lat)
    for j in range(lat.n_edges):
        f = lat.edge_at(j)
        num, _ = bruteforce_loop_configs(lat, [a], [f])
        via_det = lat.arrow(a, f)
        assert abs(num / den - via_det) < 1e-10
    for ix in range(-T, T + 1):
        for it in range(-T, T + 1):
            for k in (1, 2):
                assert abs(origin_arrow(lat, k, ix, it, "dft") - origin_arrow(lat, k, ix, it, "matrix")) < 1e-10


@given(params_st, st.sampled_from([1, 2, 3, 5, 6]))
def test_dft_closed_literal_and_matrix(params, T):
    lat = TorusLattice(T, params)
    amat = lat.propagator_matrix
    for hx in range(2 * T):
        for ht in range(2 * T):
            if (hx + ht) % 2:
                continue
            for k in (1, 2):
                closed = arrow_dft(lat, k, hx, ht, "closed")
                literal = arrow_dft(lat, k, hx, ht, "literal")
                assert abs(closed - literal) < 1e-10
                # A(b2 -> e_k) read off the inverse matrix
                b2 = edge_into_origin(lat, 2)
                e = e_edge(lat, k, hx, ht)
                assert abs(closed - amat[lat.index(e), lat.index(b2)]) < 1e-10


def test_dft_needs_regulator():
    lat = TorusLattice(3, LatticeParams(1, 1, 0.0))
    with pytest.raises(OrderOfLimitsError):
        arrow_dft(lat, 1, 0, 0)


def test_reflection_between_edges_into_origin():
    lat = TorusLattice(3, LatticeParams(0.6, 1, 0.3))
    amat = lat.propagator_matrix
    b1, b2 = edge_into_origin(lat, 1), edge_into_origin(lat, 2)
    for hx in range(6):
        for ht in range(6):
            if (hx + ht) % 2:
                continue
            for j in (1, 2):
                lhs = amat[lat.index(e_edge(lat, j, hx, ht)), lat.index(b1)]
                rhs = amat[lat.index(e_edge(lat, 3 - j, -hx, ht)), lat.index(b2)]
                assert abs(lhs - rhs) < 1e-12


def test_charge_sums_size_two():
    me, d = 0.9, 0.3
    s0, s1 = charge_sums_2x2(TorusLattice(2, LatticeParams(me, 1, d)))
    base = (1 + me * me) / (4 * (me * me + d * d))
    assert s0 == pytest.approx((1 + d * d) * base, abs=1e-10)
    assert s1 == pytest.approx((1 - d * d) * base, abs=1e-10)


@given(params_st)
def test_currents_equal_loop_configs_size_one(params):
    lat = TorusLattice(1, params)
    lab = labels_1x1(lat)
    for src, snk in [((), ()), ((lab["a"],), (lab["c"],)), ((lab["a"],), (lab["a"],)), ((lab["b"],), (lab["d"],))]:
        n1, d1 = bruteforce_loop_configs(lat, src, snk)
        n2, d2 = bruteforce_currents(lat, src, snk)
        assert abs(n1 - n2) < 1e-12 and abs(d1 - d2) < 1e-12


def test_currents_equal_loop_configs_size_two():
    lat = TorusLattice(2, LatticeParams(1.3, 1, 0.45))
    a = origin_edge(lat)
    for j in (0, 5, 11, 16):
        f = lat.edge_at(j)
        n1, d1 = bruteforce_loop_configs(lat, [a], [f])
        n2, d2 = bruteforce_currents(lat, [a], [f])
        assert abs(n1 - n2) < 1e-12 and abs(d1 - d2) < 1e-12


def test_current_examples_size_one():
    params = LatticeParams(0.7, 1, 0.4)
    lat = TorusLattice(1, params)
    lab = labels_1x1(lat)
    mask_ac = (1 << lat.index(lab["a"])) | (1 << lat.index(lab["c"]))
    n = math.sqrt(1 + params.me**2) * math.sqrt(1 - params.delta**2)
    assert current_arrow(lat, mask_ac) == pytest.approx(-1 / n)
    assert current_arrow(lat, complement_current(lat, mask_ac)) == pytest.approx(-1 / n)
    assert current_arrow(lat, 0) == 1
    assert current_arrow(lat, (1 << lat.n_edges) - 1) == pytest.approx(1)


@pytest.mark.parametrize("T", [1, 2])
def test_complement_formula(T):
    lat = TorusLattice(T, LatticeParams(0.6, 1, 0.25))
    for mask, w in enumerate_currents(lat):
        assert abs(current_arrow(lat, complement_current(lat, mask)) - w) < 1e-12


def test_complement_formula_with_source_and_sink():
    # the complement swaps roles: sinks become sources and vice versa
    lat = TorusLattice(1, LatticeParams(0.6, 1, 0.25))
    lab = labels_1x1(lat)
    for a, f in [("a", "c"), ("a", "b"), ("c", "d"), ("b", "d")]:
        src, snk = [lab[a]], [lab[f]]
        sign = -1 if lab[a].dir == lab[f].dir else 1
        for mask, w in enumerate_currents(lat, src, snk):
            comp = complement_current(lat, mask, src, snk)
            assert abs(current_arrow(lat, comp, snk, src) - sign * w) < 1e-12


def test_complement_example_with_source_and_sink():
    params = LatticeParams(0.6, 1, 0.25)
    lat = TorusLattice(1, params)
    lab = labels_1x1(lat)
    src, snk = [lab["a"]], [lab["c"]]
    mask = (1 << lat.index(lab["a"])) | (1 << lat.index(lab["c"]))
    expected = 1 / math.sqrt(1 + params.me**2)
    assert current_arrow(lat, mask, src, snk) == pytest.approx(expected)
    comp = complement_current(lat, mask, src, snk)
    assert comp == (1 << lat.n_edges) - 1
    assert current_arrow(lat, comp, snk, src) == pytest.approx(-expected)


def _turns(lat, config):
    total = 0
    for chain in config.loops:
        for i, j in enumerate(chain):
            total += lat.edge_at(j).dir != lat.edge_at(chain[(i + 1) % len(chain)]).dir
    return total


@pytest.mark.parametrize("T", [1, 2])
def test_complete_configurations_loop_parity(T):
    lat = TorusLattice(T, LatticeParams(0.6, 1, 0.25))
    full = (1 << lat.n_edges) - 1
    complete = [c for c in enumerate_loop_configs(lat) if c.mask == full]
    assert complete
    for c in complete:
        assert len(c.loops) % 2 == (_turns(lat, c) // 2) % 2


def test_flip_is_an_involution():
    lat = TorusLattice(2, LatticeParams(0.6, 1, 0.25))
    flipped = 0
    for c in enumerate_loop_configs(lat):
        for p in range(lat.n_points):
            hx, ht = lat.edge_at(2 * p).hx, lat.edge_at(2 * p).ht
            try:
                once = flip(lat, c, hx, ht)
            except DomainError:
                continue
            twice = flip(lat, once, hx, ht)
            assert twice.mask == c.mask and sorted(twice.loops) == sorted(c.loops)
            assert twice.arrow == pytest.approx(c.arrow)
            flipped += 1
    assert flipped > 0


def test_source_equals_sink_gives_one_half():
    lat = TorusLattice(1, LatticeParams(1, 1, 0.5))
    a = labels_1x1(lat)["a"]
    num, den = bruteforce_loop_configs(lat, [a], [a])
    assert num / den == pytest.approx(0.5)


@given(params_st, st.sampled_from([1, 2, 3]))
def test_finite_identity_suite(params, T):
    rep = finite_identity_suite(TorusLattice(T, params), tol=1e-10)
    assert rep.passed, rep.as_dict()


def test_skew_case_for_parallel_edges():
    lat = TorusLattice(2, LatticeParams(0.6, 1, 0.25))
    amat = lat.propagator_matrix
    for i in range(lat.n_edges):
        for j in range(lat.n_edges):
            if i == j:
                continue
            sign = -1 if lat.edge_at(i).dir == lat.edge_at(j).dir else 1
            assert abs(amat[i, j] - sign * amat[j, i]) < 1e-12


def test_turn_sign_flip_breaks_arrows_not_loops():
    params = LatticeParams(0.7, 1, 0.3)
    good, bad = TorusLattice(1, params), TorusLattice(1, params, turn_sign=-1)
    assert abs(good.partition_function() - bad.partition_function()) < 1e-14
    lab = labels_1x1(good)
    assert abs(good.arrow(lab["a"], lab["b"]) - bad.arrow(lab["a"], lab["b"])) > 1e-3


def test_extrapolation_exact_for_quadratics():
    hs = [0.4, 0.2, 0.1]
    assert extrapolate_to_zero(hs, [3 + 2 * h - 5 * h * h for h in hs]) == pytest.approx(3)


def test_schedule_validation():
    with pytest.raises(OrderOfLimitsError):
        LimitSchedule(sizes=(40, 81))
    with pytest.raises(DomainError):
        LimitSchedule(sizes=(81, 41))
    with pytest.raises(DomainError):
        LimitSchedule(deltas=(1e-3, 2e-3))


def test_unsaturated_limit_reports_trace():
    sched = LimitSchedule(sizes=(5, 9), deltas=(0.2, 0.1))
    with pytest.raises(NumericError) as info:
        infinite_limit(0, 0, LatticeParams(1, 1), sched)
    assert info.value.partial and "T" in info.value.partial[0]


def test_order_of_limits_error():
    with pytest.raises(OrderOfLimitsError):
        regulator_limit(4, 0, 0, LatticeParams(1, 1))
    v = regulator_limit(5, 0, 0, LatticeParams(1, 1))
    assert abs(v.A1 - 1j * GAUSS) > 1e-3  # finite torus value, not the infinite lattice one


def test_infinite_limit_simplest_value():
    v = infinite_limit(0, 0, LatticeParams(1, 1))
    assert abs(v.A1 - 1j * GAUSS) < 1e-5
    assert abs(v.A2 - 1) < 1e-5


@pytest.mark.parametrize("me", [0.5, 1.0])
def test_infinite_limit_matches_quadrature(me):
    params = LatticeParams(me, 1)
    pts = [(x, t) for t in range(-4, 5) for x in range(-4, 5)]
    grid = infinite_limit_grid(pts, params)
    for x, t in pts:
        q = propagate(x, t, params)
        assert abs(grid[(x, t)].A1 - q.A1) < 1e-5 and abs(grid[(x, t)].A2 - q.A2) < 1e-5


def test_size_limits():
    with pytest.raises(SizeError):
        enumerate_loop_configs(TorusLattice(3, LatticeParams()))
    with pytest.raises(DomainError):
        labels_1x1(TorusLattice(2, LatticeParams()))
    with pytest.raises(DomainError):
        TorusLattice(1, LatticeParams(), turn_sign=2)


def test_f_edge_starts_at_point():
    lat = TorusLattice(3, LatticeParams())
    for k in (1, 2):
        f = f_edge(lat, k, 2, 4)
        assert (f.hx, f.ht) == (2, 4)
