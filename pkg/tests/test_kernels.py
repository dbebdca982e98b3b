import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anticheckers import _pykernels, kernels
from anticheckers.params import LatticeParams
from anticheckers.torus import TorusLattice, origin_edge

_ckernels = pytest.importorskip("anticheckers._ckernels")

BACKENDS = [pytest.param(_pykernels, id="python"), pytest.param(_ckernels, id="cython")]


def test_compiled_backend_is_default():
    assert kernels.BACKEND == "cython"


def test_env_var_forces_fallback():
    code = "from anticheckers import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, ANTICHECKERS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("impl", BACKENDS)
def test_turn_histogram_totals(impl):
    # number of paths with n free moves ending at x is binomial
    from math import comb

    for n in range(0, 12):
        for target in range(-n - 1, n + 3):
            twice = target - 1 + n
            expect = comb(n, twice // 2) if twice % 2 == 0 and 0 <= twice // 2 <= n else 0
            assert impl.path_turn_histogram(n, target).sum() == expect


@given(st.integers(0, 14), st.integers(-16, 16))
def test_turn_histogram_backends_agree(n, target):
    assert np.array_equal(_pykernels.path_turn_histogram(n, target), _ckernels.path_turn_histogram(n, target))


@pytest.mark.parametrize("T", [1, 2])
@pytest.mark.parametrize("with_forced", [False, True])
def test_balanced_subsets_backends_agree(T, with_forced):
    lat = TorusLattice(T, LatticeParams(1, 1, 0.3))
    starts, ends = (np.asarray(a, dtype=np.int64) for a in lat.edge_arrays)
    forced = (1 << lat.index(origin_edge(lat))) if with_forced else 0
    a = _pykernels.balanced_subsets(starts, ends, lat.n_points, forced, 0, 0)
    b = _ckernels.balanced_subsets(starts, ends, lat.n_points, forced, 0, 0)
    assert np.array_equal(a, b)
    assert all((m & forced) == forced for m in a.tolist())


def test_balanced_subsets_with_source_and_sink():
    lat = TorusLattice(1, LatticeParams(1, 1, 0.3))
    starts, ends = (np.asarray(a, dtype=np.int64) for a in lat.edge_arrays)
    src, snk = 1 << 0, 1 << 2
    a = _pykernels.balanced_subsets(starts, ends, lat.n_points, src | snk, src, snk)
    b = _ckernels.balanced_subsets(starts, ends, lat.n_points, src | snk, src, snk)
    assert np.array_equal(a, b) and len(a) > 0


@given(
    st.lists(st.integers(0, 255), min_size=1, max_size=20),
    st.lists(st.integers(0, 255), min_size=1, max_size=20),
    st.integers(0, 2**32),
)
def test_overlap_histogram_backends_agree(ma, mb, seed):
    rng = np.random.default_rng(seed)
    ma, mb = np.array(ma, dtype=np.int64), np.array(mb, dtype=np.int64)
    wa = rng.normal(size=len(ma)) + 1j * rng.normal(size=len(ma))
    wb = rng.normal(size=len(mb)) + 1j * rng.normal(size=len(mb))
    h1 = _pykernels.overlap_histogram(ma, wa, mb, wb, 8)
    h2 = _ckernels.overlap_histogram(ma, wa, mb, wb, 8)
    assert np.allclose(h1, h2, rtol=1e-13, atol=1e-13)
    # total equals the product of the weight sums
    assert h1.sum() == pytest.approx(wa.sum() * wb.sum())
