"""Time the compiled kernels against the pure-Python fallback.

Run ``python3 benchmarks/bench_kernels.py``; each row checks that both
backends return identical results before reporting timings.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from anticheckers import _pykernels
from anticheckers.params import LatticeParams
from anticheckers.torus import TorusLattice, origin_edge

try:
    from anticheckers import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None


def _torus_case(T: int):
    lat = TorusLattice(T, LatticeParams(1.0, 1.0, 0.3))
    starts, ends = (np.asarray(a, dtype=np.int64) for a in lat.edge_arrays)
    forced = 1 << lat.index(origin_edge(lat))
    return starts, ends, lat.n_points, forced, 0, 0


def _overlap_case(n: int, n_bits: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    ma = rng.integers(0, 1 << n_bits, n, dtype=np.int64)
    mb = rng.integers(0, 1 << n_bits, n, dtype=np.int64)
    wa = rng.normal(size=n) + 1j * rng.normal(size=n)
    wb = rng.normal(size=n) + 1j * rng.normal(size=n)
    return ma, wa, mb, wb, n_bits


CASES = {
    "path_turn_histogram(n=18)": ("path_turn_histogram", (18, 3)),
    "balanced_subsets(T=2)": ("balanced_subsets", _torus_case(2)),
    "overlap_histogram(400x400)": ("overlap_histogram", _overlap_case(400, 16)),
}


def run(repeat: int = 3) -> list[dict]:
    """Time every case on both backends and return one record per case."""
    if _ckernels is None:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    rows = []
    for label, (name, args) in CASES.items():
        py_fn, c_fn = getattr(_pykernels, name), getattr(_ckernels, name)
        ref, got = py_fn(*args), c_fn(*args)
        if not np.allclose(ref, got, rtol=1e-12, atol=1e-12):
            raise SystemExit(f"{label}: backends disagree")
        t_py = min(timeit.repeat(lambda: py_fn(*args), number=1, repeat=repeat))
        t_c = min(timeit.repeat(lambda: c_fn(*args), number=1, repeat=repeat))
        rows.append({"case": label, "python_s": t_py, "cython_s": t_c, "speedup": t_py / t_c})
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"{'case':<30} {'python [s]':>12} {'cython [s]':>12} {'speedup':>9}")
    for r in run(args.repeat):
        print(f"{r['case']:<30} {r['python_s']:>12.4g} {r['cython_s']:>12.4g} {r['speedup']:>9.1f}")


if __name__ == "__main__":
    main()
