"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .continuum import (
    ContinuumPoint,
    charge_density_profile,
    classify,
    asymptotic_airy,
    asymptotic_between_peaks,
    feynman_continuum,
)
from .errors import AnticheckersError, DegenerateLatticeError, DomainError, NumericError, OrderOfLimitsError, SizeError
from .params import LatticeParams, to_steps

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_TOL = 1e-9
_RANGE = re.compile(r"^\s*(-?[\d.eE+-]+?)\s*(?:\.\.\s*(-?[\d.eE+-]+?))?\s*(?::\s*([\d.eE+-]+))?\s*$")


class UsageError(AnticheckersError):
    """Invalid command-line configuration."""


def fmt(value) -> str:
    """Fixed float formatting used by every output."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "%.17g" % (value + 0.0)
    return str(value)


def _json(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return "null" if not math.isfinite(obj) else "%.17g" % obj
    return json.dumps(str(obj))


def write_table(rows: list[dict], columns: list[str], fmt_name: str, out: str) -> None:
    """Write rows as CSV or JSON to a path or ``-`` for stdout."""
    if fmt_name == "json":
        text = _json([{c: r.get(c) for c in columns} for r in rows]) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([fmt(r.get(c, "")) for c in columns])
        text = buf.getvalue()
    _emit(text, out)


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)


def parse_range(spec: str, step: float) -> list[float]:
    """``a``, ``a..b`` or ``a..b:s`` (step defaults to ``step``), inclusive.

    Raises
    ------
    UsageError
        On malformed or empty ranges.
    """
    m = _RANGE.match(spec)
    if not m:
        raise UsageError(f"bad range {spec!r}")
    lo = float(m.group(1))
    hi = float(m.group(2)) if m.group(2) is not None else lo
    s = float(m.group(3)) if m.group(3) is not None else step
    if s <= 0:
        raise UsageError("range step must be positive")
    if hi < lo:
        raise UsageError(f"empty range {spec!r}")
    n = int(math.floor((hi - lo) / s + 1e-9))
    return [lo + k * s for k in range(n + 1)]


def _suite_tol(args) -> float:
    if getattr(args, "tol", None) is not None:
        return args.tol
    env = os.environ.get("ANTICHECKERS_TOL")
    if env:
        try:
            return float(env)
        except ValueError as exc:
            raise UsageError(f"ANTICHECKERS_TOL={env!r} is not a number") from exc
    return DEFAULT_TOL


def _params(args) -> LatticeParams:
    return LatticeParams(args.m, args.eps, getattr(args, "delta", 0.5))


# -- propagate ---------------------------------------------------------------------------


def cmd_propagate(args) -> int:
    from .propagator import propagate
    from .torus import infinite_limit_grid

    params = _params(args)
    xs = parse_range(args.x, params.eps)
    ts = parse_range(args.t, params.eps)
    points = [(x, t) for t in ts for x in xs]
    if args.method == "loop":
        steps = [(to_steps(x, params.eps, "x"), to_steps(t, params.eps, "t")) for x, t in points]
        grid = infinite_limit_grid(steps, params)
        values = [grid[s] for s in steps]
    else:
        with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
            values = list(pool.map(lambda p: propagate(p[0], p[1], params, args.method), points))
    rows = []
    for (x, t), v in zip(points, values):
        rows.append(
            {
                "x": x,
                "t": t,
                "re_A1": v.A1.real,
                "im_A1": v.A1.imag,
                "re_A2": v.A2.real,
                "im_A2": v.A2.imag,
                "Q": v.charge,
                "method": args.method,
            }
        )
    cols = ["x", "t", "re_A1", "im_A1", "re_A2", "im_A2", "Q", "method"]
    write_table(rows, cols, args.format, args.out)
    return EXIT_OK


# -- figure ----------------------------------------------------------------------------


def _figure_rows(args) -> list[dict]:
    from .propagator import propagate_row

    m, eps, t = args.m, args.eps, args.t
    step = 2 * eps
    x_max = args.x_max if args.x_max is not None else (0.8 * t if args.name == "fig1" else t - step)
    n = int(math.floor(x_max / step + 1e-9))
    rows = []
    if args.name == "fig1":
        xs = np.arange(-n, n + 1) * step
        if m == 0:
            raise UsageError("fig1 needs m > 0 (the charge density diverges for m = 0)")
        lattice, cont = charge_density_profile(m, t, eps, xs)
        for x, lv, cv in zip(xs, lattice, cont):
            rows.append({"x": float(x), "lattice_value": float(lv), "continuum_value": float(cv), "asymptotic_value": math.nan})
        return rows
    k = args.component
    shift = 0.0 if k == 1 else eps
    xs = np.arange(-n, n + 1) * step + shift
    xs = xs[np.abs(xs) < t]
    params = LatticeParams(m, eps)
    if m == 0:
        from .propagator import massless_heavy

        row = {to_steps(x, eps): massless_heavy(x, t, "massless", eps) for x in xs}
    else:
        row = propagate_row(t, params, float(np.max(np.abs(xs))) + eps)
    for x in xs:
        ix = to_steps(x, eps)
        lv = row[ix][k].imag / (4 * eps)
        g = feynman_continuum(ContinuumPoint(float(x), t, m))
        cv = g[0, 0].imag if k == 1 else g[0, 1].imag
        av = math.nan
        if m > 0:
            zone = classify(float(x), t, params)
            try:
                if zone.zone == "between_peaks":
                    av = asymptotic_between_peaks(float(x), t, params)[k].imag / (4 * eps)
                elif zone.zone == "airy":
                    av = asymptotic_airy(float(x), t, params)[k].imag / (4 * eps)
            except DomainError:
                av = math.nan
        rows.append({"x": float(x), "lattice_value": lv, "continuum_value": cv, "asymptotic_value": av})
    return rows


def cmd_figure(args) -> int:
    rows = _figure_rows(args)
    write_table(rows, ["x", "lattice_value", "continuum_value", "asymptotic_value"], args.format, args.out)
    return EXIT_OK


# -- verify -----------------------------------------------------------------------------


def _check_identities(tol, turn_sign):
    from .propagator import identity_suite

    out = {}
    for m, eps in ((1.0, 1.0), (0.5, 1.0), (2.0, 0.5)):
        rep = identity_suite(LatticeParams(m, eps), window=6, tol=tol)
        for name, val in rep.residuals.items():
            out[f"{name}[m={m:g},eps={eps:g}]"] = val
    return out


def _check_charge(tol, turn_sign):
    from .propagator import total_charge

    out = {}
    for m, eps in ((1.0, 1.0), (0.5, 1.0), (2.0, 0.5)):
        params = LatticeParams(m, eps)
        out[f"charge_conservation[m={m:g},eps={eps:g}]"] = max(
            abs(total_charge(k * eps, params) - 1.0) for k in range(1, 33)
        )
    return out


def _check_size_one(tol, turn_sign):
    from .torus import TorusLattice, arrows_1x1, enumerate_loop_configs, labels_1x1, loop_word, table_1x1

    out = {}
    for m, eps, delta in ((1.0, 1.0, 0.5), (0.7, 1.0, 0.3)):
        params = LatticeParams(m, eps, delta)
        lat = TorusLattice(1, params, turn_sign=turn_sign)
        labels = labels_1x1(lat)
        names = {lat.index(e): k for k, e in labels.items()}
        expected = table_1x1(params)
        got = {loop_word(c, names): c.arrow for c in enumerate_loop_configs(lat)}
        worst = max(abs(got.get(k, math.inf) - v) for k, v in expected.items())
        out[f"size_one_configurations[m={m:g},delta={delta:g}]"] = worst if len(got) == len(expected) else math.inf
        closed = arrows_1x1(params)
        out[f"size_one_arrows[m={m:g},delta={delta:g}]"] = max(
            abs(lat.arrow(labels["a"], labels[k]) - v) for k, v in closed.items()
        )
    return out


def _check_torus(tol, turn_sign):
    from .torus import TorusLattice, finite_identity_suite

    out = {}
    for T in (1, 2, 3):
        rep = finite_identity_suite(TorusLattice(T, LatticeParams(0.7, 1.0, 0.3), turn_sign=turn_sign), tol)
        for name, val in rep.residuals.items():
            out[f"{name}[T={T}]"] = float(val)
    return out


def _check_multiparticle(tol, turn_sign):
    from .multiparticle import FermiParams, perturbation_check, total_probability

    out = {}
    out["two_electron_total_probability"] = max(
        abs(total_probability(t, x0) - 1.0) for t in range(1, 6) for x0 in (1, 3, 7)
    )
    fp = FermiParams(m_e=1.0, m_mu=2.0, eps=1.0, delta=0.3, T=1)
    lat = fp.lattice("e")
    rep = perturbation_check(fp, lat.edge_at(0), lat.edge_at(0), lat.edge_at(1), lat.edge_at(1))
    # a slope of at least 1.8 counts as a pass; report the shortfall as the residual
    out["fermi_perturbation_slope_shortfall"] = max(0.0, rep.min_slope - rep.slope)
    return out


CHECKS = {
    "identities": _check_identities,
    "charge-conservation": _check_charge,
    "size-one-torus": _check_size_one,
    "torus": _check_torus,
    "multiparticle": _check_multiparticle,
}


def cmd_verify(args) -> int:
    tol = _suite_tol(args)
    names = args.only or list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from {sorted(CHECKS)}")
    turn_sign = -1 if args.inject_turn_sign_flip else 1
    report = {}
    ok = True
    for name in names:
        for key, val in CHECKS[name](tol, turn_sign).items():
            passed = bool(val <= tol)
            ok &= passed
            report[key] = {"max_residual": float(val), "pass": passed}
    payload = {"tolerance": tol, "passed": ok, "checks": report}
    if args.format == "csv":
        rows = [{"check": k, "max_residual": v["max_residual"], "pass": v["pass"]} for k, v in report.items()]
        write_table(rows, ["check", "max_residual", "pass"], "csv", args.out)
    else:
        _emit(_json(payload) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- torus ------------------------------------------------------------------------------


def cmd_torus(args) -> int:
    from .torus import (
        LimitSchedule,
        TorusLattice,
        enumerate_loop_configs,
        infinite_limit,
        labels_1x1,
        loop_word,
        origin_edge,
        regulator_limit,
    )

    params = _params(args)
    if args.limit or args.delta_limit:
        if args.x is None or args.t is None:
            raise UsageError("--x and --t are required with --limit/--delta-limit")
        ix = to_steps(args.x, params.eps, "x")
        it = to_steps(args.t, params.eps, "t")
        if args.delta_limit:
            v = regulator_limit(args.T, ix, it, params)
            rows = [{"T": args.T, "delta": 0.0, "re_A1": v.A1.real, "im_A1": v.A1.imag, "re_A2": v.A2.real, "im_A2": v.A2.imag}]
        else:
            trace = []
            v = infinite_limit(args.x, args.t, params, LimitSchedule(), trace)
            rows = []
            for rec in trace:
                a1, a2 = rec["values"][(ix, it)]
                rows.append({"T": rec["T"], "delta": rec["delta"], "re_A1": a1.real, "im_A1": a1.imag, "re_A2": a2.real, "im_A2": a2.imag})
            rows.append({"T": "inf", "delta": 0.0, "re_A1": v.A1.real, "im_A1": v.A1.imag, "re_A2": v.A2.real, "im_A2": v.A2.imag})
        write_table(rows, ["T", "delta", "re_A1", "im_A1", "re_A2", "im_A2"], args.format, args.out)
        return EXIT_OK
    lat = TorusLattice(args.T, params)
    if args.enumerate:
        if args.T == 1:
            labels = labels_1x1(lat)
            names = {lat.index(e): k for k, e in labels.items()}
        else:
            names = {j: f"e{j}." for j in range(lat.n_edges)}
        rows = []
        for c in enumerate_loop_configs(lat):
            rows.append({"configuration": loop_word(c, names), "re_arrow": c.arrow.real, "im_arrow": c.arrow.imag})
        write_table(rows, ["configuration", "re_arrow", "im_arrow"], args.format, args.out)
        return EXIT_OK
    z = lat.partition_function()
    a = origin_edge(lat)
    rows = [{"edge": "Z", "hx": "", "ht": "", "dir": "", "re": z.real, "im": z.imag}]
    for j in range(lat.n_edges):
        f = lat.edge_at(j)
        v = lat.arrow(a, f)
        rows.append({"edge": j, "hx": f.hx, "ht": f.ht, "dir": f.dir, "re": v.real, "im": v.imag})
    write_table(rows, ["edge", "hx", "ht", "dir", "re", "im"], args.format, args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anticheckers", description="Lattice propagator toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, delta=False):
        p.add_argument("--m", type=float, default=1.0, help="particle mass")
        p.add_argument("--eps", type=float, default=1.0, help="lattice step")
        if delta:
            p.add_argument("--delta", type=float, default=0.5, help="small imaginary mass in (0, 1)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--threads", type=int, default=1, help="worker threads for table evaluation")

    p = sub.add_parser("propagate", help="tabulate the propagator")
    common(p)
    p.add_argument("--x", default="0", help="a, a..b or a..b:step")
    p.add_argument("--t", default="0", help="a, a..b or a..b:step")
    p.add_argument("--method", choices=("quadrature", "hypergeometric", "dp", "loop"), default="quadrature")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("figure", help="data for the continuum-limit figures")
    p.add_argument("name", choices=("fig1", "fig4"))
    p.add_argument("--m", type=float, default=4.0)
    p.add_argument("--eps", type=float, default=0.03)
    p.add_argument("--t", type=float, default=6.0)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--component", type=int, choices=(1, 2), default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("verify", help="run the identity and consistency checks")
    p.add_argument("--only", action="append", help="restrict to a check (repeatable)")
    p.add_argument("--tol", type=float, default=None, help="override the residual tolerance")
    p.add_argument("--inject-turn-sign-flip", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default="-")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("torus", help="finite torus: Z, arrows, enumeration and limits")
    common(p, delta=True)
    p.add_argument("--T", type=int, default=1)
    p.add_argument("--enumerate", action="store_true", help="list all loop configurations (T <= 2)")
    p.add_argument("--limit", action="store_true", help="T -> infinity then delta -> 0 trace")
    p.add_argument("--delta-limit", action="store_true", help="delta -> 0 at fixed T")
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--t", type=float, default=None)
    p.set_defaults(func=cmd_torus)
    return parser


def _join_negative_values(argv: list[str]) -> list[str]:
    """Let ``--x -3..3`` through argparse by rewriting it as ``--x=-3..3``."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--x", "--t") and i + 1 < len(argv) and argv[i + 1].startswith("-") and _RANGE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, DomainError, SizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OrderOfLimitsError as exc:
        print(f"order of limits error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (NumericError, DegenerateLatticeError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
