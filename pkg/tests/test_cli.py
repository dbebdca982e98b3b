import csv
import io
import json
import math
import subprocess
import sys

import pytest

from anticheckers.cli import main, parse_range, UsageError
from anticheckers.params import LatticeParams
from anticheckers.propagator import propagate


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_parse_range():
    assert parse_range("-1..1", 0.5) == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert parse_range("2", 1.0) == [2.0]
    assert parse_range("0..4:2", 1.0) == [0.0, 2.0, 4.0]
    with pytest.raises(UsageError):
        parse_range("3..1", 1.0)
    with pytest.raises(UsageError):
        parse_range("a..b", 1.0)


def test_propagate_csv_is_t_major_and_exact(capsys):
    code, out, _ = run(capsys, "propagate", "--x", "-2..2", "--t", "-1..1", "--m", "1", "--eps", "1")
    assert code == 0
    assert out.splitlines()[0] == "x,t,re_A1,im_A1,re_A2,im_A2,Q,method"
    table = rows(out)
    assert [(float(r["x"]), float(r["t"])) for r in table] == [(x, t) for t in (-1, 0, 1) for x in (-2, -1, 0, 1, 2)]
    for r in table:
        v = propagate(float(r["x"]), float(r["t"]), LatticeParams(1, 1))
        # 17 significant digits round-trip exactly
        assert complex(float(r["re_A1"]), float(r["im_A1"])) == v.A1
        assert complex(float(r["re_A2"]), float(r["im_A2"])) == v.A2


def test_propagate_threads_keep_order(capsys):
    _, one, _ = run(capsys, "propagate", "--x", "-3..3", "--t", "0..2")
    _, four, _ = run(capsys, "propagate", "--x", "-3..3", "--t", "0..2", "--threads", "4")
    assert one == four


@pytest.mark.parametrize("method", ["hypergeometric", "dp"])
def test_propagate_methods_agree(capsys, method):
    _, ref, _ = run(capsys, "propagate", "--x", "-2..2", "--t", "2", "--m", "0.5")
    _, got, _ = run(capsys, "propagate", "--x", "-2..2", "--t", "2", "--m", "0.5", "--method", method)
    for a, b in zip(rows(ref), rows(got)):
        for key in ("re_A1", "im_A1", "re_A2", "im_A2"):
            assert float(a[key]) == pytest.approx(float(b[key]), abs=1e-8)


def test_propagate_json(capsys):
    code, out, _ = run(capsys, "propagate", "--x", "0", "--t", "0", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data[0]["method"] == "quadrature"
    assert data[0]["im_A1"] == pytest.approx(0.83462684167407318)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    assert main(["propagate", "--x", "0..1", "--t", "1", "--out", str(target)]) == 0
    text = target.read_bytes()
    assert b"\r\n" not in text and text.count(b"\n") == 3


def test_usage_errors(capsys):
    assert run(capsys, "propagate", "--x", "3..1")[0] == 2
    assert run(capsys, "propagate", "--x", "0.5", "--eps", "1")[0] == 2
    assert run(capsys, "propagate", "--method", "magic")[0] == 2
    assert run(capsys)[0] == 2


def test_figure1(capsys):
    code, out, _ = run(capsys, "figure", "fig1")
    table = rows(out)
    assert code == 0 and len(table) == 161
    assert float(table[0]["x"]) == pytest.approx(-4.8)
    assert all(math.isnan(float(r["asymptotic_value"])) for r in table)
    mid = table[80]
    assert float(mid["lattice_value"]) == pytest.approx(float(mid["continuum_value"]), rel=0.01)


@pytest.mark.parametrize("component,offset", [(1, 0.0), (2, 0.03)])
def test_figure4(capsys, component, offset):
    code, out, _ = run(capsys, "figure", "fig4", "--component", str(component))
    table = rows(out)
    assert code == 0 and table
    for r in table:
        x = float(r["x"])
        k = (x - offset) / 0.06
        assert abs(k - round(k)) < 1e-9 and abs(x) < 6


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--only", "size-one-torus", "--only", "torus")
    report = json.loads(out)
    assert code == 0 and report["passed"] and report["tolerance"] == 1e-9


def test_verify_detects_turn_sign_flip(capsys):
    code, out, _ = run(capsys, "verify", "--only", "size-one-torus", "--inject-turn-sign-flip")
    assert code == 1 and not json.loads(out)["passed"]


def test_verify_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ANTICHECKERS_TOL", "1e-30")
    code, out, _ = run(capsys, "verify", "--only", "size-one-torus")
    assert code == 1 and json.loads(out)["tolerance"] == 1e-30
    monkeypatch.setenv("ANTICHECKERS_TOL", "tiny")
    assert run(capsys, "verify", "--only", "size-one-torus")[0] == 2


def test_verify_unknown_check(capsys):
    assert run(capsys, "verify", "--only", "nope")[0] == 2


def test_torus_enumerate(capsys):
    code, out, _ = run(capsys, "torus", "--T", "1", "--enumerate", "--delta", "0.5")
    table = rows(out)
    assert code == 0 and len(table) == 9
    assert table[0]["configuration"] == "{}" and float(table[0]["re_arrow"]) == 1.0


def test_torus_arrows(capsys):
    code, out, _ = run(capsys, "torus", "--T", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data) == 1 + 16
    assert data[1]["re"] == pytest.approx(0.5)


def test_torus_order_of_limits(capsys):
    code, _, err = run(capsys, "torus", "--T", "4", "--delta-limit", "--x", "0", "--t", "0")
    assert code == 3 and "order of limits" in err


def test_torus_limit_trace(capsys):
    code, out, _ = run(capsys, "torus", "--limit", "--x", "0", "--t", "0")
    table = rows(out)
    assert code == 0 and len(table) == 7 and table[-1]["T"] == "inf"
    assert float(table[-1]["im_A1"]) == pytest.approx(0.834626841674073, abs=1e-5)


def test_torus_limit_needs_point(capsys):
    assert run(capsys, "torus", "--limit")[0] == 2


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "anticheckers", "propagate", "--x", "-1..1", "--t", "0"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and len(out.stdout.splitlines()) == 4
