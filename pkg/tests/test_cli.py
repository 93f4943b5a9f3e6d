import json
import math

import pytest
from click.testing import CliRunner

from nonlocal_decay.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


def test_delta_closed_form(runner, tmp_path):
    res = run(runner, "delta", "--set", "c=1.1283791670955126", "--out", str(tmp_path))
    assert res.exit_code == 0
    payload = json.loads(res.output.strip().splitlines()[0])
    assert abs(payload["delta_c"] - math.pi / 4) < 1e-10
    assert set(payload) == {"symbol", "c", "delta_c", "residual", "iterations"}
    assert (tmp_path / "whitham_c1.1283791671_delta.json").exists()
    assert (tmp_path / "config.resolved.txt").exists() and (tmp_path / "meta.json").exists()


def test_solve_inadmissible(runner, tmp_path):
    res = run(runner, "solve", "--set", "c=0.9", "--out", str(tmp_path))
    assert res.exit_code == 1
    assert "AdmissibilityError" in res.output


def test_verify_whitham(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("symbol = whitham\nc = 1.1\ngrid.n = 16384\ngrid.X = 120\n")
    res = run(runner, "verify", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert res.exit_code == 0, res.output
    report = json.loads((tmp_path / "o" / "whitham_c1.1_verify.json").read_text())
    assert report["passed"]
    assert (tmp_path / "o" / "whitham_c1.1_wave.csv").read_text().startswith("x,u\n")


def test_verification_failure_exit_code(runner, tmp_path):
    res = run(runner, "verify", "--set", "c=1.1", "--set", "grid.X=120", "--set", "verify.decay_rel=1e-9", "--out", str(tmp_path))
    assert res.exit_code == 2
    report = json.loads((tmp_path / "whitham_c1.1_verify.json").read_text())
    assert not report["checks"]["decay_rate"]


def test_determinism(runner, tmp_path):
    args = ["verify", "--set", "c=1.1", "--set", "grid.X=120", "--format", "json"]
    run(runner, *args, "--out", str(tmp_path / "a"))
    run(runner, *args, "--out", str(tmp_path / "b"))
    for name in ("whitham_c1.1_verify.json", "config.resolved.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert not (tmp_path / "a" / "whitham_c1.1_wave.csv").exists()


def test_kernel_sweep_with_jobs(runner, tmp_path):
    res = run(runner, "kernel", "--set", "c=1.1,1.2", "--jobs", "2", "--out", str(tmp_path))
    assert res.exit_code == 0, res.output
    for c in ("1.1", "1.2"):
        k = json.loads((tmp_path / f"whitham_c{c}_kernel.json").read_text())
        assert abs(k["tail_fit"]["delta_hat"] / k["delta_c"] - 1) < 0.02
        assert (tmp_path / f"whitham_c{c}_kernel.csv").read_text().startswith("x,H_c\n")


def test_capillary_kernel_routes_through_inversion(runner, tmp_path):
    res = run(runner, "kernel", "--set", "symbol=capillary-whitham", "--set", "beta=0.5", "--set", "c=0.9", "--out", str(tmp_path))
    assert res.exit_code == 0
    k = json.loads((tmp_path / "capillary-whitham-beta0.5_c0.9_kernel.json").read_text())
    assert k["kernel_symbol"].endswith("inverted")
    assert k["kernel_speed"] == pytest.approx(1 / 0.9)


def test_report(runner, tmp_path):
    res = run(runner, "report", "--set", "c=1.1", "--set", "grid.X=120", "--out", str(tmp_path))
    assert res.exit_code == 0, res.output
    summary = json.loads((tmp_path / "report.json").read_text())
    assert summary["runs"][0]["status"] == "ok"


def test_bad_config_exit(runner, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("grid.n = 1000\n")
    res = run(runner, "delta", "--config", str(cfg), "--out", str(tmp_path))
    assert res.exit_code == 1
    assert "grid.n" in res.output and "line 1" in res.output


def test_missing_config_file(runner, tmp_path):
    res = run(runner, "delta", "--config", str(tmp_path / "nope.cfg"))
    assert res.exit_code == 1
