"""Command-line front end.

Subcommands ``delta``, ``kernel``, ``solve``, ``verify`` and ``report`` read a
``key = value`` configuration (``--config``) plus optional ``--set key=value``
overrides, run one job per speed, and write artifacts keyed by symbol and
speed into ``--out``.

Exit codes: 0 success, 2 a verification check failed (reports are still
written), 1 any error.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import click
import numpy as np

from . import __version__
from .config import FORMATS, load_config, parse_config
from .decay_rate import solve_delta
from .errors import NonConvergence, NonlocalDecayError
from .kernel import (
    analytic_prefactor,
    closed_form_prefactor,
    compute_kernel,
    near_origin_exponent,
    positive_monotone,
    tail_decay_fit,
)
from .symbols import invert
from .verify import VerifyTolerances, verify_wave
from .wave_solver import make_nonlinearity, solve

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


def _json_default(obj):
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(payload):
    """Deterministic JSON: sorted keys, shortest round-trip floats."""
    return json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(payload))


def stem(sym, c):
    return f"{sym.label}_c{c:.12g}"


@dataclass
class JobResult:
    c: float
    status: str  # "ok", "failed" or "error"
    message: str = ""
    summary: dict | None = None


# ---------------------------------------------------------------------------
# Job bodies
# ---------------------------------------------------------------------------


def _delta_payload(sym, c):
    res = solve_delta(sym, c)
    out = res.to_dict()
    out["solved_symbol"] = res.symbol  # differs from symbol when inverted
    out["symbol"] = sym.label
    out["c"] = c
    return out


def _kernel_payload(cfg, sym, c, out_dir, stem_):
    grid = cfg.make_grid()
    ksym, kc = (sym, c) if sym.is_bounded else (invert(sym), 1.0 / c)
    k = compute_kernel(ksym, kc, grid)
    payload = {
        "symbol": sym.label,
        "c": c,
        "kernel_symbol": ksym.label,
        "kernel_speed": kc,
        "c_eff": k.c_eff,
        "delta_c": k.delta_c,
        "wrap_bound": k.wrap_bound,
        "imag_residue": k.imag_residue,
        "trapezoid_integral": k.trapezoid_integral(),
        "zero_frequency_value": k.zero_frequency_value(),
        "max_asymmetry": k.max_asymmetry(),
        "grid": {"n": grid.n_points, "X": grid.half_length},
    }
    if k.delta_c is not None:
        payload["analytic_prefactor"] = analytic_prefactor(ksym, kc, k.delta_c)
        payload["closed_form_prefactor"] = closed_form_prefactor(ksym, k.delta_c)
    for key, fn, window in (
        ("tail_fit", tail_decay_fit, cfg.fit.tail),
        ("origin_fit", near_origin_exponent, cfg.fit.origin),
    ):
        try:
            payload[key] = fn(k, window).to_dict()
        except NonlocalDecayError as exc:
            payload[key] = {"error": str(exc)}
    if ksym.name in ("whitham", "bidirectional-whitham"):
        payload["positive_monotone"] = positive_monotone(k)
    if "csv" in cfg.formats:
        k.to_csv(os.path.join(out_dir, f"{stem_}_kernel.csv"))
    return payload


def _solve_wave(cfg, sym, c):
    grid = cfg.make_grid()
    nl = make_nonlinearity(cfg.resolved_nonlinearity(), c)
    opts = {"max_iter": cfg.solver.max_iter, "tol": cfg.solver.tol}
    method = cfg.solver.method
    if method == "auto":
        method = "petviashvili" if nl.homogeneous_degree is not None else "damped"
    if method == "damped":
        opts["theta"] = cfg.solver.theta
    return solve(sym, c, nl, grid, method=method, **opts)


def _tolerances(cfg):
    v = cfg.verify
    return VerifyTolerances(
        decay_rel=v.decay_rel,
        asymmetry_rel=v.asymmetry_rel,
        residual=v.residual if v.residual is not None else cfg.solver.tol,
        spectral_tail=v.spectral_tail,
    )


def run_job(cfg, subcommand, c, out_dir):
    """Run one subcommand at one speed; only touches this speed's files."""
    try:
        sym = cfg.make_symbol()
        s = stem(sym, c)
        want_json = "json" in cfg.formats
        if subcommand == "delta":
            payload = _delta_payload(sym, c)
            if want_json:
                _write_json(os.path.join(out_dir, f"{s}_delta.json"), payload)
            return JobResult(c, "ok", summary=payload)

        if subcommand == "kernel":
            payload = _kernel_payload(cfg, sym, c, out_dir, s)
            if want_json:
                _write_json(os.path.join(out_dir, f"{s}_kernel.json"), payload)
            return JobResult(c, "ok", summary={"delta_c": payload["delta_c"], "tail_fit": payload["tail_fit"]})

        try:
            wave = _solve_wave(cfg, sym, c)
        except NonConvergence as exc:
            if exc.wave is not None:
                if "csv" in cfg.formats:
                    exc.wave.to_csv(os.path.join(out_dir, f"{s}_wave.csv"))
                if want_json:
                    _write_json(os.path.join(out_dir, f"{s}_solve.json"), exc.wave.diagnostics())
            raise
        if "csv" in cfg.formats:
            wave.to_csv(os.path.join(out_dir, f"{s}_wave.csv"))
        if subcommand == "solve":
            diag = wave.diagnostics()
            if want_json:
                _write_json(os.path.join(out_dir, f"{s}_solve.json"), diag)
            return JobResult(c, "ok", summary={"residual_sup": diag["residual_sup"], "iterations": diag["iterations"]})

        report = verify_wave(wave, _tolerances(cfg), cfg.verify.decay_window).to_dict()
        if subcommand == "report":
            report["delta"] = _delta_payload(sym, c)
            report["kernel"] = _kernel_payload(cfg, sym, c, out_dir, s)
        if want_json:
            _write_json(os.path.join(out_dir, f"{s}_{subcommand}.json"), report)
        status = "ok" if report["passed"] else "failed"
        failing = sorted(k for k, v in report["checks"].items() if not v)
        msg = "" if not failing else "failed checks: " + ", ".join(failing)
        return JobResult(c, status, msg, {"checks": report["checks"], "passed": report["passed"]})
    except NonlocalDecayError as exc:
        return JobResult(c, "error", f"{type(exc).__name__}: {exc}")
    except OSError as exc:
        return JobResult(c, "error", f"I/O error: {exc}")


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


def _meta(subcommand, cfg):
    return {
        "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "argv": sys.argv,
        "subcommand": subcommand,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "python_version": platform.python_version(),
        "platform": platform.platform(),
        "speeds": list(cfg.c),
    }


def execute(cfg, subcommand, out_dir, jobs=1, echo=click.echo):
    """Run ``subcommand`` for every speed in ``cfg``; returns the exit code."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "config.resolved.txt"), "w", encoding="utf-8") as fh:
        fh.write(cfg.to_text())
    _write_json(os.path.join(out_dir, "config.resolved.json"), cfg.to_dict())
    _write_json(os.path.join(out_dir, "meta.json"), _meta(subcommand, cfg))

    speeds = list(cfg.c)
    if jobs > 1 and len(speeds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_job, [cfg] * len(speeds), [subcommand] * len(speeds), speeds, [out_dir] * len(speeds)))
    else:
        results = [run_job(cfg, subcommand, c, out_dir) for c in speeds]

    sym = cfg.make_symbol()
    for r in results:
        if subcommand == "delta" and r.status == "ok":
            echo(json.dumps(_delta_stdout(r.summary), sort_keys=True))
        elif r.status == "error":
            echo(f"{sym.label} c={r.c:.12g}: error: {r.message}", err=True)
        else:
            echo(f"{sym.label} c={r.c:.12g}: {r.status}" + (f" ({r.message})" if r.message else ""))

    if subcommand == "report":
        summary = {
            "config": cfg.to_dict(),
            "runs": [{"c": r.c, "status": r.status, "message": r.message, "summary": r.summary} for r in results],
        }
        _write_json(os.path.join(out_dir, "report.json"), summary)

    if any(r.status == "error" for r in results):
        return EXIT_ERROR
    if any(r.status == "failed" for r in results):
        return EXIT_FAILED
    return EXIT_OK


def _delta_stdout(payload):
    keys = ("symbol", "c", "delta_c", "residual", "iterations")
    return {k: payload[k] for k in keys}


def _common(fn):
    fn = click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes for speed sweeps.")(fn)
    fn = click.option("--format", "formats", default=",".join(FORMATS), show_default=True, help="Comma list of output formats (csv, json).")(fn)
    fn = click.option("--out", "out_dir", type=click.Path(file_okay=False), default="out", show_default=True, help="Output directory.")(fn)
    fn = click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE", help="Override a config key; repeatable.")(fn)
    fn = click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None, help="key = value configuration file.")(fn)
    return fn


def _run(subcommand, config_path, overrides, out_dir, formats, jobs):
    try:
        extra = list(overrides) + [f"output.format={formats}"]
        if config_path is not None:
            cfg = load_config(config_path, extra)
        else:
            cfg = parse_config("", extra)
        cfg = replace(cfg, subcommand=subcommand)
        code = execute(cfg, subcommand, out_dir, jobs)
    except NonlocalDecayError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        code = EXIT_ERROR
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        code = EXIT_ERROR
    sys.exit(code)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="nonlocal-decay")
def main():
    """Kernels, decay rates and solitary waves for Whitham-type equations."""


@main.command()
@_common
def delta(config_path, overrides, out_dir, formats, jobs):
    """Exact decay rate delta_c for each speed."""
    _run("delta", config_path, overrides, out_dir, formats, jobs)


@main.command()
@_common
def kernel(config_path, overrides, out_dir, formats, jobs):
    """Kernel samples with tail and near-origin fits."""
    _run("kernel", config_path, overrides, out_dir, formats, jobs)


@main.command("solve")
@_common
def solve_cmd(config_path, overrides, out_dir, formats, jobs):
    """Solitary-wave profile for each speed."""
    _run("solve", config_path, overrides, out_dir, formats, jobs)


@main.command()
@_common
def verify(config_path, overrides, out_dir, formats, jobs):
    """Solve, then check decay, symmetry, crest count and hypotheses."""
    _run("verify", config_path, overrides, out_dir, formats, jobs)


@main.command()
@_common
def report(config_path, overrides, out_dir, formats, jobs):
    """Decay rate, kernel and verification combined, plus a summary."""
    _run("report", config_path, overrides, out_dir, formats, jobs)


if __name__ == "__main__":  # pragma: no cover
    main()
