"""Command-line front end: solve, classify, sweep, simulate, kernel-validate.

Runs are reproducible: a JSON config file supplies any subset of options,
explicit flags win over the file, and every output meta JSON embeds the
fully resolved configuration.  Identical configs produce byte-identical
output files.  Exit codes: 0 success, 1 error, 2 indeterminate (solver hit
max_iter, or the classifier could not decide); errors are also written as
a JSON object to stderr so sweep orchestration can script over failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import cauchy, kernels, waves

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INDETERMINATE = 2


# ----------------------------------------------------------------------
# kernel spec strings
# ----------------------------------------------------------------------


def parse_kernel_spec(spec: str) -> kernels.Kernel:
    """Build a kernel from 'exp:k=1', 'gauss:sigma=1', 'uniform:a=1',
    'tri:a=1' or 'table:path.csv[:renorm]'."""
    family, sep, rest = spec.partition(":")
    family = family.strip().lower()
    if not sep:
        raise kernels.KernelError(f"kernel spec {spec!r} lacks parameters")
    if family in ("table", "tabulated"):
        renorm = rest.endswith(":renorm")
        path = rest[: -len(":renorm")] if renorm else rest
        y, k = kernels.read_kernel_table(path)
        return kernels.tabulated_kernel(y, k, renormalize=renorm)
    name, sep2, value = rest.partition("=")
    if not sep2:
        raise kernels.KernelError(f"kernel spec {spec!r}: expected name=value")
    try:
        param = float(value)
    except ValueError as exc:
        raise kernels.KernelError(f"kernel spec {spec!r}: bad number {value!r}") from exc
    expected = {"exp": "k", "exponential": "k", "gauss": "sigma",
                "gaussian": "sigma", "uniform": "a", "tri": "a",
                "triangular": "a"}
    if family not in expected:
        raise kernels.KernelError(f"unknown kernel family {family!r}")
    if name.strip() != expected[family]:
        raise kernels.KernelError(
            f"kernel spec {spec!r}: family {family!r} takes parameter "
            f"{expected[family]!r}"
        )
    return kernels.build_kernel(family, **{expected[family]: param})


# ----------------------------------------------------------------------
# config plumbing
# ----------------------------------------------------------------------


def _load_config(path):
    if path is None:
        return {}
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _resolve(args: argparse.Namespace, defaults: dict) -> dict:
    """defaults < config file < explicit flags."""
    merged = dict(defaults)
    merged.update(_load_config(getattr(args, "config", None)))
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    unknown = set(merged) - set(defaults)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return merged


def _write_json(payload: dict, path: Path):
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def _error_json(exc: BaseException):
    payload = {"error": type(exc).__name__, "message": str(exc)}
    json.dump(payload, sys.stderr, sort_keys=True)
    sys.stderr.write("\n")


def _float_list(text: str):
    items = [t for t in text.split(",") if t.strip()]
    return [float(t) for t in items]


# ----------------------------------------------------------------------
# solve
# ----------------------------------------------------------------------

SOLVE_DEFAULTS = {
    "kernel": "exp:k=1",
    "u_minus": 1.0,
    "u_plus": -1.0,
    "length": None,
    "grid_n": 4096,
    "refine": 8,
    "tol_iter": 1e-8,
    "max_iter": 5000,
    "out_dir": ".",
    "seed": 0,
}


def _solve_payload(cfg: dict):
    kernel = parse_kernel_spec(cfg["kernel"])
    params = waves.WaveParams(cfg["u_minus"], cfg["u_plus"])
    profile, trace = waves.solve_wave(
        kernel, params, length=cfg["length"], n=int(cfg["grid_n"]),
        tol_iter=cfg["tol_iter"], max_iter=int(cfg["max_iter"]),
        refine=int(cfg["refine"]),
    )
    residual, _ = waves.pointwise_residual(profile, kernel, refine=int(cfg["refine"]))
    meta = {
        "config": cfg,
        "kernel": cfg["kernel"],
        "u_minus": params.u_minus,
        "u_plus": params.u_plus,
        "s": params.s,
        "u_c": params.u_c,
        "length": profile.grid.length,
        "grid_n": profile.grid.n,
        "iterations": profile.iterations,
        "final_sup_diff": profile.final_sup_diff,
        "jump": profile.jump,
        "classification": profile.classification,
        "converged": profile.converged,
        "residuals": {
            "pointwise": residual,
            "weak": waves.weak_residual(profile, kernel, refine=int(cfg["refine"])),
            "flux_balance": waves.flux_balance(profile, kernel, refine=int(cfg["refine"])),
        },
    }
    return profile, trace, meta


def cmd_solve(args) -> int:
    cfg = _resolve(args, SOLVE_DEFAULTS)
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    profile, trace, meta = _solve_payload(cfg)
    waves.write_profile_csv(profile, out / "profile.csv")
    waves.write_trace_csv(trace, out / "trace.csv")
    _write_json(meta, out / "profile.meta.json")
    return EXIT_OK if profile.converged else EXIT_INDETERMINATE


# ----------------------------------------------------------------------
# classify
# ----------------------------------------------------------------------

CLASSIFY_DEFAULTS = {
    "kernel": "exp:k=1",
    "u_minus": 1.0,
    "u_plus": -1.0,
    "length": None,
    "grid_n": 1024,
    "refine": 8,
    "tol_iter": 1e-8,
    "max_iter": 5000,
    "out_dir": ".",
    "seed": 0,
}


def cmd_classify(args) -> int:
    cfg = _resolve(args, CLASSIFY_DEFAULTS)
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    kernel = parse_kernel_spec(cfg["kernel"])
    params = waves.WaveParams(cfg["u_minus"], cfg["u_plus"])
    record = waves.classify_shock(
        kernel, params, n=int(cfg["grid_n"]), length=cfg["length"],
        tol_iter=cfg["tol_iter"], max_iter=int(cfg["max_iter"]),
        refine=int(cfg["refine"]),
    )
    payload = {
        "config": cfg,
        "predicted_by_theorem": record.predicted_by_theorem,
        "measured": record.measured,
        "jumps": list(record.jumps),
        "ratios": list(record.ratios),
        "grid_sizes": list(record.grid_sizes),
        "length": record.length,
        "amplitude": record.amplitude,
        "threshold": record.threshold,
        "consistent": record.consistent,
    }
    _write_json(payload, out / "classification.json")
    return EXIT_OK if record.measured != "indeterminate" else EXIT_INDETERMINATE


# ----------------------------------------------------------------------
# sweep
# ----------------------------------------------------------------------

SWEEP_DEFAULTS = {
    "kernels": "exp:k=1",
    "amplitudes": "",
    "amp_log": None,       # "lo:hi:count" log-spaced alternative
    "center": 0.0,
    "grid_n": 512,
    "refine": 8,
    "tol_iter": 1e-8,
    "max_iter": 5000,
    "workers": 1,
    "out_dir": ".",
    "seed": 0,
}

SWEEP_COLUMNS = ["kernel", "amplitude", "status", "classification",
                 "predicted_by_theorem", "jump", "iterations",
                 "pointwise_residual", "weak_residual", "flux_balance"]


def _sweep_cell(task):
    spec, amplitude, center, grid_n, refine, tol_iter, max_iter = task
    row = {"kernel": spec, "amplitude": repr(amplitude)}
    try:
        kernel = parse_kernel_spec(spec)
        params = waves.WaveParams(center + 0.5 * amplitude, center - 0.5 * amplitude)
        record = waves.classify_shock(kernel, params, n=grid_n, refine=refine,
                                      tol_iter=tol_iter, max_iter=max_iter)
        profile = record.profile
        pw, _ = waves.pointwise_residual(profile, kernel, refine=refine)
        row.update({
            "status": "ok",
            "classification": record.measured,
            "predicted_by_theorem": str(record.predicted_by_theorem).lower(),
            "jump": repr(profile.jump),
            "iterations": str(profile.iterations),
            "pointwise_residual": repr(pw),
            "weak_residual": repr(waves.weak_residual(profile, kernel, refine=refine)),
            "flux_balance": repr(waves.flux_balance(profile, kernel, refine=refine)),
        })
    except Exception as exc:  # per-row isolation: failures become row status
        row.update({"status": f"error: {type(exc).__name__}: {exc}",
                    "classification": "", "predicted_by_theorem": "",
                    "jump": "", "iterations": "", "pointwise_residual": "",
                    "weak_residual": "", "flux_balance": ""})
    return row


def cmd_sweep(args) -> int:
    cfg = _resolve(args, SWEEP_DEFAULTS)
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)

    specs = [s.strip() for s in cfg["kernels"].split(";") if s.strip()]
    if cfg["amp_log"]:
        lo, hi, count = cfg["amp_log"].split(":")
        amplitudes = [float(a) for a in np.geomspace(float(lo), float(hi), int(count))]
    else:
        amplitudes = _float_list(cfg["amplitudes"])
    if not specs or not amplitudes:
        raise ValueError("sweep needs at least one kernel and one amplitude")
    if len(specs) * len(amplitudes) > 10_000:
        raise ValueError("sweep grid exceeds 10000 cells")

    tasks = [(spec, amp, cfg["center"], int(cfg["grid_n"]), int(cfg["refine"]),
              cfg["tol_iter"], int(cfg["max_iter"]))
             for spec in specs for amp in amplitudes]
    workers = int(cfg["workers"])
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(t) for t in tasks]

    with open(out / "sweep.csv", "w", newline="\n") as handle:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_COLUMNS,
                                lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    all_failed = all(r["status"] != "ok" for r in rows)
    return EXIT_ERROR if all_failed else EXIT_OK


# ----------------------------------------------------------------------
# simulate
# ----------------------------------------------------------------------

SIMULATE_DEFAULTS = {
    "kernel": "exp:k=1",
    "u_left": 1.0,
    "u_right": -1.0,
    "domain_a": -40.0,
    "domain_b": 40.0,
    "cells": 2000,
    "cfl": 0.4,
    "t_end": 5.0,
    "snapshot_interval": 0.25,
    "level": None,
    "init": "riemann",      # riemann | tanh | constant
    "tanh_steepness": 3.0,
    "init_from": None,      # profile.csv written by the solve command
    "out_dir": ".",
    "seed": 0,
}


@dataclass
class _ProfileTable:
    """Profile loaded back from profile.csv, for translate comparisons."""

    x: np.ndarray
    big_u: np.ndarray

    @property
    def u_minus(self) -> float:
        return float(self.big_u[0])

    @property
    def u_plus(self) -> float:
        return float(self.big_u[-1])

    def sample(self, x):
        return np.interp(x, self.x, self.big_u,
                         left=self.u_minus, right=self.u_plus)


def load_profile_csv(path) -> _ProfileTable:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns 'x,U'")
    return _ProfileTable(data[:, 0], data[:, 1])


def cmd_simulate(args) -> int:
    cfg = _resolve(args, SIMULATE_DEFAULTS)
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    kernel = parse_kernel_spec(cfg["kernel"])
    sim_cfg = cauchy.SimConfig(
        a=cfg["domain_a"], b=cfg["domain_b"], m=int(cfg["cells"]),
        t_end=cfg["t_end"], u_left=cfg["u_left"], u_right=cfg["u_right"],
        cfl=cfg["cfl"], snapshot_interval=cfg["snapshot_interval"],
    )

    table = None
    if cfg["init_from"]:
        table = load_profile_csv(cfg["init_from"])
        state = cauchy.initial_state(sim_cfg, lambda x: table.sample(x))
    elif cfg["init"] == "riemann":
        state = cauchy.initial_state(
            sim_cfg, lambda x: np.where(x < 0.0, sim_cfg.u_left, sim_cfg.u_right))
    elif cfg["init"] == "tanh":
        mid = 0.5 * (sim_cfg.u_left + sim_cfg.u_right)
        half = 0.5 * (sim_cfg.u_left - sim_cfg.u_right)
        steep = cfg["tanh_steepness"]
        state = cauchy.initial_state(
            sim_cfg, lambda x: mid - half * np.tanh(steep * x))
    elif cfg["init"] == "constant":
        state = cauchy.initial_state(sim_cfg, sim_cfg.u_left)
    else:
        raise ValueError(f"unknown init {cfg['init']!r}")

    traj = cauchy.simulate(state, kernel, sim_cfg)
    cauchy.write_snapshots_csv(traj, out / "snapshots.csv")

    diagnostics = {
        "config": cfg,
        "times": traj.times,
        "max_slope": traj.max_slopes,
        "total_variation": traj.total_variations,
        "slope_growth": traj.slope_growth(),
    }
    if sim_cfg.u_left != sim_cfg.u_right:
        level = cfg["level"]
        if level is None:
            level = 0.5 * (sim_cfg.u_left + sim_cfg.u_right)
        try:
            fit = cauchy.measure_speed(traj, level)
            diagnostics["measured_speed"] = fit.speed
            diagnostics["speed_fit_rms"] = fit.residual_rms
        except (cauchy.SimulationError, ValueError) as exc:
            diagnostics["measured_speed_error"] = str(exc)
    if table is not None:
        speed = 0.5 * (table.u_minus + table.u_plus)
        shifted = table.sample(traj.final.x - speed * traj.final.t)
        l1 = float(np.sum(np.abs(traj.final.u - shifted)) * sim_cfg.dx)
        diagnostics["L1_error_vs_translate"] = l1
        diagnostics["translate_speed"] = speed
    _write_json(diagnostics, out / "diagnostics.json")
    return EXIT_OK


# ----------------------------------------------------------------------
# kernel-validate
# ----------------------------------------------------------------------

VALIDATE_DEFAULTS = {
    "kernel": "exp:k=1",
    "probes": 256,
    "out_dir": ".",
    "seed": 0,
}


def cmd_kernel_validate(args) -> int:
    cfg = _resolve(args, VALIDATE_DEFAULTS)
    out = Path(cfg["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    kernel = parse_kernel_spec(cfg["kernel"])
    report = kernels.validate_kernel(kernel, int(cfg["probes"]))
    payload = {
        "config": cfg,
        "checks": {name: {"passed": c.passed, "worst": c.worst}
                   for name, c in report.checks.items()},
        "density_continuous": report.density_continuous,
        "total_variation": report.total_variation,
        "probe_count": report.probe_count,
        "m1": kernel.m1,
        "m2": kernel.m2,
        "all_passed": report.all_passed,
    }
    _write_json(payload, out / "kernel_validation.json")
    return EXIT_OK if report.all_passed else EXIT_ERROR


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------


def _add_common(sub, defaults):
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.add_argument("--out-dir", dest="out_dir")
    sub.add_argument("--seed", type=int)
    if "kernel" in defaults:
        sub.add_argument("--kernel", help="kernel spec, e.g. exp:k=1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlburgers",
        description="Traveling waves of u_t + u u_x + u - K*u = 0: solver, "
                    "shock classifier, parameter sweeps and a finite-volume "
                    "validator.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("solve", help="compute one traveling-wave profile")
    _add_common(p, SOLVE_DEFAULTS)
    p.add_argument("--u-minus", dest="u_minus", type=float)
    p.add_argument("--u-plus", dest="u_plus", type=float)
    p.add_argument("--length", type=float)
    p.add_argument("--grid-n", dest="grid_n", type=int)
    p.add_argument("--refine", type=int)
    p.add_argument("--tol-iter", dest="tol_iter", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("classify", help="continuous / discontinuous verdict")
    _add_common(p, CLASSIFY_DEFAULTS)
    p.add_argument("--u-minus", dest="u_minus", type=float)
    p.add_argument("--u-plus", dest="u_plus", type=float)
    p.add_argument("--length", type=float)
    p.add_argument("--grid-n", dest="grid_n", type=int)
    p.add_argument("--refine", type=int)
    p.add_argument("--tol-iter", dest="tol_iter", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.set_defaults(func=cmd_classify)

    p = subs.add_parser("sweep", help="classification over kernels x amplitudes")
    _add_common(p, SWEEP_DEFAULTS)
    p.add_argument("--kernels", help="semicolon-separated kernel specs")
    p.add_argument("--amplitudes", help="comma-separated amplitudes")
    p.add_argument("--amp-log", dest="amp_log", help="lo:hi:count, log-spaced")
    p.add_argument("--center", type=float)
    p.add_argument("--grid-n", dest="grid_n", type=int)
    p.add_argument("--refine", type=int)
    p.add_argument("--tol-iter", dest="tol_iter", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("simulate", help="finite-volume run of the PDE")
    _add_common(p, SIMULATE_DEFAULTS)
    p.add_argument("--u-left", dest="u_left", type=float)
    p.add_argument("--u-right", dest="u_right", type=float)
    p.add_argument("--domain-a", dest="domain_a", type=float)
    p.add_argument("--domain-b", dest="domain_b", type=float)
    p.add_argument("--cells", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--snapshot-interval", dest="snapshot_interval", type=float)
    p.add_argument("--level", type=float)
    p.add_argument("--init", choices=["riemann", "tanh", "constant"])
    p.add_argument("--tanh-steepness", dest="tanh_steepness", type=float)
    p.add_argument("--init-from", dest="init_from",
                   help="profile.csv from the solve command")
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("kernel-validate", help="check the theory hypotheses")
    _add_common(p, VALIDATE_DEFAULTS)
    p.add_argument("--probes", type=int)
    p.set_defaults(func=cmd_kernel_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # contract: machine-readable error, exit 1
        _error_json(exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
