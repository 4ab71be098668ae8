"""Command-line entry point.

Subcommands: fidi, independence, linkage, modulus, changepoint,
skorokhod-dist.  Experiment subcommands read a strict JSON config (any
unknown key is an error), write <kind>-report.json and <kind>-metrics.csv
into the output directory, and exit 0 on pass, 2 on configuration errors
and 3 when an experiment criterion fails.  Wall-clock timings go to a
timing.json sidecar so the report files stay byte-reproducible.

The output directory resolves as: $EMPIRICA_OUT if set, else --out,
else ./empirica-out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .cadlag import CadlagStep, j1_distance
from .changepoint import ChangePointModel, run_convergence_1d
from .errors import ConfigError, EmpiricaError
from .montecarlo import (
    ExperimentConfig,
    run_fidi_convergence,
    run_independence,
    run_linkage_check,
    run_modulus_diagnostics,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSERTION = 3

_RUNNERS = {
    "fidi": run_fidi_convergence,
    "independence": run_independence,
    "linkage": run_linkage_check,
    "modulus": run_modulus_diagnostics,
}


def _out_dir(args) -> Path:
    env = os.environ.get("EMPIRICA_OUT")
    if env:
        return Path(env)
    return Path(args.out)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")


def _load_config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config PATH is required for this subcommand")
    data = _load_json(args.config)
    if args.seed is not None:
        if not isinstance(data, dict):
            raise ConfigError(f"{args.config}: config root must be an object")
        data = dict(data)
        data["seed"] = args.seed
    return ExperimentConfig.from_dict(data)


def _load_step(path: str) -> CadlagStep:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: step function file must be an object")
    unknown = set(data) - {"base_value", "jump_times", "jump_sizes"}
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    try:
        return CadlagStep(
            np.asarray(data.get("jump_times", []), dtype=float),
            np.asarray(data.get("jump_sizes", []), dtype=float),
            float(data.get("base_value", 0.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}")


def _run_experiment(kind: str, args) -> int:
    cfg = _load_config(args)
    started = time.time()
    report = _RUNNERS[kind](cfg, threads=args.threads)
    elapsed = time.time() - started
    outdir = _out_dir(args)
    paths = report.write(outdir)
    (outdir / f"{kind}-timing.json").write_text(
        json.dumps({"started": started, "seconds": elapsed}, indent=2) + "\n"
    )
    for crit in report.criteria:
        status = "PASS" if crit["passed"] else "FAIL"
        print(f"[{status}] {crit['name']}: value={crit['value']:.6g} "
              f"bound={crit['bound']:.6g}")
    print(f"report: {paths[0]}")
    return EXIT_OK if report.passed else EXIT_ASSERTION


def _run_changepoint(args) -> int:
    model = ChangePointModel(args.tau, args.gamma)
    started = time.time()
    report = run_convergence_1d(
        model, [args.n], args.reps, args.seed if args.seed is not None else 0,
        horizon=args.horizon,
    )
    elapsed = time.time() - started
    outdir = _out_dir(args)
    paths = report.write(outdir)
    (outdir / "changepoint-timing.json").write_text(
        json.dumps({"started": started, "seconds": elapsed}, indent=2) + "\n"
    )
    for crit in report.criteria:
        status = "PASS" if crit["passed"] else "FAIL"
        print(f"[{status}] {crit['name']}: value={crit['value']:.6g} "
              f"bound={crit['bound']:.6g}")
    print(f"report: {paths[0]}")
    return EXIT_OK if report.passed else EXIT_ASSERTION


def _run_skorokhod(args) -> int:
    f = _load_step(args.path_a)
    g = _load_step(args.path_b)
    print(j1_distance(f, g, args.m_max))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="empirica",
        description="Run convergence / independence experiments for the "
        "empirical-process pair and compute Skorokhod distances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON experiment config")
        p.add_argument("--seed", type=int, default=None, help="master seed override")
        p.add_argument("--threads", type=int, default=1, help="worker cap")
        p.add_argument("--out", default="empirica-out",
                       help="output directory (EMPIRICA_OUT overrides)")

    for kind, runner in _RUNNERS.items():
        p = sub.add_parser(kind, help=runner.__doc__.splitlines()[0].lower())
        common(p)

    p = sub.add_parser("changepoint", help="polygonal-model estimator convergence")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default="empirica-out")

    p = sub.add_parser("skorokhod-dist",
                       help="distance between two step functions (JSON jump lists)")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--m-max", type=int, default=3)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in _RUNNERS:
            return _run_experiment(args.command, args)
        if args.command == "changepoint":
            return _run_changepoint(args)
        return _run_skorokhod(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EmpiricaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
