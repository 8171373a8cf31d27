"""Command-line entry point: run scenarios, audit run directories, verify math.

Exit codes: 0 success, 1 audit/verification failure, 2 bad arguments,
3 I/O failure. The default output root is $FTMP_OUT_DIR (or ./runs).
Flags override config-file values, which override built-in defaults; the
config file is INI-style ([scenario]/[sim] sections of key=value lines,
see README).
"""
from __future__ import annotations

import argparse
import configparser
import os
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import audit_record, failed, format_findings, verification_battery
from .errors import FtmpError, UnknownLabel
from .runio import MANIFEST, read_run, write_run
from .sim import SimConfig, run as run_sim
from .world import DEFAULT_DT, preset, random_scenario

_CONFIG_KEYS = {
    ("scenario", "label"): str,
    ("scenario", "n"): int,
    ("scenario", "seed"): int,
    ("sim", "dt"): float,
    ("sim", "t_max"): float,
    ("sim", "conv_tol"): float,
}


def _load_config(path: str) -> dict:
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise OSError(f"config file {path!r} not readable")
    out = {}
    for (section, key), cast in _CONFIG_KEYS.items():
        if cp.has_option(section, key):
            out[key if key != "label" else "scenario"] = cast(cp.get(section, key))
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftmp",
        description="finite-time multi-agent motion planning simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario and write a run directory")
    p_run.add_argument("--scenario", choices=["example1", "example2", "random"])
    p_run.add_argument("--n", type=int, help="agent count (random scenario only)")
    p_run.add_argument("--seed", type=int, help="placement seed (default 1)")
    p_run.add_argument("--dt", type=float, help="step size [s]")
    p_run.add_argument("--t-max", type=float, help="horizon [s] (default 50)")
    p_run.add_argument("--conv-tol", type=float, help="goal-reach radius [m]")
    p_run.add_argument("--abort-on-collision", action="store_true")
    p_run.add_argument("--out", help="output directory")
    p_run.add_argument("--config", help="INI config file; flags override it")
    p_run.add_argument("--snapshots",
                       help="comma-separated snapshot times [s] for the plot")

    p_audit = sub.add_parser("audit", help="audit a run directory")
    p_audit.add_argument("--out", required=True, help="run directory to audit")

    p_ver = sub.add_parser("verify-lemmas",
                           help="simulation-free numerical property battery")
    p_ver.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_run(args) -> int:
    settings = {"scenario": None, "n": 4, "seed": 1, "dt": None,
                "t_max": 50.0, "conv_tol": 1e-2}
    if args.config:
        settings.update(_load_config(args.config))
    for key, flag in (("scenario", args.scenario), ("n", args.n),
                      ("seed", args.seed), ("dt", args.dt),
                      ("t_max", args.t_max), ("conv_tol", args.conv_tol)):
        if flag is not None:
            settings[key] = flag

    label = settings["scenario"]
    if label is None:
        print("error: no scenario given (flag or config file)", file=sys.stderr)
        return 2
    try:
        if label == "random":
            scenario = random_scenario(int(settings["n"]), int(settings["seed"]))
        else:
            scenario = preset(label, int(settings["seed"]))
    except UnknownLabel as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    dt = settings["dt"] if settings["dt"] is not None else DEFAULT_DT[label]
    sc = SimConfig(dt=float(dt), t_max=float(settings["t_max"]),
                   conv_tol=float(settings["conv_tol"]),
                   abort_on_collision=bool(args.abort_on_collision))

    out_root = args.out or os.environ.get("FTMP_OUT_DIR", "runs")
    out_dir = Path(out_root)
    if args.out is None:
        out_dir = out_dir / f"{label}-seed{settings['seed']}"

    started = time.time()
    record = run_sim(scenario, sc)
    snapshots = None
    if args.snapshots:
        snapshots = [float(s) for s in args.snapshots.split(",")]
    scenario_args = {"n": int(settings["n"]), "overrides": None}
    manifest = write_run(record, out_dir, scenario_args, started, snapshots)

    conv = record.convergence_times()
    n_kin = len(record.kinetic_ids)
    print(f"wrote {out_dir} ({manifest['n_samples']} samples, "
          f"{len(conv)}/{n_kin} converged, digest {manifest['record_digest'][:16]})")
    return 0


def _cmd_audit(args) -> int:
    run_dir = Path(args.out)
    if not (run_dir / MANIFEST).exists():
        print(f"error: {run_dir} has no {MANIFEST}", file=sys.stderr)
        return 2
    try:
        record, manifest = read_run(run_dir)
        findings = audit_record(record, expect_digest=manifest["record_digest"])
    except FtmpError as exc:
        print(f"check=read-run status=FAIL worst={exc!r} where={run_dir}")
        return 1
    report = format_findings(findings)
    (run_dir / "audit_report.txt").write_text(report)
    print(report, end="")
    return 1 if failed(findings) else 0


def _cmd_verify(args) -> int:
    findings = verification_battery(args.seed)
    print(format_findings(findings), end="")
    return 1 if failed(findings) else 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "audit":
            return _cmd_audit(args)
        return _cmd_verify(args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3
    except FtmpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
