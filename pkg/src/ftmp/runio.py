"""Run-directory serialization: CSV files, the manifest, and plot emission.

Floats are written with shortest round-trip repr, so re-reading a CSV
reproduces the recorded values bit for bit; all outputs are byte-stable
given identical inputs (plot SVGs use a fixed hash salt and carry no
timestamps).
"""
from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .model import KINETIC, STATIC
from .sim import Event, SimConfig, TrajectoryRecord
from .world import Scenario, preset, random_scenario

TRAJECTORIES = "trajectories.csv"
DISTANCES = "distances.csv"
EVENTS = "events.csv"
MANIFEST = "manifest.json"
DISTANCE_PLOT = "distances_over_time.svg"
SNAPSHOT_PLOT = "trajectory_snapshots.svg"

_PLOT_POINT_BUDGET = 2000  # per plotted series; CSVs keep full resolution


def _fmt(x: float) -> str:
    return repr(float(x))


def write_trajectories(record: TrajectoryRecord, path: Path) -> None:
    """Kinetic agents at every sample; static agents once, in the t=0 block."""
    dim = record.scenario.config.dim
    cols = (["t", "agent_id", "kind"]
            + [f"x{k}" for k in range(dim)] + [f"v{k}" for k in range(dim)]
            + ["dist_to_goal"])
    kin_ids = record.kinetic_ids
    goals = record.goals
    lines = [",".join(cols)]
    for k, t in enumerate(record.times):
        ts = _fmt(t)
        for i, aid in enumerate(kin_ids):
            p = record.positions[k, i]
            v = record.velocities[k, i]
            d = float(np.linalg.norm(p - goals[i]))
            lines.append(",".join([ts, str(int(aid)), KINETIC,
                                   *(_fmt(c) for c in p),
                                   *(_fmt(c) for c in v), _fmt(d)]))
        if k == 0:
            for a in record.scenario.config.static_agents():
                lines.append(",".join([ts, str(a.id), STATIC,
                                       *(_fmt(c) for c in a.position),
                                       *(_fmt(c) for c in a.velocity), _fmt(0.0)]))
    path.write_text("\n".join(lines) + "\n")


def write_distances(record: TrajectoryRecord, path: Path) -> None:
    """Kinetic-kinetic pair distances per sample plus the per-sample minimum.

    The min_pairwise column repeats the recorded minimum over all pairs
    involving a kinetic agent (including the static fence), which is the
    safety-relevant quantity.
    """
    kin_ids = [int(a) for a in record.kinetic_ids]
    pairs = [(i, j) for i in range(len(kin_ids)) for j in range(i + 1, len(kin_ids))]
    lines = ["t,id_a,id_b,distance,min_pairwise"]
    for k, t in enumerate(record.times):
        ts = _fmt(t)
        ms = _fmt(record.pairwise_min[k])
        for i, j in pairs:
            d = float(np.linalg.norm(record.positions[k, i] - record.positions[k, j]))
            lines.append(f"{ts},{kin_ids[i]},{kin_ids[j]},{_fmt(d)},{ms}")
    path.write_text("\n".join(lines) + "\n")


def write_events(record: TrajectoryRecord, path: Path) -> None:
    lines = ["t,kind,agent_id,detail"]
    for ev in record.events:
        lines.append(f"{_fmt(ev.time)},{ev.kind},{ev.agent_id},\"{ev.detail}\"")
    path.write_text("\n".join(lines) + "\n")


def write_manifest(record: TrajectoryRecord, out_dir: Path, outputs: list[str],
                   started_at: float, scenario_args: dict) -> dict:
    cfg = record.scenario.config
    manifest = {
        "tool": "ftmp",
        "tool_version": __version__,
        "label": record.scenario.label,
        "seed": int(cfg.seed),
        "scenario_args": scenario_args,
        "parameters": {
            "N": cfg.N, "M": cfg.M, "R": cfg.R, "r": cfg.r,
            "d_c": cfg.barrier.d_c, "epsilon": cfg.barrier.epsilon,
            "x0_floor": cfg.barrier.x0_floor,
            "k1": cfg.control.k1, "alpha": cfg.control.alpha,
            "dot_guard_tol": cfg.control.dot_guard_tol,
            "grad_zero_tol": cfg.control.grad_zero_tol,
            "corr_cap": cfg.control.corr_cap,
            "dt": record.sim.dt, "t_max": record.sim.t_max,
            "conv_tol": record.sim.conv_tol,
            "abort_on_collision": record.sim.abort_on_collision,
            "dim": cfg.dim,
        },
        "n_samples": int(record.n_samples),
        "converged": bool(record.converged),
        "n_events": len(record.events),
        "record_digest": record.digest(),
        "started_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime(started_at)),
        "finished_at": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
        "outputs": outputs,
    }
    (out_dir / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def _thin(n: int) -> np.ndarray:
    if n <= _PLOT_POINT_BUDGET:
        return np.arange(n)
    stride = int(np.ceil(n / _PLOT_POINT_BUDGET))
    idx = np.arange(0, n, stride)
    return idx if idx[-1] == n - 1 else np.append(idx, n - 1)


def write_plots(record: TrajectoryRecord, out_dir: Path,
                snapshot_times=None) -> list[str]:
    """Distance-over-time and position-snapshot figures as deterministic SVG."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "ftmp"
    cfg = record.scenario.config
    kin_ids = [int(a) for a in record.kinetic_ids]
    idx = _thin(record.n_samples)
    t = record.times[idx]

    fig, ax = plt.subplots(figsize=(8, 5))
    for i in range(len(kin_ids)):
        for j in range(i + 1, len(kin_ids)):
            d = np.linalg.norm(record.positions[idx, i] - record.positions[idx, j],
                               axis=-1)
            ax.plot(t, d, lw=1.0, label=f"{kin_ids[i]}-{kin_ids[j]}"
                    if len(kin_ids) <= 6 else None)
    ax.plot(t, record.pairwise_min[idx], "k--", lw=1.2, label="min (incl. fence)")
    ax.axhline(cfg.barrier.d_c, color="r", lw=1.0, label="clearance d_c")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("inter-agent distance [m]")
    ax.set_title(f"{record.scenario.label}: pairwise distances")
    if len(kin_ids) <= 6:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_dir / DISTANCE_PLOT, metadata={"Date": None})
    plt.close(fig)

    if snapshot_times is None:
        t_end = float(record.times[-1])
        snapshot_times = [0.0, 0.25 * t_end, 0.5 * t_end, t_end]
    fig, axes = plt.subplots(1, len(snapshot_times),
                             figsize=(4 * len(snapshot_times), 4.2))
    if len(snapshot_times) == 1:
        axes = [axes]
    ring = np.array([a.position for a in cfg.static_agents()])
    goals = record.goals
    for ax, ts in zip(axes, snapshot_times):
        k = int(np.clip(round(ts / record.sim.dt), 0, record.n_samples - 1))
        if ring.size:
            ax.plot(ring[:, 0], ring[:, 1], ".", ms=1, color="0.7")
        for i in range(len(kin_ids)):
            ax.plot(record.positions[:k + 1:max(1, (k + 1) // 500), i, 0],
                    record.positions[:k + 1:max(1, (k + 1) // 500), i, 1],
                    lw=0.7, alpha=0.6)
            ax.plot(*record.positions[k, i], "o", ms=4)
            ax.plot(*goals[i], "*", ms=6, alpha=0.6)
        ax.set_aspect("equal")
        ax.set_title(f"t = {record.times[k]:.3f} s", fontsize=9)
    fig.tight_layout()
    fig.savefig(out_dir / SNAPSHOT_PLOT, metadata={"Date": None})
    plt.close(fig)
    return [DISTANCE_PLOT, SNAPSHOT_PLOT]


def write_run(record: TrajectoryRecord, out_dir, scenario_args: dict,
              started_at: float | None = None, snapshot_times=None) -> dict:
    """Emit the full run directory; returns the manifest dict."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started_at = time.time() if started_at is None else started_at
    write_trajectories(record, out_dir / TRAJECTORIES)
    write_distances(record, out_dir / DISTANCES)
    write_events(record, out_dir / EVENTS)
    plots = write_plots(record, out_dir, snapshot_times)
    outputs = [TRAJECTORIES, DISTANCES, EVENTS, *plots, MANIFEST]
    return write_manifest(record, out_dir, outputs, started_at, scenario_args)


# --------------------------------------------------------------------------
# reading a run directory back

def rebuild_scenario(manifest: dict) -> Scenario:
    """Reconstruct the scenario a manifest describes (deterministic builders)."""
    label = manifest["label"]
    args = manifest.get("scenario_args", {})
    if label == "random":
        return random_scenario(int(args["n"]), int(manifest["seed"]),
                               args.get("overrides") or None)
    return preset(label, int(manifest["seed"]))


def read_run(run_dir) -> tuple[TrajectoryRecord, dict]:
    """Rebuild a TrajectoryRecord from a run directory.

    Positions/velocities/times come back bit-exact from the CSVs; the
    per-step neighbor and guard arrays are re-derived by re-evaluating the
    deterministic decision core on the recorded snapshots.
    """
    from .sim import _commands, _distances

    run_dir = Path(run_dir)
    manifest = json.loads((run_dir / MANIFEST).read_text())
    scenario = rebuild_scenario(manifest)
    cfg = scenario.config
    dim = cfg.dim
    par = manifest["parameters"]
    sc = SimConfig(dt=par["dt"], t_max=par["t_max"], conv_tol=par["conv_tol"],
                   abort_on_collision=par["abort_on_collision"])

    rows_t: list[float] = []
    kin_rows: dict[float, dict[int, tuple]] = {}
    with open(run_dir / TRAJECTORIES) as fh:
        header = fh.readline().strip().split(",")
        assert header[0] == "t", "unexpected trajectories.csv header"
        for line in fh:
            parts = line.rstrip("\n").split(",")
            if parts[2] != KINETIC:
                continue
            t = float(parts[0])
            if not rows_t or t != rows_t[-1]:
                rows_t.append(t)
                kin_rows[t] = {}
            aid = int(parts[1])
            vals = [float(v) for v in parts[3:3 + 2 * dim]]
            kin_rows[t][aid] = (vals[:dim], vals[dim:])

    kin_ids = sorted(kin_rows[rows_t[0]]) if rows_t else []
    T = len(rows_t)
    n_k = len(kin_ids)
    times = np.array(rows_t)
    P = np.empty((T, n_k, dim))
    V = np.empty((T, n_k, dim))
    for k, t in enumerate(rows_t):
        for i, aid in enumerate(kin_ids):
            p, v = kin_rows[t][aid]
            P[k, i] = p
            V[k, i] = v

    events = []
    with open(run_dir / EVENTS) as fh:
        fh.readline()
        for line in fh:
            t, kind, aid, detail = line.rstrip("\n").split(",", 3)
            events.append(Event(float(t), kind, int(aid), detail.strip('"')))

    # re-derive step arrays and the pairwise minimum from the snapshots
    sta = cfg.static_agents()
    sta_pos = np.array([a.position for a in sta]) if sta else np.zeros((0, dim))
    ids = np.array(kin_ids + [a.id for a in sta])
    goals = np.array([a.goal for a in cfg.kinetic_agents()])
    NB = np.zeros((max(T - 1, 0), n_k), dtype=np.int32)
    GU = np.zeros((max(T - 1, 0), n_k), dtype=np.int8)
    PM = np.zeros(T)
    for k in range(T):
        all_pos = np.vstack([P[k], sta_pos]) if sta else P[k]
        all_vel = np.vstack([V[k], np.zeros_like(sta_pos)]) if sta else V[k]
        dist = _distances(P[k], all_pos)
        PM[k] = float(dist.min()) if dist.size else float("inf")
        if k < T - 1:
            nb_rows = dist.argmin(axis=1)
            cmds, guards, _, _ = _commands(P[k], goals, all_pos, all_vel,
                                           nb_rows, ids, times[k],
                                           cfg.barrier, cfg.control)
            NB[k] = ids[nb_rows]
            GU[k] = guards

    converged = bool(manifest.get("converged", False))
    record = TrajectoryRecord(scenario=scenario, sim=sc, times=times,
                              positions=P, velocities=V,
                              step_neighbor_ids=NB, step_guards=GU,
                              pairwise_min=PM, events=tuple(events),
                              converged=converged)
    return record, manifest
