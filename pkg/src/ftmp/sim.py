"""Fixed-step explicit-Euler closed loop with event detection and recording.

Every step evaluates all kinetic agents against the same immutable snapshot:
each agent pairs with its nearest neighbor (ties to the lowest id) and uses
the neighbor's snapshot velocity, which is the velocity commanded on the
previous step (zero at t=0). The one-step velocity delay resolves the
mutual dependence of the commands deterministically, so the update order
cannot affect the result.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .controller import GUARD_CODES, GUARD_NAMES, _control_core
from .errors import AgentStepError, FtmpError
from .model import AgentState, BarrierParams, ControlParams, KINETIC, STATIC
from .world import Scenario

EVENT_COLLISION = "collision"
EVENT_CONVERGED = "converged"
EVENT_GUARD = "guard"
EVENT_NEIGHBOR_SWITCH = "neighbor_switch"
EVENT_CONTAINMENT_BREACH = "containment_breach"

# Guard codes logged as events (transitions only); the remaining codes are
# ordinary operating modes and are recorded per step, not evented.
_EVENTED_GUARDS = (GUARD_CODES["dot_product_small"],
                   GUARD_CODES["grad_spurious_zero"])


@dataclass(frozen=True)
class SimConfig:
    """Step size, horizon, goal-reach radius, and the collision-abort switch."""

    dt: float
    t_max: float
    conv_tol: float = 1e-2
    abort_on_collision: bool = False

    def __post_init__(self):
        if not (self.dt > 0.0 and self.t_max > 0.0):
            raise ValueError("dt and t_max must be positive")
        if self.dt > self.t_max:
            raise ValueError("dt must not exceed t_max")
        if not (self.conv_tol > 0.0):
            raise ValueError("conv_tol must be positive")


@dataclass(frozen=True)
class Event:
    time: float
    kind: str
    agent_id: int
    detail: str


@dataclass(frozen=True)
class TrajectoryRecord:
    """Complete, immutable result of one closed-loop run.

    Arrays are indexed [sample, kinetic-agent, component]; kinetic agents
    appear in id order. `velocities[k]` is the snapshot velocity at sample k
    (the command issued at sample k-1; zeros at k=0). The step arrays have
    one row fewer than the samples: row k describes the step from sample k
    to k+1 (chosen neighbor id and guard code).
    """

    scenario: Scenario
    sim: SimConfig
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    step_neighbor_ids: np.ndarray
    step_guards: np.ndarray
    pairwise_min: np.ndarray
    events: tuple[Event, ...]
    converged: bool

    @property
    def kinetic_ids(self) -> np.ndarray:
        return np.array([a.id for a in self.scenario.config.kinetic_agents()])

    @property
    def goals(self) -> np.ndarray:
        return np.array([a.goal for a in self.scenario.config.kinetic_agents()])

    @property
    def n_samples(self) -> int:
        return self.times.size

    def roster_at(self, k: int) -> list[AgentState]:
        """Materialize the full roster at sample k (kinetic then static)."""
        cfg = self.scenario.config
        kin = cfg.kinetic_agents()
        out = [AgentState(a.id, self.positions[k, i], self.velocities[k, i],
                          a.goal, KINETIC) for i, a in enumerate(kin)]
        return out + cfg.static_agents()

    def convergence_times(self) -> dict[int, float]:
        """First time each kinetic agent entered the goal-reach radius."""
        out: dict[int, float] = {}
        for ev in self.events:
            if ev.kind == EVENT_CONVERGED and ev.agent_id not in out:
                out[ev.agent_id] = ev.time
        return out

    def digest(self) -> str:
        """Reproducible sha256 over the trajectory data and events."""
        h = hashlib.sha256()
        cfg = self.scenario.config
        h.update(f"{self.scenario.label}|{cfg.dim}|{self.sim.dt!r}|"
                 f"{self.sim.conv_tol!r}".encode())
        for arr in (self.times, self.positions, self.velocities):
            h.update(str(arr.shape).encode())
            h.update(np.ascontiguousarray(arr, dtype=np.float64).tobytes())
        h.update(np.ascontiguousarray(self.kinetic_ids, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.goals, dtype=np.float64).tobytes())
        for a in cfg.static_agents():
            h.update(f"{a.id}".encode())
            h.update(np.ascontiguousarray(a.position, dtype=np.float64).tobytes())
        for ev in self.events:
            h.update(f"{ev.time!r}|{ev.kind}|{ev.agent_id}|{ev.detail}\n".encode())
        return h.hexdigest()


def _split_roster(agents):
    kin = sorted((a for a in agents if a.kind == KINETIC), key=lambda a: a.id)
    sta = sorted((a for a in agents if a.kind == STATIC), key=lambda a: a.id)
    return kin, sta


def _distances(kin_pos: np.ndarray, all_pos: np.ndarray) -> np.ndarray:
    """Kinetic-to-everyone distance matrix with self-pairs masked to +inf."""
    diff = kin_pos[:, None, :] - all_pos[None, :, :]
    dist = np.sqrt((diff * diff).sum(-1))
    n_k = kin_pos.shape[0]
    dist[np.arange(n_k), np.arange(n_k)] = np.inf
    return dist


def _commands(kin_pos, goals, all_pos, all_vel, nb_rows, ids, t, bp, cp):
    """Per-agent control decisions against one snapshot."""
    n_k = kin_pos.shape[0]
    cmds = np.zeros_like(kin_pos)
    guards = np.zeros(n_k, dtype=np.int8)
    values = np.zeros(n_k)
    grad_norms = np.zeros(n_k)
    for i in range(n_k):
        j = nb_rows[i]
        try:
            cmd, guard, value, gn, _ = _control_core(
                kin_pos[i], goals[i], all_pos[j], all_vel[j], int(ids[i]), bp, cp)
        except FtmpError as exc:
            raise AgentStepError(int(ids[i]), t, exc) from exc
        cmds[i] = cmd
        guards[i] = GUARD_CODES[guard]
        values[i] = value
        grad_norms[i] = gn
    return cmds, guards, values, grad_norms


def step(roster, bp: BarrierParams, cp: ControlParams, dt: float):
    """One explicit-Euler step of the whole roster against its snapshot.

    Returns (new roster, per-kinetic-agent ControlDecision list in id
    order). Static agents are returned unchanged.
    """
    from .controller import ControlDecision

    kin, sta = _split_roster(roster)
    if not kin:
        return list(roster), []
    kin_pos = np.array([a.position for a in kin])
    all_pos = np.vstack([kin_pos, [a.position for a in sta]]) if sta else kin_pos.copy()
    all_vel = np.vstack([[a.velocity for a in kin], [a.velocity for a in sta]]) \
        if sta else np.array([a.velocity for a in kin])
    goals = np.array([a.goal for a in kin])
    ids = np.array([a.id for a in kin] + [a.id for a in sta])

    dist = _distances(kin_pos, all_pos)
    nb_rows = dist.argmin(axis=1)
    cmds, guards, values, grad_norms = _commands(
        kin_pos, goals, all_pos, all_vel, nb_rows, ids, 0.0, bp, cp)

    new_roster = [AgentState(a.id, kin_pos[i] + dt * cmds[i], cmds[i], a.goal,
                             KINETIC) for i, a in enumerate(kin)] + list(sta)
    decisions = [ControlDecision(cmds[i].copy(), GUARD_NAMES[int(guards[i])],
                                 float(values[i]), float(grad_norms[i]))
                 for i in range(len(kin))]
    return new_roster, decisions


def run(scenario: Scenario, sc: SimConfig) -> TrajectoryRecord:
    """Integrate the closed loop until all agents reach their goals or t_max.

    Records every sample; emits events for convergence (first entry per
    agent), clearance violations and containment breaches (entry per
    agent/pair), neighbor switches, and ill-conditioned-guard activations
    (transitions). Deterministic: identical inputs give bit-identical
    records. A run that never converges is a valid record, not an error.
    """
    cfg = scenario.config
    bp, cp = cfg.barrier, cfg.control
    kin, sta = _split_roster(cfg.agents)
    n_k = len(kin)
    dim = cfg.dim
    ids = np.array([a.id for a in kin] + [a.id for a in sta])
    all_pos = np.array([a.position for a in kin + sta], dtype=np.float64)
    all_vel = np.array([a.velocity for a in kin + sta], dtype=np.float64)
    goals = np.array([a.goal for a in kin], dtype=np.float64)

    n_steps = int(round(sc.t_max / sc.dt))
    P = np.zeros((n_steps + 1, n_k, dim))
    V = np.zeros((n_steps + 1, n_k, dim))
    NB = np.zeros((n_steps, n_k), dtype=np.int32)
    GU = np.zeros((n_steps, n_k), dtype=np.int8)
    PM = np.zeros(n_steps + 1)

    events: list[Event] = []
    conv_seen: set[int] = set()
    breach_prev = np.zeros(n_k, dtype=bool)
    coll_prev: set[tuple[int, int]] = set()
    guard_prev = np.zeros(n_k, dtype=np.int8)
    nb_prev: np.ndarray | None = None
    converged = False
    k = 0

    while True:
        t = k * sc.dt
        P[k] = all_pos[:n_k]
        V[k] = all_vel[:n_k]
        dist = _distances(all_pos[:n_k], all_pos)
        PM[k] = float(dist.min()) if dist.size else float("inf")

        colliding: set[tuple[int, int]] = set()
        if np.isfinite(PM[k]) and PM[k] <= bp.d_c:
            rows, cols = np.nonzero(dist <= bp.d_c)
            for i, j in zip(rows, cols):
                a, b = int(ids[i]), int(ids[j])
                pair = (min(a, b), max(a, b))
                if pair in colliding:
                    continue
                colliding.add(pair)
                if pair not in coll_prev:
                    events.append(Event(t, EVENT_COLLISION, pair[0],
                                        f"pair=({pair[0]},{pair[1]}) "
                                        f"distance={dist[i, j]!r}"))
        coll_prev = colliding

        radii = np.sqrt((all_pos[:n_k] ** 2).sum(-1))
        breach_now = radii > cfg.R
        for i in np.nonzero(breach_now & ~breach_prev)[0]:
            events.append(Event(t, EVENT_CONTAINMENT_BREACH, int(ids[i]),
                                f"radius={radii[i]!r}"))
        breach_prev = breach_now

        drem = np.sqrt(((all_pos[:n_k] - goals) ** 2).sum(-1))
        inside = drem <= sc.conv_tol
        for i in np.nonzero(inside)[0]:
            aid = int(ids[i])
            if aid not in conv_seen:
                conv_seen.add(aid)
                events.append(Event(t, EVENT_CONVERGED, aid,
                                    f"distance={drem[i]!r}"))
        if bool(inside.all()):
            converged = True
            break
        if k == n_steps:
            break
        if sc.abort_on_collision and colliding:
            break

        nb_rows = dist.argmin(axis=1)
        if nb_prev is not None:
            for i in np.nonzero(nb_rows != nb_prev)[0]:
                events.append(Event(t, EVENT_NEIGHBOR_SWITCH, int(ids[i]),
                                    f"from={int(ids[nb_prev[i]])} "
                                    f"to={int(ids[nb_rows[i]])}"))
        cmds, guards, _, _ = _commands(all_pos[:n_k], goals, all_pos, all_vel,
                                       nb_rows, ids, t, bp, cp)
        for i in range(n_k):
            if guards[i] in _EVENTED_GUARDS and guards[i] != guard_prev[i]:
                events.append(Event(t, EVENT_GUARD, int(ids[i]),
                                    GUARD_NAMES[int(guards[i])]))
        guard_prev = guards
        NB[k] = ids[nb_rows]
        GU[k] = guards
        all_pos[:n_k] = all_pos[:n_k] + sc.dt * cmds
        all_vel[:n_k] = cmds
        nb_prev = nb_rows
        k += 1

    times = np.arange(k + 1, dtype=np.float64) * sc.dt
    times.setflags(write=False)
    return TrajectoryRecord(
        scenario=scenario, sim=sc, times=times,
        positions=P[:k + 1].copy(), velocities=V[:k + 1].copy(),
        step_neighbor_ids=NB[:k].copy(), step_guards=GU[:k].copy(),
        pairwise_min=PM[:k + 1].copy(), events=tuple(events),
        converged=converged)
