"""Scenario construction: boundary ring, neighbor queries, bundled benchmarks.

The arena is a disk of radius R fenced by a ring of static agents spaced so
that their center-to-center chord does not exceed d_c; a kinetic agent that
keeps clearance from the two nearest ring agents cannot cross the fence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (EmptyRoster, InvalidGeometry, PlacementFailure, UnknownLabel)
from .model import (AgentState, BarrierParams, ControlParams, WorldConfig,
                    kinetic_state, static_state, validate_config)

DEFAULT_R = 98.0
DEFAULT_AGENT_RADIUS = 0.99

# Bundled benchmark scenarios: a 4-agent and a 20-agent ring crossing.
# Placement is seeded: evenly spaced slots on a circle with jittered angles
# and radii, each goal the antipode of the slot a quarter turn ahead. The
# quarter-turn assignment keeps all transit chords inside an annulus, so
# encounters stay pairwise instead of piling up at the center.
PRESETS = {
    "example1": dict(n=4, radius_frac=0.12, dt=1e-3),
    "example2": dict(n=20, radius_frac=0.14, dt=2e-3),
}
DEFAULT_DT = {label: entry["dt"] for label, entry in PRESETS.items()}
DEFAULT_DT["random"] = 1e-3

_ANGLE_JITTER_FRAC = 0.2   # of one slot
_RADIUS_JITTER_FRAC = 0.1


@dataclass(frozen=True)
class Scenario:
    """A validated world configuration with a human-readable label."""

    config: WorldConfig
    label: str


def build_boundary_ring(R: float, r: float, d_c: float, *, start_id: int = 0,
                        dim: int = 2) -> list[AgentState]:
    """Static fence agents on the circle of radius R, chord spacing <= d_c.

    The count is ceil(2 pi R / d_c), which makes the arc (hence the chord)
    between adjacent centers at most d_c.
    """
    if not (R > r > 0.0):
        raise InvalidGeometry(f"need R > r > 0, got R={R}, r={r}")
    if not (d_c > 2.0 * r):
        raise InvalidGeometry(f"need d_c > 2r, got d_c={d_c}, r={r}")
    if dim < 2:
        raise InvalidGeometry("the ring needs dim >= 2")
    m = math.ceil(2.0 * math.pi * R / d_c)
    agents = []
    for k in range(m):
        theta = 2.0 * math.pi * k / m
        pos = np.zeros(dim)
        pos[0] = R * math.cos(theta)
        pos[1] = R * math.sin(theta)
        agents.append(static_state(start_id + k, pos))
    return agents


def nearest_neighbor(agent: AgentState, others) -> AgentState:
    """The roster member minimizing the distance to `agent`; ties to lowest id."""
    others = list(others)
    if not others:
        raise EmptyRoster("no candidate neighbors")
    best = None
    best_key = None
    for o in others:
        d = float(np.linalg.norm(agent.position - o.position))
        key = (d, o.id)
        if best_key is None or key < best_key:
            best, best_key = o, key
    return best


def make_scenario(positions, goals, *, label: str, seed: int = 0,
                  R: float = DEFAULT_R, r: float = DEFAULT_AGENT_RADIUS,
                  barrier: BarrierParams | None = None,
                  control: ControlParams | None = None,
                  extra_static=(), include_ring: bool = True) -> Scenario:
    """Assemble and validate a scenario from kinetic start/goal lists.

    Kinetic agents get ids 0..N-1, any extra static agents follow, and the
    boundary ring takes the remaining ids. Raises InvalidGeometry when the
    assembled configuration fails validation.
    """
    barrier = barrier or BarrierParams()
    control = control or ControlParams()
    positions = [np.asarray(p, dtype=np.float64) for p in positions]
    goals = [np.asarray(g, dtype=np.float64) for g in goals]
    if len(positions) != len(goals):
        raise InvalidGeometry("positions and goals must pair up")
    n = len(positions)
    agents = [kinetic_state(i, positions[i], goals[i]) for i in range(n)]
    next_id = n
    for p in extra_static:
        agents.append(static_state(next_id, p))
        next_id += 1
    ring = build_boundary_ring(R, r, barrier.d_c, start_id=next_id,
                               dim=positions[0].size) if include_ring else []
    agents += ring
    cfg = WorldConfig(R=R, r=r, M=len(agents) - n, N=n, agents=tuple(agents),
                      barrier=barrier, control=control, seed=seed)
    violations = validate_config(cfg)
    if violations:
        text = "; ".join(v.message for v in violations[:5])
        raise InvalidGeometry(f"invalid scenario ({len(violations)} violations): {text}")
    return Scenario(cfg, label)


def _ring_placement(n: int, radius: float, rng) -> tuple[np.ndarray, np.ndarray]:
    slot = 2.0 * math.pi / n
    angles = slot * np.arange(n) + rng.uniform(-_ANGLE_JITTER_FRAC * slot,
                                               _ANGLE_JITTER_FRAC * slot, n)
    radii = radius * (1.0 + rng.uniform(-_RADIUS_JITTER_FRAC,
                                        _RADIUS_JITTER_FRAC, n))
    positions = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    twist = max(1, n // 4)
    goals = -np.roll(positions, -twist, axis=0)
    return positions, goals


def preset(label: str, seed: int = 1) -> Scenario:
    """One of the bundled benchmark scenarios ("example1" or "example2").

    Both use d_c=2, epsilon=1e4, alpha=1/3, k1=1, agent radius 0.99 and arena
    radius 98; they differ in agent count and suggested time step (see
    DEFAULT_DT). Placement is deterministic in the seed; draws violating the
    pairwise separation requirements are retried with a derived seed.
    """
    if label not in PRESETS:
        raise UnknownLabel(f"unknown scenario label {label!r}")
    entry = PRESETS[label]
    n = entry["n"]
    radius = entry["radius_frac"] * DEFAULT_R
    for attempt in range(64):
        rng = np.random.default_rng([int(seed), n, attempt])
        positions, goals = _ring_placement(n, radius, rng)
        try:
            return make_scenario(positions, goals, label=label, seed=seed)
        except InvalidGeometry:
            continue
    raise PlacementFailure(f"could not place preset {label!r} for seed {seed}")


def _packing_capacity(disk_radius: float, separation: float) -> int:
    """Hexagonal-packing upper bound for points with pairwise separation."""
    if disk_radius <= 0.0:
        return 0
    return int(0.9069 * (disk_radius + separation / 2.0) ** 2
               / (separation / 2.0) ** 2)


def _sample_separated(n: int, disk_radius: float, separation: float, rng,
                      tries_per_point: int = 2000) -> np.ndarray:
    pts: list[np.ndarray] = []
    for _ in range(n):
        for _ in range(tries_per_point):
            radius = disk_radius * math.sqrt(rng.random())
            theta = 2.0 * math.pi * rng.random()
            cand = np.array([radius * math.cos(theta), radius * math.sin(theta)])
            if all(float(np.linalg.norm(cand - q)) > separation for q in pts):
                pts.append(cand)
                break
        else:
            raise PlacementFailure(
                f"separation {separation} infeasible after {tries_per_point} "
                f"tries ({len(pts)}/{n} placed)")
    return np.array(pts)


def random_scenario(n: int, seed: int, overrides: dict | None = None) -> Scenario:
    """Seeded random scenario: N starts and goals with 2*d_c margins.

    Positions and goals are rejection-sampled inside radius R - r - d_c with
    pairwise separations above twice the clearance distance (headroom for
    the single-nearest-neighbor law). Deterministic in the seed; raises
    PlacementFailure when the requested density is infeasible.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    overrides = dict(overrides or {})
    barrier = BarrierParams(d_c=overrides.pop("d_c", 2.0),
                            epsilon=overrides.pop("epsilon", 1e4))
    control = ControlParams(k1=overrides.pop("k1", 1.0),
                            alpha=overrides.pop("alpha", 1.0 / 3.0))
    R = overrides.pop("R", DEFAULT_R)
    r = overrides.pop("r", DEFAULT_AGENT_RADIUS)
    if overrides:
        raise ValueError(f"unknown overrides {sorted(overrides)}")
    disk = R - r - barrier.d_c
    if n > _packing_capacity(disk, 2.0 * barrier.d_c):
        raise PlacementFailure(
            f"{n} agents cannot fit at separation {2 * barrier.d_c} in radius {disk}")
    rng = np.random.default_rng([int(seed), n])
    positions = _sample_separated(n, disk, 2.0 * barrier.d_c, rng)
    goals = _sample_separated(n, disk, 2.0 * barrier.d_c, rng)
    return make_scenario(positions, goals, label="random", seed=seed,
                         R=R, r=r, barrier=barrier, control=control)


def rotate_scenario(scenario: Scenario, Q) -> Scenario:
    """Apply a linear isometry to every position, velocity and goal."""
    Q = np.asarray(Q, dtype=np.float64)
    dim = scenario.config.dim
    if Q.shape != (dim, dim):
        raise ValueError(f"rotation must be {dim}x{dim}")
    cfg = scenario.config
    agents = tuple(
        AgentState(a.id, Q @ a.position, Q @ a.velocity, Q @ a.goal, a.kind)
        for a in cfg.agents)
    new_cfg = WorldConfig(R=cfg.R, r=cfg.r, M=cfg.M, N=cfg.N, agents=agents,
                          barrier=cfg.barrier, control=cfg.control, seed=cfg.seed)
    return Scenario(new_cfg, scenario.label)
