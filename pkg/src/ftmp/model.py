"""Domain types and configuration validation.

All types are immutable value objects (frozen dataclasses over read-only
float64 arrays), safe to share between threads. Vectors are plain numpy
arrays; positions and goals are in meters, velocities in meters/second,
and every formula is written dimension-agnostically (the bundled
scenarios are planar).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

RealVec = np.ndarray

KINETIC = "kinetic"
STATIC = "static"


def dot(u: RealVec, v: RealVec) -> float:
    """Plain multiply-and-add dot product.

    Deliberately avoids BLAS ddot, whose fused multiply-adds are not
    invariant under component permutation; with this form, axis-swapping
    isometries (e.g. quarter-turn rotations in the plane) commute with the
    whole closed loop bit for bit.
    """
    return float((u * v).sum())


def sqnorm(v: RealVec) -> float:
    return float((v * v).sum())


def vnorm(v: RealVec) -> float:
    return math.sqrt(sqnorm(v))


def as_vec(x, dim: int | None = None) -> RealVec:
    """Coerce to a read-only float64 vector, rejecting NaN/Inf and rank != 1.

    When `dim` is given the length must match; this is how the "one dim per
    scenario" rule is enforced at construction boundaries.
    """
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector component in {v!r}")
    if dim is not None and v.size != dim:
        raise ValueError(f"expected dim {dim}, got {v.size}")
    if v is x and isinstance(x, np.ndarray):
        v = v.copy()
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class BarrierParams:
    """Clearance distance, envelope constant and the slack guard floor."""

    d_c: float = 2.0
    epsilon: float = 1e4
    x0_floor: float = 1e-12

    def __post_init__(self):
        if not (self.d_c > 0.0):
            raise ValueError("d_c must be positive")
        if not (self.epsilon >= 1.0):
            raise ValueError("epsilon must be >= 1")
        if not (self.x0_floor > 0.0):
            raise ValueError("x0_floor must be positive")


@dataclass(frozen=True)
class ControlParams:
    """Feedback gain, power-law exponent and the numeric guard tolerances.

    corr_cap bounds the neighbor-velocity correction term at corr_cap times
    the damping term's magnitude; beyond that the correction is dropped and
    logged (the division it contains is ill-conditioned there).
    """

    k1: float = 1.0
    alpha: float = 1.0 / 3.0
    dot_guard_tol: float = 1e-6
    grad_zero_tol: float = 1e-9
    corr_cap: float = 10.0

    def __post_init__(self):
        if not (self.k1 > 0.0):
            raise ValueError("k1 must be positive")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must lie in (0, 1)")
        if not (self.dot_guard_tol > 0.0 and self.grad_zero_tol > 0.0):
            raise ValueError("guard tolerances must be positive")
        if not (self.corr_cap > 0.0):
            raise ValueError("corr_cap must be positive")


@dataclass(frozen=True, eq=False)
class AgentState:
    """One agent: position, velocity, goal and its kinetic/static flag.

    Static agents represent fixed infrastructure (the boundary ring); their
    velocity is zero and their goal equals their position for all time.
    """

    id: int
    position: RealVec
    velocity: RealVec
    goal: RealVec
    kind: str

    def __post_init__(self):
        p = as_vec(self.position)
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "velocity", as_vec(self.velocity, p.size))
        object.__setattr__(self, "goal", as_vec(self.goal, p.size))
        if self.kind not in (KINETIC, STATIC):
            raise ValueError(f"unknown agent kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return self.position.size


def kinetic_state(agent_id: int, position, goal, velocity=None) -> AgentState:
    pos = as_vec(position)
    vel = np.zeros(pos.size) if velocity is None else velocity
    return AgentState(agent_id, pos, vel, goal, KINETIC)


def static_state(agent_id: int, position) -> AgentState:
    pos = as_vec(position)
    return AgentState(agent_id, pos, np.zeros(pos.size), pos, STATIC)


@dataclass(frozen=True)
class WorldConfig:
    """Arena geometry plus the full agent roster and shared parameters."""

    R: float
    r: float
    M: int
    N: int
    agents: tuple[AgentState, ...]
    barrier: BarrierParams
    control: ControlParams
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        if not (self.R > 0.0 and self.r > 0.0):
            raise ValueError("R and r must be positive")
        if int(self.seed) < 0:
            raise ValueError("seed must be unsigned")

    @property
    def dim(self) -> int:
        return self.agents[0].dim if self.agents else 2

    def kinetic_agents(self) -> list[AgentState]:
        return [a for a in self.agents if a.kind == KINETIC]

    def static_agents(self) -> list[AgentState]:
        return [a for a in self.agents if a.kind == STATIC]


@dataclass(frozen=True)
class Violation:
    """One invariant breach: a stable code, a message, and the agents involved."""

    code: str
    message: str
    agent_ids: tuple[int, ...] = ()


def _pairwise_too_close(points, ids_a, points_b, ids_b, limit, code, what):
    """Violations for pairs closer than `limit` (cross or self pair set)."""
    out = []
    for i in range(len(points)):
        for j in range(len(points_b)):
            if ids_b[j] <= ids_a[i] and ids_b is ids_a:
                continue  # each unordered pair once
            d = float(np.linalg.norm(points[i] - points_b[j]))
            if d <= limit:
                out.append(Violation(
                    code,
                    f"{what} distance {d:.6g} <= d_c between agents "
                    f"{ids_a[i]} and {ids_b[j]}",
                    (ids_a[i], ids_b[j]),
                ))
    return out


def validate_config(cfg: WorldConfig) -> list[Violation]:
    """Check every WorldConfig invariant; violations are data, not errors.

    Pure: identical input yields identical output. An empty list means the
    configuration is safe to hand to the barrier, controller and simulator
    at the initial time. Pair constraints apply to pairs involving at least
    one kinetic agent; the boundary ring is deliberately spaced at or below
    d_c and is excluded from the static-static comparison.
    """
    out: list[Violation] = []
    bp = cfg.barrier

    ids = [a.id for a in cfg.agents]
    if len(set(ids)) != len(ids):
        dupes = tuple(sorted({i for i in ids if ids.count(i) > 1}))
        out.append(Violation("duplicate-id", f"duplicate agent ids {dupes}", dupes))

    dims = {a.dim for a in cfg.agents}
    if len(dims) > 1:
        out.append(Violation("dim-mismatch", f"mixed dims {sorted(dims)}"))
        return out  # geometry below assumes one dim

    kin = cfg.kinetic_agents()
    sta = cfg.static_agents()

    if len(kin) != cfg.N:
        out.append(Violation("roster-counts", f"N={cfg.N} but {len(kin)} kinetic agents"))
    if len(sta) != cfg.M:
        out.append(Violation("roster-counts", f"M={cfg.M} but {len(sta)} static agents"))

    if not (bp.d_c > 2.0 * cfg.r):
        out.append(Violation("clearance-radius",
                             f"d_c={bp.d_c} must exceed 2r={2*cfg.r}"))
    if not (1.0 / bp.epsilon < bp.d_c):
        out.append(Violation("epsilon-slack",
                             f"1/epsilon={1/bp.epsilon} must be < d_c={bp.d_c}"))

    for a in sta:
        if np.any(a.velocity != 0.0):
            out.append(Violation("static-moving",
                                 f"static agent {a.id} has nonzero velocity", (a.id,)))
        if np.any(a.goal != a.position):
            out.append(Violation("static-goal",
                                 f"static agent {a.id} goal differs from position", (a.id,)))

    for a in kin:
        if float(np.linalg.norm(a.position)) >= cfg.R - cfg.r:
            out.append(Violation("containment",
                                 f"kinetic agent {a.id} at radius "
                                 f"{np.linalg.norm(a.position):.6g} >= R-r={cfg.R - cfg.r}",
                                 (a.id,)))

    kin_pos = [a.position for a in kin]
    kin_ids = [a.id for a in kin]
    out += _pairwise_too_close(kin_pos, kin_ids, kin_pos, kin_ids,
                               bp.d_c, "pairwise-distance", "initial")
    sta_pos = [a.position for a in sta]
    sta_ids = [a.id for a in sta]
    for i in range(len(kin_pos)):
        for j in range(len(sta_pos)):
            d = float(np.linalg.norm(kin_pos[i] - sta_pos[j]))
            if d <= bp.d_c:
                out.append(Violation("pairwise-distance",
                                     f"initial distance {d:.6g} <= d_c between agents "
                                     f"{kin_ids[i]} and {sta_ids[j]}",
                                     (kin_ids[i], sta_ids[j])))

    kin_goals = [a.goal for a in kin]
    out += _pairwise_too_close(kin_goals, kin_ids, kin_goals, kin_ids,
                               bp.d_c, "goal-distance", "goal")
    return out
