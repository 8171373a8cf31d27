"""Numerical verification suite: oracles, scans, and machine-checkable audits.

Everything here is read-only over immutable inputs. The independent oracles
(finite differences, grid search, low-discrepancy sampling) deliberately do
not share code paths with the analytic formulas they check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barrier import barrier_value, mirror_image_candidate, stationary_points
from .controller import CLEAN_GUARDS, _control_core, fts_estimate
from .errors import (DegenerateDomain, FtmpError, InsufficientData,
                     StencilOutOfDomain)
from .model import BarrierParams, ControlParams, RealVec, as_vec
from .sim import TrajectoryRecord


# --------------------------------------------------------------------------
# independent oracles

def finite_difference_gradient(f, x, h: float = 1e-6) -> RealVec:
    """Central-difference gradient of a scalar field, O(h^2) accurate.

    Raises StencilOutOfDomain when any stencil point violates the field's
    preconditions (signalled by the field raising a package error).
    """
    x = as_vec(x)
    if not (h > 0.0):
        raise ValueError("h must be positive")
    g = np.zeros_like(x)
    for k in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[k] += h
        xm[k] -= h
        try:
            g[k] = (f(xp) - f(xm)) / (2.0 * h)
        except FtmpError as exc:
            raise StencilOutOfDomain(f"stencil point at component {k}: {exc}") from exc
    return g


@dataclass(frozen=True)
class Box:
    """Axis-aligned sampling box."""

    lo: RealVec
    hi: RealVec

    def __post_init__(self):
        lo = as_vec(self.lo)
        hi = as_vec(self.hi, lo.size)
        if not np.all(hi > lo):
            raise ValueError("box must have positive extent")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def contains(self, point) -> bool:
        p = as_vec(point, self.lo.size)
        return bool(np.all(p >= self.lo) and np.all(p <= self.hi))


def _grad_norm_field(points: np.ndarray, goal: np.ndarray, nb: np.ndarray,
                     bp: BarrierParams):
    """Vectorized ||grad_own||, separation and goal distance over points."""
    d = points - nb
    sep = np.sqrt((d * d).sum(-1))
    slack = sep - bp.d_c + 1.0 / bp.epsilon
    off = points - goal
    s2 = (off * off).sum(-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        gx = 2.0 * off / slack[..., None] - (s2 / slack**2)[..., None] * d / sep[..., None]
    gn = np.sqrt((gx * gx).sum(-1))
    return gn, sep, np.sqrt(s2)


def _sobol_points(n: int, box: Box) -> np.ndarray:
    """First 2^ceil(log2 n) unscrambled Sobol points scaled into the box.

    Power-of-two counts keep the sequence balanced and give the prefix
    property (doubling the count extends the same point set).
    """
    from scipy.stats import qmc

    m = max(1, math.ceil(math.log2(n)))
    eng = qmc.Sobol(d=box.lo.size, scramble=False)
    pts = eng.random_base2(m)
    return box.lo + pts * (box.hi - box.lo)


def estimate_gradient_floor(goal, neighbor_pos, bp: BarrierParams, domain: Box,
                            exclusion_radius: float, samples: int = 100_000) -> float:
    """Sampled lower bound of ||grad|| / ||x - goal|| over the domain.

    Excludes balls of `exclusion_radius` around the certified stationary
    points and around the neighbor's unsafe disk (separation below
    d_c + exclusion_radius), where the ratio legitimately vanishes or the
    field is out of domain. Strictly positive on a nondegenerate domain.
    """
    goal = as_vec(goal)
    nb = as_vec(neighbor_pos, goal.size)
    if not domain.contains(goal):
        raise ValueError("domain must contain the goal")
    if not (exclusion_radius > 0.0):
        raise ValueError("exclusion_radius must be positive")
    if samples < 10_000:
        raise ValueError("need at least 1e4 samples")

    pts = _sobol_points(samples, domain)
    gn, sep, sn = _grad_norm_field(pts, goal, nb, bp)
    keep = (sep > bp.d_c + exclusion_radius) & (sn > 0.0)
    for sp in stationary_points(goal, nb, bp):
        keep &= np.sqrt(((pts - sp.location) ** 2).sum(-1)) > exclusion_radius
    if not keep.any():
        raise DegenerateDomain("all samples excluded")
    return float((gn[keep] / sn[keep]).min())


@dataclass(frozen=True)
class GridScan:
    """Interior local minima of ||grad_own|| on a regular grid."""

    points: np.ndarray   # (n_minima, dim)
    values: np.ndarray   # (n_minima,)
    cell: np.ndarray     # grid spacing per axis


def grid_gradient_minima(goal, neighbor_pos, bp: BarrierParams, box: Box,
                         n: int = 400) -> GridScan:
    """Exhaustive 2-D grid search for local minima of the gradient norm.

    Grid points inside the neighbor's clearance disk are masked out; border
    points are not eligible. An 8-neighborhood non-strict minimum test is
    used, so a true minimum straddling a grid line reports both cells.
    """
    goal = as_vec(goal)
    nb = as_vec(neighbor_pos, 2)
    if goal.size != 2:
        raise ValueError("grid scan is 2-D")
    xs = np.linspace(box.lo[0], box.hi[0], n)
    ys = np.linspace(box.lo[1], box.hi[1], n)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([X, Y], axis=-1)
    gn, sep, _ = _grad_norm_field(pts, goal, nb, bp)
    gn = np.where(sep > bp.d_c, gn, np.inf)

    center = gn[1:-1, 1:-1]
    is_min = np.isfinite(center)
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            if dx == 0 and dy == 0:
                continue
            is_min &= center <= gn[1 + dx:n - 1 + dx, 1 + dy:n - 1 + dy]
    ii, jj = np.nonzero(is_min)
    points = np.stack([xs[ii + 1], ys[jj + 1]], axis=-1)
    values = center[ii, jj]
    cell = np.array([xs[1] - xs[0], ys[1] - ys[0]])
    return GridScan(points, values, cell)


# --------------------------------------------------------------------------
# record scans

def _neighbor_position_series(record: TrajectoryRecord, nb_ids: np.ndarray,
                              sample_index: np.ndarray) -> np.ndarray:
    """Positions of given neighbor ids at given samples (vectorized)."""
    cfg = record.scenario.config
    kin_ids = record.kinetic_ids
    sta = cfg.static_agents()
    max_id = int(max([*kin_ids, *(a.id for a in sta)], default=-1))
    kin_col = np.full(max_id + 1, -1, dtype=np.int64)
    kin_col[kin_ids] = np.arange(kin_ids.size)
    sta_row = np.full(max_id + 1, -1, dtype=np.int64)
    sta_pos = np.array([a.position for a in sta]) if sta \
        else np.zeros((0, cfg.dim))
    for row, a in enumerate(sta):
        sta_row[a.id] = row

    nb_ids = np.asarray(nb_ids, dtype=np.int64)
    sample_index = np.asarray(sample_index, dtype=np.int64)
    out = np.empty((nb_ids.size, cfg.dim))
    is_kin = kin_col[nb_ids] >= 0
    if is_kin.any():
        out[is_kin] = record.positions[sample_index[is_kin], kin_col[nb_ids[is_kin]]]
    if (~is_kin).any():
        out[~is_kin] = sta_pos[sta_row[nb_ids[~is_kin]]]
    return out


def _barrier_series(positions: np.ndarray, goal: np.ndarray,
                    nb_positions: np.ndarray, bp: BarrierParams):
    """Vectorized barrier values and own-gradient norms along one agent."""
    d = positions - nb_positions
    sep = np.sqrt((d * d).sum(-1))
    slack = sep - bp.d_c + 1.0 / bp.epsilon
    off = positions - goal
    s2 = (off * off).sum(-1)
    values = s2 / slack
    gx = 2.0 * off / slack[:, None] - (s2 / slack**2)[:, None] * d / sep[:, None]
    gn = np.sqrt((gx * gx).sum(-1))
    return values, gn, sep, np.sqrt(s2)


def sample_neighbor_ids(record: TrajectoryRecord) -> np.ndarray:
    """Nearest-neighbor id per (sample, kinetic agent).

    For samples 0..T-2 this is exactly the neighbor the step used; the last
    sample's neighbor is recomputed from the final snapshot.
    """
    cfg = record.scenario.config
    kin = cfg.kinetic_agents()
    sta = cfg.static_agents()
    n_k = len(kin)
    T = record.n_samples
    out = np.empty((T, n_k), dtype=np.int32)
    if T > 1:
        out[:-1] = record.step_neighbor_ids
    ids = np.array([a.id for a in kin] + [a.id for a in sta])
    last_kin = record.positions[-1]
    all_pos = np.vstack([last_kin] + [a.position[None, :] for a in sta]) \
        if sta else last_kin
    diff = last_kin[:, None, :] - all_pos[None, :, :]
    dist = np.sqrt((diff * diff).sum(-1))
    dist[np.arange(n_k), np.arange(n_k)] = np.inf
    out[-1] = ids[dist.argmin(axis=1)]
    return out


@dataclass(frozen=True)
class DescentScan:
    """Residuals of the closed-loop descent identity over one record.

    residual[k] = |dB/dt + k1 ||grad||^(alpha+1)| for each included step;
    steps with a neighbor switch or a non-clean guard are excluded and
    counted. dt_coefficient = max_residual / dt (the empirical constant of
    the O(dt) discretization error). value_deltas carries the signed per-step
    dB for aggregate descent checks.
    """

    agent_ids: np.ndarray
    step_index: np.ndarray
    residuals: np.ndarray
    rel_errors: np.ndarray
    value_deltas: np.ndarray
    values: np.ndarray
    max_residual: float
    mean_residual: float
    dt_coefficient: float
    n_included: int
    n_excluded_switch: int
    n_excluded_guard: int


def descent_identity_scan(record: TrajectoryRecord) -> DescentScan:
    """Audit dB/dt = -k1 ||grad||^(alpha+1) step by step over a record.

    The per-step identity is exact in continuous time; in the recorded loop
    it carries an O(dt) Euler term plus, when the neighbor is kinetic, the
    one-step velocity delay. Residuals are reported, not judged, here.
    """
    cfg = record.scenario.config
    bp, cp = cfg.barrier, cfg.control
    dt = record.sim.dt
    T = record.n_samples
    kin_ids = record.kinetic_ids
    goals = record.goals

    all_ids, all_steps, all_res, all_rel, all_db, all_b = [], [], [], [], [], []
    n_switch = n_guard = 0
    empty = np.array([])
    if T < 2:
        return DescentScan(np.array([], int), np.array([], int), empty, empty,
                           empty, empty, 0.0, 0.0, 0.0, 0, 0, 0)

    nb_ids = record.step_neighbor_ids
    for col, aid in enumerate(kin_ids):
        steps = np.arange(T - 1)
        same_nb = np.ones(T - 1, dtype=bool)
        if T > 2:
            same_nb[:-1] = nb_ids[1:, col] == nb_ids[:-1, col]
        clean = np.isin(record.step_guards[:, col], CLEAN_GUARDS)
        n_switch += int((~same_nb).sum())
        n_guard += int((~clean & same_nb).sum())
        use = same_nb & clean
        if not use.any():
            continue
        ks = steps[use]
        nb_here = nb_ids[ks, col]
        p_k = record.positions[ks, col]
        p_k1 = record.positions[ks + 1, col]
        nb_k = _neighbor_position_series(record, nb_here, ks)
        nb_k1 = _neighbor_position_series(record, nb_here, ks + 1)
        b_k, gn_k, _, _ = _barrier_series(p_k, goals[col], nb_k, bp)
        b_k1, _, _, _ = _barrier_series(p_k1, goals[col], nb_k1, bp)
        rate = cp.k1 * gn_k ** (cp.alpha + 1.0)
        db = b_k1 - b_k
        res = np.abs(db / dt + rate)
        rel = res / (rate + 1e-12 * np.maximum(1.0, b_k))
        all_ids.append(np.full(ks.size, aid))
        all_steps.append(ks)
        all_res.append(res)
        all_rel.append(rel)
        all_db.append(db)
        all_b.append(b_k)

    if all_res:
        ids_arr = np.concatenate(all_ids)
        steps_arr = np.concatenate(all_steps)
        res_arr = np.concatenate(all_res)
        rel_arr = np.concatenate(all_rel)
        db_arr = np.concatenate(all_db)
        b_arr = np.concatenate(all_b)
    else:
        ids_arr = np.array([], int)
        steps_arr = np.array([], int)
        res_arr = rel_arr = db_arr = b_arr = empty
    max_res = float(res_arr.max()) if res_arr.size else 0.0
    mean_res = float(res_arr.mean()) if res_arr.size else 0.0
    return DescentScan(ids_arr, steps_arr, res_arr, rel_arr, db_arr, b_arr,
                       max_res, mean_res, max_res / dt, int(res_arr.size),
                       n_switch, n_guard)


def barrier_value_series(record: TrajectoryRecord, agent_id: int) -> np.ndarray:
    """Barrier value per sample for one agent, against its nearest neighbor."""
    kin_ids = list(record.kinetic_ids)
    col = kin_ids.index(agent_id)
    nb = sample_neighbor_ids(record)[:, col]
    samples = np.arange(record.n_samples)
    nb_pos = _neighbor_position_series(record, nb, samples)
    values, _, _, _ = _barrier_series(record.positions[:, col],
                                      record.goals[col], nb_pos,
                                      record.scenario.config.barrier)
    return values


def envelope_scan(record: TrajectoryRecord):
    """Count violations of value <= epsilon * goal_distance^2 over a record.

    Returns (n_violations, worst_margin, n_samples_checked); the margin is
    value - epsilon * s^2 (positive means violation beyond the rounding
    cushion of 1e-9 * epsilon). Samples inside the clearance distance are
    outside the envelope's domain and counted as violations of safety by
    the separate distance audit, not here.
    """
    cfg = record.scenario.config
    bp = cfg.barrier
    nb = sample_neighbor_ids(record)
    samples = np.arange(record.n_samples)
    worst = -np.inf
    n_viol = 0
    n_checked = 0
    for col in range(len(record.kinetic_ids)):
        nb_pos = _neighbor_position_series(record, nb[:, col], samples)
        values, _, sep, sn = _barrier_series(record.positions[:, col],
                                             record.goals[col], nb_pos, bp)
        dom = sep >= bp.d_c
        margin = values[dom] - bp.epsilon * sn[dom] ** 2
        if margin.size:
            worst = max(worst, float(margin.max()))
            n_viol += int((margin > 1e-9 * bp.epsilon).sum())
            n_checked += int(margin.size)
    return n_viol, worst, n_checked


def fit_descent_exponent(times, values, floor: float, min_samples: int = 50) -> float:
    """Slope of log(-dV/dt) against log V over the descending samples.

    Only samples with V above `floor` and strictly decreasing count; raises
    InsufficientData below `min_samples` qualifying steps.
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if times.size != values.size or times.size < 2:
        raise InsufficientData("need matching time/value series")
    dv = np.diff(values) / np.diff(times)
    v = values[:-1]
    use = (v > floor) & (dv < 0.0)
    if int(use.sum()) < min_samples:
        raise InsufficientData(f"only {int(use.sum())} qualifying samples")
    slope, _ = np.polyfit(np.log(v[use]), np.log(-dv[use]), 1)
    return float(slope)


def record_descent_exponent(record: TrajectoryRecord, agent_id: int,
                            floor: float | None = None) -> float:
    """Fitted descent exponent of one agent's barrier value in a record."""
    if agent_id not in record.convergence_times():
        raise InsufficientData(f"agent {agent_id} never converged in this record")
    if floor is None:
        floor = record.sim.conv_tol ** 2
    values = barrier_value_series(record, agent_id)
    return fit_descent_exponent(record.times, values, floor)


# --------------------------------------------------------------------------
# findings / reports

@dataclass(frozen=True)
class AuditFinding:
    """One line of an audit report."""

    check: str
    status: str  # PASS | FAIL | INFO
    worst: str
    where: str

    def line(self) -> str:
        return f"check={self.check} status={self.status} worst={self.worst} where={self.where}"


def format_findings(findings) -> str:
    return "\n".join(f.line() for f in findings) + "\n"


def failed(findings) -> list[AuditFinding]:
    return [f for f in findings if f.status == "FAIL"]


def _finding(check, ok, worst, where) -> AuditFinding:
    return AuditFinding(check, "PASS" if ok else "FAIL", repr(worst), where)


def audit_record(record: TrajectoryRecord,
                 expect_digest: str | None = None) -> list[AuditFinding]:
    """Machine-checkable audit of one recorded run."""
    cfg = record.scenario.config
    bp = cfg.barrier
    out = []

    dts = np.diff(record.times)
    ok = bool(dts.size == 0 or (np.abs(dts - record.sim.dt) < 1e-12).all())
    out.append(_finding("time-axis", ok, record.sim.dt, "uniform step spacing"))

    kin = cfg.kinetic_agents()
    init_pos = np.array([a.position for a in kin])
    init_vel = np.array([a.velocity for a in kin])
    ok = bool(np.array_equal(init_pos, record.positions[0])
              and np.array_equal(init_vel, record.velocities[0]))
    out.append(_finding("initial-state", ok, 0.0, "sample 0 equals scenario roster"))

    radii = np.sqrt((record.positions ** 2).sum(-1))
    worst_r = float(radii.max()) if radii.size else 0.0
    out.append(_finding("containment", worst_r < cfg.R, worst_r,
                        f"max kinetic radius vs R={cfg.R}"))

    worst_d = float(record.pairwise_min.min()) if record.pairwise_min.size else float("inf")
    out.append(_finding("safety-distance", worst_d > bp.d_c, worst_d,
                        f"min pairwise distance vs d_c={bp.d_c}"))

    n_viol, worst_m, n_checked = envelope_scan(record)
    out.append(_finding("envelope", n_viol == 0, worst_m,
                        f"{n_checked} samples, {n_viol} violations"))

    scan = descent_identity_scan(record)
    if scan.n_included:
        finite = bool(np.isfinite(scan.residuals).all())
        # aggregate descent per agent over steps where the value is above the
        # goal-reach noise floor; transient gains from the one-step neighbor
        # velocity delay must not accumulate
        floor = record.sim.conv_tol ** 2
        net_ok = True
        worst_net = -np.inf
        for aid in np.unique(scan.agent_ids):
            mask = (scan.agent_ids == aid) & (scan.values > floor)
            if not mask.any():
                continue
            net = float(scan.value_deltas[mask].sum())
            b0 = float(scan.values[mask][0])
            worst_net = max(worst_net, net)
            net_ok &= net <= 1e-6 * max(1.0, b0)
        out.append(_finding("descent-net", finite and net_ok, worst_net,
                            f"summed dB per agent above floor={floor:.1g}"))
        q50 = float(np.quantile(scan.rel_errors, 0.5))
        q99 = float(np.quantile(scan.rel_errors, 0.99))
        out.append(AuditFinding(
            "descent-identity", "INFO", repr(scan.max_residual),
            f"mean={scan.mean_residual:.3g} coef={scan.dt_coefficient:.3g} "
            f"rel_q50={q50:.3g} rel_q99={q99:.3g} n={scan.n_included} "
            f"excl_switch={scan.n_excluded_switch} "
            f"excl_guard={scan.n_excluded_guard}"))
    else:
        out.append(AuditFinding("descent-identity", "INFO", "0", "no included steps"))

    if expect_digest is not None:
        d = record.digest()
        out.append(_finding("digest", d == expect_digest, d[:16],
                            "recomputed vs manifest"))

    conv = record.convergence_times()
    out.append(AuditFinding("convergence", "INFO", repr(len(conv)),
                            f"{len(conv)}/{len(kin)} agents converged"))
    return out


# --------------------------------------------------------------------------
# simulation-free property battery

def _random_safe_states(rng, n, bp, span=50.0, min_margin=0.2):
    """(pos, goal, neighbor) triples with separation > d_c + min_margin."""
    out = []
    while len(out) < n:
        pos = rng.uniform(-span, span, 2)
        goal = rng.uniform(-span, span, 2)
        direction = rng.normal(size=2)
        norm = float(np.linalg.norm(direction))
        if norm == 0.0:
            continue
        sep = bp.d_c + min_margin + rng.uniform(0.0, span)
        nb = pos - sep * direction / norm
        out.append((pos, goal, nb))
    return out


def verification_battery(seed: int = 0) -> list[AuditFinding]:
    """Simulation-free numerical checks of the controller's building blocks.

    Deterministic in the seed: two invocations produce identical reports.
    """
    rng = np.random.default_rng([int(seed), 2**20])
    bp = BarrierParams()
    cp = ControlParams()
    out = []

    # analytic gradients against the central-difference oracle
    states = _random_safe_states(rng, 1000, bp)
    worst = 0.0
    for pos, goal, nb in states:
        ev = barrier_value(pos, goal, nb, bp)
        fd_own = finite_difference_gradient(
            lambda x: barrier_value(x, goal, nb, bp).value, pos)
        fd_nb = finite_difference_gradient(
            lambda x: barrier_value(pos, goal, x, bp).value, nb)
        e1 = float(np.linalg.norm(ev.grad_own - fd_own)
                   / (1.0 + np.linalg.norm(ev.grad_own)))
        e2 = float(np.linalg.norm(ev.grad_neighbor - fd_nb)
                   / (1.0 + np.linalg.norm(ev.grad_neighbor)))
        worst = max(worst, e1, e2)
    out.append(_finding("gradient-oracle", worst <= 1e-5, worst,
                        "1000 random safe states, h=1e-6"))

    # quadratic envelope on the same states
    worst = -np.inf
    ok = True
    for pos, goal, nb in states:
        ev = barrier_value(pos, goal, nb, bp)
        s2 = float((pos - goal) @ (pos - goal))
        margin = ev.value - bp.epsilon * s2
        worst = max(worst, margin)
        ok &= margin <= 1e-9 * bp.epsilon
    out.append(_finding("envelope", bool(ok), worst, "value <= eps*dist^2"))

    # value zero-set: zero exactly at the goal
    ok = True
    for pos, goal, nb in states[:200]:
        ok &= barrier_value(pos, goal, nb, bp).value > 0.0 or bool(np.all(pos == goal))
        ok &= barrier_value(goal, goal, nb, bp).value == 0.0
    out.append(_finding("zero-set", bool(ok), 0.0, "value==0 iff at goal"))

    # command vanishes along a ray into the goal (fixed moving neighbor)
    goal = rng.uniform(-5.0, 5.0, 2)
    ray = rng.normal(size=2)
    ray /= float(np.linalg.norm(ray))
    nb_pos = goal + np.array([3.5, 1.0])
    nb_vel = np.array([0.4, 0.7])
    norms = []
    for s in (1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12):
        cmd, guard, _, _, _ = _control_core(goal + s * ray, goal, nb_pos, nb_vel,
                                            0, bp, cp)
        if guard == "none":
            norms.append(float(np.linalg.norm(cmd)))
    ok = all(b < a for a, b in zip(norms, norms[1:])) and norms and norms[-1] < 1e-3
    out.append(_finding("goal-equilibrium", bool(ok), norms[-1] if norms else -1.0,
                        f"command norm along ray, {len(norms)} scales"))

    # pointwise descent identity with a moving neighbor
    worst = 0.0
    used = 0
    for pos, goal_i, nb in states[:300]:
        vj = rng.normal(size=2)
        cmd, guard, _, gn, _ = _control_core(pos, goal_i, nb, vj, 0, bp, cp)
        if guard != "none":
            continue
        ev = barrier_value(pos, goal_i, nb, bp)
        rate = float(ev.grad_own @ cmd + ev.grad_neighbor @ vj)
        target = -cp.k1 * gn ** (cp.alpha + 1.0)
        worst = max(worst, abs(rate - target) / max(1.0, abs(target)))
        used += 1
    out.append(_finding("descent-identity", worst <= 1e-9 and used > 100, worst,
                        f"{used} unguarded states"))

    # stationary-point certificates + the reflected negative control
    goal0 = np.zeros(2)
    nb0 = np.array([4.0, 0.0])
    worst = 0.0
    ok = True
    for _ in range(50):
        g = rng.uniform(-20.0, 20.0, 2)
        v = rng.uniform(-20.0, 20.0, 2)
        if float(np.linalg.norm(g - v)) < 1e-6:
            continue
        for sp in stationary_points(g, v, bp):
            worst = max(worst, sp.residual / (1.0 + float(np.linalg.norm(sp.location - g))))
    mirror = mirror_image_candidate(goal0, nb0, bp)
    mirror_gn = float(np.linalg.norm(barrier_value(mirror, goal0, nb0, bp).grad_own))
    ok &= worst <= 1e-8 and mirror_gn > 0.5
    out.append(_finding("stationary-points", bool(ok), worst,
                        f"50 instances; reflected control |grad|={mirror_gn:.3g}"))

    # exhaustive grid oracle on the canonical instance
    box = Box(np.array([-15.0, -15.0]), np.array([15.0, 15.0]))
    scan = grid_gradient_minima(goal0, nb0, bp, box, n=400)
    roots = [goal0] + [sp.location for sp in stationary_points(goal0, nb0, bp)]
    stray = 0
    for p in scan.points:
        near = any(np.all(np.abs(p - r) <= scan.cell) for r in roots)
        stray += 0 if near else 1
    out.append(_finding("grid-minima", stray == 0 and scan.points.shape[0] >= 2,
                        stray, f"{scan.points.shape[0]} grid minima vs certified roots"))

    # gradient floor: positive and monotone in the exclusion radius
    floors = [estimate_gradient_floor(goal0, nb0, bp, box, radius, 100_000)
              for radius in (1.0, 0.1, 0.01)]
    ok = floors[0] > 0.0 and floors[0] >= floors[1] >= floors[2] > 0.0
    out.append(_finding("gradient-floor", bool(ok), floors[2],
                        f"radii (1,0.1,0.01) -> {['%.3g' % f for f in floors]}"))

    # settling-bound arithmetic
    est = fts_estimate(1.0, cp, bp, 1.0)
    ok = (est.beta == (cp.alpha + 1.0) / 2.0
          and est.settling_time_bound == 1.0 / (est.c * (1.0 - est.beta))
          and fts_estimate(0.0, cp, bp, 1.0).settling_time_bound == 0.0)
    out.append(_finding("settling-bound", bool(ok), est.settling_time_bound,
                        "closed-form identities"))
    return out
