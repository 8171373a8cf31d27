"""The finite-time feedback law, its descent rate, and the settling bound.

The command for a kinetic agent against its nearest neighbor is

    v = -k1 ||g||^(alpha-1) g  +  (1 - 2 (x-goal)^T v_nb / (slack * g^T v_nb)) v_nb

with g the own-position barrier gradient. The power term is evaluated as
||g||^alpha * unit(g) (zero at g = 0). The correction term contains a
division by g^T v_nb; it is dropped (and the drop logged via the guard
code) whenever the neighbor is static, the dot product is relatively tiny,
or the resulting term would dwarf the damping term. Pure functions of
value inputs; safe to evaluate in parallel against a state snapshot.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import InvalidConstant
from .model import (AgentState, BarrierParams, ControlParams, KINETIC,
                    RealVec, dot, sqnorm, vnorm)
from .barrier import barrier_value

GUARD_NONE = "none"
GUARD_AT_GOAL = "at_goal"
GUARD_NEIGHBOR_STATIC = "neighbor_static"
GUARD_DOT_PRODUCT_SMALL = "dot_product_small"
GUARD_GRAD_SPURIOUS_ZERO = "grad_spurious_zero"

GUARD_CODES = {
    GUARD_NONE: 0,
    GUARD_AT_GOAL: 1,
    GUARD_NEIGHBOR_STATIC: 2,
    GUARD_DOT_PRODUCT_SMALL: 3,
    GUARD_GRAD_SPURIOUS_ZERO: 4,
}
GUARD_NAMES = {v: k for k, v in GUARD_CODES.items()}

# Guards under which the closed-loop descent identity is expected to hold.
CLEAN_GUARDS = (GUARD_CODES[GUARD_NONE], GUARD_CODES[GUARD_AT_GOAL],
                GUARD_CODES[GUARD_NEIGHBOR_STATIC])


@dataclass(frozen=True)
class ControlDecision:
    """Velocity command plus the guard taken and the audit quantities."""

    velocity_command: RealVec
    guard_fired: str
    lyapunov_value: float
    grad_norm: float


@dataclass(frozen=True)
class FtsEstimate:
    """Constants of the finite-time descent inequality dV/dt <= -c V^beta."""

    beta: float
    c: float
    settling_time_bound: float
    gradient_floor: float


def power_damping(grad, k1: float, alpha: float) -> RealVec:
    """-k1 ||g||^alpha * unit(g), defined as the zero vector at g = 0."""
    g = np.asarray(grad, dtype=np.float64)
    gn = vnorm(g)
    if gn == 0.0:
        return np.zeros_like(g)
    return (-k1 * gn**alpha) * (g / gn)


def _perp_unit(vec: RealVec) -> RealVec:
    """Deterministic unit vector orthogonal to vec (planar 90-degree turn)."""
    if vec.size == 2:
        out = np.array([-vec[1], vec[0]])
        return out / vnorm(out)
    # higher dims: Gram-Schmidt against the least-aligned axis
    unit = vec / vnorm(vec)
    k = int(np.argmin(np.abs(unit)))
    e = np.zeros_like(unit)
    e[k] = 1.0
    out = e - unit[k] * unit
    return out / vnorm(out)


def _control_core(pos, goal, nb_pos, nb_vel, agent_id, bp: BarrierParams,
                  cp: ControlParams):
    """Shared scalar core: (command, guard, lyapunov value, grad norm, slack)."""
    off = pos - goal
    s2 = sqnorm(off)
    if s2 == 0.0:
        return np.zeros_like(pos), GUARD_AT_GOAL, 0.0, 0.0, float("nan")

    ev = barrier_value(pos, goal, nb_pos, bp)
    g = ev.grad_own
    gn = vnorm(g)
    damp = (-cp.k1 * gn**cp.alpha) * (g / gn) if gn > 0.0 else np.zeros_like(g)

    vjn = vnorm(nb_vel)
    if vjn == 0.0:
        cmd, guard = damp, GUARD_NEIGHBOR_STATIC
    else:
        gv = dot(g, nb_vel)
        if abs(gv) < cp.dot_guard_tol * gn * vjn:
            cmd, guard = damp, GUARD_DOT_PRODUCT_SMALL
        else:
            coef = 1.0 - 2.0 * dot(off, nb_vel) / (ev.slack * gv)
            if abs(coef) * vjn > cp.corr_cap * cp.k1 * gn**cp.alpha:
                # correction would dwarf the damping term: the division is
                # ill-conditioned here, drop it to keep the command bounded
                cmd, guard = damp, GUARD_DOT_PRODUCT_SMALL
            else:
                cmd, guard = damp + coef * nb_vel, GUARD_NONE

    if gn < cp.grad_zero_tol and sqrt(s2) > 1e3 * cp.grad_zero_tol:
        # spurious gradient zero away from the goal: deterministic tangential
        # nudge, sign by agent id parity, to leave the measure-zero set
        sign = 1.0 if agent_id % 2 == 0 else -1.0
        cmd = cmd + sign * cp.grad_zero_tol * _perp_unit(pos - nb_pos)
        guard = GUARD_GRAD_SPURIOUS_ZERO

    return cmd, guard, ev.value, gn, ev.slack


def control_law(agent: AgentState, neighbor: AgentState, bp: BarrierParams,
                cp: ControlParams) -> ControlDecision:
    """Velocity command for a kinetic agent against its nearest neighbor.

    Deterministic: identical inputs produce bit-identical decisions.
    Propagates CoincidentAgents/DenominatorUnderflow from the barrier.
    """
    if agent.kind != KINETIC:
        raise ValueError(f"agent {agent.id} is not kinetic")
    cmd, guard, value, gn, _ = _control_core(
        agent.position, agent.goal, neighbor.position, neighbor.velocity,
        agent.id, bp, cp)
    cmd = cmd.copy()
    cmd.setflags(write=False)
    return ControlDecision(cmd, guard, value, gn)


def lyapunov_rate(agent: AgentState, neighbor: AgentState, bp: BarrierParams,
                  cp: ControlParams) -> float:
    """Closed-loop time derivative of the barrier along the commanded motion.

    Returns grad_own . v_self + grad_neighbor . v_nb. With no guard fired
    this cancels to -k1 ||grad_own||^(alpha+1) exactly (up to rounding); with
    a static neighbor the identity holds with the second term zero.
    """
    decision = control_law(agent, neighbor, bp, cp)
    off = agent.position - agent.goal
    if sqnorm(off) == 0.0:
        return 0.0
    ev = barrier_value(agent.position, agent.goal, neighbor.position, bp)
    return (dot(ev.grad_own, decision.velocity_command)
            + dot(ev.grad_neighbor, neighbor.velocity))


def fts_estimate(v0: float, cp: ControlParams, bp: BarrierParams,
                 gradient_floor: float) -> FtsEstimate:
    """Settling-time bound from the finite-time descent inequality.

    With beta = (alpha+1)/2 and c = k1 * floor^(alpha+1) / epsilon^((alpha+1)/2),
    a trajectory starting at value v0 reaches zero no later than
    v0^(1-beta) / (c (1-beta)). The floor is the numerically estimated lower
    bound of ||grad|| / ||x - goal|| over the operating domain.
    """
    if gradient_floor <= 0.0:
        raise InvalidConstant(f"gradient floor must be positive, got {gradient_floor}")
    if v0 < 0.0:
        raise InvalidConstant(f"initial value must be nonnegative, got {v0}")
    beta = (cp.alpha + 1.0) / 2.0
    c = cp.k1 * gradient_floor ** (cp.alpha + 1.0) / bp.epsilon ** ((cp.alpha + 1.0) / 2.0)
    bound = 0.0 if v0 == 0.0 else v0 ** (1.0 - beta) / (c * (1.0 - beta))
    return FtsEstimate(beta, c, bound, gradient_floor)
