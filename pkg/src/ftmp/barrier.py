"""The goal/clearance barrier field and its certified stationary points.

The scalar field for one agent against one neighbor is

    B(x) = ||x - goal||^2 / (||x - x_nb|| - d_c + 1/epsilon)

It vanishes exactly at the goal and blows up as the neighbor distance
approaches d_c - 1/epsilon. All functions here are pure and thread-safe.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (CoincidentAgents, DegenerateGeometry, DenominatorUnderflow,
                     DomainViolation)
from .model import BarrierParams, RealVec, as_vec, sqnorm, vnorm


@dataclass(frozen=True)
class BarrierEvaluation:
    """Value, both gradients, the clearance slack, and the safe-region flag.

    `slack` is the denominator ||x - x_nb|| - d_c + 1/epsilon; `in_safe_region`
    is the strict clearance test ||x - x_nb|| > d_c.
    """

    value: float
    grad_own: RealVec
    grad_neighbor: RealVec
    slack: float
    in_safe_region: bool


@dataclass(frozen=True)
class StationaryPoint:
    """A certified zero of the own-position gradient away from the goal."""

    location: RealVec
    in_safe_region: bool
    residual: float


def barrier_value(pos, goal, neighbor_pos, p: BarrierParams) -> BarrierEvaluation:
    """Evaluate the barrier and its analytic gradients at one state.

    Raises CoincidentAgents when pos == neighbor_pos and DenominatorUnderflow
    when the slack falls below p.x0_floor (a constraint violation upstream,
    reported rather than silently evaluated).
    """
    pos = as_vec(pos)
    goal = as_vec(goal, pos.size)
    nb = as_vec(neighbor_pos, pos.size)

    d = pos - nb
    sep = vnorm(d)
    if sep == 0.0:
        raise CoincidentAgents(f"agent and neighbor coincide at {pos}")
    slack = sep - p.d_c + 1.0 / p.epsilon
    if slack < p.x0_floor:
        raise DenominatorUnderflow(
            f"clearance slack {slack:.3e} below floor {p.x0_floor:.3e} "
            f"(separation {sep:.6g}, d_c {p.d_c})")

    off = pos - goal
    s2 = sqnorm(off)
    unit = d / sep
    value = s2 / slack
    grad_own = 2.0 * off / slack - (s2 / slack**2) * unit
    grad_neighbor = (s2 / slack**2) * unit
    return BarrierEvaluation(value, grad_own, grad_neighbor, slack, sep > p.d_c)


def within_quadratic_envelope(pos, goal, neighbor_pos, p: BarrierParams) -> bool:
    """Runtime audit of B <= epsilon * ||x - goal||^2 on the clearance domain.

    Defined for separations >= d_c (raises DomainViolation otherwise). The
    comparison carries a 1e-9 * epsilon absolute cushion for the rounding of
    the equality case at separation exactly d_c.
    """
    pos = as_vec(pos)
    goal = as_vec(goal, pos.size)
    nb = as_vec(neighbor_pos, pos.size)
    sep = vnorm(pos - nb)
    if sep < p.d_c:
        raise DomainViolation(f"separation {sep:.6g} < d_c {p.d_c}")
    ev = barrier_value(pos, goal, neighbor_pos, p)
    s2 = sqnorm(pos - goal)
    return ev.value <= p.epsilon * s2 + 1e-9 * p.epsilon


def _axis_roots(d: float, p: BarrierParams) -> list[float]:
    """Closed-form roots of the collinear gradient equation.

    With u the unit vector from goal to neighbor and x = goal + t*u, the
    gradient vanishes at t solving 2*slack(t) = t * sign(t - d). The far
    branch (t > d) always admits t = 2*(d + d_c - 1/eps). The near branch
    (t < d) admits t = 2*(d - d_c + 1/eps) only while the slack there stays
    positive, i.e. d < d_c - 1/eps.
    """
    inv_eps = 1.0 / p.epsilon
    roots = [2.0 * (d + p.d_c - inv_eps)]
    t_near = 2.0 * (d - p.d_c + inv_eps)
    if t_near < d and -0.5 * t_near >= p.x0_floor:
        roots.append(t_near)
    return roots


def stationary_points(goal, neighbor_pos, p: BarrierParams) -> list[StationaryPoint]:
    """All gradient zeros other than the goal, numerically certified.

    The gradient can only vanish on the line through the goal and the
    neighbor; the scalar equation there is solved in closed form per branch
    and every candidate is re-checked by evaluating the analytic gradient at
    it. Only candidates whose residual passes the certificate bound are
    returned, each flagged with the strict clearance test.
    """
    goal = as_vec(goal)
    nb = as_vec(neighbor_pos, goal.size)
    delta = nb - goal
    d = vnorm(delta)
    if d == 0.0:
        raise DegenerateGeometry("goal and neighbor coincide")
    u = delta / d

    out = []
    for t in _axis_roots(d, p):
        loc = goal + t * u
        ev = barrier_value(loc, goal, nb, p)
        residual = vnorm(ev.grad_own)
        if residual <= 1e-8 * (1.0 + abs(t)):
            loc = loc.copy()
            loc.setflags(write=False)
            out.append(StationaryPoint(loc, ev.in_safe_region, residual))
    return out


def mirror_image_candidate(goal, neighbor_pos, p: BarrierParams) -> RealVec:
    """The reflection-through-the-neighbor look-alike of the far root.

    Swapping the roles of goal and neighbor in the far-root formula yields a
    symmetric-looking point that is NOT a gradient zero; it is kept as a
    negative control for the stationary-point certification.
    """
    goal = as_vec(goal)
    nb = as_vec(neighbor_pos, goal.size)
    d = vnorm(goal - nb)
    if d == 0.0:
        raise DegenerateGeometry("goal and neighbor coincide")
    return nb + 2.0 * (d + p.d_c - 1.0 / p.epsilon) / d * (goal - nb)
