"""Deterministic multi-agent motion planning with a finite-time barrier controller.

A single-integrator swarm simulator built around a goal/clearance barrier
field whose closed loop is finite-time stable, together with a numerical
verification suite (gradient oracles, descent-identity scans, stationary
point certification, settling-time bounds) and a CSV-emitting CLI.
"""

__version__ = "0.1.0"

from .model import (AgentState, BarrierParams, ControlParams, KINETIC, STATIC,
                    Violation, WorldConfig, as_vec, kinetic_state, static_state,
                    validate_config)
from .barrier import (BarrierEvaluation, StationaryPoint, barrier_value,
                      mirror_image_candidate, stationary_points,
                      within_quadratic_envelope)
from .controller import (ControlDecision, FtsEstimate, control_law,
                         fts_estimate, lyapunov_rate, power_damping)
from .world import (DEFAULT_DT, Scenario, build_boundary_ring, make_scenario,
                    nearest_neighbor, preset, random_scenario, rotate_scenario)
from .sim import Event, SimConfig, TrajectoryRecord, run, step
from .analysis import (AuditFinding, Box, DescentScan, GridScan, audit_record,
                       descent_identity_scan, envelope_scan,
                       estimate_gradient_floor, finite_difference_gradient,
                       fit_descent_exponent, format_findings,
                       grid_gradient_minima, record_descent_exponent,
                       verification_battery)
from . import errors

__all__ = [name for name in dir() if not name.startswith("_")]
