"""Exception taxonomy shared across the package.

Everything derives from FtmpError so callers can catch the whole family;
individual classes mirror the failure modes of the public operations.
"""


class FtmpError(Exception):
    """Base class for all package-specific errors."""


class CoincidentAgents(FtmpError):
    """Two agents occupy exactly the same position; the pair geometry is undefined."""


class DenominatorUnderflow(FtmpError):
    """The clearance slack fell below its guard floor (constraint violated or misuse)."""


class DomainViolation(FtmpError):
    """A state lies outside the domain an operation is defined on."""


class DegenerateGeometry(FtmpError):
    """Goal and neighbor coincide; the stationary-point construction is undefined."""


class InvalidGeometry(FtmpError):
    """Arena/agent geometry parameters are inconsistent."""


class EmptyRoster(FtmpError):
    """A neighbor query was made against an empty roster."""


class UnknownLabel(FtmpError):
    """No bundled scenario with that name."""


class PlacementFailure(FtmpError):
    """Random placement could not satisfy the separation margins."""


class InvalidConstant(FtmpError):
    """A derived-constant argument is outside its admissible range."""


class StencilOutOfDomain(FtmpError):
    """A finite-difference stencil point violates the field's preconditions."""


class DegenerateDomain(FtmpError):
    """All samples of a scan domain were excluded."""


class InsufficientData(FtmpError):
    """Not enough qualifying samples for a fit."""


class AgentStepError(FtmpError):
    """A per-agent failure inside the simulation loop, tagged with the agent id."""

    def __init__(self, agent_id, time, cause):
        super().__init__(f"agent {agent_id} at t={time}: {cause}")
        self.agent_id = agent_id
        self.time = time
        self.cause = cause
