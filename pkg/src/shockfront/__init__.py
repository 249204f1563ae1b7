"""Regular shock reflection in self-similar potential flow."""
from .gas import GasModel
from .shock import FlowState, ShockSolution, downstream_state, incident_shock, vertical_incident_shock
from .polar import polar_curve, solve_turning
from .envelope import Termination, envelope_rhs, integrate_envelope
from .reflection import (
    FeasibilityRecord, RRConfiguration, Status, TransitionAngles, build_local_rr,
    check_envelope_condition, detachment_angle, feasibility_record, feasibility_scan,
    sonic_angle, transition_angles, von_neumann_angle,
)

__version__ = "0.1.0"

__all__ = [
    "GasModel", "FlowState", "ShockSolution", "downstream_state", "incident_shock",
    "vertical_incident_shock", "polar_curve", "solve_turning", "Termination", "envelope_rhs",
    "integrate_envelope", "FeasibilityRecord", "RRConfiguration", "Status", "TransitionAngles",
    "build_local_rr", "check_envelope_condition", "feasibility_scan", "transition_angles",
    "sonic_angle", "detachment_angle", "von_neumann_angle", "feasibility_record",
]
