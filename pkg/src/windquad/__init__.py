"""Quadrotor flight dynamics, geometric adaptive control, and audit tools."""

from .adaptive import AdaptiveChannel, AdaptiveParams, NetworkShape, NetworkWeights
from .aero import BladeAeroParams, WindField, hover_thrust_constant, hover_torque_thrust_ratio
from .audit import AuditAssumptions, run_audit
from .controller import ControllerGains, GeometricController, RateLimits
from .errors import (
    AttitudeAlignment,
    ConfigError,
    ContractViolation,
    DegenerateForce,
    GimbalLock,
    InflowSolverError,
    RotorStall,
    SimulationAbort,
    WindquadError,
)
from .rigid_body import InertialParams, RigidBodyState, RotorGeometry
from .sim import ScenarioConfig, SimLog, TrajectorySpec, integrate_step, metrics, run_scenario
from .config import load_scenario, load_audit_assumptions, bundled_scenario_path

__version__ = "0.1.0"

__all__ = [
    "AdaptiveChannel", "AdaptiveParams", "NetworkShape", "NetworkWeights",
    "BladeAeroParams", "WindField", "hover_thrust_constant", "hover_torque_thrust_ratio",
    "AuditAssumptions", "run_audit",
    "ControllerGains", "GeometricController", "RateLimits",
    "AttitudeAlignment", "ConfigError", "ContractViolation", "DegenerateForce",
    "GimbalLock", "InflowSolverError", "RotorStall", "SimulationAbort", "WindquadError",
    "InertialParams", "RigidBodyState", "RotorGeometry",
    "ScenarioConfig", "SimLog", "TrajectorySpec", "integrate_step", "metrics", "run_scenario",
    "load_scenario", "load_audit_assumptions", "bundled_scenario_path",
]
