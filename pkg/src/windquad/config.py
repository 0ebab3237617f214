"""JSON scenario and audit configuration loading.

A scenario file is a flat JSON object with sections for the vehicle, the
controller, the two adaptive channels, the trajectory, the plant, and the run
settings.  Field names mirror the dataclass fields so diagnostics can point
at the exact offending key.
"""

import json
from importlib import resources

import numpy as np

from . import trajectories
from .adaptive import AdaptiveParams, NetworkShape
from .aero import BladeAeroParams, WindField
from .audit import AuditAssumptions
from .controller import ControllerGains, RateLimits
from .errors import ConfigError
from .rigid_body import InertialParams, RigidBodyState, RotorGeometry
from .sim import ScenarioConfig, TrajectorySpec


def _section(raw, name, required=True):
    if name not in raw:
        if required:
            raise ConfigError(f"missing section '{name}'")
        return {}
    sec = raw[name]
    if not isinstance(sec, dict):
        raise ConfigError(f"section '{name}' must be an object")
    return dict(sec)


def _take(sec, name, key, default=None, required=False):
    if key in sec:
        return sec.pop(key)
    if required:
        raise ConfigError(f"missing key '{key}' in section '{name}'")
    return default


def _reject_extras(sec, name):
    if sec:
        raise ConfigError(f"unknown keys in section '{name}': {sorted(sec)}")


def _vec3(value, name):
    arr = np.asarray(value, dtype=float)
    if arr.shape != (3,):
        raise ConfigError(f"'{name}' must be a 3-vector")
    return arr


def load_scenario(path_or_dict, overrides=None):
    """Build a ScenarioConfig from a JSON file path or a parsed dict."""
    if isinstance(path_or_dict, dict):
        raw = dict(path_or_dict)
    else:
        try:
            with open(path_or_dict, encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"scenario file not found: {path_or_dict}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path_or_dict}: {exc}")
    if overrides:
        raw.update(overrides)

    veh = _section(raw, "vehicle")
    J = veh.pop("J", None)
    if J is None:
        raise ConfigError("missing key 'J' in section 'vehicle'")
    J = np.asarray(J, dtype=float)
    if J.shape == (3,):
        J = np.diag(J)
    params = InertialParams(m=_take(veh, "vehicle", "m", required=True),
                            J=J, g=_take(veh, "vehicle", "g", 9.81))
    geom = RotorGeometry(
        d_h=_take(veh, "vehicle", "d_h", required=True),
        d_v=_take(veh, "vehicle", "d_v", 0.0),
        C_TQ=_take(veh, "vehicle", "C_TQ", required=True),
        T_max=_take(veh, "vehicle", "T_max", required=True),
        C_T_prime=_take(veh, "vehicle", "C_T_prime", 1e-5),
    )
    _reject_extras(veh, "vehicle")

    ctl = _section(raw, "controller")
    gains = ControllerGains(
        k_x=_take(ctl, "controller", "k_x", required=True),
        k_v=_take(ctl, "controller", "k_v", required=True),
        k_R=_take(ctl, "controller", "k_R", required=True),
        k_Omega=_take(ctl, "controller", "k_Omega", required=True),
    )
    limits = RateLimits(
        Omega_c_max=_take(ctl, "controller", "Omega_c_max", 20.0),
        dOmega_c_max=_take(ctl, "controller", "dOmega_c_max", 200.0),
    )
    _reject_extras(ctl, "controller")

    def adaptive_section(name):
        sec = _section(raw, name)
        shape = NetworkShape(N2=int(_take(sec, name, "N2", 3)))
        p = AdaptiveParams(
            gamma_w=_take(sec, name, "gamma_w", required=True),
            gamma_v=_take(sec, name, "gamma_v", required=True),
            kappa=_take(sec, name, "kappa", required=True),
            c=_take(sec, name, "c", required=True),
            W_M=_take(sec, name, "W_M", 10.0),
            V_M=_take(sec, name, "V_M", 10.0),
        )
        _reject_extras(sec, name)
        return p, shape

    ad1, shape1 = adaptive_section("adaptive_position")
    ad2, shape2 = adaptive_section("adaptive_attitude")

    traj = _section(raw, "trajectory")
    kind = _take(traj, "trajectory", "kind", required=True)
    spec = None
    if kind == "hover":
        spec = TrajectorySpec(
            kind=kind,
            hover_point=_vec3(_take(traj, "trajectory", "point", required=True), "point"),
            b1_d=_vec3(_take(traj, "trajectory", "b1_d", [1.0, 0.0, 0.0]), "b1_d"))
    elif kind in ("sinusoid_x1", "sinusoid_x2"):
        spec = TrajectorySpec(kind=kind)
    elif kind == "euler_attitude":
        ep = trajectories.EulerTrajectoryParams(
            A_s=_take(traj, "trajectory", "A_s", 0.15),
            A_t=_take(traj, "trajectory", "A_t", 0.12),
            A_f=_take(traj, "trajectory", "A_f", 0.11),
            B_s=_take(traj, "trajectory", "B_s", 0.5),
            B_t=_take(traj, "trajectory", "B_t", 0.5),
            B_f=_take(traj, "trajectory", "B_f", 0.5),
        )
        spec = TrajectorySpec(kind=kind, euler_params=ep)
    elif kind == "backflip":
        plan = trajectories.FlipPlan(
            x0=_vec3(_take(traj, "trajectory", "x0", required=True), "x0"),
            a=_take(traj, "trajectory", "a", -0.50),
            t1=_take(traj, "trajectory", "t1", 2.20),
            alpha_m=_take(traj, "trajectory", "alpha_m", 60.0),
        )
        spec = TrajectorySpec(kind=kind, flip_plan=plan)
    else:
        raise ConfigError(f"unknown trajectory kind '{kind}'")
    _reject_extras(traj, "trajectory")

    plant_sec = _section(raw, "plant")
    plant = _take(plant_sec, "plant", "model", "simple")
    blade = None
    wind = None
    Delta1 = _vec3(_take(plant_sec, "plant", "Delta1", [0.0, 0.0, 0.0]), "Delta1")
    Delta2 = _vec3(_take(plant_sec, "plant", "Delta2", [0.0, 0.0, 0.0]), "Delta2")
    if plant == "wind":
        bsec = _take(plant_sec, "plant", "blade", {})
        if not isinstance(bsec, dict):
            raise ConfigError("'blade' must be an object")
        try:
            blade = BladeAeroParams(**bsec)
        except TypeError as exc:
            raise ConfigError(f"bad blade parameters: {exc}")
        wspec = _take(plant_sec, "plant", "wind", None)
        wind = _wind_field(wspec)
    _reject_extras(plant_sec, "plant")

    run = _section(raw, "run")
    init = None
    x0 = _take(run, "run", "x0", None)
    if x0 is not None:
        init = RigidBodyState.at_rest(_vec3(x0, "x0"))
    cfg = ScenarioConfig(
        plant=plant,
        params=params, geom=geom, gains=gains,
        adaptive_pos=ad1, adaptive_att=ad2,
        trajectory=spec,
        duration=_take(run, "run", "duration", required=True),
        dt_plant=_take(run, "run", "dt_plant", 1.25e-3),
        dt_control=_take(run, "run", "dt_control", 2.5e-3),
        seed=int(_take(run, "run", "seed", 0)),
        variant=_take(run, "run", "variant", "adaptive"),
        blade=blade, wind=wind, Delta1=Delta1, Delta2=Delta2,
        initial=init, limits=limits,
        accel_bound=_take(run, "run", "accel_bound", float("inf")),
        nn_shape_pos=shape1, nn_shape_att=shape2,
    )
    _reject_extras(run, "run")

    extras = set(raw) - {"vehicle", "controller", "adaptive_position",
                         "adaptive_attitude", "trajectory", "plant", "run",
                         "name", "notes"}
    if extras:
        raise ConfigError(f"unknown top-level sections: {sorted(extras)}")
    return cfg


def _wind_field(spec):
    if spec is None:
        return WindField.off()
    if not isinstance(spec, dict):
        raise ConfigError("'wind' must be an object")
    spec = dict(spec)
    kind = spec.pop("kind", "constant")
    if kind == "off":
        field = WindField.off()
    elif kind == "constant":
        field = WindField.constant(_vec3(spec.pop("v_w", [0.0, 0.0, 0.0]), "v_w"))
    elif kind == "sinusoid":
        field = WindField.sinusoid(
            _vec3(spec.pop("mean", [0.0, 0.0, 0.0]), "mean"),
            _vec3(spec.pop("amplitude", [0.0, 0.0, 0.0]), "amplitude"),
            spec.pop("frequency", 1.0))
    else:
        raise ConfigError(f"unknown wind kind '{kind}'")
    if spec:
        raise ConfigError(f"unknown keys in 'wind': {sorted(spec)}")
    return field


def load_audit_assumptions(path_or_dict):
    if isinstance(path_or_dict, dict):
        raw = dict(path_or_dict)
    else:
        try:
            with open(path_or_dict, encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"audit file not found: {path_or_dict}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path_or_dict}: {exc}")
    sec = _section(raw, "assumptions", required=False) or raw
    try:
        return AuditAssumptions(**sec)
    except TypeError as exc:
        raise ConfigError(f"bad audit assumptions: {exc}")


def bundled_scenario_path(name):
    """Path of a scenario JSON shipped inside the package."""
    ref = resources.files("windquad") / "scenarios" / f"{name}.json"
    if not ref.is_file():
        raise ConfigError(f"no bundled scenario named '{name}'")
    return str(ref)


def bundled_scenarios():
    base = resources.files("windquad") / "scenarios"
    return sorted(p.name[:-5] for p in base.iterdir() if p.name.endswith(".json"))
