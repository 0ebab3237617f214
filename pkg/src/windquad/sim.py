"""Fixed-step closed-loop simulation.

The plant integrates at dt_plant with an RK4 step whose rotation update is an
exponential of the stage-averaged body rate, so R stays on SO(3) to machine
precision.  The discrete controller and the adaptive law run every dt_control
with zero-order hold on the rotor commands in between.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import adaptive, allocation, se3, trajectories
from .aero import BladeAeroParams, WindField, wind_wrench
from .controller import GeometricController, RateLimits
from .errors import ConfigError, SimulationAbort
from .rigid_body import RigidBodyState, simple_wrench, state_derivative

LOG_SCHEMA = "windquad-simlog v1"

LOG_COLUMNS = (
    ["t"]
    + [f"x{i}" for i in "123"] + [f"v{i}" for i in "123"]
    + [f"R{i}{j}" for i in "123" for j in "123"]
    + [f"Omega{i}" for i in "123"]
    + [f"ex{i}" for i in "123"] + [f"ev{i}" for i in "123"]
    + [f"eR{i}" for i in "123"] + [f"eOmega{i}" for i in "123"]
    + ["f"] + [f"Mc{i}" for i in "123"] + [f"T{j}" for j in "1234"]
    + [f"Delta1_hat{i}" for i in "123"] + [f"Delta2_hat{i}" for i in "123"]
    + ["W1_norm", "V1_norm", "W2_norm", "V2_norm", "saturated", "accel_bound"]
)


@dataclass
class TrajectorySpec:
    kind: str                      # hover | sinusoid_x1 | sinusoid_x2 | euler_attitude | backflip
    hover_point: np.ndarray | None = None
    b1_d: np.ndarray | None = None
    euler_params: trajectories.EulerTrajectoryParams | None = None
    flip_plan: trajectories.FlipPlan | None = None


@dataclass
class ScenarioConfig:
    plant: str                     # "simple" | "wind"
    params: object                 # InertialParams
    geom: object                   # RotorGeometry
    gains: object                  # ControllerGains
    adaptive_pos: adaptive.AdaptiveParams
    adaptive_att: adaptive.AdaptiveParams
    trajectory: TrajectorySpec
    duration: float
    dt_plant: float = 1.25e-3
    dt_control: float = 2.5e-3
    seed: int = 0
    variant: str = "adaptive"      # "adaptive" | "baseline"
    blade: BladeAeroParams | None = None
    wind: WindField | None = None
    Delta1: np.ndarray = field(default_factory=lambda: np.zeros(3))
    Delta2: np.ndarray = field(default_factory=lambda: np.zeros(3))
    initial: RigidBodyState | None = None
    limits: RateLimits = field(default_factory=RateLimits)
    accel_bound: float = math.inf  # configured B1 guard on ||-mge3+m a_d+Delta1_hat||
    nn_shape_pos: adaptive.NetworkShape = field(default_factory=adaptive.NetworkShape)
    nn_shape_att: adaptive.NetworkShape = field(default_factory=adaptive.NetworkShape)

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ConfigError("duration must be positive")
        if self.plant not in ("simple", "wind"):
            raise ConfigError(f"unknown plant '{self.plant}'")
        if self.variant not in ("adaptive", "baseline"):
            raise ConfigError(f"unknown variant '{self.variant}'")
        ratio = self.dt_control / self.dt_plant
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigError("dt_control must be an integer multiple of dt_plant")
        if self.plant == "wind":
            if self.blade is None:
                self.blade = BladeAeroParams()
            if self.wind is None:
                self.wind = WindField.off()


class SimLog:
    """Per-control-step time series with CSV serialization."""

    def __init__(self):
        self._rows = []
        self._data = None

    def append(self, row):
        self._rows.append(np.asarray(row, dtype=float))
        self._data = None

    @property
    def data(self):
        if self._data is None:
            self._data = np.vstack(self._rows) if self._rows else np.empty((0, len(LOG_COLUMNS)))
        return self._data

    def __len__(self):
        return len(self._rows)

    def column(self, name):
        return self.data[:, LOG_COLUMNS.index(name)]

    def columns(self, names):
        idx = [LOG_COLUMNS.index(n) for n in names]
        return self.data[:, idx]

    def norm(self, prefix):
        """Euclidean norm of a 3-vector column group, per record."""
        return np.linalg.norm(self.columns([f"{prefix}{i}" for i in "123"]), axis=1)

    def to_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"# {LOG_SCHEMA}\n")
            fh.write(",".join(LOG_COLUMNS) + "\n")
            for row in self.data:
                fh.write(",".join(format(v, ".17g") for v in row) + "\n")


def integrate_step(s, wrench_fn, params, t, dt):
    """One RK4 step of the rigid-body dynamics.

    (x, v, Omega) follow the classical tableau; R advances by a single
    exponential of the stage-averaged angular velocity, which keeps it on
    SO(3) without reorthonormalization.
    """
    if dt <= 0.0:
        raise ConfigError("dt must be positive")
    return _rk4_step(s, wrench_fn, params, t, dt)


def _rk4_step(s, wrench_fn, params, t, dt):
    def deriv(tau, state):
        return state_derivative(state, wrench_fn(tau, state), params)

    O1 = s.Omega
    k1 = deriv(t, s)
    s2 = RigidBodyState(s.x + 0.5 * dt * k1.dx, s.v + 0.5 * dt * k1.dv,
                        s.R @ se3.exp_hat(0.5 * dt * O1),
                        s.Omega + 0.5 * dt * k1.dOmega)
    O2 = s2.Omega
    k2 = deriv(t + 0.5 * dt, s2)
    s3 = RigidBodyState(s.x + 0.5 * dt * k2.dx, s.v + 0.5 * dt * k2.dv,
                        s.R @ se3.exp_hat(0.5 * dt * O2),
                        s.Omega + 0.5 * dt * k2.dOmega)
    O3 = s3.Omega
    k3 = deriv(t + 0.5 * dt, s3)
    s4 = RigidBodyState(s.x + dt * k3.dx, s.v + dt * k3.dv,
                        s.R @ se3.exp_hat(dt * O3),
                        s.Omega + dt * k3.dOmega)
    O4 = s4.Omega
    k4 = deriv(t + dt, s4)
    x_new = s.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx)
    v_new = s.v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv)
    O_new = s.Omega + dt / 6.0 * (k1.dOmega + 2.0 * k2.dOmega + 2.0 * k3.dOmega + k4.dOmega)
    O_avg = (O1 + 2.0 * O2 + 2.0 * O3 + O4) / 6.0
    R_new = s.R @ se3.exp_hat(dt * O_avg)
    out = RigidBodyState(x_new, v_new, R_new, O_new)
    if not out.is_finite():
        raise SimulationAbort("non-finite state after integration step", t=t)
    return out


def run_scenario(cfg):
    """Run one closed-loop scenario and return its SimLog."""
    p = cfg.params
    geom = cfg.geom
    ctrl = GeometricController(cfg.gains, p, cfg.limits)
    chan_pos = adaptive.AdaptiveChannel(cfg.adaptive_pos, cfg.nn_shape_pos, seed=cfg.seed)
    chan_att = adaptive.AdaptiveChannel(cfg.adaptive_att, cfg.nn_shape_att, seed=cfg.seed + 1)
    adaptive_on = cfg.variant == "adaptive"

    s = cfg.initial if cfg.initial is not None else RigidBodyState.at_rest()
    s = RigidBodyState(s.x.copy(), s.v.copy(), s.R.copy(), s.Omega.copy())

    n_sub = int(round(cfg.dt_control / cfg.dt_plant))
    n_ctrl = int(round(cfg.duration / cfg.dt_control))
    log = SimLog()

    hover_f = p.m * p.g
    held_f = hover_f          # thrust carried into attitude-only phases
    zero3 = np.zeros(3)

    for step in range(n_ctrl):
        t = step * cfg.dt_control

        sample, mode = _sample_trajectory(cfg, t)

        if adaptive_on:
            x_nn_pos = adaptive.build_input_position(s.x, s.v)
            x_nn_att = adaptive.build_input_attitude(s.R, s.Omega)
            d1_hat = chan_pos.estimate(x_nn_pos)
            d2_hat = chan_att.estimate(x_nn_att)
        else:
            d1_hat, d2_hat = zero3, zero3

        try:
            if mode == "position":
                frame, errors = ctrl.position_command(s, sample, cfg.dt_control,
                                                      d1_hat, d2_hat)
                held_f = frame.f
                accel_sig = np.linalg.norm(-p.m * p.g * se3.E3
                                           + p.m * sample.a_d + d1_hat)
            else:
                frame, errors = ctrl.attitude_command(s, sample, held_f, d2_hat)
                accel_sig = 0.0
        except SimulationAbort:
            raise
        except Exception as exc:
            raise SimulationAbort(f"controller failure: {exc}", step=step, t=t) from exc

        if accel_sig > cfg.accel_bound:
            raise SimulationAbort(
                f"acceleration-bound guard exceeded: {accel_sig:.3f} > {cfg.accel_bound}",
                step=step, t=t)

        cmd = allocation.allocate(frame.f, frame.M_c, geom)
        f_actual = float(np.sum(cmd.T))

        # adaptive law, stepped at the controller period
        if adaptive_on:
            a1 = adaptive.composite_error(errors.e_x, errors.e_v, cfg.adaptive_pos.c)
            a2 = adaptive.composite_error(errors.e_R, errors.e_Omega, cfg.adaptive_att.c)
            if mode == "position":
                chan_pos.step(x_nn_pos, a1, cfg.dt_control)
            chan_att.step(x_nn_att, a2, cfg.dt_control)

        log.append(np.concatenate((
            [t], s.x, s.v, s.R.ravel(), s.Omega,
            errors.e_x, errors.e_v, errors.e_R, errors.e_Omega,
            [frame.f], frame.M_c, cmd.T, d1_hat, d2_hat,
            [np.linalg.norm(chan_pos.weights.W_bar),
             np.linalg.norm(chan_pos.weights.V_bar),
             np.linalg.norm(chan_att.weights.W_bar),
             np.linalg.norm(chan_att.weights.V_bar),
             float(cmd.saturated), accel_sig])))

        if cfg.plant == "simple":
            T_hold, f_hold = cmd.T, f_actual

            def wrench_fn(tau, state, _T=T_hold, _f=f_hold):
                return simple_wrench(_f, state.R, _T, cfg.Delta1, cfg.Delta2, geom, p)
        else:
            omega_hold = cmd.omega

            def wrench_fn(tau, state, _w=omega_hold):
                return wind_wrench(state, _w, cfg.wind, tau, geom, cfg.blade, p)

        for sub in range(n_sub):
            tau = t + sub * cfg.dt_plant
            try:
                s = _rk4_step(s, wrench_fn, p, tau, cfg.dt_plant)
            except SimulationAbort as exc:
                exc.step = step
                raise

    return log


def _sample_trajectory(cfg, t):
    spec = cfg.trajectory
    if spec.kind == "hover":
        return trajectories.hover(spec.hover_point, spec.b1_d), "position"
    if spec.kind == "sinusoid_x1":
        return trajectories.sinusoid_x1(t), "position"
    if spec.kind == "sinusoid_x2":
        return trajectories.sinusoid_x2(t), "position"
    if spec.kind == "euler_attitude":
        return trajectories.euler_attitude(t, spec.euler_params, cfg.limits), "attitude"
    if spec.kind == "backflip":
        phase, sample = trajectories.backflip_phase(t, spec.flip_plan)
        return sample, ("attitude" if phase == "flip" else "position")
    raise ConfigError(f"unknown trajectory kind '{spec.kind}'")


@dataclass
class RunMetrics:
    rms_ex: float
    max_ex: float
    rms_eR: float
    max_eR: float
    max_thrust: float
    saturation_count: int
    final_W1: float
    final_V1: float
    final_W2: float
    final_V2: float

    def as_text(self):
        return "\n".join([
            f"rms |e_x|        {self.rms_ex:.6g}",
            f"max |e_x|        {self.max_ex:.6g}",
            f"rms |e_R|        {self.rms_eR:.6g}",
            f"max |e_R|        {self.max_eR:.6g}",
            f"max rotor thrust {self.max_thrust:.6g}",
            f"saturation count {self.saturation_count}",
            f"final |W1|,|V1|  {self.final_W1:.6g}, {self.final_V1:.6g}",
            f"final |W2|,|V2|  {self.final_W2:.6g}, {self.final_V2:.6g}",
        ])


def metrics(log, t_start=None, t_end=None):
    """Summary statistics over a configurable time window of the log."""
    if len(log) == 0:
        raise ConfigError("metrics of an empty log")
    t = log.column("t")
    mask = np.ones(len(t), dtype=bool)
    if t_start is not None:
        mask &= t >= t_start
    if t_end is not None:
        mask &= t <= t_end
    ex = log.norm("ex")[mask]
    eR = log.norm("eR")[mask]
    thrusts = log.columns([f"T{j}" for j in "1234"])[mask]
    return RunMetrics(
        rms_ex=float(np.sqrt(np.mean(ex ** 2))),
        max_ex=float(np.max(ex)),
        rms_eR=float(np.sqrt(np.mean(eR ** 2))),
        max_eR=float(np.max(eR)),
        max_thrust=float(np.max(thrusts)),
        saturation_count=int(np.sum(log.column("saturated")[mask] > 0.5)),
        final_W1=float(log.column("W1_norm")[-1]),
        final_V1=float(log.column("V1_norm")[-1]),
        final_W2=float(log.column("W2_norm")[-1]),
        final_V2=float(log.column("V2_norm")[-1]),
    )
