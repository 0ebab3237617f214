"""Desired-trajectory generators: hover, the two position sinusoids, the
Euler-angle attitude trajectory, and the three-phase backflip plan.

All generators are pure functions of time.  The backflip rotates exactly 2*pi
about the first body axis with a symmetric bang-bang angular acceleration:
accelerate at alpha_m for half the flip window, decelerate at -alpha_m for the
other half, with the window length fixed at sqrt(8*pi/alpha_m).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import se3
from .controller import RateLimits, _clamp_norm
from .errors import ConfigError


@dataclass
class PositionSample:
    x_d: np.ndarray
    v_d: np.ndarray
    a_d: np.ndarray
    j_d: np.ndarray
    b1_d: np.ndarray
    b1_d_rate: np.ndarray


@dataclass
class AttitudeSample:
    R_d: np.ndarray
    Omega_d: np.ndarray
    dOmega_d: np.ndarray


_E1 = np.array([1.0, 0.0, 0.0])


def hover(x0, b1d=(1.0, 0.0, 0.0)):
    """Constant position sample at x0."""
    x0 = np.asarray(x0, dtype=float)
    b1d = np.asarray(b1d, dtype=float)
    return PositionSample(x_d=x0.copy(), v_d=np.zeros(3), a_d=np.zeros(3),
                          j_d=np.zeros(3), b1_d=b1d / np.linalg.norm(b1d),
                          b1_d_rate=np.zeros(3))


def sinusoid_x1(t):
    """cos(2t) oscillation along the first inertial axis, heading fixed."""
    if t < 0.0:
        raise ConfigError("trajectory time must be non-negative")
    return PositionSample(
        x_d=np.array([math.cos(2.0 * t), 0.0, 0.0]),
        v_d=np.array([-2.0 * math.sin(2.0 * t), 0.0, 0.0]),
        a_d=np.array([-4.0 * math.cos(2.0 * t), 0.0, 0.0]),
        j_d=np.array([8.0 * math.sin(2.0 * t), 0.0, 0.0]),
        b1_d=_E1.copy(), b1_d_rate=np.zeros(3))


def sinusoid_x2(t):
    """Slow oscillation along the second inertial axis at fixed height."""
    if t < 0.0:
        raise ConfigError("trajectory time must be non-negative")
    w = math.pi / 12.0
    return PositionSample(
        x_d=np.array([-0.67, 0.2 - 1.2 * math.cos(w * t), -1.57]),
        v_d=np.array([0.0, 1.2 * w * math.sin(w * t), 0.0]),
        a_d=np.array([0.0, 1.2 * w * w * math.cos(w * t), 0.0]),
        j_d=np.array([0.0, -1.2 * w ** 3 * math.sin(w * t), 0.0]),
        b1_d=_E1.copy(), b1_d_rate=np.zeros(3))


@dataclass
class EulerTrajectoryParams:
    A_s: float = 0.15
    A_t: float = 0.12
    A_f: float = 0.11
    B_s: float = 0.5
    B_t: float = 0.5
    B_f: float = 0.5


def euler_angles_at(t, params):
    psi = math.pi * params.A_s * math.cos(2.0 * math.pi * params.B_s * t)
    theta = math.pi * params.A_t * math.cos(2.0 * math.pi * params.B_t * t)
    phi = math.pi * params.A_f * math.sin(2.0 * math.pi * params.B_f * t)
    return theta, phi, psi


def euler_attitude(t, params=None, limits=None, h=1e-5):
    """Attitude sample from the sinusoidal Euler-angle trajectory.

    Rates come from central differencing of the rotation matrix, clamped with
    the same limits as the controller's commanded rates.
    """
    if t < 0.0:
        raise ConfigError("trajectory time must be non-negative")
    params = params or EulerTrajectoryParams()
    limits = limits or RateLimits()

    def R_at(tau):
        return se3.euler_to_rotation(*euler_angles_at(tau, params))

    def omega_at(tau):
        Rm, Rp = R_at(tau - h), R_at(tau + h)
        return se3.vee(se3.skew_part(R_at(tau).T @ (Rp - Rm))) / (2.0 * h)

    R_d = R_at(t)
    Omega_d = _clamp_norm(omega_at(t), limits.Omega_c_max)
    dOmega_d = _clamp_norm((omega_at(t + h) - omega_at(t - h)) / (2.0 * h),
                           limits.dOmega_c_max)
    return AttitudeSample(R_d=R_d, Omega_d=Omega_d, dOmega_d=dOmega_d)


@dataclass
class FlipPlan:
    """Three-phase backflip: powered ascent until t1, a 2*pi roll about the
    first body axis over the flip window, then hover at the hand-off point.

    e3 points down, so a negative ascent acceleration climbs.
    """

    x0: np.ndarray
    a: float = -0.50
    t1: float = 2.20
    alpha_m: float = 60.0
    Delta_t: float = field(init=False)

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=float)
        if self.alpha_m <= 0.0:
            raise ConfigError("flip angular acceleration must be positive")
        if self.t1 <= 0.0:
            raise ConfigError("ascent duration must be positive")
        self.Delta_t = math.sqrt(8.0 * math.pi / self.alpha_m)

    @property
    def hover_point(self):
        return self.x0 + 0.5 * self.a * self.t1 ** 2 * np.array([0.0, 0.0, 1.0])


def flip_angle(t, plan):
    """Desired roll angle: continuous, 0 at t1, pi at mid-flip, 2*pi at the end."""
    if t <= plan.t1:
        return 0.0
    tau = min(t - plan.t1, plan.Delta_t)
    half = 0.5 * plan.Delta_t
    if tau <= half:
        return 0.5 * plan.alpha_m * tau ** 2
    s = tau - half
    return (0.5 * plan.alpha_m * half ** 2 + plan.alpha_m * half * s
            - 0.5 * plan.alpha_m * s ** 2)


def backflip_phase(t, plan):
    """Sample the three-phase plan: returns (phase, sample) where phase is
    'ascent', 'flip', or 'hover'."""
    if t < 0.0:
        raise ConfigError("trajectory time must be non-negative")
    if t <= plan.t1:
        x_d = plan.x0 + 0.5 * plan.a * t ** 2 * np.array([0.0, 0.0, 1.0])
        v_d = np.array([0.0, 0.0, plan.a * t])
        a_d = np.array([0.0, 0.0, plan.a])
        return "ascent", PositionSample(x_d=x_d, v_d=v_d, a_d=a_d,
                                        j_d=np.zeros(3), b1_d=_E1.copy(),
                                        b1_d_rate=np.zeros(3))
    if t <= plan.t1 + plan.Delta_t:
        tau = t - plan.t1
        half = 0.5 * plan.Delta_t
        theta = flip_angle(t, plan)
        if tau <= half:
            rate, accel = plan.alpha_m * tau, plan.alpha_m
        else:
            rate, accel = plan.alpha_m * (plan.Delta_t - tau), -plan.alpha_m
        return "flip", AttitudeSample(R_d=se3.exp_map(_E1, theta),
                                      Omega_d=rate * _E1,
                                      dOmega_d=accel * _E1)
    return "hover", PositionSample(x_d=plan.hover_point.copy(), v_d=np.zeros(3),
                                   a_d=np.zeros(3), j_d=np.zeros(3),
                                   b1_d=_E1.copy(), b1_d_rate=np.zeros(3))
