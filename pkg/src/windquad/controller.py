"""Geometric tracking controller: ideal force, computed attitude, commanded
rates by clamped backward differencing, total thrust, and control moment."""

from dataclasses import dataclass

import numpy as np

from . import se3
from .errors import AttitudeAlignment, ConfigError, DegenerateForce
from .rigid_body import cross3


@dataclass
class ControllerGains:
    k_x: float
    k_v: float
    k_R: float
    k_Omega: float

    def __post_init__(self):
        if min(self.k_x, self.k_v, self.k_R, self.k_Omega) <= 0.0:
            raise ConfigError("controller gains must be positive")


@dataclass
class RateLimits:
    """Clamps applied to the numerically differenced commanded rates."""

    Omega_c_max: float = 20.0
    dOmega_c_max: float = 200.0


@dataclass
class CommandFrame:
    A: np.ndarray
    R_c: np.ndarray
    Omega_c: np.ndarray
    dOmega_c: np.ndarray
    f: float
    M_c: np.ndarray


@dataclass
class TrackingErrors:
    e_x: np.ndarray
    e_v: np.ndarray
    e_R: np.ndarray
    e_Omega: np.ndarray


def position_errors(s, xd, vd):
    return s.x - np.asarray(xd, float), s.v - np.asarray(vd, float)


def ideal_force(e_x, e_v, ddxd, Delta1_hat, gains, p):
    """Force the translational loop would apply with an unconstrained
    direction; its direction defines the commanded attitude."""
    A = (np.asarray(Delta1_hat, float) - gains.k_x * np.asarray(e_x, float)
         - gains.k_v * np.asarray(e_v, float) - p.m * p.g * se3.E3
         + p.m * np.asarray(ddxd, float))
    if np.linalg.norm(A) < 1e-6:
        raise DegenerateForce("ideal force vanished; commanded attitude undefined")
    return A


def desired_attitude(A, b1d):
    """Computed attitude whose third column opposes the ideal force and whose
    first column tracks the desired heading as closely as possible."""
    A = np.asarray(A, float)
    nA = np.linalg.norm(A)
    if nA < 1e-6:
        raise DegenerateForce("ideal force vanished; commanded attitude undefined")
    b3 = -A / nA
    c = cross3(np.asarray(b1d, float), b3)
    nc = np.linalg.norm(c)
    if nc < 1e-6:
        raise AttitudeAlignment("desired heading parallel to thrust axis")
    b2 = -c / nc
    b1 = cross3(b2, b3)
    return np.column_stack([b1, b2, b3])


def _clamp_norm(v, limit):
    n = np.linalg.norm(v)
    if n > limit:
        return v * (limit / n)
    return v


def command_rates(Rc_now, Rc_prev, Rc_prev2, dt, limits=None):
    """Commanded angular velocity and acceleration by backward differencing of
    consecutive computed attitudes.  The first two control steps return zeros.
    """
    if dt <= 0.0:
        raise ConfigError("dt must be positive")
    limits = limits or RateLimits()
    if Rc_prev is None or Rc_prev2 is None:
        return np.zeros(3), np.zeros(3)
    Omega_now = se3.vee(se3.skew_part(Rc_now.T @ (Rc_now - Rc_prev))) / dt
    Omega_prev = se3.vee(se3.skew_part(Rc_prev.T @ (Rc_prev - Rc_prev2))) / dt
    Omega_now = _clamp_norm(Omega_now, limits.Omega_c_max)
    Omega_prev = _clamp_norm(Omega_prev, limits.Omega_c_max)
    dOmega = _clamp_norm((Omega_now - Omega_prev) / dt, limits.dOmega_c_max)
    return Omega_now, dOmega


def total_thrust(A, R):
    """Ideal force projected onto the current thrust direction."""
    return float(-np.asarray(A, float) @ (R @ se3.E3))


def control_moment(e_R, e_Omega, Omega, R, R_c, Omega_c, dOmega_c, Delta2_hat, gains, J):
    """Attitude-loop moment with gyroscopic and transported-rate feedforward."""
    RtRc = R.T @ R_c
    return (np.asarray(Delta2_hat, float) - gains.k_R * np.asarray(e_R, float)
            - gains.k_Omega * np.asarray(e_Omega, float)
            + cross3(Omega, J @ Omega)
            - J @ (se3.hat(Omega) @ RtRc @ Omega_c - RtRc @ dOmega_c))


class GeometricController:
    """One controller instance per vehicle; owns the three-deep computed
    attitude history needed to difference the commanded rates.

    Not thread-safe: confine an instance to a single logical thread.
    """

    def __init__(self, gains, params, limits=None):
        self.gains = gains
        self.params = params
        self.limits = limits or RateLimits()
        self._Rc_prev = None
        self._Rc_prev2 = None

    def reset(self):
        self._Rc_prev = None
        self._Rc_prev2 = None

    def _push_history(self, Rc):
        self._Rc_prev2 = self._Rc_prev
        self._Rc_prev = Rc

    def position_command(self, s, sample, dt, Delta1_hat=None, Delta2_hat=None):
        """Full position-tracking command from one trajectory sample."""
        d1 = np.zeros(3) if Delta1_hat is None else Delta1_hat
        d2 = np.zeros(3) if Delta2_hat is None else Delta2_hat
        e_x, e_v = position_errors(s, sample.x_d, sample.v_d)
        A = ideal_force(e_x, e_v, sample.a_d, d1, self.gains, self.params)
        R_c = desired_attitude(A, sample.b1_d)
        Omega_c, dOmega_c = command_rates(R_c, self._Rc_prev, self._Rc_prev2,
                                          dt, self.limits)
        self._push_history(R_c)
        f = total_thrust(A, s.R)
        e_R, e_Omega = se3.attitude_errors(s.R, R_c, s.Omega, Omega_c)
        M_c = control_moment(e_R, e_Omega, s.Omega, s.R, R_c, Omega_c, dOmega_c,
                             d2, self.gains, self.params.J)
        frame = CommandFrame(A=A, R_c=R_c, Omega_c=Omega_c, dOmega_c=dOmega_c,
                             f=f, M_c=M_c)
        errors = TrackingErrors(e_x=e_x, e_v=e_v, e_R=e_R, e_Omega=e_Omega)
        return frame, errors

    def attitude_command(self, s, sample, f_held, Delta2_hat=None):
        """Attitude-only command (position loop off), thrust held externally."""
        d2 = np.zeros(3) if Delta2_hat is None else Delta2_hat
        R_c, Omega_c, dOmega_c = sample.R_d, sample.Omega_d, sample.dOmega_d
        self._push_history(R_c)
        e_R, e_Omega = se3.attitude_errors(s.R, R_c, s.Omega, Omega_c)
        M_c = control_moment(e_R, e_Omega, s.Omega, s.R, R_c, Omega_c, dOmega_c,
                             d2, self.gains, self.params.J)
        frame = CommandFrame(A=np.zeros(3), R_c=R_c, Omega_c=Omega_c,
                             dOmega_c=dOmega_c, f=float(f_held), M_c=M_c)
        errors = TrackingErrors(e_x=np.zeros(3), e_v=np.zeros(3),
                                e_R=e_R, e_Omega=e_Omega)
        return frame, errors
