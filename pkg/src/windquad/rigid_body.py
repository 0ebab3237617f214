"""Rigid-body state, equations of motion, rotor geometry, and the simple
(non-aerodynamic) force/moment model with injected disturbances."""

from dataclasses import dataclass, field

import numpy as np

from . import se3
from .errors import ConfigError, ContractViolation


@dataclass
class RigidBodyState:
    """Position/velocity in the inertial frame, rotation matrix body->inertial,
    angular velocity in the body frame."""

    x: np.ndarray
    v: np.ndarray
    R: np.ndarray
    Omega: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.v = np.asarray(self.v, dtype=float)
        self.R = np.asarray(self.R, dtype=float)
        self.Omega = np.asarray(self.Omega, dtype=float)

    def is_finite(self):
        return all(np.all(np.isfinite(a)) for a in (self.x, self.v, self.R, self.Omega))

    @staticmethod
    def at_rest(x=(0.0, 0.0, 0.0)):
        return RigidBodyState(np.asarray(x, float), np.zeros(3), np.eye(3), np.zeros(3))


@dataclass
class InertialParams:
    m: float
    J: np.ndarray
    g: float = 9.81
    J_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.J = np.asarray(self.J, dtype=float)
        if self.m <= 0.0:
            raise ConfigError("mass must be positive")
        if self.g <= 0.0:
            raise ConfigError("gravity must be positive")
        if np.linalg.norm(self.J - self.J.T) > 1e-12:
            raise ConfigError("inertia matrix must be symmetric")
        if np.min(np.linalg.eigvalsh(self.J)) <= 0.0:
            raise ConfigError("inertia matrix must be positive-definite")
        self.J_inv = np.linalg.inv(self.J)


@dataclass
class BodyWrench:
    """Resultant force U in the inertial frame, moment M in the body frame."""

    U: np.ndarray
    M: np.ndarray

    def __post_init__(self):
        self.U = np.asarray(self.U, dtype=float)
        self.M = np.asarray(self.M, dtype=float)


@dataclass
class RotorGeometry:
    """Plus-configuration rotor layout and the static thrust/torque constants.

    Rotors 1 and 3 sit on the +/- first body axis, rotors 2 and 4 on the
    -/+ second body axis, all offset d_v along the third.  Rotors 1,3 spin
    opposite to 2,4; the yaw sign pattern is (-1)^(j+1) with 1-based j.
    """

    d_h: float
    d_v: float
    C_TQ: float
    T_max: float
    C_T_prime: float

    def __post_init__(self):
        if self.d_h <= 0.0:
            raise ConfigError("d_h must be positive")
        if self.T_max <= 0.0:
            raise ConfigError("T_max must be positive")
        if self.C_T_prime <= 0.0:
            raise ConfigError("C_T_prime must be positive")

    @property
    def C_Q_prime(self):
        return self.C_TQ * self.C_T_prime

    @property
    def rotor_positions(self):
        d_h, d_v = self.d_h, self.d_v
        return np.array([
            [d_h, 0.0, d_v],
            [0.0, -d_h, d_v],
            [-d_h, 0.0, d_v],
            [0.0, d_h, d_v],
        ])

    @property
    def yaw_signs(self):
        return np.array([1.0, -1.0, 1.0, -1.0])

    @property
    def moment_matrix(self):
        """Maps the four thrusts to the body moment they produce.

        Column j is -(r_j x e3) - sign_j * C_TQ * e3, cached because the
        plant evaluates it on every integrator stage.
        """
        cached = getattr(self, "_moment_matrix", None)
        if cached is None:
            cols = []
            positions = self.rotor_positions
            for j in range(4):
                r = positions[j]
                cols.append([-r[1], r[0], -self.yaw_signs[j] * self.C_TQ])
            cached = np.array(cols).T
            object.__setattr__(self, "_moment_matrix", cached)
        return cached


@dataclass
class StateDerivative:
    dx: np.ndarray
    dv: np.ndarray
    dOmega: np.ndarray


def cross3(a, b):
    """Cross product for plain 3-vectors, much cheaper than np.cross here."""
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def state_derivative(s, w, p):
    """Equations of motion: xdot = v, m vdot = U, J Omegadot + Omega x J Omega = M.

    The rotation kinematics Rdot = R hat(Omega) are handled by the integrator's
    exponential update rather than returned here.
    """
    dv = w.U / p.m
    dOmega = p.J_inv @ (w.M - cross3(s.Omega, p.J @ s.Omega))
    return StateDerivative(dx=s.v.copy(), dv=dv, dOmega=dOmega)


def simple_wrench(f, R, thrusts, Delta1, Delta2, geom, p):
    """Force/moment of the non-aerodynamic plant.

    All four thrusts act along -R e3; reactive torques alternate sign around
    the yaw axis; Delta1 (inertial) and Delta2 (body) are injected unknown
    disturbances.
    """
    thrusts = np.asarray(thrusts, dtype=float)
    if abs(f - float(np.sum(thrusts))) > 1e-9:
        raise ContractViolation("simple_wrench: f must equal the thrust sum")
    U = p.m * p.g * se3.E3 - f * (R @ se3.E3) - np.asarray(Delta1, float)
    M = geom.moment_matrix @ thrusts - np.asarray(Delta2, float)
    return BodyWrench(U=U, M=M)
