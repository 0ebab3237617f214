"""Map (total thrust, body moment) to four rotor thrusts and speeds.

The mixing matrix is the inverse of the forward force/moment map of the
plus-configuration geometry:

    [ f  ]   [  1      1      1      1    ] [T1]
    [ M1 ] = [  0     d_h     0    -d_h   ] [T2]
    [ M2 ]   [ d_h     0    -d_h     0    ] [T3]
    [ M3 ]   [-C_TQ  C_TQ  -C_TQ   C_TQ   ] [T4]
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation


@dataclass
class RotorCommand:
    T: np.ndarray       # per-rotor thrusts, N, clamped to [0, T_max]
    omega: np.ndarray   # per-rotor speeds, rad/s
    saturated: bool


def forward_matrix(geom):
    d, q = geom.d_h, geom.C_TQ
    return np.array([
        [1.0, 1.0, 1.0, 1.0],
        [0.0, d, 0.0, -d],
        [d, 0.0, -d, 0.0],
        [-q, q, -q, q],
    ])


def mix(f, M, geom):
    """Pre-saturation rotor thrusts reproducing (f, M) exactly."""
    rhs = np.array([f, M[0], M[1], M[2]], dtype=float)
    return np.linalg.solve(forward_matrix(geom), rhs)


def unmix(thrusts, geom):
    """Forward model: (f, M) produced by four thrusts along -e3."""
    out = forward_matrix(geom) @ np.asarray(thrusts, dtype=float)
    return float(out[0]), out[1:]


def saturate(thrusts, T_max):
    """Clamp componentwise to [0, T_max]; flags when any clamp activates."""
    thrusts = np.asarray(thrusts, dtype=float)
    clamped = np.clip(thrusts, 0.0, T_max)
    return clamped, bool(np.any(clamped != thrusts))


def thrust_to_speed(T, C_T_prime):
    """Invert T = C_T' omega^2 for a non-negative thrust."""
    if T < 0.0:
        raise ContractViolation("thrust_to_speed: negative thrust (saturate first)")
    return float(np.sqrt(T / C_T_prime))


def allocate(f, M, geom):
    """mix -> saturate -> speeds, as one step of the control pipeline."""
    T_sat, flag = saturate(mix(f, M, geom), geom.T_max)
    omega = np.sqrt(T_sat / geom.C_T_prime)
    return RotorCommand(T=T_sat, omega=omega, saturated=flag)
