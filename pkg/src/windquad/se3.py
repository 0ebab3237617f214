"""Small fixed-size linear algebra on SO(3): hat/vee maps, exponential map,
attitude error quantities, and the Euler-angle parameterization used for the
attitude trajectories and the attitude-channel network input.

The Euler convention is fixed once: ``euler_to_rotation`` is the single source
of truth and ``euler_extract`` inverts it exactly.  Angles are stored in the
order (theta, phi, psi).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, GimbalLock

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])

SO3_TOL = 1e-9
SKEW_TOL = 1e-9


@dataclass(frozen=True)
class EulerAngles:
    theta: float
    phi: float
    psi: float


def hat(v):
    """Skew-symmetric matrix such that hat(v) @ w == cross(v, w)."""
    v = np.asarray(v, dtype=float)
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def vee(M, tol=SKEW_TOL):
    """Inverse of the hat map.  Rejects inputs that are not skew-symmetric."""
    M = np.asarray(M, dtype=float)
    if np.linalg.norm(M + M.T) > tol:
        raise ContractViolation("vee: input is not skew-symmetric")
    return np.array([M[2, 1], M[0, 2], M[1, 0]])


def skew_part(M):
    M = np.asarray(M, dtype=float)
    return 0.5 * (M - M.T)


def exp_map(axis, angle):
    """Rotation by `angle` about the unit vector `axis` (Rodrigues formula)."""
    axis = np.asarray(axis, dtype=float)
    if abs(np.linalg.norm(axis) - 1.0) > 1e-9:
        raise ContractViolation("exp_map: axis must be a unit vector")
    K = hat(axis)
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def exp_hat(w):
    """Matrix exponential of hat(w) for an unnormalized rotation vector.

    Safe at w = 0; used by the integrator for rotation updates.
    """
    w = np.asarray(w, dtype=float)
    th = np.linalg.norm(w)
    if th < 1e-12:
        K = hat(w)
        return np.eye(3) + K + 0.5 * (K @ K)
    return exp_map(w / th, th)


def check_rotation(R, tol=SO3_TOL):
    """Validate SO(3) membership; returns R unchanged on success."""
    R = np.asarray(R, dtype=float)
    if np.linalg.norm(R.T @ R - np.eye(3)) > tol:
        raise ContractViolation("matrix is not orthogonal within tolerance")
    if abs(np.linalg.det(R) - 1.0) > tol:
        raise ContractViolation("matrix determinant is not +1 within tolerance")
    return R


def so3_defect(R):
    """Frobenius distance of R^T R from the identity."""
    return float(np.linalg.norm(R.T @ R - np.eye(3)))


def attitude_error_function(R, Rc):
    """Configuration error 0.5 * tr(I - Rc^T R); ranges over [0, 2]."""
    return 0.5 * float(np.trace(np.eye(3) - Rc.T @ R))


def attitude_errors(R, Rc, Omega, Omega_c):
    """Attitude and rate tracking errors (e_R, e_Omega)."""
    e_R = vee(skew_part(Rc.T @ R))
    e_Omega = np.asarray(Omega, float) - R.T @ Rc @ np.asarray(Omega_c, float)
    return e_R, e_Omega


def transport_matrix(R, Rc):
    """0.5 * (tr(R^T Rc) I - R^T Rc); maps e_Omega to d/dt e_R.

    Its spectral norm never exceeds 1.
    """
    P = R.T @ Rc
    return 0.5 * (np.trace(P) * np.eye(3) - P)


def euler_to_rotation(theta, phi, psi):
    """Build the fixed Euler parameterization.

    theta pitches about the second axis, phi yaws about the third, psi rolls
    the remaining freedom; the product is the matrix used by the attitude
    trajectory generator.
    """
    ct, st = np.cos(theta), np.sin(theta)
    cf, sf = np.cos(phi), np.sin(phi)
    cp, sp = np.cos(psi), np.sin(psi)
    return np.array([
        [ct * cf, sp * st * cf - cp * sf, cp * st * cf + sp * sf],
        [ct * sf, sp * st * sf + cp * cf, cp * st * sf - sp * cf],
        [-st, sp * ct, cp * ct],
    ])


def euler_extract(R, lock_tol=1e-6):
    """Invert ``euler_to_rotation``.  Errors near the pitch singularity."""
    R = np.asarray(R, dtype=float)
    if abs(R[2, 0]) > 1.0 - lock_tol:
        raise GimbalLock("euler_extract: |sin(theta)| too close to 1")
    theta = float(np.arcsin(-R[2, 0]))
    psi = float(np.arctan2(R[2, 1], R[2, 2]))
    phi = float(np.arctan2(R[1, 0], R[0, 0]))
    return EulerAngles(theta=theta, phi=phi, psi=psi)
