"""Wind-disturbance plant: per-rotor relative wind, the implicit thrust
coefficient / inflow-ratio fixed point, blade flapping, tilted thrust
directions, fuselage drag, and the resultant wrench.

The thrust coefficient obeys the coupled pair

    C_T = (s C_la / 2) [theta_0 (1/3 + mu_x^2 / 2) - (lambda + mu_z) / 2]
    lambda = C_T / (2 sqrt(mu_x^2 + (lambda + mu_z)^2))

which is reduced to a scalar root in lambda and solved with a damped Newton
iteration, guarded by bisection.  All outputs are deterministic functions of
the inputs.
"""

from dataclasses import dataclass

import numpy as np

from . import se3
from .errors import ConfigError, InflowSolverError, RotorStall
from .rigid_body import BodyWrench, cross3

OMEGA_MIN = 50.0  # rad/s stall guard: advance ratios divide by omega * r_p

SOLVER_TOL = 1e-12
SOLVER_MAX_ITER = 50


@dataclass
class BladeAeroParams:
    """Rotor/blade constants.  Values not reported for the simulated vehicle
    default to representative small-rotor numbers; all are config-overridable."""

    rho: float = 1.225          # air density, kg/m^3
    r_p: float = 0.1016         # rotor radius, m
    c: float = 0.01             # blade chord, m
    N_b: int = 2                # blades per rotor
    C_l_alpha: float = 5.7      # lift-curve slope, 1/rad
    theta_0: float = 0.2        # blade pitch, rad
    C_D0: float = 0.01          # blade profile drag coefficient
    K_beta: float = 0.23        # blade stiffness, N*m/rad
    C_alpha: float = 1e-3       # flapping coefficient, rad*s/m
    C_d: float = 0.01           # fuselage drag coefficient, kg/m

    def __post_init__(self):
        for name in ("rho", "r_p", "c", "N_b", "C_l_alpha", "theta_0"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"blade parameter {name} must be positive")
        for name in ("C_D0", "K_beta", "C_alpha", "C_d"):
            if getattr(self, name) < 0:
                raise ConfigError(f"blade parameter {name} must be non-negative")
        if not 0.0 < self.solidity < 1.0:
            raise ConfigError("solidity N_b*c/(pi*r_p) must lie in (0, 1)")

    @property
    def solidity(self):
        return self.N_b * self.c / (np.pi * self.r_p)

    @property
    def disk_area(self):
        return (np.pi * self.r_p) ** 2


class WindField:
    """Time-indexed inertial wind vector with a few stock constructors."""

    def __init__(self, fn):
        self._fn = fn

    def __call__(self, t):
        return np.asarray(self._fn(float(t)), dtype=float)

    @staticmethod
    def off():
        return WindField(lambda t: np.zeros(3))

    @staticmethod
    def constant(v):
        v = np.asarray(v, dtype=float).copy()
        return WindField(lambda t: v)

    @staticmethod
    def piecewise(times, values):
        """Piecewise-constant field (fan on/off): values[k] holds on
        [times[k], times[k+1])."""
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if len(times) != len(values):
            raise ConfigError("piecewise wind: times and values differ in length")
        if np.any(np.diff(times) <= 0):
            raise ConfigError("piecewise wind: times must be increasing")

        def fn(t):
            k = int(np.searchsorted(times, t, side="right")) - 1
            k = max(0, min(k, len(values) - 1))
            return values[k]

        return WindField(fn)

    @staticmethod
    def sinusoid(mean, amplitude, freq_hz, phase=0.0):
        mean = np.asarray(mean, dtype=float).copy()
        amplitude = np.asarray(amplitude, dtype=float).copy()
        w = 2.0 * np.pi * freq_hz
        return WindField(lambda t: mean + amplitude * np.sin(w * t + phase))


@dataclass
class RotorAeroSolution:
    C_T: float
    lam: float
    mu_x: float
    mu_z: float
    alpha: float
    d: np.ndarray
    T: float
    Q: float


def relative_wind(s, v_w, r_j):
    """Relative wind at a rotor hub, in the body frame."""
    return s.R.T @ (np.asarray(v_w, float) - s.v) + se3.hat(s.Omega) @ np.asarray(r_j, float)


def thrust_coefficient_of_inflow(lam, mu_x, mu_z, blade):
    """C_T as an explicit function of the inflow ratio (blade-element side)."""
    k0 = blade.solidity * blade.C_l_alpha / 2.0
    return k0 * (blade.theta_0 * (1.0 / 3.0 + mu_x ** 2 / 2.0) - (lam + mu_z) / 2.0)


def _inflow_residual(lam, mu_x, mu_z, blade):
    # g(lam) = 2 lam sqrt(mu_x^2 + (lam+mu_z)^2) - C_T(lam); root <=> both
    # fixed-point equations hold simultaneously.
    root = np.sqrt(mu_x ** 2 + (lam + mu_z) ** 2)
    return 2.0 * lam * root - thrust_coefficient_of_inflow(lam, mu_x, mu_z, blade)


def solve_thrust_coefficient(mu_x, mu_z, blade, tol=SOLVER_TOL, max_iter=SOLVER_MAX_ITER):
    """Solve the implicit (C_T, lambda) pair for one rotor.

    Damped Newton on the scalar lambda residual, starting from the static
    (momentum-free) guess; falls back to bisection on [0, 1] when a step
    stagnates or leaves the bracket.
    """
    if mu_x < 0.0:
        raise ConfigError("mu_x must be non-negative")
    k0 = blade.solidity * blade.C_l_alpha / 2.0
    ct_static = thrust_coefficient_of_inflow(0.0, mu_x, mu_z, blade)
    lam = np.sqrt(max(ct_static, 1e-6) / 2.0)
    lo, hi = 0.0, 1.0
    g_lo = _inflow_residual(lo, mu_x, mu_z, blade)
    g_hi = _inflow_residual(hi, mu_x, mu_z, blade)
    bracket_ok = g_lo <= 0.0 <= g_hi
    g = _inflow_residual(lam, mu_x, mu_z, blade)
    for _ in range(max_iter):
        if abs(g) < tol:
            break
        if bracket_ok:
            if g > 0.0:
                hi = lam
            else:
                lo = lam
        root = np.sqrt(mu_x ** 2 + (lam + mu_z) ** 2)
        dg = 2.0 * root + (2.0 * lam * (lam + mu_z) / root if root > 0.0 else 0.0) + k0 / 2.0
        step = g / dg
        new_lam = lam - step
        if bracket_ok and not (lo < new_lam < hi):
            new_lam = 0.5 * (lo + hi)  # bisection fallback
        g_new = _inflow_residual(new_lam, mu_x, mu_z, blade)
        if abs(g_new) >= abs(g) and bracket_ok:
            new_lam = 0.5 * (lo + hi)
            g_new = _inflow_residual(new_lam, mu_x, mu_z, blade)
        lam, g = new_lam, g_new
    else:
        if abs(g) >= max(tol, 1e-10):
            raise InflowSolverError(
                f"inflow solve failed for mu_x={mu_x}, mu_z={mu_z}", residual=abs(g))
    c_t = thrust_coefficient_of_inflow(lam, mu_x, mu_z, blade)
    return float(c_t), float(lam)


def flapping_angle(u1, u2, C_alpha):
    """Flapping amplitude proportional to the in-plane relative wind speed."""
    return C_alpha * float(np.hypot(u1, u2))


def thrust_direction(u1, u2, alpha):
    """Unit thrust direction in the body frame, tilted away from the in-plane
    wind by the flapping angle; exactly -e3 with no in-plane wind."""
    u_ip = float(np.hypot(u1, u2))
    if u_ip < 1e-12:
        return np.array([0.0, 0.0, -1.0])
    sa = np.sin(alpha)
    return np.array([-sa * u1 / u_ip, -sa * u2 / u_ip, -np.cos(alpha)])


def torque_coefficient(C_T, lam, mu_x, mu_z, blade):
    """Induced plus profile torque coefficient for a converged (C_T, lambda)."""
    return C_T * (lam + mu_z) + blade.C_D0 * blade.solidity / 8.0 * (1.0 + 3.0 * mu_x ** 2)


def rotor_solution(v_rel, omega, blade):
    """Full per-rotor aerodynamic solution for a given relative wind and speed."""
    if omega <= OMEGA_MIN:
        raise RotorStall(f"rotor speed {omega:.1f} rad/s at or below guard {OMEGA_MIN}")
    u1, u2, u3 = float(v_rel[0]), float(v_rel[1]), float(v_rel[2])
    tip = omega * blade.r_p
    mu_x = np.hypot(u1, u2) / tip
    mu_z = u3 / tip
    c_t, lam = solve_thrust_coefficient(mu_x, mu_z, blade)
    alpha = flapping_angle(u1, u2, blade.C_alpha)
    d = thrust_direction(u1, u2, alpha)
    c_q = torque_coefficient(c_t, lam, mu_x, mu_z, blade)
    dyn = blade.rho * blade.disk_area * tip ** 2
    T = c_t * dyn
    Q = c_q * dyn * blade.r_p
    return RotorAeroSolution(C_T=float(c_t), lam=float(lam), mu_x=float(mu_x),
                             mu_z=float(mu_z), alpha=float(alpha), d=d,
                             T=float(T), Q=float(Q))


def hover_thrust_constant(blade):
    """C_T' consistent with the aero model at hover: T = C_T' omega^2.

    Used to build rotor geometries whose speed command inverts the hover
    aerodynamics exactly.
    """
    c_t, _ = solve_thrust_coefficient(0.0, 0.0, blade)
    return c_t * blade.rho * blade.disk_area * blade.r_p ** 2


def hover_torque_thrust_ratio(blade):
    """C_TQ consistent with the aero model at hover: Q = C_TQ * T."""
    c_t, lam = solve_thrust_coefficient(0.0, 0.0, blade)
    c_q = torque_coefficient(c_t, lam, 0.0, 0.0, blade)
    return c_q / c_t * blade.r_p


def wind_wrench(s, omegas, field, t, geom, blade, p):
    """Resultant wrench of the wind plant.

    Force: gravity, quadratic fuselage drag against the relative airflow, and
    the four tilted rotor thrusts rotated to the inertial frame.  Moment: the
    per-rotor thrust cross products, alternating reactive torques along the
    tilted axes, and the componentwise flapping-stiffness term.
    """
    omegas = np.asarray(omegas, dtype=float)
    v_w = field(t)
    positions = geom.rotor_positions
    signs = geom.yaw_signs
    half_flap = 0.5 * blade.N_b * blade.K_beta
    thrust_sum = np.zeros(3)
    M = np.zeros(3)
    for j in range(4):
        v_rel = relative_wind(s, v_w, positions[j])
        sol = rotor_solution(v_rel, omegas[j], blade)
        Td = sol.T * sol.d
        thrust_sum += Td
        M += cross3(positions[j], Td) + signs[j] * sol.Q * sol.d
        M[0] += half_flap * sol.alpha * sol.d[0]
        M[1] += half_flap * sol.alpha * sol.d[1]
    v_air = s.v - v_w
    U = p.m * p.g * se3.E3 - blade.C_d * np.linalg.norm(v_air) * v_air + s.R @ thrust_sum
    return BodyWrench(U=U, M=M)
