"""Numerical audit of the closed-loop gain conditions.

Given controller gains, vehicle inertia, adaptation parameters, and a set of
scalar assumptions (disturbance, trajectory, and approximation-error bounds),
this module assembles the quadratic-form matrices that certify ultimate
boundedness of the tracking errors, checks every positivity condition with an
eigenvalue solver, and reports the resulting ultimate-bound radius.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

EIG_TOL = 1e-12


@dataclass
class AuditAssumptions:
    """Scalar bounds the certificate is conditioned on.

    psi1 bounds the initial attitude error function (0 < psi1 < 2).  The
    *_M entries bound ideal network weights, network inputs, and the
    reconstruction error for the position (index 1) and attitude (index 2)
    channels.  B1 bounds the commanded translational forcing, B4 the angular
    acceleration command, E_max the Euler-angle magnitudes feeding the
    attitude network, and x_d_max / v_d_max the reference position and
    velocity magnitudes feeding the position network.
    """
    psi1: float = 0.9
    W_M1: float = 10.0
    V_M1: float = 10.0
    Z_M1: float = 10.0
    eps1: float = 0.1
    W_M2: float = 10.0
    V_M2: float = 10.0
    Z_M2: float = 10.0
    eps2: float = 0.1
    B1: float = 20.0
    B4: float = 10.0
    E_max: float = 3.2
    x_d_max: float = 2.0
    v_d_max: float = 2.0
    e_x_max: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.psi1 < 2.0:
            raise ConfigError("psi1 must lie in (0, 2)")
        for name in ("W_M1", "V_M1", "Z_M1", "W_M2", "V_M2", "Z_M2",
                     "B1", "B4", "E_max", "x_d_max", "v_d_max", "e_x_max"):
            if getattr(self, name) <= 0.0:
                raise ConfigError(f"{name} must be positive")
        for name in ("eps1", "eps2"):
            if getattr(self, name) < 0.0:
                raise ConfigError(f"{name} must be non-negative")


@dataclass
class AuditConstants:
    """Derived disturbance-growth constants, taken at their tight values."""
    beta: float
    C1_1: float
    C2_1: float
    C3_1: float
    C4_1: float
    C1_2: float
    C2_2: float
    C3_2: float
    C4_2: float


def derived_constants(assumptions):
    a = assumptions
    beta = math.sqrt(a.psi1 * (2.0 - a.psi1))
    C1_1 = 2.0 * a.W_M1 + a.eps1
    C2_1 = 0.25 * (a.V_M1 + a.W_M1)
    C3_1 = C2_1 * a.Z_M1
    C4_1 = C2_1 * (1.0 + a.x_d_max + a.v_d_max)
    C1_2 = 2.0 * a.W_M2 + a.eps2
    C2_2 = 0.25 * (a.V_M2 + a.W_M2)
    C3_2 = C2_2 * a.Z_M2
    C4_2 = C2_2 * (1.0 + a.E_max + a.B4)
    return AuditConstants(beta, C1_1, C2_1, C3_1, C4_1, C1_2, C2_2, C3_2, C4_2)


@dataclass
class ConditionResult:
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ""


@dataclass
class AuditReport:
    conditions: list
    nu: float = math.nan
    C5_1: float = math.nan
    C5_2: float = math.nan
    radius: float = math.nan
    matrices: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.conditions)

    def as_text(self):
        lines = ["closed-loop gain audit", "-" * 54]
        for c in self.conditions:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.name:24s} value={c.value:+.6g} limit={c.limit:+.6g}")
            if c.detail:
                lines.append(f"       {c.detail}")
        lines.append("-" * 54)
        if math.isfinite(self.radius):
            lines.append(f"convergence rate nu      = {self.nu:.6g}")
            lines.append(f"drive constants C5       = {self.C5_1:.6g}, {self.C5_2:.6g}")
            lines.append(f"ultimate bound radius    = {self.radius:.6g}")
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)

    def as_dict(self):
        return {
            "passed": self.passed,
            "nu": self.nu,
            "C5": [self.C5_1, self.C5_2],
            "radius": self.radius,
            "conditions": [
                {"name": c.name, "passed": c.passed, "value": c.value,
                 "limit": c.limit, "detail": c.detail}
                for c in self.conditions
            ],
        }


def check_c1(c1, gains, params):
    limit = math.sqrt(gains.k_x / params.m)
    return ConditionResult("c1 < sqrt(kx/m)", c1 < limit, c1, limit)


def check_c2(c2, gains, params, psi1):
    lam_m = float(np.min(np.linalg.eigvalsh(params.J)))
    lam_M = float(np.max(np.linalg.eigvalsh(params.J)))
    lim_a = math.sqrt(gains.k_R * lam_m) / lam_M
    lim_b = math.sqrt(2.0 * gains.k_R / (lam_M * (2.0 - psi1)))
    limit = min(lim_a, lim_b)
    return ConditionResult("c2 attitude limit", c2 < limit, c2, limit,
                           detail=f"min of {lim_a:.6g} and {lim_b:.6g}")


def _min_eig(M):
    return float(np.min(np.linalg.eigvalsh(M)))


def _max_eig(M):
    return float(np.max(np.linalg.eigvalsh(M)))


def lyapunov_matrices(gains, params, adaptive_pos, adaptive_att, assumptions):
    """All quadratic-form matrices of the boundedness certificate."""
    a = assumptions
    k = derived_constants(a)
    m = params.m
    kx, kv, kR, kO = gains.k_x, gains.k_v, gains.k_R, gains.k_Omega
    c1 = adaptive_pos.c
    c2 = adaptive_att.c
    lam_m = float(np.min(np.linalg.eigvalsh(params.J)))
    lam_M = float(np.max(np.linalg.eigvalsh(params.J)))
    beta = k.beta

    k_xb = kx * (1.0 - beta) - k.C3_1
    k_vb = kv * (1.0 - beta) - m * c1 - k.C3_1
    k_Ob = kO - c2 * lam_M - k.C3_2
    k_xv = c1 * ((1.0 + beta) * kv + k.C3_1) + k.C3_1
    k_RO = c2 * (kO + k.C3_2)

    M11 = 0.5 * np.array([[kx, -m * c1], [-m * c1, m]])
    M12 = 0.5 * np.array([[kx, m * c1], [m * c1, m]])
    M21 = 0.5 * np.array([[kR, -c2 * lam_M], [-c2 * lam_M, lam_m]])
    M22 = 0.5 * np.array([[2.0 * kR / (2.0 - a.psi1), c2 * lam_M],
                          [c2 * lam_M, lam_M]])

    N1 = np.array([
        [c1 * k_xb / 2.0, -k_xv / 2.0, -c1 * k.C4_1],
        [-k_xv / 2.0, k_vb / 2.0, -k.C4_1],
        [-c1 * k.C4_1, -k.C4_1, adaptive_pos.kappa],
    ])
    N2 = np.array([
        [c2 * kR / 2.0, -k_RO, -c2 * k.C4_2],
        [-k_RO, k_Ob, -k.C4_2],
        [-c2 * k.C4_2, -k.C4_2, adaptive_att.kappa],
    ])
    B1 = a.B1
    N3 = np.array([
        [c1 * k_xb / 2.0, -k_xv / 2.0, -c1 * B1],
        [-k_xv / 2.0, c1 * k_vb / 2.0, -(B1 + kx * a.e_x_max)],
        [-c1 * B1, -(B1 + kx * a.e_x_max), c2 * kR / 2.0],
    ])

    g1 = min(adaptive_pos.gamma_w, adaptive_pos.gamma_v)
    g2 = min(adaptive_att.gamma_w, adaptive_att.gamma_v)
    N1p = np.array([
        [kx / 2.0, m * c1, 0.0],
        [m * c1, m / 2.0, 0.0],
        [0.0, 0.0, 1.0 / g1],
    ])
    N2p = np.array([
        [kR / (2.0 - a.psi1), c2 * lam_M, 0.0],
        [c2 * lam_M, lam_M, 0.0],
        [0.0, 0.0, 1.0 / g2],
    ])
    N3p = np.diag([kx / 2.0, m / 2.0, 1.0 / (2.0 - a.psi1)])

    return {
        "M11": M11, "M12": M12, "M21": M21, "M22": M22,
        "N1": N1, "N2": N2, "N3": N3,
        "N1p": N1p, "N2p": N2p, "N3p": N3p,
        "k_xb": k_xb, "k_vb": k_vb, "k_Ob": k_Ob,
        "k_xv": k_xv, "k_RO": k_RO,
        "constants": k,
    }


def ultimate_bound(gains, params, adaptive_pos, adaptive_att, assumptions, mats=None):
    """Convergence rate nu, drive constants C5, and the bound radius C5/nu."""
    if mats is None:
        mats = lyapunov_matrices(gains, params, adaptive_pos, adaptive_att, assumptions)
    k = mats["constants"]
    c1 = adaptive_pos.c
    c2 = adaptive_att.c
    kR = gains.k_R
    k_xb, k_vb, k_Ob = mats["k_xb"], mats["k_vb"], mats["k_Ob"]
    if min(k_xb, k_vb, k_Ob) <= 0.0:
        raise ConfigError("damped gain margins must be positive for a finite bound")

    C5_1 = (c1 * k.C1_1 ** 2 / (2.0 * k_xb)
            + k.C1_1 ** 2 / (2.0 * k_vb)
            + adaptive_pos.kappa * assumptions.Z_M1 ** 2 / 2.0)
    C5_2 = (c2 * k.C1_2 ** 2 / (2.0 * kR)
            + k.C1_2 ** 2 / (2.0 * k_Ob)
            + adaptive_att.kappa * assumptions.Z_M2 ** 2 / 2.0)

    lam_N = min(_min_eig(mats["N1"]), _min_eig(mats["N2"]), _min_eig(mats["N3"]))
    lam_Np = max(_max_eig(mats["N1p"]), _max_eig(mats["N2p"]), _max_eig(mats["N3p"]))
    nu = lam_N / lam_Np
    radius = (C5_1 + C5_2) / nu if nu > 0.0 else math.inf
    return nu, C5_1, C5_2, radius


def run_audit(gains, params, adaptive_pos, adaptive_att, assumptions):
    """Evaluate every certificate condition; return a full report."""
    mats = lyapunov_matrices(gains, params, adaptive_pos, adaptive_att, assumptions)
    conditions = [
        check_c1(adaptive_pos.c, gains, params),
        check_c2(adaptive_att.c, gains, params, assumptions.psi1),
    ]
    for name in ("k_xb", "k_vb", "k_Ob"):
        v = mats[name]
        conditions.append(ConditionResult(f"{name} > 0", v > 0.0, v, 0.0))
    for name in ("M11", "M21", "N1", "N2", "N3"):
        ev = _min_eig(mats[name])
        conditions.append(ConditionResult(f"{name} positive definite",
                                          ev > EIG_TOL, ev, 0.0))

    report = AuditReport(conditions=conditions, matrices=mats)
    if report.passed:
        nu, C5_1, C5_2, radius = ultimate_bound(
            gains, params, adaptive_pos, adaptive_att, assumptions, mats)
        report.nu, report.C5_1, report.C5_2, report.radius = nu, C5_1, C5_2, radius
    return report
