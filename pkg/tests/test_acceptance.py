"""End-to-end acceptance suite.

Each test exercises one acceptance criterion at its stated tolerance and
prints a single PASS/FAIL line.  Long simulations are shared through
module-scoped fixtures so the suite stays inside its runtime budget.
"""

import math
import time

import numpy as np
import pytest

from windquad import config, se3
from windquad.adaptive import (AdaptiveChannel, AdaptiveParams, NetworkShape,
                               build_input_position, initial_weights,
                               output_error_expansion, project_rate)
from windquad.aero import (BladeAeroParams, WindField, _inflow_residual,
                           solve_thrust_coefficient)
from windquad.allocation import forward_matrix, mix, unmix
from windquad.audit import AuditAssumptions, check_c1, run_audit
from windquad.controller import ControllerGains
from windquad.rigid_body import (BodyWrench, InertialParams, RigidBodyState,
                                 RotorGeometry)
from windquad.sim import (ScenarioConfig, TrajectorySpec, integrate_step,
                          metrics, run_scenario)
from windquad.trajectories import FlipPlan, backflip_phase, flip_angle

PARAMS = InertialParams(m=0.755, J=np.diag([0.00557, 0.00557, 0.0105]))
GEOM = RotorGeometry(d_h=0.169, d_v=0.1, C_TQ=0.0167, T_max=7.0,
                     C_T_prime=8.666150645384208e-06)
GAINS = ControllerGains(k_x=12.08, k_v=4.228, k_R=0.378, k_Omega=0.0882)

R_COLS = [f"R{i}{j}" for i in "123" for j in "123"]


def _report(num, label, ok):
    print(f"criterion {num:2d} {label:40s} {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {num} ({label}) failed"


def _final_so3_defect(log):
    return se3.so3_defect(log.columns(R_COLS)[-1].reshape(3, 3))


def _adaptive(c, gamma_v, kappa, W_M=10.0):
    return AdaptiveParams(gamma_w=1.0, gamma_v=gamma_v, kappa=kappa, c=c,
                          W_M=W_M, V_M=10.0)


def _simple_config(trajectory, duration, **kw):
    defaults = dict(
        plant="simple", params=PARAMS, geom=GEOM, gains=GAINS,
        adaptive_pos=_adaptive(1.0, 0.05, 1e-5),
        adaptive_att=_adaptive(0.1, 0.01, 1e-3),
        trajectory=trajectory, duration=duration)
    defaults.update(kw)
    return ScenarioConfig(**defaults)


# shared long runs ----------------------------------------------------------

@pytest.fixture(scope="module")
def hover_run():
    cfg = _simple_config(
        TrajectorySpec(kind="hover", hover_point=np.zeros(3),
                       b1_d=np.array([1.0, 0.0, 0.0])), duration=10.0)
    t0 = time.perf_counter()
    log = run_scenario(cfg)
    return log, time.perf_counter() - t0


@pytest.fixture(scope="module")
def wind_runs():
    logs, elapsed = {}, {}
    for variant in ("baseline", "adaptive"):
        cfg = config.load_scenario(config.bundled_scenario_path("sec4b_wind"))
        cfg.variant = variant
        t0 = time.perf_counter()
        logs[variant] = run_scenario(cfg)
        elapsed[variant] = time.perf_counter() - t0
    return logs, elapsed


# criteria ------------------------------------------------------------------

def test_criterion_01_hover_equilibrium(hover_run):
    log, elapsed = hover_run
    ok = (np.max(log.norm("ex")) < 1e-6
          and np.max(log.norm("eR")) < 1e-6
          and abs(log.column("f")[0] - PARAMS.m * PARAMS.g) < 1e-9
          and elapsed < 5.0
          and _final_so3_defect(log) < 1e-9)
    _report(1, "hover equilibrium is exact", ok)


def test_criterion_02_baseline_tracking():
    cfg = _simple_config(TrajectorySpec(kind="sinusoid_x1"), duration=10.0,
                         variant="baseline",
                         initial=RigidBodyState.at_rest([0.0, 0.0, 0.3]))
    log = run_scenario(cfg)
    ex = log.norm("ex")
    ok = (np.allclose(ex[0], np.linalg.norm([-1.0, 0.0, 0.3]))
          and ex[-1] < 1e-3
          and _final_so3_defect(log) < 1e-9)
    _report(2, "undisturbed tracking converges", ok)


def test_criterion_03_wind_rejection(wind_runs):
    logs, elapsed = wind_runs
    t = logs["baseline"].column("t")
    ex_base = logs["baseline"].norm("ex")
    ex_adap = logs["adaptive"].norm("ex")

    tail = (t >= 10.0) & (t <= 20.0)
    improves = np.max(ex_adap[tail]) <= 0.5 * np.max(ex_base[tail])

    # qualitative non-decay check: successive 5-second window maxima of the
    # baseline error must not drop by more than 1% (the error never recovers)
    window_maxes = [np.max(ex_base[(t >= lo) & (t <= lo + 5.0)])
                    for lo in (5.0, 10.0, 15.0)]
    baseline_trend = all(b >= 0.99 * a
                         for a, b in zip(window_maxes, window_maxes[1:]))

    thrust_ok = metrics(logs["adaptive"]).max_thrust < 7.0
    runtime_ok = sum(elapsed.values()) < 60.0
    drift_ok = all(_final_so3_defect(logs[v]) < 1e-9
                   for v in ("baseline", "adaptive"))
    _report(3, "wind disturbance rejection", improves and baseline_trend
            and thrust_ok and runtime_ok and drift_ok)


def test_criterion_04_projection_invariants():
    rng = np.random.default_rng(4)
    p = _adaptive(1.0, 0.05, 1e-4, W_M=0.5)
    p = AdaptiveParams(gamma_w=50.0, gamma_v=5.0, kappa=p.kappa, c=p.c,
                       W_M=0.5, V_M=0.5)
    chan = AdaptiveChannel(p, NetworkShape(), seed=4)
    norms_ok = True
    for _ in range(100_000):
        x_nn = build_input_position(rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3))
        a = rng.uniform(-1, 1, 3)
        w = chan.step(x_nn, a, 2.5e-3)
        nW, nV = w.norms()
        if nW > p.W_M + 1e-6 or nV > p.V_M + 1e-6:
            norms_ok = False
            break

    ortho_ok = True
    for _ in range(1000):
        current = rng.standard_normal((4, 3))
        current *= 1.0 / np.linalg.norm(current)      # on the unit ball boundary
        rate = rng.standard_normal((4, 3))
        if np.sum(rate * current) <= 0.0:
            rate = rate + 2.0 * abs(np.sum(rate * current)) * current  # force outward
        projected = project_rate(rate, current, 1.0)
        if abs(np.sum(projected * current)) > 1e-12:
            ortho_ok = False
            break
    _report(4, "weight projection invariants", norms_ok and ortho_ok)


def _bisection_inflow(mu_x, mu_z, blade, iters=200):
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _inflow_residual(mid, mu_x, mu_z, blade) > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_criterion_05_inflow_solver():
    rng = np.random.default_rng(5)
    blade = BladeAeroParams()
    ok = True
    for _ in range(1000):
        mu_x = rng.uniform(0.0, 0.3)
        mu_z = rng.uniform(-0.1, 0.1)
        C_T, lam = solve_thrust_coefficient(mu_x, mu_z, blade)
        if abs(lam - _bisection_inflow(mu_x, mu_z, blade)) > 1e-8:
            ok = False
            break
        if abs(_inflow_residual(lam, mu_x, mu_z, blade)) > 1e-10:
            ok = False
            break
    _report(5, "induced-inflow solver vs oracle", ok)


def test_criterion_06_allocation_roundtrip():
    rng = np.random.default_rng(6)
    A = forward_matrix(GEOM)
    cond_ok = np.linalg.cond(A) < 1e3
    ok = cond_ok
    for _ in range(10_000):
        f = rng.uniform(0.0, 4.0 * GEOM.T_max)
        M = rng.uniform(-1.0, 1.0, 3)
        T = mix(f, M, GEOM)
        f2, M2 = unmix(T, GEOM)
        if abs(f2 - f) > 1e-12 or np.max(np.abs(M2 - M)) > 1e-12:
            ok = False
            break
        if np.max(np.abs(mix(f2, M2, GEOM) - T)) > 1e-12:
            ok = False
            break
    _report(6, "allocation round trips", ok)


def test_criterion_07_network_error_identity():
    rng = np.random.default_rng(7)
    shape = NetworkShape()
    ok = True
    for _ in range(1000):
        W = rng.standard_normal((shape.N2 + 1, 3))
        V = rng.standard_normal((shape.N1 + 1, shape.N2))
        W_bar = rng.standard_normal((shape.N2 + 1, 3))
        V_bar = rng.standard_normal((shape.N1 + 1, shape.N2))
        x_nn = np.concatenate(([1.0], rng.uniform(-2, 2, shape.N1)))
        eps = rng.uniform(-0.1, 0.1, 3)
        direct, expanded = output_error_expansion(W, V, W_bar, V_bar, x_nn, eps)
        if np.max(np.abs(direct - expanded)) > 1e-10:
            ok = False
            break
    _report(7, "estimation-error decomposition", ok)


def test_criterion_08_integrator_order():
    v_t = 10.0
    k = PARAMS.m * PARAMS.g / v_t ** 2

    def wrench(tau, s):
        U = PARAMS.m * PARAMS.g * se3.E3 - k * s.v * np.linalg.norm(s.v)
        return BodyWrench(U=U, M=np.zeros(3))

    def fall_error(dt, T=2.0):
        s = RigidBodyState.at_rest()
        for i in range(int(round(T / dt))):
            s = integrate_step(s, wrench, PARAMS, i * dt, dt)
        x_ex = v_t ** 2 / PARAMS.g * math.log(math.cosh(PARAMS.g * T / v_t))
        v_ex = v_t * math.tanh(PARAMS.g * T / v_t)
        return abs(s.x[2] - x_ex) + abs(s.v[2] - v_ex)

    ratio = fall_error(0.02) / fall_error(0.01)
    _report(8, "integrator convergence order", 12.0 <= ratio <= 20.0)


def test_criterion_09_backflip():
    plan = FlipPlan(x0=np.array([-0.22, 0.47, -0.5]), alpha_m=25.0)

    ts = np.linspace(plan.t1 - 0.2, plan.t1 + plan.Delta_t + 0.2, 8001)
    angles = np.array([flip_angle(tt, plan) for tt in ts])
    continuous = np.max(np.abs(np.diff(angles))) < 0.01
    full_turn = abs(flip_angle(plan.t1 + plan.Delta_t, plan) - 2 * np.pi) < 1e-9
    _, peak = backflip_phase(plan.t1 + plan.Delta_t / 2, plan)
    peak_ok = abs(np.linalg.norm(peak.Omega_d)
                  - plan.alpha_m * plan.Delta_t / 2) < 1e-9

    cfg = config.load_scenario(config.bundled_scenario_path("sec4b_wind"))
    cfg.trajectory = TrajectorySpec(kind="backflip", flip_plan=plan)
    cfg.wind = WindField.constant([2.0, 0.0, 0.0])
    cfg.duration = plan.t1 + plan.Delta_t + 2.5
    cfg.initial = RigidBodyState.at_rest(plan.x0)
    log = run_scenario(cfg)
    t = log.column("t")
    eR = log.norm("eR")
    t_end = plan.t1 + plan.Delta_t
    window = (t > t_end) & (t <= t_end + 2.0)
    recovered = np.min(eR[window]) < 0.1
    drift_ok = _final_so3_defect(log) < 1e-9
    _report(9, "backflip plan and wind recovery",
            continuous and full_turn and peak_ok and recovered and drift_ok)


def test_criterion_10_gain_audit():
    bound_ok = check_c1(0.5, GAINS, PARAMS).limit == 4.0

    ap = AdaptiveParams(gamma_w=1.0, gamma_v=0.05, kappa=1.0, c=0.1,
                        W_M=10.0, V_M=10.0)
    aa = AdaptiveParams(gamma_w=1.0, gamma_v=0.01, kappa=1.0, c=0.2,
                        W_M=10.0, V_M=10.0)
    tight = AuditAssumptions(
        psi1=0.01, W_M1=0.01, V_M1=0.01, Z_M1=0.1, eps1=0.001,
        W_M2=0.01, V_M2=0.01, Z_M2=0.1, eps2=0.001,
        B1=0.001, B4=0.01, E_max=0.01, x_d_max=0.01, v_d_max=0.01,
        e_x_max=0.001)

    pd_ok = True
    for assumptions in (AuditAssumptions(), tight):
        rep = run_audit(GAINS, PARAMS, ap, aa, assumptions)
        by_name = {c.name: c for c in rep.conditions}
        for name in ("M11", "M21", "N1", "N2", "N3"):
            ev = float(np.min(np.linalg.eigvalsh(rep.matrices[name])))
            cond = by_name[f"{name} positive definite"]
            if cond.passed != (ev > 1e-12) or abs(cond.value - ev) > 1e-12:
                pd_ok = False

    r1 = run_audit(GAINS, PARAMS, ap, aa, tight)
    doubled = ControllerGains(k_x=2 * GAINS.k_x, k_v=2 * GAINS.k_v,
                              k_R=2 * GAINS.k_R, k_Omega=2 * GAINS.k_Omega)
    r2 = run_audit(doubled, PARAMS, ap, aa, tight)
    shrink_ok = r1.passed and r2.passed and r2.radius < r1.radius
    _report(10, "gain-condition audit", bound_ok and pd_ok and shrink_ok)
