import numpy as np
import pytest

from windquad import se3
from windquad.errors import ConfigError, ContractViolation
from windquad.rigid_body import (
    BodyWrench,
    InertialParams,
    RigidBodyState,
    RotorGeometry,
    cross3,
    simple_wrench,
    state_derivative,
)

rng = np.random.default_rng(7)


def sim_params():
    return InertialParams(m=0.755, J=np.diag([0.00557, 0.00557, 0.0105]))


def sim_geom():
    return RotorGeometry(d_h=0.169, d_v=0.1, C_TQ=0.0167, T_max=7.0,
                         C_T_prime=1e-5)


def test_cross3_matches_numpy():
    for _ in range(100):
        a, b = rng.normal(size=3), rng.normal(size=3)
        assert np.allclose(cross3(a, b), np.cross(a, b), atol=1e-13)


def test_inertial_params_validation():
    with pytest.raises(ConfigError):
        InertialParams(m=-1.0, J=np.eye(3))
    with pytest.raises(ConfigError):
        InertialParams(m=1.0, J=np.diag([1.0, -1.0, 1.0]))
    asym = np.array([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.raises(ConfigError):
        InertialParams(m=1.0, J=asym)


def test_j_inv_cached():
    p = sim_params()
    assert np.allclose(p.J_inv @ p.J, np.eye(3), atol=1e-12)


def test_rotor_positions_plus_layout():
    g = sim_geom()
    r = g.rotor_positions
    assert np.allclose(r[0], [0.169, 0.0, 0.1])
    assert np.allclose(r[1], [0.0, -0.169, 0.1])
    assert np.allclose(r[2], [-0.169, 0.0, 0.1])
    assert np.allclose(r[3], [0.0, 0.169, 0.1])
    assert np.array_equal(g.yaw_signs, [1.0, -1.0, 1.0, -1.0])


def test_moment_matrix_equals_explicit_sum():
    g = sim_geom()
    T = rng.uniform(0.0, 7.0, size=4)
    M_explicit = np.zeros(3)
    for j in range(4):
        M_explicit -= np.cross(g.rotor_positions[j], T[j] * se3.E3)
        M_explicit -= g.yaw_signs[j] * g.C_TQ * T[j] * se3.E3
    assert np.allclose(g.moment_matrix @ T, M_explicit, atol=1e-13)


def test_equal_thrusts_give_zero_moment():
    g = sim_geom()
    w = simple_wrench(4.0, np.eye(3), np.full(4, 1.0), np.zeros(3), np.zeros(3),
                      g, sim_params())
    assert np.allclose(w.M, 0.0, atol=1e-12)


def test_hover_force_balance():
    p = sim_params()
    g = sim_geom()
    f = p.m * p.g
    w = simple_wrench(f, np.eye(3), np.full(4, f / 4.0), np.zeros(3),
                      np.zeros(3), g, p)
    assert np.allclose(w.U, 0.0, atol=1e-12)


def test_thrust_sum_contract():
    with pytest.raises(ContractViolation):
        simple_wrench(5.0, np.eye(3), np.full(4, 1.0), np.zeros(3),
                      np.zeros(3), sim_geom(), sim_params())


def test_disturbances_subtract():
    p, g = sim_params(), sim_geom()
    d1 = rng.normal(size=3)
    d2 = rng.normal(size=3)
    f = p.m * p.g
    base = simple_wrench(f, np.eye(3), np.full(4, f / 4.0), np.zeros(3),
                         np.zeros(3), g, p)
    w = simple_wrench(f, np.eye(3), np.full(4, f / 4.0), d1, d2, g, p)
    assert np.allclose(w.U, base.U - d1, atol=1e-13)
    assert np.allclose(w.M, base.M - d2, atol=1e-13)


def test_tilted_thrust_direction():
    p, g = sim_params(), sim_geom()
    R = se3.exp_map(np.array([0.0, 1.0, 0.0]), 0.3)
    f = 5.0
    w = simple_wrench(f, R, np.full(4, f / 4.0), np.zeros(3), np.zeros(3), g, p)
    expected = p.m * p.g * se3.E3 - f * R[:, 2]
    assert np.allclose(w.U, expected, atol=1e-12)


def test_state_derivative_euler_equation():
    p = sim_params()
    s = RigidBodyState(np.zeros(3), rng.normal(size=3), np.eye(3),
                       rng.normal(size=3))
    M = rng.normal(size=3)
    U = rng.normal(size=3)
    d = state_derivative(s, BodyWrench(U=U, M=M), p)
    assert np.allclose(d.dx, s.v)
    assert np.allclose(d.dv, U / p.m)
    assert np.allclose(p.J @ d.dOmega + np.cross(s.Omega, p.J @ s.Omega), M,
                       atol=1e-12)


def test_at_rest_state():
    s = RigidBodyState.at_rest([1.0, 2.0, 3.0])
    assert np.allclose(s.x, [1.0, 2.0, 3.0])
    assert np.allclose(s.v, 0.0)
    assert np.array_equal(s.R, np.eye(3))
    assert s.is_finite()


def test_is_finite_flags_nan():
    s = RigidBodyState.at_rest()
    s.v[0] = np.nan
    assert not s.is_finite()
