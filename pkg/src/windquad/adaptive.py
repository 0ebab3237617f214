"""Three-layer sigmoid network, its disturbance estimate, and the
projection-bounded online adaptive law.

One channel estimates the translational disturbance from (x, v); a second
estimates the rotational disturbance from (Euler angles, Omega).  Both share
the same update rule: a gradient-like rate with sigma-modification leakage,
projected so the Frobenius norms of the weight matrices never leave the
prescribed balls.
"""

from dataclasses import dataclass

import numpy as np

from . import se3
from .errors import ConfigError

BOUNDARY_TOL = 1e-9


@dataclass
class NetworkShape:
    N1: int = 6
    N2: int = 3
    N3: int = 3

    def __post_init__(self):
        if self.N1 != 6 or self.N3 != 3:
            raise ConfigError("channel networks are fixed at 6 inputs / 3 outputs")
        if self.N2 < 1:
            raise ConfigError("hidden width must be at least 1")


@dataclass
class AdaptiveParams:
    gamma_w: float
    gamma_v: float
    kappa: float
    c: float
    W_M: float
    V_M: float

    def __post_init__(self):
        if min(self.gamma_w, self.gamma_v, self.kappa, self.c,
               self.W_M, self.V_M) <= 0.0:
            raise ConfigError("adaptive parameters must be positive")


@dataclass
class NetworkWeights:
    """Output weights W_bar ((N2+1) x 3) and hidden weights V_bar ((N1+1) x N2)."""

    W_bar: np.ndarray
    V_bar: np.ndarray

    def __post_init__(self):
        self.W_bar = np.asarray(self.W_bar, dtype=float)
        self.V_bar = np.asarray(self.V_bar, dtype=float)

    def norms(self):
        return float(np.linalg.norm(self.W_bar)), float(np.linalg.norm(self.V_bar))


def initial_weights(shape, seed, v_scale=0.1):
    """W_bar = 0 so the estimate starts at zero; V_bar small random to break
    hidden-unit symmetry, reproducible for a fixed seed."""
    rng = np.random.default_rng(seed)
    W = np.zeros((shape.N2 + 1, shape.N3))
    V = rng.uniform(-v_scale, v_scale, size=(shape.N1 + 1, shape.N2))
    return NetworkWeights(W_bar=W, V_bar=V)


def build_input_position(x, v):
    """[1, x, v] for the translational channel."""
    return np.concatenate(([1.0], np.asarray(x, float), np.asarray(v, float)))


def build_input_attitude(R, Omega):
    """[1, theta, phi, psi, Omega] for the rotational channel.

    Propagates the gimbal-lock error from the Euler extraction.
    """
    ang = se3.euler_extract(R)
    return np.concatenate(([1.0], [ang.theta, ang.phi, ang.psi],
                           np.asarray(Omega, float)))


def activation(z):
    """Sigmoid layer output with the constant bias entry prepended."""
    z = np.asarray(z, dtype=float)
    return np.concatenate(([1.0], 1.0 / (1.0 + np.exp(-z))))


def activation_jacobian(z):
    """d activation / d z: zero bias row above diag(sig * (1 - sig))."""
    z = np.asarray(z, dtype=float)
    sig = 1.0 / (1.0 + np.exp(-z))
    out = np.zeros((z.size + 1, z.size))
    out[1:, :] = np.diag(sig * (1.0 - sig))
    return out


def estimate_disturbance(w, x_nn):
    """Network output W_bar^T sigma(V_bar^T x_nn)."""
    z = w.V_bar.T @ np.asarray(x_nn, float)
    return w.W_bar.T @ activation(z)


def composite_error(e_primary, e_rate, c):
    """Rate error plus scaled configuration error; drives the adaptive law."""
    if c <= 0.0:
        raise ConfigError("composite-error coefficient must be positive")
    return np.asarray(e_rate, float) + c * np.asarray(e_primary, float)


def raw_weight_rates(w, x_nn, a, p):
    """Unprojected weight rates with sigma-modification leakage, evaluated at
    the estimated hidden pre-activation."""
    x_nn = np.asarray(x_nn, float)
    a = np.asarray(a, float)
    z = w.V_bar.T @ x_nn
    sig = activation(z)
    sig_jac = activation_jacobian(z)
    dW = -p.gamma_w * np.outer(sig - sig_jac @ z, a) - p.kappa * p.gamma_w * w.W_bar
    dV = -p.gamma_v * np.outer(x_nn, sig_jac.T @ w.W_bar @ a) - p.kappa * p.gamma_v * w.V_bar
    return dW, dV


def project_rate(rate_raw, current, bound):
    """Keep the weight norm inside the ball of radius `bound`.

    Interior points, and boundary points with an inward or tangential raw
    rate, pass through.  A boundary point with an outward rate keeps only the
    component Frobenius-orthogonal to the current weights.
    """
    n = float(np.linalg.norm(current))
    if n < bound - BOUNDARY_TOL:
        return rate_raw
    inner = float(np.sum(rate_raw * current))
    if inner <= 0.0:
        return rate_raw
    return rate_raw - current * (inner / (n * n))


def adaptive_step(w, x_nn, a, p, dt):
    """Forward-Euler update with projected rates.

    A hard renormalization mops up the small overshoot the discretization can
    produce when a tangential step leaves the ball by O(dt^2).
    """
    if dt <= 0.0:
        raise ConfigError("dt must be positive")
    dW, dV = raw_weight_rates(w, x_nn, a, p)
    dW = project_rate(dW, w.W_bar, p.W_M)
    dV = project_rate(dV, w.V_bar, p.V_M)
    W_new = w.W_bar + dt * dW
    V_new = w.V_bar + dt * dV
    nW = np.linalg.norm(W_new)
    if nW > p.W_M:
        W_new *= p.W_M / nW
    nV = np.linalg.norm(V_new)
    if nV > p.V_M:
        V_new *= p.V_M / nV
    return NetworkWeights(W_bar=W_new, V_bar=V_new)


class AdaptiveChannel:
    """Weights plus parameters for one channel; mutated only by `step`."""

    def __init__(self, params, shape=None, seed=0):
        self.params = params
        self.shape = shape or NetworkShape()
        self.weights = initial_weights(self.shape, seed)

    def estimate(self, x_nn):
        return estimate_disturbance(self.weights, x_nn)

    def step(self, x_nn, a, dt):
        self.weights = adaptive_step(self.weights, x_nn, a, self.params, dt)
        return self.weights


def output_error_expansion(W, V, W_bar, V_bar, x_nn, eps):
    """Diagnostic decomposition of the estimation error.

    Returns (direct, expanded): the raw difference between the true and
    estimated outputs, and the same quantity reassembled from the first-order
    terms plus the lumped remainder.  The two agree to round-off; tests use
    this as an algebraic identity check.
    """
    x_nn = np.asarray(x_nn, float)
    W_t = W - W_bar
    V_t = V - V_bar
    z = V.T @ x_nn
    z_bar = V_bar.T @ x_nn
    z_t = V_t.T @ x_nn
    sig_bar = activation(z_bar)
    jac_bar = activation_jacobian(z_bar)
    direct = (W.T @ activation(z) + np.asarray(eps, float)) - W_bar.T @ sig_bar
    remainder_O = activation(z) - sig_bar - jac_bar @ z_t
    w_lump = -W_t.T @ jac_bar @ z - W.T @ remainder_O - np.asarray(eps, float)
    expanded = W_t.T @ (sig_bar - jac_bar @ z_bar) + W_bar.T @ jac_bar @ z_t - w_lump
    return direct, expanded
