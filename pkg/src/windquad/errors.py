"""Exception types shared across the package."""


class WindquadError(Exception):
    """Base class for all package errors."""


class ContractViolation(WindquadError):
    """An input violated a documented precondition."""


class GimbalLock(WindquadError):
    """Euler extraction requested too close to the pitch singularity."""


class DegenerateForce(WindquadError):
    """Ideal force vanished; the commanded thrust axis is undefined."""


class AttitudeAlignment(WindquadError):
    """Desired heading is parallel to the commanded thrust axis."""


class InflowSolverError(WindquadError):
    """Thrust-coefficient fixed point failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RotorStall(WindquadError):
    """Rotor speed below the guard value; advance ratios diverge."""


class ConfigError(WindquadError):
    """Malformed or inconsistent scenario / audit configuration."""


class SimulationAbort(WindquadError):
    """The closed-loop run produced a non-finite or invalid state."""

    def __init__(self, message, step=None, t=None):
        super().__init__(message)
        self.step = step
        self.t = t
