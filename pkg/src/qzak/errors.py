"""Exception types shared across the package."""
from __future__ import annotations


class ConfigError(ValueError):
    """Invalid run configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class BlowUpError(RuntimeError):
    """A run produced non-finite or runaway fields.

    ``last_state`` is the last finite state and ``trajectory`` the frames
    recorded before the failure.
    """

    def __init__(self, message: str, last_state=None, trajectory=None):
        super().__init__(message)
        self.last_state = last_state
        self.trajectory = trajectory


class HypothesisError(ValueError):
    """Parameters outside the range where an estimate is claimed."""


class QuadratureError(RuntimeError):
    """Numerical integration failed to reach its tolerance."""

    def __init__(self, message: str, tau: float | None = None, xi: float | None = None):
        where = "" if tau is None else f" at tau={tau!r}, xi={xi!r}"
        super().__init__(message + where)
        self.tau = tau
        self.xi = xi


class DivergentIntegralError(QuadratureError):
    """The integrand decays too slowly at infinity; the integral is infinite."""
