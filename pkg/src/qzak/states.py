"""Plain value types shared by the solvers and the diagnostics."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

__all__ = ["PrimalState", "SplitState", "Trajectory"]


@dataclass
class PrimalState:
    """Envelope field E, density n and its time derivative nt, as coefficients."""

    E: np.ndarray
    n: np.ndarray
    nt: np.ndarray
    t: float = 0.0

    def copy(self) -> "PrimalState":
        return PrimalState(self.E.copy(), self.n.copy(), self.nt.copy(), float(self.t))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.E)) and np.all(np.isfinite(self.n)) and np.all(np.isfinite(self.nt)))


@dataclass
class SplitState:
    """E together with the positive/negative frequency halves of the density."""

    E: np.ndarray
    n_plus: np.ndarray
    n_minus: np.ndarray
    t: float = 0.0

    def copy(self) -> "SplitState":
        return SplitState(self.E.copy(), self.n_plus.copy(), self.n_minus.copy(), float(self.t))

    def with_time(self, t: float) -> "SplitState":
        return replace(self, t=float(t))

    def is_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.E)) and np.all(np.isfinite(self.n_plus)) and np.all(np.isfinite(self.n_minus))
        )


@dataclass
class Trajectory:
    """Recorded frames of a run.

    ``states`` holds full primal states when they were kept, otherwise it is
    empty and only the scalar diagnostics are available.
    """

    times: list[float] = field(default_factory=list)
    states: list[PrimalState] = field(default_factory=list)
    diagnostics: dict[str, list[float]] = field(default_factory=dict)
    dt: float | None = None

    def record(self, t: float, state: PrimalState | None, diag: dict[str, float] | None = None) -> None:
        if self.times and not t > self.times[-1]:
            raise ValueError(f"trajectory times must increase strictly ({t} after {self.times[-1]})")
        self.times.append(float(t))
        if state is not None:
            self.states.append(state)
        for key, val in (diag or {}).items():
            self.diagnostics.setdefault(key, []).append(float(val))

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> PrimalState:
        if not self.states:
            raise ValueError("trajectory holds no states")
        return self.states[-1]

    def field_array(self, name: str) -> np.ndarray:
        """Stack one component of every stored state into a (frames, N) array."""
        return np.stack([getattr(s, name) for s in self.states])
