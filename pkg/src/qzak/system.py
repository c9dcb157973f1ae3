"""Quantum Zakharov dynamics on a periodic grid.

The density equation is written as a pair of first-order half-wave
equations for ``n_plus = n + i Lambda^{-1} n_t`` and ``n_minus = conj(n_plus)``.
The linear part of every component is integrated exactly in Fourier space.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import BlowUpError, ConfigError
from .spectral import (
    DispersionSymbols,
    SpectralGrid,
    apply_symbol,
    dealiased_product,
    l2_norm,
    make_grid,
    sobolev_norm,
    to_coeffs,
    to_physical,
)
from .states import PrimalState, SplitState, Trajectory

log = logging.getLogger(__name__)

__all__ = [
    "InitialData",
    "SimConfig",
    "PicardResult",
    "split_state",
    "unsplit_state",
    "free_evolve",
    "nonlinear_rhs",
    "step_strang",
    "picard_iterate",
    "initial_state",
    "simulate",
]

PROFILES = ("gaussian", "sech", "plane_wave", "random", "zero")
INTEGRATORS = ("strang", "picard")

# spectral decay margin for random data: |c(xi)| ~ <xi>^{-(s + 1/2) - RANDOM_DECAY_MARGIN}
RANDOM_DECAY_MARGIN = 0.01


def split_state(p: PrimalState, syms: DispersionSymbols) -> SplitState:
    w = 1j * apply_symbol(p.nt, "lambda_inv", syms)
    return SplitState(np.asarray(p.E, dtype=complex).copy(), p.n + w, p.n - w, p.t)


def unsplit_state(s: SplitState, syms: DispersionSymbols) -> PrimalState:
    n = 0.5 * (s.n_plus + s.n_minus)
    nt = apply_symbol(s.n_plus - s.n_minus, "lambda", syms) / 2j
    return PrimalState(s.E.copy(), n, nt, s.t)


def free_evolve(s: SplitState, t: float, syms: DispersionSymbols) -> SplitState:
    """Exact linear flow over time ``t`` (any sign)."""
    schro = np.exp(-1j * t * syms.phi)
    wave = np.exp(-1j * t * syms.sqrt_phi)
    return SplitState(s.E * schro, s.n_plus * wave, s.n_minus * np.conj(wave), s.t + t)


def _density_forcing(E: np.ndarray, syms: DispersionSymbols) -> np.ndarray:
    """i Lambda^{-1} Delta |E|^2, the forcing of n_plus (n_minus gets its negative)."""
    rho = dealiased_product(E, E, conj_b=True)
    return 1j * syms.lambda_inv_laplacian * rho


def nonlinear_rhs(s: SplitState, syms: DispersionSymbols) -> SplitState:
    """Nonlinear tendencies (dE/dt, dn_plus/dt, dn_minus/dt) as a SplitState."""
    n = 0.5 * (s.n_plus + s.n_minus)
    dE = -1j * dealiased_product(n, s.E)
    g = _density_forcing(s.E, syms)
    return SplitState(dE, g, -g, s.t)


def _nonlinear_substep(s: SplitState, dt: float, syms: DispersionSymbols) -> SplitState:
    # n = (n_plus + n_minus)/2 does not move during this substep, so E only
    # picks up a pointwise phase. The density update uses |E|^2 at mid-substep.
    n_phys = to_physical(0.5 * (s.n_plus + s.n_minus)).real
    E_phys = to_physical(s.E)
    E_mid = to_coeffs(E_phys * np.exp(-0.5j * dt * n_phys))
    E_new = to_coeffs(E_phys * np.exp(-1j * dt * n_phys))
    g = dt * _density_forcing(E_mid, syms)
    return SplitState(E_new, s.n_plus + g, s.n_minus - g, s.t)


def step_strang(s: SplitState, dt: float, syms: DispersionSymbols) -> SplitState:
    """One second-order step: half linear, full nonlinear, half linear."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    half = free_evolve(s, 0.5 * dt, syms)
    mid = _nonlinear_substep(half, dt, syms)
    out = free_evolve(mid, 0.5 * dt, syms)
    if not out.is_finite():
        raise BlowUpError(f"non-finite field after step ending at t={out.t:.6g}", last_state=s)
    return out


@dataclass
class PicardResult:
    """Fixed-point iterates of the Duhamel map on a uniform time grid.

    ``iterates[k]`` is a tuple ``(E, n_plus, n_minus)`` of arrays of shape
    ``(n_time_nodes, N)``; iterate 0 is the free evolution of the data.
    ``residuals[k]`` is the sup over time of the L2 distance between iterates
    k and k+1.
    """

    times: np.ndarray
    iterates: list[tuple[np.ndarray, np.ndarray, np.ndarray]]
    residuals: np.ndarray
    diverged: bool

    @property
    def ratios(self) -> np.ndarray:
        r = self.residuals
        with np.errstate(divide="ignore", invalid="ignore"):
            return r[1:] / r[:-1]

    def state_at(self, k: int, i: int) -> SplitState:
        E, npl, nmi = self.iterates[k]
        return SplitState(E[i].copy(), npl[i].copy(), nmi[i].copy(), float(self.times[i]))


def _divergence_flag(residuals: list[float], run: int = 3) -> bool:
    count = 0
    for a, b in zip(residuals, residuals[1:]):
        count = count + 1 if (a > 0 and b / a > 1.0) else 0
        if count >= run:
            return True
    return False


def picard_iterate(
    s0: SplitState,
    T: float,
    n_time_nodes: int,
    n_iters: int,
    syms: DispersionSymbols,
) -> PicardResult:
    """Iterate the Duhamel map with trapezoid quadrature of the retarded integrals.

    Divergence (three consecutive residual ratios above one) is reported in
    the result rather than raised.
    """
    if not T > 0:
        raise ValueError(f"T must be positive, got {T!r}")
    if n_iters < 2:
        raise ValueError(f"n_iters must be >= 2, got {n_iters!r}")
    if n_time_nodes < 2:
        raise ValueError(f"n_time_nodes must be >= 2, got {n_time_nodes!r}")
    grid = syms.grid
    t = np.linspace(0.0, T, n_time_nodes)
    schro = np.exp(-1j * np.outer(t, syms.phi))
    wave = np.exp(-1j * np.outer(t, syms.sqrt_phi))

    current = (schro * s0.E, wave * s0.n_plus, np.conj(wave) * s0.n_minus)
    iterates = [current]
    residuals: list[float] = []
    for _ in range(n_iters):
        E, npl, nmi = current
        fE = -1j * dealiased_product(0.5 * (npl + nmi), E)
        g = _density_forcing(E, syms)
        E_new = schro * (s0.E + cumulative_trapezoid(np.conj(schro) * fE, t, axis=0, initial=0))
        p_new = wave * (s0.n_plus + cumulative_trapezoid(np.conj(wave) * g, t, axis=0, initial=0))
        m_new = np.conj(wave) * (s0.n_minus - cumulative_trapezoid(wave * g, t, axis=0, initial=0))
        nxt = (E_new, p_new, m_new)
        with np.errstate(over="ignore", invalid="ignore"):
            diff2 = sum(np.sum(np.abs(a - b) ** 2, axis=1) for a, b in zip(nxt, current))
        residuals.append(float(np.sqrt(grid.L * diff2.max())))
        iterates.append(nxt)
        current = nxt
        if not all(np.all(np.isfinite(a)) for a in nxt):
            log.warning("Picard iterate became non-finite after %d iterations", len(residuals))
            break
    diverged = _divergence_flag(residuals)
    if diverged:
        log.warning("Picard iteration diverging on [0, %g]; residuals %s", T, residuals)
    return PicardResult(t, iterates, np.asarray(residuals), diverged)


@dataclass
class InitialData:
    """Named initial profile.

    ``norm`` selects how ``amplitude`` and ``n_amplitude`` are read: ``"peak"``
    as the maximum modulus, ``"H1"`` as the H^1 norm of the component.
    """

    profile: str = "gaussian"
    amplitude: float = 1.0
    width: float = 2.0
    center: float | None = None
    kappa: float = 0.0
    n_amplitude: float = 0.0
    nt_amplitude: float = 0.0
    s: float = 1.0
    norm: str = "peak"

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ConfigError("initial.profile", f"unknown profile {self.profile!r}; expected one of {PROFILES}")
        if self.norm not in ("peak", "H1"):
            raise ConfigError("initial.norm", f"expected 'peak' or 'H1', got {self.norm!r}")
        if not self.width > 0:
            raise ConfigError("initial.width", f"must be positive, got {self.width!r}")


def _random_coeffs(grid: SpectralGrid, s: float, rng: np.random.Generator) -> np.ndarray:
    decay = (1.0 + np.abs(grid.xi)) ** (-(s + 0.5) - RANDOM_DECAY_MARGIN)
    phases = np.exp(2j * np.pi * rng.random(grid.N))
    c = decay * phases
    c[grid.nyquist] = 0.0
    return c


def _real_part(c: np.ndarray) -> np.ndarray:
    return to_coeffs(to_physical(c).real)


def _scaled(c: np.ndarray, amp: float, norm: str, grid: SpectralGrid) -> np.ndarray:
    if amp == 0.0:
        return np.zeros_like(c)
    size = sobolev_norm(c, 1.0, grid) if norm == "H1" else np.max(np.abs(to_physical(c)))
    if size == 0.0:
        return np.zeros_like(c)
    return c * (amp / size)


def initial_state(desc: InitialData, grid: SpectralGrid, rng: np.random.Generator | None = None) -> PrimalState:
    x = grid.x
    x0 = grid.L / 2 if desc.center is None else desc.center
    z = (x - x0) / desc.width
    carrier = np.exp(1j * desc.kappa * x)
    if desc.profile == "gaussian":
        bump = np.exp(-0.5 * z * z)
        E, n, nt = to_coeffs(bump * carrier), to_coeffs(bump), to_coeffs(-z * bump)
    elif desc.profile == "sech":
        bump = 1.0 / np.cosh(z)
        E, n, nt = to_coeffs(bump * carrier), to_coeffs(bump), to_coeffs(-np.tanh(z) * bump)
    elif desc.profile == "plane_wave":
        E, n, nt = to_coeffs(carrier), grid.zeros(), grid.zeros()
    elif desc.profile == "random":
        if rng is None:
            raise ValueError("random initial data needs a generator")
        E = _random_coeffs(grid, desc.s, rng)
        n = _real_part(_random_coeffs(grid, desc.s, rng))
        nt = _real_part(_random_coeffs(grid, desc.s, rng))
    else:
        E, n, nt = grid.zeros(), grid.zeros(), grid.zeros()
    nt = nt.copy()
    nt[0] = 0.0
    if desc.profile == "plane_wave":
        E = E * desc.amplitude
    else:
        E = _scaled(E, desc.amplitude, desc.norm, grid)
    return PrimalState(
        E,
        _scaled(n, desc.n_amplitude, desc.norm, grid),
        _scaled(nt, desc.nt_amplitude, desc.norm, grid),
        0.0,
    )


@dataclass
class SimConfig:
    N: int = 256
    L: float = 32 * np.pi
    eps: float = 1.0
    dt: float = 1e-3
    T_final: float = 1.0
    integrator: str = "strang"
    initial: InitialData = field(default_factory=InitialData)
    cadence: int = 10
    store_states: bool = False
    picard_iters: int = 8
    blowup_threshold: float = 1e8

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 8 or self.N % 2:
            raise ConfigError("N", f"must be an even integer >= 8, got {self.N!r}")
        if not self.L > 0:
            raise ConfigError("L", f"must be positive, got {self.L!r}")
        if not 0.0 <= self.eps <= 1.0:
            raise ConfigError("eps", f"must lie in [0, 1], got {self.eps!r}")
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ConfigError("dt", f"must be positive, got {self.dt!r}")
        if not self.T_final >= self.dt:
            raise ConfigError("T_final", f"must be >= dt ({self.dt!r}), got {self.T_final!r}")
        if self.integrator not in INTEGRATORS:
            raise ConfigError("integrator", f"expected one of {INTEGRATORS}, got {self.integrator!r}")
        if not isinstance(self.cadence, (int, np.integer)) or self.cadence < 1:
            raise ConfigError("cadence", f"must be a positive integer, got {self.cadence!r}")
        if self.picard_iters < 2:
            raise ConfigError("picard_iters", f"must be >= 2, got {self.picard_iters!r}")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.T_final / self.dt)))


def frame_diagnostics(p: PrimalState, syms: DispersionSymbols) -> dict[str, float]:
    from .conservation import conservation_report

    report = conservation_report(p, syms)
    out = {"mass": report.mass, "hamiltonian": report.hamiltonian, "momentum": report.momentum}
    out.update(report.terms)
    out["E_H1"] = sobolev_norm(p.E, 1.0, syms.grid)
    out["n_L2"] = l2_norm(p.n, syms.grid)
    return out


def _too_large(s: SplitState, limit: float) -> bool:
    return bool(np.max(np.abs(s.E)) > limit or np.max(np.abs(s.n_plus)) > limit)


def simulate(cfg: SimConfig, rng: np.random.Generator | None = None, state0: PrimalState | None = None) -> Trajectory:
    """Run the configured integrator and record frames every ``cadence`` steps."""
    grid = make_grid(cfg.N, cfg.L)
    syms = DispersionSymbols(grid, cfg.eps)
    p0 = state0 if state0 is not None else initial_state(cfg.initial, grid, rng)
    traj = Trajectory(dt=cfg.dt)
    steps = cfg.n_steps
    dt = cfg.T_final / steps

    def keep(p: PrimalState) -> None:
        traj.record(p.t, p if cfg.store_states else None, frame_diagnostics(p, syms))

    if cfg.integrator == "picard":
        res = picard_iterate(split_state(p0, syms), cfg.T_final, steps + 1, cfg.picard_iters, syms)
        if res.diverged:
            raise BlowUpError("Picard iteration diverged", last_state=p0, trajectory=traj)
        k = len(res.iterates) - 1
        for i in range(steps + 1):
            if i % cfg.cadence == 0 or i == steps:
                keep(unsplit_state(res.state_at(k, i), syms))
        return traj

    s = split_state(p0, syms)
    keep(p0.copy())
    for i in range(1, steps + 1):
        try:
            s_new = step_strang(s, dt, syms)
        except BlowUpError as exc:
            exc.last_state = unsplit_state(s, syms)
            exc.trajectory = traj
            raise
        if _too_large(s_new, cfg.blowup_threshold):
            raise BlowUpError(
                f"field exceeded {cfg.blowup_threshold:g} at t={s_new.t:.6g}",
                last_state=unsplit_state(s, syms),
                trajectory=traj,
            )
        s = s_new
        s.t = i * dt
        if i % cfg.cadence == 0 or i == steps:
            keep(unsplit_state(s, syms))
    return traj
