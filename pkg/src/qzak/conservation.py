"""Conserved quantities and local balance-law residuals."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import DispersionSymbols, SpectralGrid, SymbolError, dealiased_product, to_physical
from .states import PrimalState, Trajectory

__all__ = [
    "ConservationReport",
    "ResidualReport",
    "HAMILTONIAN_TERMS",
    "mass",
    "momentum",
    "hamiltonian",
    "hamiltonian_terms",
    "conservation_report",
    "momentum_densities",
    "local_conservation_residual",
    "hydrodynamic_residual",
]

HAMILTONIAN_TERMS = ("h_dx_E", "h_eps_dxx_E", "h_n_E2", "h_n2", "h_V2", "h_eps_dx_n")

# imaginary part tolerated in densities that are real in exact arithmetic
REAL_RTOL = 1e-9


def _dxk(c: np.ndarray, k: int, syms: DispersionSymbols) -> np.ndarray:
    return syms.deriv**k * c


def _real_coeffs(c: np.ndarray, what: str) -> np.ndarray:
    u = to_physical(c)
    scale = max(float(np.max(np.abs(u))), 1.0)
    if np.max(np.abs(u.imag)) > REAL_RTOL * scale:
        raise ArithmeticError(f"{what} has a large imaginary part ({np.max(np.abs(u.imag)):.3e})")
    return np.fft.fft(u.real) / u.shape[-1]


def mass(p: PrimalState, grid: SpectralGrid) -> float:
    return float(grid.L * np.sum(np.abs(p.E) ** 2))


def momentum(p: PrimalState, grid: SpectralGrid) -> float:
    """Integral of the momentum density 2 Im(conj(E) E_x)."""
    return float(grid.L * np.sum(2.0 * grid.xi * np.abs(p.E) ** 2))


def hamiltonian_terms(p: PrimalState, syms: DispersionSymbols) -> dict[str, float]:
    """The six integrals making up the energy, each evaluated by Parseval."""
    grid = syms.grid
    L, xi, eps2 = grid.L, grid.xi, syms.eps**2
    xi2 = xi * xi
    if abs(p.nt[0]) > 1e-12 * max(float(np.max(np.abs(p.nt))), np.finfo(float).tiny):
        raise SymbolError(f"nt must have zero mean for the velocity potential (|c_0| = {abs(p.nt[0]):.3e})")
    absE2 = np.abs(p.E) ** 2
    absn2 = np.abs(p.n) ** 2
    rho = dealiased_product(p.E, p.E, conj_b=True)
    inv_xi2 = np.zeros_like(xi2)
    inv_xi2[1:] = 1.0 / xi2[1:]
    return {
        "h_dx_E": float(L * np.sum(xi2 * absE2)),
        "h_eps_dxx_E": float(L * eps2 * np.sum(xi2 * xi2 * absE2)),
        "h_n_E2": float(L * np.real(np.vdot(p.n, rho))),
        "h_n2": float(0.5 * L * np.sum(absn2)),
        "h_V2": float(0.5 * L * np.sum(inv_xi2 * np.abs(p.nt) ** 2)),
        "h_eps_dx_n": float(0.5 * L * eps2 * np.sum(xi2 * absn2)),
    }


def hamiltonian(p: PrimalState, syms: DispersionSymbols) -> float:
    return float(sum(hamiltonian_terms(p, syms).values()))


@dataclass
class ConservationReport:
    mass: float
    hamiltonian: float
    momentum: float
    terms: dict[str, float]
    mass_residual_L2: float | None = None
    momentum_residual_L2: float | None = None


def conservation_report(p: PrimalState, syms: DispersionSymbols) -> ConservationReport:
    terms = hamiltonian_terms(p, syms)
    return ConservationReport(
        mass=mass(p, syms.grid),
        hamiltonian=float(sum(terms.values())),
        momentum=momentum(p, syms.grid),
        terms=terms,
    )


def _pair(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coefficients of a * conj(b)."""
    return dealiased_product(a, b, conj_b=True)


def momentum_densities(p: PrimalState, syms: DispersionSymbols) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficients of the mass density, momentum density and quantum mass flux.

    The quantum flux is i(E E*_xxx - E_x E*_xx + E_xx E*_x - E_xxx E*), which
    makes rho_t + J_x = eps^2 (J_Q)_x hold for the quantum Zakharov flow.
    """
    E = p.E
    d = [E] + [_dxk(E, k, syms) for k in (1, 2, 3)]
    rho = _pair(E, E)
    J = 1j * (_pair(E, d[1]) - _pair(d[1], E))
    JQ = 1j * (_pair(E, d[3]) - _pair(d[1], d[2]) + _pair(d[2], d[1]) - _pair(d[3], E))
    return _real_coeffs(rho, "rho"), _real_coeffs(J, "J"), _real_coeffs(JQ, "J_Q")


def _momentum_fluxes(p: PrimalState, syms: DispersionSymbols) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Classical flux, quantum flux and coupling term of the momentum balance.

    J_t = d/dx[classical] - 2 n_x |E|^2 + eps^2 d/dx[quantum].
    """
    E = p.E
    d = [E] + [_dxk(E, k, syms) for k in (1, 2, 3, 4)]
    classical = _pair(E, d[2]) - 2 * _pair(d[1], d[1]) + _pair(d[2], E)
    quantum = -(_pair(E, d[4]) + _pair(d[4], E)) + 2 * (_pair(d[1], d[3]) + _pair(d[3], d[1])) - 2 * _pair(d[2], d[2])
    rho = _pair(E, E)
    coupling = 2 * dealiased_product(_dxk(p.n, 1, syms), rho)
    return classical, quantum, coupling


@dataclass
class ResidualReport:
    """Residuals of the local laws at interior frames (centered differences)."""

    times: np.ndarray
    mass_L2: np.ndarray
    mass_sup: np.ndarray
    momentum_L2: np.ndarray
    momentum_sup: np.ndarray
    extra: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def mass_L2_max(self) -> float:
        return float(np.max(self.mass_L2)) if self.mass_L2.size else 0.0

    @property
    def momentum_L2_max(self) -> float:
        return float(np.max(self.momentum_L2)) if self.momentum_L2.size else 0.0


def _frame_spacing(traj: Trajectory) -> float:
    if len(traj.states) < 3:
        raise ValueError(f"need at least 3 stored frames, got {len(traj.states)}")
    t = np.array([s.t for s in traj.states])
    h = np.diff(t)
    if np.any(h <= 0) or np.max(np.abs(h - h[0])) > 1e-9 * max(h[0], 1e-300):
        raise ValueError("frames must be uniformly spaced in time")
    return float(h[0])


def _norms(c: np.ndarray, grid: SpectralGrid) -> tuple[float, float]:
    return float(np.sqrt(grid.L * np.sum(np.abs(c) ** 2))), float(np.max(np.abs(to_physical(c))))


def local_conservation_residual(traj: Trajectory, syms: DispersionSymbols) -> ResidualReport:
    """Residuals of the local mass and momentum laws on stored frames.

    Time derivatives are centered differences of the stored frames; space
    derivatives are spectral.
    """
    h = _frame_spacing(traj)
    grid, eps2 = syms.grid, syms.eps**2
    dx = syms.deriv
    dens = [momentum_densities(s, syms) for s in traj.states]
    out = {k: [] for k in ("mL2", "msup", "pL2", "psup")}
    for i in range(1, len(traj.states) - 1):
        rho_t = (dens[i + 1][0] - dens[i - 1][0]) / (2 * h)
        J_t = (dens[i + 1][1] - dens[i - 1][1]) / (2 * h)
        _, J, JQ = dens[i]
        r_mass = rho_t + dx * (J - eps2 * JQ)
        classical, quantum, coupling = _momentum_fluxes(traj.states[i], syms)
        r_mom = J_t - dx * classical + coupling - eps2 * dx * quantum
        a, b = _norms(r_mass, grid)
        c, d = _norms(r_mom, grid)
        out["mL2"].append(a)
        out["msup"].append(b)
        out["pL2"].append(c)
        out["psup"].append(d)
    times = np.array([s.t for s in traj.states[1:-1]])
    return ResidualReport(
        times,
        np.array(out["mL2"]),
        np.array(out["msup"]),
        np.array(out["pL2"]),
        np.array(out["psup"]),
    )


def hydrodynamic_residual(traj: Trajectory, syms: DispersionSymbols) -> ResidualReport:
    """Residuals of the fluid form of the classical system on a stored run.

    Evaluates rho_t + J_x, J_t + (J^2/rho)_x + 2 rho n_x - (rho (log rho)_xx)_x
    and the density equation n_tt - n_xx - rho_xx.  Only meaningful when
    rho stays bounded away from zero; the momentum form is exact only at
    eps = 0.
    """
    h = _frame_spacing(traj)
    grid = syms.grid
    dx = syms.deriv
    phys = []
    for s in traj.states:
        rho_c, J_c, _ = momentum_densities(s, syms)
        rho = to_physical(rho_c).real
        if np.min(rho) <= 0:
            raise ValueError("hydrodynamic form needs |E|^2 > 0 everywhere")
        phys.append((rho_c, J_c, rho, to_physical(J_c).real))
    ns = [s.n for s in traj.states]
    res = {k: [] for k in ("mL2", "msup", "pL2", "psup", "wL2")}
    for i in range(1, len(traj.states) - 1):
        rho_c, J_c, rho, J = phys[i]
        s = traj.states[i]
        rho_t = (phys[i + 1][0] - phys[i - 1][0]) / (2 * h)
        J_t = (phys[i + 1][1] - phys[i - 1][1]) / (2 * h)
        r_mass = rho_t + dx * J_c
        flux = np.fft.fft(J * J / rho) / grid.N
        logr = np.fft.fft(np.log(rho)) / grid.N
        quantum = np.fft.fft(rho * to_physical(dx * dx * logr).real) / grid.N
        coupling = np.fft.fft(2 * rho * to_physical(dx * s.n).real) / grid.N
        r_mom = J_t + dx * flux + coupling - dx * quantum
        n_tt = (ns[i + 1] - 2 * ns[i] + ns[i - 1]) / (h * h)
        r_wave = n_tt - dx * dx * s.n - dx * dx * rho_c
        a, b = _norms(r_mass, grid)
        c, d = _norms(r_mom, grid)
        res["mL2"].append(a)
        res["msup"].append(b)
        res["pL2"].append(c)
        res["psup"].append(d)
        res["wL2"].append(_norms(r_wave, grid)[0])
    return ResidualReport(
        np.array([s.t for s in traj.states[1:-1]]),
        np.array(res["mL2"]),
        np.array(res["msup"]),
        np.array(res["pL2"]),
        np.array(res["psup"]),
        extra={"wave_L2": np.array(res["wL2"])},
    )
