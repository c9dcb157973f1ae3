"""Periodic Fourier infrastructure.

Fields are stored as arrays of Fourier-series coefficients ``c_j`` in numpy's
FFT ordering, with the convention ``u(x) = sum_j c_j exp(i xi_j x)`` on the
box ``[0, L)``.  With this normalisation ``sum_j |c_j|^2 * L`` is the squared
L2 norm of ``u``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "SpectralGrid",
    "DispersionSymbols",
    "SymbolError",
    "make_grid",
    "phi_eps",
    "to_coeffs",
    "to_physical",
    "dealiased_product",
    "apply_symbol",
    "sobolev_norm",
    "l2_norm",
    "bourgain_norm",
]

SYMBOL_KINDS = ("delta_eps", "lambda", "lambda_inv", "d_eps", "dx", "dx_inv")
BOURGAIN_PHASES = ("schrodinger", "wave_plus", "wave_minus")

# relative size of a zero mode that still counts as "zero mean"
ZERO_MODE_RTOL = 1e-12


class SymbolError(ValueError):
    """An inverse multiplier was applied to a field with a nonzero mean."""


@dataclass(frozen=True)
class SpectralGrid:
    N: int
    L: float

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 8 or self.N % 2:
            raise ValueError(f"N must be an even integer >= 8, got {self.N!r}")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L!r}")

    @property
    def dx(self) -> float:
        return self.L / self.N

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.N) * self.dx

    @cached_property
    def xi(self) -> np.ndarray:
        """Signed wavenumbers 2*pi*j/L in FFT order; Nyquist sits at index N//2."""
        return 2 * np.pi * np.fft.fftfreq(self.N, d=self.dx)

    @property
    def nyquist(self) -> int:
        return self.N // 2

    def zeros(self) -> np.ndarray:
        return np.zeros(self.N, dtype=complex)


def make_grid(N: int, L: float = 32 * np.pi) -> SpectralGrid:
    return SpectralGrid(N, float(L))


def phi_eps(xi, eps: float):
    """Dispersion symbol xi^2 + eps^2 xi^4 of -Delta + eps^2 Delta^2."""
    xi = np.asarray(xi, dtype=float)
    xi2 = xi * xi
    out = xi2 + eps * eps * xi2 * xi2
    return out if out.ndim else float(out)


def to_coeffs(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u)
    return np.fft.fft(u, axis=-1) / u.shape[-1]


def to_physical(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c)
    return np.fft.ifft(c, axis=-1) * c.shape[-1]


def _pad(c: np.ndarray, M: int) -> np.ndarray:
    N = c.shape[-1]
    h = N // 2
    out = np.zeros(c.shape[:-1] + (M,), dtype=complex)
    out[..., :h] = c[..., :h]
    # Nyquist dropped: it has no conjugate partner on the finer grid
    out[..., M - h + 1:] = c[..., h + 1:]
    return out


def _truncate(c: np.ndarray, N: int) -> np.ndarray:
    M = c.shape[-1]
    h = N // 2
    out = np.zeros(c.shape[:-1] + (N,), dtype=complex)
    out[..., :h] = c[..., :h]
    out[..., h + 1:] = c[..., M - h + 1:]
    return out


def dealiased_product(a: np.ndarray, b: np.ndarray, conj_b: bool = False) -> np.ndarray:
    """Coefficients of a*b (or a*conj(b)) free of quadratic aliasing.

    Both factors are zero padded to 3N/2 points, multiplied in physical
    space and truncated back to the retained modes (the 2/3 rule).
    """
    N = a.shape[-1]
    M = 3 * N // 2
    ua = np.fft.ifft(_pad(a, M), axis=-1) * M
    ub = np.fft.ifft(_pad(b, M), axis=-1) * M
    if conj_b:
        ub = np.conj(ub)
    return _truncate(np.fft.fft(ua * ub, axis=-1) / M, N)


@dataclass(frozen=True, eq=False)
class DispersionSymbols:
    """Multiplier tables for one grid and one value of the quantum parameter."""

    grid: SpectralGrid
    eps: float
    phi: np.ndarray = field(init=False, repr=False)
    sqrt_phi: np.ndarray = field(init=False, repr=False)
    lambda_inv: np.ndarray = field(init=False, repr=False)
    deriv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError(f"eps must lie in [0, 1], got {self.eps!r}")
        xi = self.grid.xi
        phi = phi_eps(xi, self.eps)
        sqrt_phi = np.sqrt(phi)
        lam_inv = np.zeros_like(sqrt_phi)
        nz = sqrt_phi > 0
        lam_inv[nz] = 1.0 / sqrt_phi[nz]
        deriv = 1j * xi
        deriv[self.grid.nyquist] = 0.0
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "sqrt_phi", sqrt_phi)
        object.__setattr__(self, "lambda_inv", lam_inv)
        object.__setattr__(self, "deriv", deriv)

    def d_eps(self, alpha: float) -> np.ndarray:
        """Symbol (1 + 6 eps^2 xi^2)^(alpha/2); equals one identically at eps = 0."""
        return (1.0 + 6.0 * self.eps**2 * self.grid.xi**2) ** (alpha / 2)

    @cached_property
    def dx_inv(self) -> np.ndarray:
        xi = self.grid.xi
        out = np.zeros(xi.shape, dtype=complex)
        nz = xi != 0
        out[nz] = 1.0 / (1j * xi[nz])
        out[self.grid.nyquist] = 0.0
        return out

    @cached_property
    def lambda_inv_laplacian(self) -> np.ndarray:
        """Symbol of Lambda^{-1} Delta, i.e. -xi^2/sqrt(Phi); bounded, zero at xi = 0."""
        out = np.zeros_like(self.phi)
        nz = self.sqrt_phi > 0
        out[nz] = -self.grid.xi[nz] ** 2 / self.sqrt_phi[nz]
        return out


def _check_zero_mean(c: np.ndarray, what: str) -> None:
    scale = np.max(np.abs(c)) if c.size else 0.0
    if abs(c[..., 0]).max() > ZERO_MODE_RTOL * max(scale, np.finfo(float).tiny):
        raise SymbolError(
            f"{what} applied to a field with nonzero mean "
            f"(|c_0| = {abs(c[..., 0]).max():.3e}); the inverse is undefined on the zero mode"
        )


def apply_symbol(c: np.ndarray, kind: str, syms: DispersionSymbols, alpha: float | None = None) -> np.ndarray:
    """Multiply Fourier coefficients by one of the named symbols."""
    c = np.asarray(c, dtype=complex)
    if kind == "delta_eps":
        return -syms.phi * c
    if kind == "lambda":
        return syms.sqrt_phi * c
    if kind == "lambda_inv":
        _check_zero_mean(c, "lambda_inv")
        return syms.lambda_inv * c
    if kind == "d_eps":
        if alpha is None:
            raise ValueError("d_eps needs an exponent alpha")
        return syms.d_eps(alpha) * c
    if kind == "dx":
        return syms.deriv * c
    if kind == "dx_inv":
        _check_zero_mean(c, "dx_inv")
        return syms.dx_inv * c
    raise ValueError(f"unknown symbol kind {kind!r}; expected one of {SYMBOL_KINDS}")


def sobolev_norm(c: np.ndarray, s: float, grid: SpectralGrid) -> float:
    w = (1.0 + grid.xi**2) ** s
    return float(np.sqrt(grid.L * np.sum(w * np.abs(c) ** 2)))


def l2_norm(c: np.ndarray, grid: SpectralGrid) -> float:
    return float(np.sqrt(grid.L * np.sum(np.abs(c) ** 2)))


def bourgain_norm(
    traj: np.ndarray,
    dt: float,
    s: float,
    b: float,
    phase: str,
    syms: DispersionSymbols,
) -> float:
    """Discrete X^{s,b} norm of a space-time sample array.

    ``traj`` has shape ``(n_t, N)`` and holds physical values sampled every
    ``dt``; it should already carry a smooth time cutoff so that the periodic
    extension in time is harmless.  Weights use the bracket ``1 + |.|``.
    """
    traj = np.asarray(traj)
    if traj.ndim != 2 or traj.shape[1] != syms.grid.N:
        raise ValueError(f"traj must have shape (n_t, {syms.grid.N}), got {traj.shape}")
    n_t = traj.shape[0]
    if n_t < 8:
        raise ValueError(f"need at least 8 time samples, got {n_t}")
    if phase == "schrodinger":
        omega = syms.phi
    elif phase == "wave_plus":
        omega = syms.sqrt_phi
    elif phase == "wave_minus":
        omega = -syms.sqrt_phi
    else:
        raise ValueError(f"unknown phase {phase!r}; expected one of {BOURGAIN_PHASES}")
    grid = syms.grid
    a = np.fft.fft2(traj) / (n_t * grid.N)
    tau = 2 * np.pi * np.fft.fftfreq(n_t, d=dt)
    weight = (1.0 + np.abs(grid.xi))[None, :] ** (2 * s) * (1.0 + np.abs(tau[:, None] + omega[None, :])) ** (2 * b)
    return float(np.sqrt(grid.L * n_t * dt * np.sum(weight * np.abs(a) ** 2)))
