"""Resonance function of two fourth-order Schroedinger waves."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..spectral import phi_eps
from .quadrature import bracket

__all__ = [
    "resonance_cubic",
    "resonance_direct",
    "resonance_at_offset",
    "ResonanceCheck",
    "check_resonance_identity",
    "key_observation_bounds",
]


def resonance_cubic(tau, xi, eta, eps):
    """tau - Phi(xi1 - xi) + Phi(xi1) at xi1 = xi/2 + eta, in expanded form.

    The expanded cubic avoids the cancellation between the two quartics
    when |eta| is small compared with xi.
    """
    tau, xi, eta = np.asarray(tau, float), np.asarray(xi, float), np.asarray(eta, float)
    e2 = eps * eps
    out = tau + (2 * xi + e2 * xi**3) * eta + 4 * e2 * xi * eta**3
    return out if out.ndim else float(out)


def resonance_at_offset(u, root, xi, eps):
    """The expanded cubic at eta = root + u, written as u * quadratic.

    ``root`` is its real zero.  Near the zero the resonance varies on a
    scale far below the spacing of doubles around ``root`` once xi is large,
    so callers integrate in the offset u, which keeps full resolution.
    """
    u = np.asarray(u, float)
    eta = root + u
    e2 = eps * eps
    out = u * ((2 * xi + e2 * xi**3) + 4 * e2 * xi * (eta * eta + eta * root + root * root))
    return out if out.ndim else float(out)


def resonance_direct(tau, xi, eta, eps):
    tau, xi, eta = np.asarray(tau, float), np.asarray(xi, float), np.asarray(eta, float)
    out = tau - phi_eps(eta - xi / 2, eps) + phi_eps(eta + xi / 2, eps)
    return out if np.ndim(out) else float(out)


@dataclass
class ResonanceCheck:
    n_points: int
    max_rel_error: float
    worst_point: tuple[float, float, float, float]


def check_resonance_identity(
    n_points: int,
    rng: np.random.Generator,
    tau_scale: float = 1e3,
    xi_scale: float = 1e2,
) -> ResonanceCheck:
    """Compare the expanded and direct forms at random points.

    The error is measured relative to |tau| + Phi(xi1) + Phi(xi1 - xi), the
    size of the terms being combined, since the resonance itself can vanish.
    """
    tau = rng.uniform(-tau_scale, tau_scale, n_points)
    xi = rng.uniform(-xi_scale, xi_scale, n_points)
    eta = rng.uniform(-xi_scale, xi_scale, n_points)
    eps = rng.uniform(0.0, 1.0, n_points)
    a = resonance_cubic(tau, xi, eta, eps)
    b = resonance_direct(tau, xi, eta, eps)
    scale = np.abs(tau) + phi_eps(eta + xi / 2, eps) + phi_eps(eta - xi / 2, eps)
    rel = np.abs(a - b) / np.maximum(scale, np.finfo(float).tiny)
    i = int(np.argmax(rel))
    return ResonanceCheck(n_points, float(rel[i]), (float(tau[i]), float(xi[i]), float(eta[i]), float(eps[i])))


def key_observation_bounds(eta, xi, k):
    """Return (lower, middle, upper) of <xi>^{-2|k|} <= <eta+xi/2>^{2k}/<eta-xi/2>^{2k} <= <xi>^{2|k|}."""
    eta, xi = np.asarray(eta, float), np.asarray(xi, float)
    mid = (bracket(eta + xi / 2) / bracket(eta - xi / 2)) ** (2 * k)
    outer = bracket(xi) ** (2 * abs(k))
    return 1.0 / outer, mid, outer
