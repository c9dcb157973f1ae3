"""Shape of the mixed wave/Schroedinger phase f(xi1) = tau +- sqrt(Phi(xi1 -+ xi)) + Phi(xi1)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from ..errors import QuadratureError
from ..spectral import phi_eps
from .resonance import resonance_cubic

__all__ = [
    "BRANCHES",
    "ResonanceGeometry",
    "sqrt_phi",
    "phase",
    "phase_d1",
    "phase_d2",
    "stationary_points",
    "large_xi_threshold",
]

# wave sign and argument sign: "+-" is +sqrt(Phi(xi1 - xi)), "-+" is -sqrt(Phi(xi1 + xi)), ...
BRANCHES = {"+-": (1, -1), "-+": (-1, 1), "++": (1, 1), "--": (-1, -1)}
ALL_BRANCHES = tuple(BRANCHES) + ("schro_schro",)


def large_xi_threshold(eps: float) -> float:
    return 32.0 / (eps * eps)


def sqrt_phi(y, eps: float):
    y = np.asarray(y, float)
    return np.abs(y) * np.sqrt(1.0 + eps * eps * y * y)


def _sqrt_phi_d1(y, eps):
    y = np.asarray(y, float)
    e2y2 = eps * eps * y * y
    return np.sign(y) * (1 + 2 * e2y2) / np.sqrt(1 + e2y2)


def _sqrt_phi_d2(y, eps):
    y = np.abs(np.asarray(y, float))
    e2y2 = eps * eps * y * y
    return eps * eps * y * (3 + 2 * e2y2) / (1 + e2y2) ** 1.5


def phase(x, tau: float, xi: float, eps: float, branch: str):
    sw, sa = BRANCHES[branch]
    return tau + sw * sqrt_phi(np.asarray(x, float) + sa * xi, eps) + phi_eps(x, eps)


def phase_d1(x, xi: float, eps: float, branch: str):
    sw, sa = BRANCHES[branch]
    x = np.asarray(x, float)
    return sw * _sqrt_phi_d1(x + sa * xi, eps) + 2 * x + 4 * eps * eps * x**3


def phase_d2(x, xi: float, eps: float, branch: str):
    """Second derivative away from the kink at xi1 = -+xi."""
    sw, sa = BRANCHES[branch]
    x = np.asarray(x, float)
    quartic = 12 * eps * eps * x**2
    if sw > 0:
        return _sqrt_phi_d2(x + sa * xi, eps) + 2 + quartic
    # 2 - eps*h(a) with h(a) = (3a + 2a^3)/(1 + a^2)^{3/2} -> 2, written without cancellation
    a = eps * np.abs(x + sa * xi)
    r = np.sqrt(1 + a * a)
    two_minus_h = (2 - a / (r + a)) / ((r + a) * r**3)
    return 2 * (1 - eps) + eps * two_minus_h + quartic


@dataclass
class ResonanceGeometry:
    tau: float
    xi: float
    eps: float
    branch: str
    Gamma: float
    A: float
    A_m: float
    m: float
    c_ratio: float
    case: str
    Lambda: float
    Lambda_plus: float
    Lambda_minus: float
    A2: float | None
    R: float | None
    convex: bool
    min_second_derivative: float


def _expand_root(g, lo: float, hi: float, what: str, tau: float, xi: float) -> float:
    glo = g(lo)
    for _ in range(200):
        if np.sign(g(hi)) != np.sign(glo):
            return float(brentq(g, lo, hi, xtol=1e-14 * max(1.0, abs(hi)), rtol=1e-15, maxiter=500))
        hi = 2 * hi + 1
    raise QuadratureError(f"no sign change while locating {what}", tau, xi)


def _minimiser(xi: float, eps: float, branch: str, tau: float) -> float:
    """Minimiser A_m of the phase on xi1 >= 0."""
    if branch in ("++", "--"):
        return 0.0
    fp = lambda x: float(phase_d1(x, xi, eps, branch))
    if branch == "+-":
        # the phase has a kink at xi; the minimum sits at the kink when f' < 0 up to it
        if fp(xi * (1 - 1e-15)) <= 0:
            return float(xi)
        lo = hi = None
        if xi >= large_xi_threshold(eps):
            r = np.sqrt(0.5) * eps
            lo = min(r / (1 + r) * xi, (xi / (4 * np.sqrt(2) * eps)) ** (1 / 3))
            hi = min(1.5 * eps / (1 + 1.5 * eps) * xi, (3 * xi / (4 * eps)) ** (1 / 3))
        if lo is None or not (fp(lo) < 0 < fp(hi)):
            lo, hi = 0.0, xi * (1 - 1e-15)
        return float(brentq(fp, lo, hi, xtol=1e-14 * max(1.0, xi), rtol=1e-15, maxiter=500))
    return _expand_root(fp, 0.0, max(xi, 1.0), "the minimiser", tau, xi)


def _classify(tau: float, xi: float, eps: float, f0: float, fmin: float) -> tuple[str, float]:
    if abs(xi) < large_xi_threshold(eps):
        if tau < -2 * phi_eps(xi, eps):
            return "2", tau + float(sqrt_phi(xi, eps))
        return "2", 0.0
    if fmin >= f0 - fmin:
        return "1a", fmin
    if f0 <= 0:
        return "1b", fmin
    return "1c", 0.0


def _wave_branch(tau: float, xi: float, eps: float, branch: str) -> tuple[float, float, str, float, float | None]:
    A_m = _minimiser(xi, eps, branch, tau)
    fmin = float(phase(A_m, tau, xi, eps, branch))
    f0 = float(phase(0.0, tau, xi, eps, branch))
    case, lam = _classify(tau, xi, eps, f0, fmin)
    A2 = None
    if fmin < 0:
        g = lambda x: float(phase(x, tau, xi, eps, branch))
        A2 = _expand_root(g, A_m, max(2 * A_m, 1.0), "the largest zero", tau, xi)
    return A_m, fmin - tau, case, lam, A2


def _convexity(xi: float, eps: float, branch: str, x_max: float, n: int = 4001) -> float:
    x = np.linspace(0.0, x_max, n)
    if branch in ("+-", "--"):
        x = x[np.abs(x - xi) > 1e-12 * max(1.0, xi)]
    return float(np.min(phase_d2(x, xi, eps, branch)))


def stationary_points(tau: float, xi: float, eps: float, branch: str) -> ResonanceGeometry:
    """Minimiser, minimum offset, case label and zeros of the phase on xi1 >= 0.

    ``m`` is f(A_m) - tau, so it is negative on the branches with a minus
    sign in front of the square root.  ``Lambda`` is the modulation size
    attached to the case (0 stands for <Lambda> = 1).  ``Lambda_plus`` and
    ``Lambda_minus`` always come from the "+-" and "-+" branches.
    """
    if not xi > 0:
        raise ValueError(f"xi must be positive, got {xi!r}")
    if not 0 < eps <= 1:
        raise ValueError(f"eps must lie in (0, 1], got {eps!r}")
    if branch not in ALL_BRANCHES:
        raise ValueError(f"unknown branch {branch!r}; expected one of {ALL_BRANCHES}")
    Gamma = float(phi_eps(xi, eps))
    A = eps ** (-2 / 3) * abs(tau / xi) ** (1 / 3)
    Lp = _wave_branch(tau, xi, eps, "+-")[3]
    Lm = _wave_branch(tau, xi, eps, "-+")[3]

    if branch == "schro_schro":
        g = lambda e: float(resonance_cubic(tau, xi, e, eps))
        span = max(1.0, A, abs(tau) / (2 * xi + eps * eps * xi**3))
        R = _expand_root(g, -span, span, "the resonance zero", tau, xi)
        # the cubic is convex on eta > 0 where its second derivative is 24 eps^2 xi eta
        return ResonanceGeometry(
            tau, xi, eps, branch, Gamma, A, float("nan"), float("nan"), float("nan"),
            "schro", float("nan"), Lp, Lm, None, R, True, float("nan"),
        )

    A_m, m, case, lam, A2 = _wave_branch(tau, xi, eps, branch)
    x_max = max(4 * xi, 10 * A_m, 2 * (A2 or 0.0), 10.0)
    min_d2 = _convexity(xi, eps, branch, x_max)
    return ResonanceGeometry(
        tau, xi, eps, branch, Gamma, A, A_m, m, A_m / (xi / eps) ** (1 / 3), case, lam, Lp, Lm,
        A2, None, bool(min_d2 > 0), min_d2,
    )
