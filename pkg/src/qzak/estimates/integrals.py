"""One-dimensional frequency integrals behind the bilinear estimates."""
from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.optimize import brentq

from ..errors import HypothesisError, QuadratureError
from ..spectral import phi_eps
from .geometry import large_xi_threshold, sqrt_phi
from .quadrature import DELTA, bracket, integrate_line
from .resonance import resonance_at_offset, resonance_cubic

__all__ = [
    "cubic_root",
    "mixed_phase",
    "mixed_phase_features",
    "eta_integral_bound",
    "around_xi_integral",
]


def cubic_root(tau: float, xi: float, eps: float) -> float:
    """The real zero in eta of tau + (2 xi + eps^2 xi^3) eta + 4 eps^2 xi eta^3."""
    if xi == 0:
        return float("nan")
    g = lambda e: float(resonance_cubic(tau, xi, e, eps))
    span = 1.0 + abs(tau) / (2 * abs(xi)) + (abs(tau) / (4 * eps * eps * abs(xi) + 1e-300)) ** (1 / 3)
    lo, hi = -span, span
    if np.sign(g(lo)) == np.sign(g(hi)):
        raise QuadratureError("cubic root not bracketed", tau, xi)
    linear = 2 * xi + eps * eps * xi**3
    guess = -tau / linear
    if 4 * eps * eps * xi * guess * guess < 1e-17 * abs(linear):
        # the cubic term is below rounding; this also covers tiny and subnormal tau
        return float(guess)
    floor = min(abs(guess) / 2, (abs(tau) / (8 * eps * eps * abs(xi))) ** (1 / 3))
    return float(brentq(g, lo, hi, xtol=max(1e-16 * floor, 1e-300), rtol=1e-15, maxiter=500))


def mixed_phase(x, tau: float, xi: float, eps: float, sign: int):
    """tau + sign*sqrt(Phi(x - xi)) + Phi(x): convex on each side of x = xi."""
    x = np.asarray(x, float)
    return tau + sign * sqrt_phi(x - xi, eps) + phi_eps(x, eps)


def _mixed_d1(x, xi, eps, sign):
    y = x - xi
    e2y2 = eps * eps * y * y
    return sign * np.sign(y) * (1 + 2 * e2y2) / np.sqrt(1 + e2y2) + 2 * x + 4 * eps * eps * x**3


def _convex_piece(f: Callable, fp: Callable, a: float, b: float) -> list[float]:
    """Minimiser and zeros of a convex function on [a, b]."""
    pts: list[float] = []
    tol = 1e-15 * max(1.0, abs(a), abs(b))
    fa, fb = fp(a), fp(b)
    if fa < 0 < fb:
        c = float(brentq(fp, a, b, xtol=tol, rtol=1e-15, maxiter=500))
        pts.append(c)
        pieces = [(a, c), (c, b)]
    else:
        c = b if fb <= 0 else a
        pieces = [(a, b)]
    for lo, hi in pieces:
        flo, fhi = f(lo), f(hi)
        if flo == 0:
            pts.append(lo)
        elif np.sign(flo) != np.sign(fhi) and fhi != 0:
            pts.append(float(brentq(f, lo, hi, xtol=tol, rtol=1e-15, maxiter=500)))
    return pts


def mixed_phase_features(tau: float, xi: float, eps: float, sign: int, lo: float | None = None, hi: float | None = None) -> list[float]:
    """Kink, minimisers and zeros of the mixed phase, optionally inside [lo, hi]."""
    f = lambda x: float(mixed_phase(x, tau, xi, eps, sign))
    fp = lambda x: float(_mixed_d1(x, xi, eps, sign))
    reach = 2.0 + 2 * abs(xi) + (abs(tau) / max(eps * eps, 1e-300)) ** 0.25 + abs(tau) ** 0.5
    a = -reach if lo is None else lo
    b = reach if hi is None else hi
    pts = [xi] if a < xi < b else []
    for p, q in ((a, min(xi, b)), (max(xi, a), b)):
        if q > p:
            # stay off the kink so that one-sided derivatives are used
            off = 1e-13 * max(1.0, abs(xi))
            pts += _convex_piece(f, fp, p + (off if p == xi else 0.0), q - (off if q == xi else 0.0))
    return sorted(set(pts))


def eta_integral_bound(tau: float, xi: float, eps: float, B: float) -> tuple[float, float, float]:
    """Integral over eta of <resonance>^{-2B} against <Gamma>^{-(2B - 1/4)}.

    Returns ``(lhs, rhs, lhs / rhs)`` with Gamma = xi^2 + eps^2 xi^4.
    """
    if not xi >= 1:
        raise HypothesisError(f"need xi >= 1, got {xi!r}")
    if not 1 / 6 < B < 1 / 2:
        raise HypothesisError(f"need 1/6 < B < 1/2, got {B!r}")
    if not 0 < eps <= 1:
        raise HypothesisError(f"need 0 < eps <= 1, got {eps!r}")
    R = cubic_root(tau, xi, eps)
    f = lambda u: bracket(resonance_at_offset(u, R, xi, eps)) ** (-2 * B)
    try:
        lhs = integrate_line(f, [0.0, -R, xi / 2 - R, -xi / 2 - R])
    except QuadratureError as exc:
        raise type(exc)(str(exc), tau, xi) from exc
    rhs = bracket(phi_eps(xi, eps)) ** (-(2 * B - 0.25))
    return lhs, rhs, lhs / rhs


def around_xi_integral(
    tau: float, xi: float, eps: float, k: float, l: float, B: float, sign: int | None = None
) -> tuple[float, float]:
    """Integral over [xi/2, 3xi/2] of <xi1-xi>^{2l} <xi1>^{-2k} <tau +- sqrt(Phi(xi1-xi)) + Phi(xi1)>^{-2B}.

    ``sign`` picks the square-root sign; by default the larger of the two
    integrals is returned.  The ratio is value * <xi>^{2k} * <xi>^{6B - DELTA}.
    """
    if not (k < 0 and l < 0):
        raise HypothesisError(f"need k < 0 and l < 0, got k={k!r}, l={l!r}")
    if not 0 < B < 0.5:
        raise HypothesisError(f"need 0 < B < 1/2, got {B!r}")
    if not xi > large_xi_threshold(eps):
        raise HypothesisError(f"need xi > 32 eps^-2 = {large_xi_threshold(eps):g}, got {xi!r}")
    signs = (1, -1) if sign is None else (int(np.sign(sign)),)
    lo, hi = xi / 2, 1.5 * xi
    best = 0.0
    for s in signs:
        f = lambda x, s=s: (
            bracket(x - xi) ** (2 * l) * bracket(x) ** (-2 * k) * bracket(mixed_phase(x, tau, xi, eps, s)) ** (-2 * B)
        )
        pts = mixed_phase_features(tau, xi, eps, s, lo, hi)
        try:
            best = max(best, integrate_line(f, pts, lo, hi))
        except QuadratureError as exc:
            raise type(exc)(str(exc), tau, xi) from exc
    ratio = best * bracket(xi) ** (2 * k) * bracket(xi) ** (6 * B - DELTA)
    return best, ratio
