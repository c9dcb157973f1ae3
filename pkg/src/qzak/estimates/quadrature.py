"""Quadrature for power-law weights with sharp resonances.

Integrands here are products of brackets ``<x> = 1 + |x|`` raised to
negative powers.  They are smooth except at a few known points (zeros of a
phase, kinks of the weights) where they are sharply peaked on scales that
can be many orders of magnitude below the length of the domain.  The line
integrator therefore places geometrically graded Gauss-Legendre panels
around every breakpoint and checks each panel against a rule of twice the
order.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from ..errors import DivergentIntegralError, HypothesisError, QuadratureError

log = logging.getLogger(__name__)

__all__ = [
    "bracket",
    "positive_part",
    "tau_exponent",
    "weighted_tau_integral",
    "TauKernel",
    "tau_kernel",
    "integrate_line",
]

# stand-in for [0]_+ : the estimate loses an arbitrarily small power there
DELTA = 0.01
# infinite domains are panelled out to this multiple of the outermost breakpoint
FAR_REACH = 1e30
GL_LOW, GL_HIGH = 12, 24
PANEL_RTOL = 1e-7
# finest panel next to a breakpoint at exactly 0; integrands written in an
# offset variable resolve features this small
ZERO_RESOLUTION = 1e-30


def bracket(x):
    return 1.0 + np.abs(x)


def positive_part(x: float) -> float:
    """[x]_+ with the endpoint convention [0]_+ = DELTA."""
    if x > 0:
        return float(x)
    if x == 0:
        return DELTA
    return 0.0


def tau_exponent(a_minus: float, a_plus: float) -> float:
    """Decay exponent 2 a_- - [1 - 2 a_+]_+ of the two-center integral."""
    return 2 * a_minus - positive_part(1 - 2 * a_plus)


def _check_pair(a_minus: float, a_plus: float) -> None:
    if not 0 <= a_minus <= a_plus:
        raise HypothesisError(f"need 0 <= a_minus <= a_plus, got ({a_minus}, {a_plus})")
    if not a_minus + a_plus > 0.5:
        raise HypothesisError(f"need a_minus + a_plus > 1/2, got {a_minus + a_plus}")


def _two_center(a_minus: float, a_plus: float, d: float) -> float:
    """Integral over the line of <x>^{-2a_-} <x - d>^{-2a_+} for d >= 0.

    Each piece is written in the variable v = log(1 + distance to the
    nearest center), where the integrand is smooth and slowly varying.
    """
    p, q = 2 * a_minus, 2 * a_plus
    opts = dict(epsabs=0.0, epsrel=1e-12, limit=200)

    def outer(v, own, other):  # distance e^v - 1 beyond one center, away from the other
        return np.exp(v * (1 - own) - other * (v + np.log1p(d * np.exp(-v))))

    def left(v):
        return outer(v, p, q)

    def right(v):
        return outer(v, q, p)

    total = integrate.quad(left, 0, np.inf, **opts)[0] + integrate.quad(right, 0, np.inf, **opts)[0]
    if d > 0:
        vmax = np.log1p(d / 2)

        def near0(v):  # x = e^v - 1 in [0, d/2]
            x = np.expm1(v)
            return np.exp(v * (1 - p)) * (1 + d - x) ** (-q)

        def neard(v):  # x = d - (e^v - 1) in [d/2, d]
            x = d - np.expm1(v)
            return np.exp(v * (1 - q)) * (1 + x) ** (-p)

        total += integrate.quad(near0, 0, vmax, **opts)[0] + integrate.quad(neard, 0, vmax, **opts)[0]
    return total


def weighted_tau_integral(a_minus: float, a_plus: float, s1: float, s2: float) -> tuple[float, float]:
    """Two-center integral and its ratio against <s1 - s2>^{-alpha}.

    Returns ``(value, value * <s1 - s2>^alpha)`` with
    ``alpha = 2 a_- - [1 - 2 a_+]_+``.
    """
    _check_pair(a_minus, a_plus)
    d = abs(float(s1) - float(s2))
    value = _two_center(a_minus, a_plus, d)
    return value, value * bracket(d) ** tau_exponent(a_minus, a_plus)


class TauKernel:
    """Tabulated two-center integral J(d) as a function of the center offset.

    The table covers |d| up to ``d_max`` on a grid uniform in log(1 + |d|);
    beyond it J is continued as a pure power law with the slope of the last
    table cell.
    """

    def __init__(self, a_minus: float, a_plus: float, d_max: float = 1e50, n_nodes: int = 800):
        _check_pair(a_minus, a_plus)
        self.a_minus, self.a_plus = float(a_minus), float(a_plus)
        u = np.linspace(0.0, np.log1p(d_max), n_nodes)
        vals = np.array([_two_center(a_minus, a_plus, float(np.expm1(ui))) for ui in u])
        logv = np.log(vals)
        self._spline = CubicSpline(u, logv, bc_type=((1, 0.0), "not-a-knot"))
        self._u_max = u[-1]
        self._log_end = logv[-1]
        self._slope_end = (logv[-1] - logv[-2]) / (u[-1] - u[-2])

    def __call__(self, d) -> np.ndarray:
        u = np.log1p(np.abs(np.asarray(d, dtype=float)))
        out = np.empty_like(u)
        inside = u <= self._u_max
        out[inside] = self._spline(u[inside])
        out[~inside] = self._log_end + self._slope_end * (u[~inside] - self._u_max)
        return np.exp(out)

    @property
    def decay_exponent(self) -> float:
        """Asymptotic power p in J(d) ~ |d|^{-p}."""
        return -float(self._slope_end)


@lru_cache(maxsize=32)
def tau_kernel(a_minus: float, a_plus: float) -> TauKernel:
    return TauKernel(round(a_minus, 15), round(a_plus, 15))


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _resolution(x: float) -> float:
    """Smallest useful panel next to x: a few ulps, but never below ZERO_RESOLUTION."""
    return max(1e-15 * abs(x), ZERO_RESOLUTION)


def _graded_edges(a: float, b: float, cluster_left: bool, cluster_right: bool, ratio: float) -> np.ndarray:
    """Panel edges on [a, b], geometrically refined toward the chosen ends."""
    length = b - a
    if length <= 0:
        return np.array([a, b])
    floor = min(_resolution(a) if cluster_left else np.inf, _resolution(b) if cluster_right else np.inf)
    if not np.isfinite(floor):
        floor = length
    n = int(np.ceil(np.log(max(length / floor, 2.0)) / np.log(ratio)))
    steps = ratio ** -np.arange(0, n + 1, dtype=float)
    if cluster_left and cluster_right:
        half = 0.5 * length
        left = a + half * steps[::-1]
        right = b - half * steps
        inner = np.concatenate([[a], left, right[1:], [b]])
    elif cluster_left:
        inner = np.concatenate([[a], a + length * steps[::-1]])
    elif cluster_right:
        inner = np.concatenate([b - length * steps, [b]])
    else:
        inner = np.array([a, b])
    inner = np.unique(inner)
    return inner[(inner >= a) & (inner <= b)]


def _panels(f: Callable[[np.ndarray], np.ndarray], edges: np.ndarray, n: int) -> np.ndarray:
    x, w = _gl(n)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x[None, :] + 1.0)
    vals = f(nodes.ravel()).reshape(nodes.shape)
    return np.sum(vals * w[None, :], axis=1) * half[:, 0]


def _checked_sum(f, edges: np.ndarray, rtol: float) -> tuple[float, float]:
    q_low = _panels(f, edges, GL_LOW)
    q_high = _panels(f, edges, GL_HIGH)
    total = float(np.sum(q_high))
    err = float(np.sum(np.abs(q_high - q_low)))
    return total, err


def _semi_infinite_edges(b: float, direction: int, f, ratio: float) -> tuple[np.ndarray, float]:
    """Geometric edges from breakpoint b out to FAR_REACH * max(|b|, 1), plus a tail estimate.

    The tail beyond the last edge is integrated analytically from the local
    power-law decay, which must be faster than 1/|x|.
    """
    scale = max(abs(b), 1.0)
    dist = _resolution(b) * ratio ** np.arange(0, 800, dtype=float)
    dist = dist[dist <= FAR_REACH * scale]
    pts = b + direction * dist
    x1, x2 = abs(pts[-2]), abs(pts[-1])
    f1, f2 = np.abs(f(pts[-2:]))
    tail = 0.0
    if f1 > 0 and f2 > 0:
        p = -np.log(f2 / f1) / np.log(x2 / x1)
        if p <= 1.0:
            raise DivergentIntegralError(f"tail decays like |x|^-{p:.3g}, not integrable")
        tail = float(f2 * x2 / (p - 1.0))
    edges = np.concatenate([[b], pts])
    return np.sort(edges), tail


def integrate_line(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    lower: float = -np.inf,
    upper: float = np.inf,
    rtol: float = 1e-6,
    ratio: float = 2.0,
) -> float:
    """Integral of a vectorised nonnegative ``f`` over [lower, upper].

    Panels are graded toward every breakpoint.  On infinite ends the panels
    run out to FAR_REACH times the outermost breakpoint and the remainder is
    added from the local power-law decay.  If the panel
    rules disagree by more than ``rtol`` the grading is refined once; a
    second failure raises QuadratureError.
    """
    pts = [p for p in breakpoints if np.isfinite(p) and lower < p < upper]
    if np.isfinite(lower):
        pts.append(lower)
    if np.isfinite(upper):
        pts.append(upper)
    pts = np.unique(np.asarray(pts, dtype=float))
    if pts.size == 0:
        pts = np.array([0.0])
    for attempt, r in enumerate((ratio, np.sqrt(ratio))):
        pieces = []
        tails = 0.0
        if not np.isfinite(lower):
            e, t = _semi_infinite_edges(pts[0], -1, f, r)
            pieces.append(e)
            tails += t
        for a, b in zip(pts[:-1], pts[1:]):
            pieces.append(_graded_edges(a, b, True, True, r))
        if not np.isfinite(upper):
            e, t = _semi_infinite_edges(pts[-1], +1, f, r)
            pieces.append(e)
            tails += t
        total, err = 0.0, 0.0
        for edges in pieces:
            if edges.size < 2:
                continue
            q, e = _checked_sum(f, edges, rtol)
            total += q
            err += e
        total += tails
        if err <= rtol * abs(total) + 1e-300:
            return total
        log.debug("line quadrature refinement: attempt %d, err %.3e of %.3e", attempt, err, total)
    raise QuadratureError(f"line quadrature did not converge (estimated error {err:.3e} of {total:.3e})")
