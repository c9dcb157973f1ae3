"""Suprema of the bilinear-estimate kernels over a (tau, xi) grid.

Each kernel is a prefactor times the square root of a double integral over
(tau1, xi1).  Both weights in tau1 are brackets centred on curves depending
on xi1, so the tau1 integral is the two-center function J(d) of the
distance d between the centres; it is tabulated once per exponent pair.
The remaining xi1 integral is done with graded panels placed at the zeros
and minimisers of d.
"""
from __future__ import annotations

import logging
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import DivergentIntegralError, HypothesisError, QuadratureError
from ..parallel import ordered_map
from ..spectral import phi_eps
from .geometry import sqrt_phi
from .integrals import cubic_root, mixed_phase, mixed_phase_features
from .quadrature import bracket, integrate_line, positive_part, tau_kernel
from .resonance import resonance_at_offset

log = logging.getLogger(__name__)

__all__ = [
    "KERNELS",
    "EstimateConfig",
    "ScanGrid",
    "ScanResult",
    "kernel_value",
    "kernel_sup_scan",
    "loglog_slope",
]

KERNELS = ("C1", "C2", "C3")
# admissible open interval for the bound exponent B of each kernel
_B_RANGE = {"C1": (1 / 6, 1 / 2), "C2": (1 / 3, 1 / 2), "C3": (1 / 8, 1 / 2)}


@dataclass(frozen=True)
class EstimateConfig:
    k: float = 0.0
    l: float = 0.0
    theta: float = 0.05
    eps: float = 1.0

    def __post_init__(self):
        if not 0 < self.theta < 0.5:
            raise HypothesisError(f"theta must lie in (0, 1/2), got {self.theta!r}")
        if not 0 < self.eps <= 1:
            raise HypothesisError(f"eps must lie in (0, 1], got {self.eps!r}")

    @property
    def b(self) -> float:
        return 0.5 + 0.5 * self.theta

    b1 = b

    @property
    def b_prime(self) -> float:
        return -0.5 + self.theta

    b1_prime = b_prime

    @property
    def c1(self) -> float:
        return -self.b1_prime

    @property
    def c(self) -> float:
        return -self.b_prime

    def tau_pair(self, which: str) -> tuple[float, float]:
        """Exponents (a_-, a_+) of the two tau1 brackets actually integrated."""
        pairs = {"C1": (self.c1, self.b1), "C2": (self.b1, self.b1), "C3": (self.c, self.b1)}
        a, b = pairs[_kernel_name(which)]
        return min(a, b), max(a, b)

    def bound_exponents(self, which: str) -> tuple[float, float, float]:
        """(B1, B2, B) of the two-bracket bound applied to the kernel, with 2B = 2B1 - [1 - 2B2]_+.

        For C2 the first weight is lowered from b1 to -b' before the bound
        is applied, which only enlarges the integral.
        """
        B1, B2 = {"C1": (self.c1, self.b1), "C2": (self.c, self.b1), "C3": (self.c, self.b1)}[_kernel_name(which)]
        return B1, B2, B1 - 0.5 * positive_part(1 - 2 * B2)

    def check(self, which: str) -> None:
        which = _kernel_name(which)
        if not (self.b > 0.5 and -0.5 < self.b_prime < 0):
            raise HypothesisError(f"need b > 1/2 and -1/2 < b' < 0, got b={self.b}, b'={self.b_prime}")
        B1, B2, B = self.bound_exponents(which)
        if not 0.25 < B1 <= B2:
            raise HypothesisError(f"{which}: need 1/4 < B1 <= B2, got B1={B1}, B2={B2}")
        lo, hi = _B_RANGE[which]
        if not lo < B < hi:
            raise HypothesisError(f"{which}: need {lo:.4g} < B < {hi:.4g}, got B={B}")


def _kernel_name(which: str) -> str:
    w = str(which).upper()
    if w not in KERNELS:
        raise ValueError(f"unknown kernel {which!r}; expected one of {KERNELS}")
    return w


@dataclass(frozen=True)
class ScanGrid:
    tau_min: float = 1.0
    tau_max: float = 1e4
    n_tau: int = 40
    xi_min: float = 1.0
    xi_max: float = 1e3
    n_xi: int = 40
    # add tau = +-sqrt(Phi), +-Phi, +-2 Phi at every xi: the case boundaries
    case_points: bool = True

    def __post_init__(self):
        if not (0 < self.tau_min < self.tau_max and 0 < self.xi_min < self.xi_max):
            raise ValueError("grid ranges must be positive and increasing")
        if self.n_tau < 1 or self.n_xi < 2:
            raise ValueError("need n_tau >= 1 and n_xi >= 2")

    def xis(self) -> np.ndarray:
        return np.geomspace(self.xi_min, self.xi_max, self.n_xi)

    def taus(self, xi: float, eps: float) -> np.ndarray:
        mags = np.geomspace(self.tau_min, self.tau_max, self.n_tau)
        extra = []
        if self.case_points:
            g = float(phi_eps(xi, eps))
            extra = [float(sqrt_phi(xi, eps)), g, 2 * g]
        mags = np.concatenate([mags, extra])
        return np.unique(np.concatenate([-mags, mags]))


@dataclass
class ScanResult:
    which: str
    config: EstimateConfig
    grid: ScanGrid
    tau: np.ndarray
    xi: np.ndarray
    kernel_value: np.ndarray
    prefactor: np.ndarray
    product: np.ndarray
    xi_levels: np.ndarray
    sup_by_xi: np.ndarray
    supremum: float
    argmax: tuple[float, float]
    slope: float
    wall_clock: float
    failures: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "which": self.which,
            "supremum": self.supremum,
            "argmax": {"tau": self.argmax[0], "xi": self.argmax[1]},
            "slope": self.slope,
            "n_points": int(self.product.size),
            "n_failures": len(self.failures),
            "config": asdict(self.config),
            "grid": asdict(self.grid),
        }


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        return float("nan")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _inner_c1(tau, xi, cfg, J) -> float:
    k, eps = cfg.k, cfg.eps
    R = cubic_root(tau, xi, eps)

    def f(u):  # u = eta - R
        e = R + u
        w = (bracket(e + 0.5 * xi) / bracket(e - 0.5 * xi)) ** (2 * k)
        return w * J(resonance_at_offset(u, R, xi, eps))

    return integrate_line(f, [0.0, -R, 0.5 * xi - R, -0.5 * xi - R])


def _inner_c2(tau, xi, cfg, J) -> float:
    k, eps = cfg.k, cfg.eps
    R = cubic_root(tau, xi, eps)

    def f(u):  # u = eta - R
        e = R + u
        w = (bracket(e + 0.5 * xi) * bracket(e - 0.5 * xi)) ** (-2 * k)
        return w * J(resonance_at_offset(u, R, xi, eps))

    return integrate_line(f, [0.0, -R, 0.5 * xi - R, -0.5 * xi - R])


def _inner_c3(tau, xi, cfg, J) -> float:
    k, l, eps = cfg.k, cfg.l, cfg.eps
    best = 0.0
    for s in (1, -1):
        def f(x, s=s):
            return bracket(x - xi) ** (2 * l) * bracket(x) ** (-2 * k) * J(mixed_phase(x, tau, xi, eps, s))

        pts = mixed_phase_features(tau, xi, eps, s) + [0.0]
        best = max(best, integrate_line(f, pts))
    return best


_INNER = {"C1": _inner_c1, "C2": _inner_c2, "C3": _inner_c3}


def _prefactor(which: str, tau: float, xi: float, cfg: EstimateConfig) -> float:
    sp = float(sqrt_phi(xi, cfg.eps))
    near = bracket(min(abs(tau + sp), abs(tau - sp)))  # the larger of the two +- factors
    if which == "C1":
        return float(bracket(xi) ** (-cfg.l) * near ** (-cfg.b))
    if which == "C2":
        return float(bracket(xi) ** cfg.l * near ** (-cfg.c))
    return float(bracket(xi) ** (-cfg.k) * bracket(tau + phi_eps(xi, cfg.eps)) ** (-cfg.b1))


def kernel_value(which: str, tau: float, xi: float, cfg: EstimateConfig) -> tuple[float, float]:
    """(sqrt of the inner double integral, outer prefactor) at one (tau, xi)."""
    which = _kernel_name(which)
    J = tau_kernel(*cfg.tau_pair(which))
    inner = _INNER[which](float(tau), float(xi), cfg, J)
    return float(np.sqrt(inner)), _prefactor(which, float(tau), float(xi), cfg)


def kernel_sup_scan(which: str, cfg: EstimateConfig, grid: ScanGrid | None = None) -> ScanResult:
    """Evaluate a kernel on the grid and fit the growth of its supremum in xi.

    Points where the quadrature fails are logged, recorded in ``failures``
    and stored as NaN; they do not enter the supremum.  Points where the
    inner integral diverges are stored as infinite, which makes the
    supremum and the slope infinite.
    """
    which = _kernel_name(which)
    grid = grid or ScanGrid()
    cfg.check(which)
    start = time.perf_counter()
    J = tau_kernel(*cfg.tau_pair(which))
    inner_fn = _INNER[which]

    def one_xi(xi: float):
        rows, bad = [], []
        for tau in grid.taus(xi, cfg.eps):
            pre = _prefactor(which, tau, xi, cfg)
            try:
                val = float(np.sqrt(inner_fn(tau, xi, cfg, J)))
            except DivergentIntegralError:
                val = float("inf")
            except QuadratureError as exc:
                log.warning("%s: quadrature failed at tau=%.6g xi=%.6g: %s", which, tau, xi, exc)
                bad.append((float(tau), float(xi), str(exc)))
                val = float("nan")
            rows.append((float(tau), float(xi), val, pre, val * pre))
        return rows, bad

    rows, failures = [], []
    for r, b in ordered_map(one_xi, [float(x) for x in grid.xis()]):
        rows.extend(r)
        failures.extend(b)
    arr = np.array(rows, dtype=float)
    tau, xi, kv, pre, prod = arr.T
    levels = grid.xis()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)  # levels where every point failed
        sup_by_xi = np.array([np.nanmax(np.where(xi == x, prod, np.nan)) for x in levels])
    i = int(np.nanargmax(np.where(np.isnan(prod), -np.inf, prod)))
    slope = np.inf if np.any(np.isposinf(sup_by_xi)) else loglog_slope(levels, sup_by_xi)
    return ScanResult(
        which=which, config=cfg, grid=grid, tau=tau, xi=xi, kernel_value=kv, prefactor=pre,
        product=prod, xi_levels=levels, sup_by_xi=sup_by_xi, supremum=float(prod[i]),
        argmax=(float(tau[i]), float(xi[i])), slope=slope,
        wall_clock=time.perf_counter() - start, failures=failures,
    )
