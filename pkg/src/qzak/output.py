"""CSV and JSON writers.  Doubles are written with 17 significant digits."""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .conservation import HAMILTONIAN_TERMS
from .estimates.geometry import phase, stationary_points
from .estimates.kernels import ScanResult
from .estimates.region import region_polyline
from .limits import LimitRow
from .spectral import phi_eps

__all__ = [
    "DIAGNOSTIC_COLUMNS",
    "LIMIT_COLUMNS",
    "SCAN_COLUMNS",
    "format_value",
    "write_csv",
    "write_json",
    "write_diagnostics",
    "write_limits",
    "write_scan",
    "write_region_boundary",
    "f_profiles",
    "write_f_profiles",
]

DIAGNOSTIC_COLUMNS = ("t", "mass", "hamiltonian") + HAMILTONIAN_TERMS + ("mass_residual_L2", "momentum_residual_L2")
LIMIT_COLUMNS = ("eps", "norm_name", "value", "runtime_seconds")
SCAN_COLUMNS = ("tau", "xi", "kernel_value", "prefactor", "product")
REGION_COLUMNS = ("k", "l")
PROFILE_COLUMNS = ("case", "tau", "xi", "xi1", "f")


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Header plus rows; an empty ``rows`` gives a header-only file."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
            w.writerow([format_value(v) for v in row])
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if np.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path: str | Path, doc: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_diagnostics(path, times, diagnostics: dict, mass_residual=None, momentum_residual=None) -> Path:
    """One row per recorded frame; residual columns are NaN where undefined."""
    n = len(times)
    mres = np.full(n, np.nan) if mass_residual is None else np.asarray(mass_residual, float)
    pres = np.full(n, np.nan) if momentum_residual is None else np.asarray(momentum_residual, float)
    cols = [np.asarray(times, float)] + [np.asarray(diagnostics[c], float) for c in DIAGNOSTIC_COLUMNS[1:-2]]
    cols += [mres, pres]
    return write_csv(path, DIAGNOSTIC_COLUMNS, zip(*cols))


def write_limits(path, rows: Sequence[LimitRow], runtime: bool = True) -> Path:
    """With ``runtime=False`` the timing column is written as NaN so the file is reproducible."""
    nan = float("nan")
    return write_csv(
        path, LIMIT_COLUMNS, [(r.eps, r.norm_name, r.value, r.runtime_seconds if runtime else nan) for r in rows]
    )


def write_scan(csv_path, json_path, result: ScanResult) -> None:
    write_csv(csv_path, SCAN_COLUMNS, zip(result.tau, result.xi, result.kernel_value, result.prefactor, result.product))
    doc = result.summary()
    doc["sup_by_xi"] = {"xi": result.xi_levels, "sup": result.sup_by_xi}
    write_json(json_path, doc)


def write_region_boundary(path, k_max: float = 3.0) -> Path:
    return write_csv(path, REGION_COLUMNS, region_polyline(k_max))


def f_profiles(xi: float = 64.0, eps: float = 1.0, n: int = 401, branch: str = "+-") -> list[tuple]:
    """Samples of the mixed phase on xi1 in [0, 2 xi] for one tau in each of the cases 1a, 1b, 1c."""
    g0 = stationary_points(0.0, xi, eps, branch)
    sp = float(np.sqrt(phi_eps(xi, eps)))
    taus = {"1a": 0.0, "1b": -1.2 * sp, "1c": -g0.m}
    xs = np.union1d(np.linspace(0.0, 2 * xi, n), [xi, g0.A_m])
    rows = []
    for label, tau in taus.items():
        got = stationary_points(tau, xi, eps, branch).case
        if got != label:
            raise RuntimeError(f"tau={tau} was meant to be case {label}, classified as {got}")
        for x, fx in zip(xs, phase(xs, tau, xi, eps, branch)):
            rows.append((label, tau, xi, float(x), float(fx)))
    return rows


def write_f_profiles(path, xi: float = 64.0, eps: float = 1.0) -> Path:
    return write_csv(path, PROFILE_COLUMNS, f_profiles(xi, eps))
