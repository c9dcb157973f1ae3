"""Flat ``module.key = value`` run configuration.

Example::

    # gaussian pulse, quantum parameter one half
    sim.eps = 0.5
    sim.dt = 5e-4
    initial.profile = gaussian
    limits.eps_sequence = 0.5, 0.25, 0.125
    estimates.k = -0.5

Unknown keys and malformed values raise ConfigError naming the key.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from .errors import ConfigError, HypothesisError
from .estimates.kernels import KERNELS, EstimateConfig, ScanGrid
from .limits import LimitExperimentConfig
from .system import InitialData, SimConfig

__all__ = ["RunConfig", "VerifyTolerances", "NormsConfig", "load_config", "parse_config"]

_SECTION = "qzak"


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text: str) -> list[float]:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    return [float(p) for p in parts]


def _opt_float(text: str) -> float | None:
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


def _which(text: str) -> str:
    w = text.strip().upper()
    if w not in KERNELS:
        raise ValueError(f"expected one of {KERNELS}")
    return w


_SCHEMA: dict[str, dict[str, Callable[[str], Any]]] = {
    "sim": {
        "N": int, "L": float, "eps": float, "dt": float, "T_final": float, "integrator": str.strip,
        "cadence": int, "picard_iters": int, "blowup_threshold": float,
    },
    "initial": {
        "profile": str.strip, "amplitude": float, "width": float, "center": _opt_float, "kappa": float,
        "n_amplitude": float, "nt_amplitude": float, "s": float, "norm": str.strip,
    },
    "limits": {
        "eps_sequence": _floats, "T_compare": float, "N": int, "L": float, "dt": float,
        "sobolev_s": _floats, "adiabatic": _bool, "record_runtime": _bool,
    },
    "estimates": {
        "which": _which, "k": float, "l": float, "theta": float, "eps": float,
        "tau_min": float, "tau_max": float, "n_tau": int, "xi_min": float, "xi_max": float, "n_xi": int,
        "case_points": _bool,
    },
    "norms": {"s": _floats, "b": float},
    "verify": {"mass_drift": float, "hamiltonian_drift": float, "slope_max": float},
}

_GRID_KEYS = ("tau_min", "tau_max", "n_tau", "xi_min", "xi_max", "n_xi", "case_points")


@dataclass
class VerifyTolerances:
    mass_drift: float = 1e-10
    hamiltonian_drift: float = 1e-6
    slope_max: float = 0.05


@dataclass
class NormsConfig:
    s: list[float] = field(default_factory=lambda: [0.0, 1.0])
    b: float = 0.5


@dataclass
class RunConfig:
    sim: SimConfig = field(default_factory=SimConfig)
    limits: LimitExperimentConfig = field(default_factory=LimitExperimentConfig)
    estimate: EstimateConfig = field(default_factory=EstimateConfig)
    grid: ScanGrid = field(default_factory=ScanGrid)
    which: str = "C1"
    norms: NormsConfig = field(default_factory=NormsConfig)
    verify: VerifyTolerances = field(default_factory=VerifyTolerances)


def _read_pairs(text: str) -> dict[str, str]:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n" + text)
    except configparser.Error as exc:
        raise ConfigError("config", f"cannot parse: {exc}") from None
    return dict(parser.items(_SECTION))


def parse_config(text: str) -> RunConfig:
    values: dict[str, dict[str, Any]] = {name: {} for name in _SCHEMA}
    for key, raw in _read_pairs(text).items():
        module, _, name = key.partition(".")
        if module not in _SCHEMA or name not in _SCHEMA[module]:
            raise ConfigError(key, "unknown key")
        try:
            values[module][name] = _SCHEMA[module][name](raw)
        except ValueError as exc:
            raise ConfigError(key, f"bad value {raw!r}: {exc}") from None

    def build(module: str, cls, **kw):
        try:
            return cls(**kw)
        except ConfigError as exc:
            name = exc.field if "." in exc.field else f"{module}.{exc.field}"
            raise ConfigError(name, str(exc).partition(": ")[2]) from None
        except (HypothesisError, ValueError) as exc:
            raise ConfigError(module, str(exc)) from None

    initial = build("initial", InitialData, **values["initial"])
    sim = build("sim", SimConfig, initial=initial, store_states=True, **values["sim"])
    limits = build("limits", LimitExperimentConfig, initial=initial, **values["limits"])
    est = dict(values["estimates"])
    which = est.pop("which", "C1")
    grid = build("estimates", ScanGrid, **{k: est.pop(k) for k in _GRID_KEYS if k in est})
    estimate = build("estimates", EstimateConfig, **est)
    return RunConfig(
        sim=sim, limits=limits, estimate=estimate, grid=grid, which=which,
        norms=NormsConfig(**values["norms"]), verify=VerifyTolerances(**values["verify"]),
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)
