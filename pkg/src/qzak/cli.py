"""Command-line front end.

    qzak <simulate|limits|estimates|norms> --config PATH --out DIR [--seed N] [--verify] [--which C1|C2|C3]

Exit codes: 0 success, 1 configuration error, 2 blow-up, 3 a verification
check failed (only with --verify).
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .checkpoint import save_checkpoint
from .config import RunConfig, load_config
from .conservation import local_conservation_residual
from .errors import BlowUpError, ConfigError, HypothesisError
from .estimates.kernels import kernel_sup_scan
from .limits import limit_experiment
from .output import (
    format_value,
    write_csv,
    write_diagnostics,
    write_f_profiles,
    write_json,
    write_limits,
    write_region_boundary,
    write_scan,
)
from .spectral import DispersionSymbols, bourgain_norm, make_grid, sobolev_norm, to_physical
from .states import Trajectory
from .system import simulate, split_state

log = logging.getLogger("qzak")

COMMANDS = ("simulate", "limits", "estimates", "norms")
EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_VERIFY = 0, 1, 2, 3
NORM_COLUMNS = ("quantity", "s", "b", "value")


@dataclass
class RunManifest:
    command: str
    config_path: str
    out_dir: str
    seed: int = 0
    version: str = __version__
    which: str | None = None
    verify: bool = False


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool


@dataclass
class Outcome:
    status: str = "ok"
    checks: list[Check] = field(default_factory=list)
    files: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def check(self, name: str, value: float, tolerance: float, passed: bool) -> None:
        self.checks.append(Check(name, float(value), float(tolerance), bool(passed)))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _uniform_prefix(times) -> int:
    t = np.asarray(times, float)
    if t.size < 3:
        return 0
    h = np.diff(t)
    ok = np.abs(h - h[0]) <= 1e-9 * h[0]
    bad = np.nonzero(~ok)[0]
    return int(bad[0]) + 1 if bad.size else t.size


def _residual_columns(traj: Trajectory, syms: DispersionSymbols) -> tuple[np.ndarray, np.ndarray]:
    n = len(traj.times)
    mres, pres = np.full(n, np.nan), np.full(n, np.nan)
    m = _uniform_prefix(traj.times)
    if m >= 3 and len(traj.states) == n:
        sub = Trajectory(times=traj.times[:m], states=traj.states[:m], dt=traj.dt)
        rep = local_conservation_residual(sub, syms)
        mres[1:m - 1] = rep.mass_L2
        pres[1:m - 1] = rep.momentum_L2
    return mres, pres


def _drift(values) -> float:
    v = np.asarray(values, float)
    return float(np.max(np.abs(v - v[0])) / max(abs(v[0]), 1e-300))


def _run_simulate(cfg: RunConfig, m: RunManifest, out: Path, res: Outcome) -> int:
    sim = cfg.sim
    syms = DispersionSymbols(make_grid(sim.N, sim.L), sim.eps)
    try:
        traj = simulate(sim, rng=_rng(m.seed))
    except BlowUpError as exc:
        res.status = "blowup"
        part = exc.trajectory
        if part is not None and len(part):
            mres, pres = _residual_columns(part, syms)
            write_diagnostics(out / "diagnostics.csv", part.times, part.diagnostics, mres, pres)
            res.files.append("diagnostics.csv")
        if exc.last_state is not None:
            save_checkpoint(out / "blowup_checkpoint.qzk", exc.last_state, sim.L, sim.eps)
            res.files.append("blowup_checkpoint.qzk")
        log.error("blow-up: %s", exc)
        return EXIT_BLOWUP
    mres, pres = _residual_columns(traj, syms)
    write_diagnostics(out / "diagnostics.csv", traj.times, traj.diagnostics, mres, pres)
    ck = save_checkpoint(out / "final_state.qzk", traj.final, sim.L, sim.eps)
    res.files += ["diagnostics.csv", ck.name] + ([ck.with_suffix(".json").name] if ck.with_suffix(".json").exists() else [])
    md, hd = _drift(traj.diagnostics["mass"]), _drift(traj.diagnostics["hamiltonian"])
    res.check("relative_mass_drift", md, cfg.verify.mass_drift, md <= cfg.verify.mass_drift)
    res.check("relative_hamiltonian_drift", hd, cfg.verify.hamiltonian_drift, hd <= cfg.verify.hamiltonian_drift)
    return EXIT_OK


def _run_limits(cfg: RunConfig, m: RunManifest, out: Path, res: Outcome) -> int:
    rows = limit_experiment(cfg.limits, rng=_rng(m.seed))
    write_limits(out / "limits.csv", rows, runtime=cfg.limits.record_runtime)
    res.files.append("limits.csv")
    res.timings = {format_value(r.eps): r.runtime_seconds for r in rows if r.norm_name in ("E_L2", "E_diff_L2")}
    diffs = [r.value for r in rows if r.norm_name == "E_diff_L2"]
    steps = np.diff(diffs)
    worst = float(np.max(steps)) if steps.size else -np.inf
    res.check("E_diff_L2_max_increment", worst, 0.0, bool(np.all(np.isfinite(diffs)) and worst < 0))
    return EXIT_OK


def _run_estimates(cfg: RunConfig, m: RunManifest, out: Path, res: Outcome) -> int:
    which = m.which or cfg.which
    scan = kernel_sup_scan(which, cfg.estimate, cfg.grid)
    write_scan(out / f"scan_{which}.csv", out / f"scan_{which}.json", scan)
    write_region_boundary(out / "region_boundary.csv")
    write_f_profiles(out / "f_profile.csv")
    res.files += [f"scan_{which}.csv", f"scan_{which}.json", "region_boundary.csv", "f_profile.csv"]
    tol = cfg.verify.slope_max
    ok = np.isfinite(scan.supremum) and np.isfinite(scan.slope) and scan.slope <= tol and not scan.failures
    res.check(f"{which}_sup_slope", scan.slope, tol, bool(ok))
    return EXIT_OK


def _time_window(n_t: int) -> np.ndarray:
    # smooth cutoff vanishing at both ends so the periodic extension in time is C^1
    return np.sin(np.pi * np.arange(n_t) / (n_t - 1)) ** 2


def _run_norms(cfg: RunConfig, m: RunManifest, out: Path, res: Outcome) -> int:
    sim = cfg.sim
    syms = DispersionSymbols(make_grid(sim.N, sim.L), sim.eps)
    traj = simulate(sim, rng=_rng(m.seed))
    k = _uniform_prefix(traj.times)
    states = traj.states[:k]
    rows = []
    for s in cfg.norms.s:
        rows.append(("E_Hs_max", s, float("nan"), max(sobolev_norm(p.E, s, syms.grid) for p in states or traj.states)))
        rows.append(("n_Hs_max", s, float("nan"), max(sobolev_norm(p.n, s, syms.grid) for p in states or traj.states)))
    if k >= 8:
        h = traj.times[1] - traj.times[0]
        w = _time_window(k)[:, None]
        E = np.stack([to_physical(p.E) for p in states]) * w
        nplus = np.stack([to_physical(split_state(p, syms).n_plus) for p in states]) * w
        for s in cfg.norms.s:
            rows.append(("E_Xsb_schrodinger", s, cfg.norms.b, bourgain_norm(E, h, s, cfg.norms.b, "schrodinger", syms)))
            rows.append(("n_plus_Xsb_wave_plus", s, cfg.norms.b, bourgain_norm(nplus, h, s, cfg.norms.b, "wave_plus", syms)))
    else:
        log.warning("fewer than 8 uniformly spaced frames; Bourgain norms skipped")
    write_csv(out / "norms.csv", NORM_COLUMNS, rows)
    res.files.append("norms.csv")
    finite = all(np.isfinite(r[3]) for r in rows)
    res.check("norms_finite", float(finite), 1.0, finite)
    return EXIT_OK


_DISPATCH = {"simulate": _run_simulate, "limits": _run_limits, "estimates": _run_estimates, "norms": _run_norms}


def run(m: RunManifest) -> int:
    """Execute one manifest and write its artifacts plus summary.json."""
    out = Path(m.out_dir)
    try:
        if not 0 <= m.seed < 2**64:
            raise ConfigError("seed", f"must be a 64-bit unsigned integer, got {m.seed}")
        cfg = load_config(m.config_path)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out.mkdir(parents=True, exist_ok=True)
    res = Outcome()
    try:
        code = _DISPATCH[m.command](cfg, m, out, res)
    except (ConfigError, HypothesisError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if code == EXIT_OK and m.verify and not all(c.passed for c in res.checks):
        res.status = "verify_failed"
        for c in res.checks:
            if not c.passed:
                print(f"verification failed: {c.name} = {c.value:.6g} (tolerance {c.tolerance:.6g})", file=sys.stderr)
        code = EXIT_VERIFY
    write_json(out / "manifest.json", asdict(m))
    write_json(out / "summary.json", {
        "command": m.command,
        "status": res.status,
        "exit_code": code,
        "verify": m.verify,
        "checks": [asdict(c) for c in res.checks],
        "files": res.files,
        "runtime_seconds": res.timings,
    })
    return code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qzak", description="Quantum Zakharov simulations and estimate checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="flat module.key = value file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="exit 3 when a declared tolerance is missed")
    p.add_argument("--which", choices=("C1", "C2", "C3"), help="kernel for the estimates command")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    m = RunManifest(
        command=args.command, config_path=str(args.config), out_dir=str(args.out),
        seed=args.seed, which=args.which, verify=args.verify,
    )
    return run(m)


if __name__ == "__main__":
    sys.exit(main())
