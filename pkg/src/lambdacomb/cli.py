"""Command-line front end: run sweeps, write CSV/JSON artifacts, report peaks.

Usage:
    lambdacomb run fig2 --omega-ab 11 --grid 1:13:600 --out results/
    lambdacomb run classical --omega0 10 --damping 0.2
    lambdacomb run my_run.cfg --workers 4 --strict

The positional target is either a scenario name (fig2 | fig3 | fig5 |
classical | custom) or the path of a config file with flat dotted keys
(`sweep.grid_points = 600`, one per line, '#' comments). Flags override
config-file values. Outputs: spectrum.csv, spectrum.meta.json and optional
trajectory_<omega>.csv dumps; reruns with identical configuration produce
byte-identical CSV files.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from . import __version__
from .dressed import comb_to_json, predict_resonances
from .integrator import integrate
from .model import DensityState
from .observables import transient_time
from .oracle import classical_sweep
from .spectra import detect_peaks, match_peaks, peak_to_json
from .sweep import (
    SPECTRUM_CSV_COLUMNS,
    ResonanceSpectrum,
    SweepConfig,
    make_config,
    rep_rate_to_period,
    run_pipeline,
    write_spectrum_csv,
)

SCENARIO_NAMES = ("fig2", "fig3", "fig5", "custom", "classical")

# config-file key -> (make_config override name, type)
_CONFIG_KEYS = {
    "scenario": ("scenario", str),
    "params.omega_ab": ("omega_ab", float),
    "params.gamma_ab": ("gamma_ab", float),
    "params.gamma_ac": ("gamma_ac", float),
    "params.gamma_bc": ("gamma_bc", float),
    "params.rabi_ac": ("rabi_ac", float),
    "params.rabi_bc": ("rabi_bc", float),
    "params.rabi_acb": ("rabi_acb", float),
    "params.rabi_bca": ("rabi_bca", float),
    "params.symmetric_bc_decay": ("symmetric_bc_decay", bool),
    "sweep.omega_rep_min": ("omega_rep_min", float),
    "sweep.omega_rep_max": ("omega_rep_max", float),
    "sweep.grid_points": ("grid_points", int),
    "sweep.grid_kind": ("grid_kind", str),
    "drive.f1_kind": ("f1_kind", str),
    "drive.f2_kind": ("f2_kind", str),
    "drive.cw_level_1": ("cw_level_1", float),
    "drive.cw_level_2": ("cw_level_2", float),
    "drive.pulse_width": ("pulse_width", float),
    "drive.pulse_height": ("pulse_height", float),
    "drive.hold_mean_drive_1": ("hold_mean_drive_1", bool),
    "drive.fixed_average_power": ("fixed_average_power", bool),
    "integrate.tol": ("tol", float),
    "integrate.sample_dt": ("sample_dt", float),
    "integrate.t_end": ("t_end", float),
    "analysis.window_fraction": ("window_fraction", float),
    "detect.channel": ("channel", str),
    "detect.orientation": ("orientation", str),
    "detect.min_prominence_frac": ("min_prominence_frac", float),
    "match.max_n": ("match_max_n", int),
    "match.max_m": ("match_max_m", int),
    "match.tol_frac": ("match_tol_frac", float),
    "match.tol_half_step": ("match_tol_half_step", bool),
}

# keys handled outside make_config
_RUN_KEYS = {
    "classical.omega0": float,
    "classical.damping": float,
    "classical.pulse_width": float,
    "classical.max_n": int,
    "classical.min_prominence_frac": float,
    "classical.omega_min": float,
    "classical.omega_max": float,
    "classical.grid_points": int,
    "output.dir": str,
    "run.workers": int,
    "run.strict": bool,
    "run.dump_trajectory": float,
}


class ConfigError(ValueError):
    pass


def _parse_value(key: str, raw: str, typ):
    raw = raw.strip()
    try:
        if typ is bool:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError("expected true/false")
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {typ.__name__} ({exc})")


def parse_config_file(path: Path) -> Dict[str, object]:
    """Strictly parse `key = value` lines; unknown keys are rejected."""
    values: Dict[str, object] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key in _CONFIG_KEYS:
            typ = _CONFIG_KEYS[key][1]
        elif key in _RUN_KEYS:
            typ = _RUN_KEYS[key]
        else:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw, typ)
    return values


def _parse_grid(spec: str) -> Tuple[float, float, int]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid expects min:max:points, got {spec!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--grid {spec!r}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambdacomb",
        description="Pulse-train driven lambda atom: repetition-rate sweeps "
        "and fractional resonance detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a sweep scenario or config file")
    run.add_argument("target", help="scenario name (fig2|fig3|fig5|custom|classical) "
                                    "or config file path")
    run.add_argument("--config", help="config file (alternative to positional path)")
    run.add_argument("--scenario", choices=SCENARIO_NAMES)
    run.add_argument("--omega-ab", type=float, dest="omega_ab")
    run.add_argument("--rabi-ac", type=float, dest="rabi_ac")
    run.add_argument("--rabi-bc", type=float, dest="rabi_bc")
    run.add_argument("--grid", help="omega_rep grid as min:max:points")
    run.add_argument("--tol", type=float, help="integrator tolerance")
    run.add_argument("--workers", type=int, default=None)
    run.add_argument("--strict", action="store_true",
                     help="exit nonzero if any grid point failed")
    run.add_argument("--out", default=".", help="output directory")
    run.add_argument("--dump-trajectory", type=float, default=None, metavar="OMEGA_REP",
                     help="also write trajectory_<omega>.csv for this grid point")
    run.add_argument("--omega0", type=float, help="classical oscillator frequency")
    run.add_argument("--damping", type=float, help="classical damping rate")
    return parser


def _resolve(args) -> Tuple[str, Dict[str, object], Dict[str, object]]:
    """Merge config file and flags into (scenario, sweep overrides, run options)."""
    file_values: Dict[str, object] = {}
    target = args.target
    scenario = None
    if target in SCENARIO_NAMES:
        scenario = target
    else:
        path = Path(target)
        if not path.exists():
            raise ConfigError(
                f"target {target!r} is neither a scenario {SCENARIO_NAMES} "
                f"nor an existing config file"
            )
        file_values = parse_config_file(path)
    if args.config:
        file_values.update(parse_config_file(Path(args.config)))

    overrides: Dict[str, object] = {}
    run_opts: Dict[str, object] = {}
    for key, value in file_values.items():
        if key == "scenario":
            scenario = str(value)
        elif key in _CONFIG_KEYS:
            overrides[_CONFIG_KEYS[key][0]] = value
        else:
            run_opts[key] = value

    if args.scenario:
        scenario = args.scenario
    if scenario is None:
        raise ConfigError("no scenario given (positional, config 'scenario =', or --scenario)")
    if scenario not in SCENARIO_NAMES:
        raise ConfigError(f"unknown scenario {scenario!r}")

    for flag, name in (
        ("omega_ab", "omega_ab"), ("rabi_ac", "rabi_ac"), ("rabi_bc", "rabi_bc"),
        ("tol", "tol"),
    ):
        v = getattr(args, flag)
        if v is not None:
            overrides[name] = v
    if args.grid:
        lo, hi, n = _parse_grid(args.grid)
        overrides.update(omega_rep_min=lo, omega_rep_max=hi, grid_points=n)
    if args.workers is not None:
        run_opts["run.workers"] = args.workers
    if args.strict:
        run_opts["run.strict"] = True
    run_opts["output.dir"] = args.out
    if args.dump_trajectory is not None:
        run_opts["run.dump_trajectory"] = args.dump_trajectory
    if args.omega0 is not None:
        run_opts["classical.omega0"] = args.omega0
    if args.damping is not None:
        run_opts["classical.damping"] = args.damping
    return scenario, overrides, run_opts


def _config_echo(cfg: SweepConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["params"] = dataclasses.asdict(cfg.params)
    return d


def _write_meta(path: Path, config_echo: dict, predicted, peaks, failures) -> None:
    meta = {
        "version": __version__,
        "config": config_echo,
        "predicted": predicted,
        "peaks": [peak_to_json(p) for p in peaks],
        "failures": [{"index": i, "error": msg} for i, msg in failures],
    }
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _print_peak_report(peaks, failures) -> None:
    print(f"{len(peaks)} peak(s) detected; {len(failures)} failed grid point(s)")
    for p in peaks:
        lab = ""
        if p.label is not None:
            lab = (f"  matched {p.label.kind or 'comb'} base={p.label.base:g} "
                   f"({p.label.m}/{p.label.n})")
        print(
            f"  omega_rep={p.location:10.5f}  height={p.height:10.4g} "
            f"prominence={p.prominence:8.3g}  fwhm={p.fwhm:8.4g}{lab}"
        )


def _run_classical(run_opts: Dict[str, object], out_dir: Path) -> int:
    omega0 = float(run_opts.get("classical.omega0", 10.0))
    damping = float(run_opts.get("classical.damping", 0.2))
    width = float(run_opts.get("classical.pulse_width", 0.01))
    max_n = int(run_opts.get("classical.max_n", 4))
    prom = float(run_opts.get("classical.min_prominence_frac", 0.05))
    omega_min = float(run_opts.get("classical.omega_min", 2.0))
    omega_max = float(run_opts.get("classical.omega_max", 12.0))
    grid_points = int(run_opts.get("classical.grid_points", 500))
    workers = run_opts.get("run.workers")

    omegas, amps = classical_sweep(
        omega_min, omega_max, grid_points, omega0, damping, pulse_width=width,
        workers=int(workers) if workers else None,
    )
    peaks = detect_peaks(omegas, amps, min_prominence_frac=prom)
    comb = predict_resonances(omega0, 0.0, max_n, "fig2")
    labeled, report = match_peaks(peaks, comb, tol_abs=0.5 * float(omegas[1] - omegas[0]))

    csv_path = out_dir / "spectrum.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(",".join(SPECTRUM_CSV_COLUMNS) + "\n")
        for w, a in zip(omegas, amps):
            row = [w, a, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    echo = {
        "scenario": "classical",
        "classical": {"omega0": omega0, "damping": damping, "pulse_width": width},
        "grid": {"min": omega_min, "max": omega_max, "points": grid_points},
        "min_prominence_frac": prom,
    }
    _write_meta(out_dir / "spectrum.meta.json", echo, comb_to_json(comb), labeled, ())
    _print_peak_report(labeled, ())
    return 0


def _dump_trajectory(cfg: SweepConfig, omega: float, out_dir: Path) -> None:
    tau = rep_rate_to_period(omega)
    f1, f2 = cfg.envelopes(omega)
    t_end = cfg.t_end if cfg.t_end is not None else transient_time(cfg.params, tau)
    sample_dt = cfg.sample_dt
    if sample_dt is None:
        from .sweep import _auto_sample_dt

        sample_dt = _auto_sample_dt(cfg, tau)
    traj = integrate(DensityState.ground(), t_end, sample_dt, cfg.params, f1, f2, tol=cfg.tol)
    traj.to_csv(out_dir / f"trajectory_{omega:g}.csv")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario, overrides, run_opts = _resolve(args)
        out_dir = Path(str(run_opts.get("output.dir", ".")))
        out_dir.mkdir(parents=True, exist_ok=True)

        if scenario == "classical":
            return _run_classical(run_opts, out_dir)

        cfg = make_config(scenario, **overrides)
        workers = run_opts.get("run.workers")
        spectrum = run_pipeline(cfg, workers=int(workers) if workers else None)

        write_spectrum_csv(spectrum, out_dir / "spectrum.csv")
        comb = cfg.predicted_comb(min_frequency=10.0 * cfg.grid_step)
        _write_meta(
            out_dir / "spectrum.meta.json",
            _config_echo(cfg),
            comb_to_json(comb),
            spectrum.peaks,
            spectrum.failures,
        )
        if "run.dump_trajectory" in run_opts:
            _dump_trajectory(cfg, float(run_opts["run.dump_trajectory"]), out_dir)

        _print_peak_report(spectrum.peaks, spectrum.failures)
        if spectrum.failures:
            print(f"warning: {len(spectrum.failures)} grid point(s) failed", file=sys.stderr)
            if run_opts.get("run.strict"):
                return 1
        return 0
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
