"""Repetition-rate sweeps: the parallel engine and the figure scenarios.

Each grid point is an independent integrate-and-analyze task over immutable
inputs, so points run on worker threads (the integration kernel releases the
GIL) and the assembled spectrum is bit-identical for any worker count.

Scenario presets (drive amplitudes, widths and decay rates are chosen to
reproduce the published resonance structure; the source figures only pin
omega_ab = 11 and the headline Rabi amplitudes):

fig2   cw field on a-c plus a weak Gaussian pulse train on b-c. Fractional
       resonances of the ground coherence at omega_ab/n, detected as peaks
       of the precession amplitude mean |rho_ab|.
fig3   one field on a-c with both cw and pulse components, b-c field absent.
       Combination resonances at (omega_ab +/- rabi_ac)/n appear as
       repumping dips of the trapped population pop_b. The cw level is
       lowered per grid point to hold the mean envelope at cw_level, so the
       dressed splitting stays at the nominal rabi_ac across the sweep.
fig5   strong pulse train on a-c with a weak cw probe on b-c. Ultra-narrow
       transparency dips of the probe oscillation amplitude at the rational
       frequencies m*omega_ab/n.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from .dressed import PredictedComb, predict_rational_comb, predict_resonances
from .drive import DriveEnvelope, cw, mixed, off, pulse_train, rep_rate_to_period
from .integrator import IntegrationError, integrate
from .model import DensityState, SystemParams
from .observables import ObservableSet, analyze, transient_time
from .spectra import MatchReport, Peak, detect_peaks, match_peaks

SPECTRUM_CSV_COLUMNS = (
    "omega_rep",
    "osc_amp_bc",
    "pop_a",
    "pop_b",
    "pop_c",
    "abs_pump",
    "abs_probe",
    "inv_pump",
    "inv_probe",
    "osc_amp_ab",
)

CHANNELS = (
    "osc_amp_bc",
    "osc_amp_ab",
    "pop_a",
    "pop_b",
    "pop_c",
    "abs_pump",
    "abs_probe",
    "inv_pump",
    "inv_probe",
)

SCENARIOS = ("fig2", "fig3", "fig5", "custom")
ENVELOPE_ROLES = ("cw", "pulse_train", "mixed", "off")


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to reproduce one repetition-rate sweep."""

    scenario: str
    params: SystemParams
    omega_rep_min: float
    omega_rep_max: float
    grid_points: int
    grid_kind: str = "linear"  # "linear" | "adaptive-refine"
    f1_kind: str = "cw"
    f2_kind: str = "cw"
    cw_level_1: float = 1.0
    cw_level_2: float = 1.0
    pulse_width: float = 0.05
    pulse_height: float = 1.0
    hold_mean_drive_1: bool = False  # lower cw_level_1 by the pulse mean
    fixed_average_power: bool = False  # D6 option: pulse height scaled by tau
    tol: float = 1e-8
    sample_dt: Optional[float] = None
    t_end: Optional[float] = None
    window_fraction: float = 0.25
    channel: str = "osc_amp_ab"
    orientation: str = "up"
    min_prominence_frac: float = 0.02
    match_max_n: int = 4
    match_max_m: int = 1
    match_tol_frac: float = 0.02
    match_tol_half_step: bool = True  # absolute tolerance of half a grid step

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if not self.omega_rep_min < self.omega_rep_max:
            raise ValueError("omega_rep_min must be < omega_rep_max")
        if self.omega_rep_min <= 0:
            raise ValueError("omega_rep_min must be > 0")
        if self.grid_points < 2:
            raise ValueError("grid_points must be >= 2")
        if self.grid_kind not in ("linear", "adaptive-refine"):
            raise ValueError(f"unknown grid_kind {self.grid_kind!r}")
        for kind in (self.f1_kind, self.f2_kind):
            if kind not in ENVELOPE_ROLES:
                raise ValueError(f"unknown envelope kind {kind!r}")
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel {self.channel!r}; one of {CHANNELS}")
        if self.orientation not in ("up", "down"):
            raise ValueError("orientation must be 'up' or 'down'")

    @property
    def grid_step(self) -> float:
        return (self.omega_rep_max - self.omega_rep_min) / (self.grid_points - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(self.omega_rep_min, self.omega_rep_max, self.grid_points)

    def envelopes(self, omega_rep: float) -> Tuple[DriveEnvelope, DriveEnvelope]:
        tau = rep_rate_to_period(omega_rep)
        height = self.pulse_height * tau if self.fixed_average_power else self.pulse_height
        pulse_mean = height * self.pulse_width * math.sqrt(2.0 * math.pi) / tau

        def build(kind: str, level: float, compensate: bool) -> DriveEnvelope:
            if kind == "off":
                return off()
            if kind == "cw":
                return cw(level)
            if kind == "pulse_train":
                return pulse_train(tau, self.pulse_width, height)
            eff = level - pulse_mean if compensate else level
            if eff <= 0:
                raise ValueError(
                    f"mean-drive compensation drives cw level to {eff:.4g} <= 0 "
                    f"at omega_rep={omega_rep:.4g}"
                )
            return mixed(eff, tau, self.pulse_width, height)

        f1 = build(self.f1_kind, self.cw_level_1, self.hold_mean_drive_1)
        f2 = build(self.f2_kind, self.cw_level_2, False)
        return f1, f2

    def predicted_comb(self, min_frequency: float = 0.0) -> PredictedComb:
        p = self.params
        if self.scenario == "fig3":
            return predict_resonances(
                p.omega_ab, p.rabi_ac, self.match_max_n, "fig3", min_frequency
            )
        if self.scenario == "fig5" or self.match_max_m > 1:
            return predict_rational_comb(p.omega_ab, self.match_max_m, self.match_max_n)
        return predict_resonances(p.omega_ab, 0.0, self.match_max_n, "fig2", min_frequency)


def make_config(scenario: str, **overrides) -> SweepConfig:
    """SweepConfig with the scenario's defaults, selectively overridden.

    Parameter overrides for SystemParams fields (omega_ab, gamma_*, rabi_*)
    are accepted directly and merged into the scenario's parameter set.
    """
    param_fields = {
        "omega_ab", "gamma_ab", "gamma_ac", "gamma_bc",
        "rabi_ac", "rabi_bc", "rabi_acb", "rabi_bca", "symmetric_bc_decay",
    }
    param_over = {k: overrides.pop(k) for k in list(overrides) if k in param_fields}

    if scenario == "fig2":
        base_params = dict(
            omega_ab=11.0, gamma_ab=0.01, gamma_ac=1.0, gamma_bc=1.0,
            rabi_ac=0.02, rabi_bc=0.9,
        )
        base = dict(
            omega_rep_min=1.0, omega_rep_max=13.0, grid_points=600,
            f1_kind="cw", f2_kind="pulse_train",
            pulse_width=0.05, pulse_height=1.0,
            channel="osc_amp_ab", orientation="up",
            min_prominence_frac=0.02, match_max_n=4,
        )
    elif scenario == "fig3":
        base_params = dict(
            omega_ab=11.0, gamma_ab=0.02, gamma_ac=0.05, gamma_bc=0.35,
            rabi_ac=1.0, rabi_bc=0.0, rabi_acb=0.5, rabi_bca=0.0,
        )
        base = dict(
            omega_rep_min=2.0, omega_rep_max=16.8, grid_points=75,
            f1_kind="mixed", f2_kind="off",
            cw_level_1=1.0, hold_mean_drive_1=True,
            pulse_width=0.05, pulse_height=1.5,
            channel="pop_b", orientation="down",
            min_prominence_frac=0.02, match_max_n=2,
        )
    elif scenario == "fig5":
        base_params = dict(
            omega_ab=11.0, gamma_ab=0.01, gamma_ac=1.0, gamma_bc=1.0,
            rabi_ac=20.0, rabi_bc=0.1,
        )
        base = dict(
            omega_rep_min=5.35, omega_rep_max=5.65, grid_points=241,
            f1_kind="pulse_train", f2_kind="cw",
            cw_level_2=1.0,
            pulse_width=0.05, pulse_height=1.0,
            channel="osc_amp_bc", orientation="down",
            min_prominence_frac=0.02, match_max_n=5, match_max_m=2,
            match_tol_half_step=False,
        )
    elif scenario == "custom":
        base_params = dict(omega_ab=11.0)
        base = dict(omega_rep_min=1.0, omega_rep_max=13.0, grid_points=200)
    else:
        raise ValueError(f"unknown scenario {scenario!r}")

    base_params.update(param_over)
    base.update(overrides)
    return SweepConfig(scenario=scenario, params=SystemParams(**base_params), **base)


@dataclass
class ResonanceSpectrum:
    """Observables per grid point plus detected, labeled peaks."""

    omega_rep: np.ndarray
    observables: List[Optional[ObservableSet]]
    config: SweepConfig
    failures: Tuple[Tuple[int, str], ...] = ()
    peaks: List[Peak] = field(default_factory=list)
    match_report: Optional[MatchReport] = None

    def __len__(self) -> int:
        return len(self.omega_rep)

    def channel(self, name: str) -> np.ndarray:
        """Channel values over the grid; failed points appear as NaN."""
        out = np.full(len(self.omega_rep), np.nan)
        for i, obs in enumerate(self.observables):
            if obs is None:
                continue
            out[i] = _channel_value(obs, name)
        return out

    def observable_at(self, omega: float) -> Optional[ObservableSet]:
        """Observables at the grid point nearest omega."""
        i = int(np.argmin(np.abs(self.omega_rep - omega)))
        return self.observables[i]


def _channel_value(obs: ObservableSet, name: str) -> float:
    if name == "osc_amp_bc":
        return obs.osc_amplitude_bc
    if name == "osc_amp_ab":
        return obs.osc_amplitude_ab
    if name == "pop_a":
        return obs.mean_pops[0]
    if name == "pop_b":
        return obs.mean_pops[1]
    if name == "pop_c":
        return obs.mean_pops[2]
    if name == "abs_pump":
        return obs.absorption_pump
    if name == "abs_probe":
        return obs.absorption_probe
    if name == "inv_pump":
        return obs.inversion_pump
    if name == "inv_probe":
        return obs.inversion_probe
    raise KeyError(name)


def _auto_sample_dt(cfg: SweepConfig, tau: float) -> float:
    p = cfg.params
    dt = 2.0 * math.pi / (20.0 * p.omega_ab) if p.omega_ab > 0 else tau / 40.0
    if cfg.f1_kind in ("pulse_train", "mixed") or cfg.f2_kind in ("pulse_train", "mixed"):
        dt = min(dt, cfg.pulse_width / 2.0)
    return dt


def compute_point(cfg: SweepConfig, omega_rep: float) -> ObservableSet:
    """Integrate and analyze a single repetition rate."""
    tau = rep_rate_to_period(omega_rep)
    f1, f2 = cfg.envelopes(omega_rep)
    t_end = cfg.t_end if cfg.t_end is not None else transient_time(cfg.params, tau)
    sample_dt = cfg.sample_dt if cfg.sample_dt is not None else _auto_sample_dt(cfg, tau)
    traj = integrate(
        DensityState.ground(), t_end, sample_dt, cfg.params, f1, f2, tol=cfg.tol
    )
    t_final = traj.times[-1]
    return analyze(traj, ((1.0 - cfg.window_fraction) * t_final, t_final))


def run_sweep(cfg: SweepConfig, workers: Optional[int] = None) -> ResonanceSpectrum:
    """Sweep the repetition rate over the configured grid.

    Grid points are computed independently (thread pool of the given size;
    None uses the default pool sizing) and gathered by index, so results are
    identical for any worker count. Integration failures are recorded
    per-point and leave NaN gaps instead of aborting the sweep. In
    adaptive-refine mode, up to 3 rounds of midpoint insertion refine
    intervals whose amplitude jump exceeds 10% of the global maximum;
    previously computed points are never recomputed.
    """
    cache: Dict[float, Tuple[Optional[ObservableSet], Optional[str]]] = {}

    def compute_many(omegas: List[float]) -> None:
        todo = [w for w in omegas if w not in cache]

        def point(w: float):
            try:
                return compute_point(cfg, w), None
            except (IntegrationError, ValueError) as exc:
                return None, f"{type(exc).__name__}: {exc}"

        if workers == 1:
            results = [point(w) for w in todo]
        else:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                results = list(ex.map(point, todo))
        for w, res in zip(todo, results):
            cache[w] = res

    grid = [float(w) for w in cfg.grid()]
    compute_many(grid)

    if cfg.grid_kind == "adaptive-refine":
        for _ in range(3):
            amps = np.array(
                [
                    _channel_value(cache[w][0], cfg.channel)
                    if cache[w][0] is not None
                    else np.nan
                    for w in grid
                ]
            )
            finite = amps[np.isfinite(amps)]
            if finite.size == 0:
                break
            threshold = 0.1 * float(np.nanmax(np.abs(finite)))
            new_points = []
            for i in range(len(grid) - 1):
                a0, a1 = amps[i], amps[i + 1]
                if np.isfinite(a0) and np.isfinite(a1) and abs(a1 - a0) > threshold:
                    new_points.append(0.5 * (grid[i] + grid[i + 1]))
            if not new_points:
                break
            compute_many(new_points)
            grid = sorted(set(grid) | set(new_points))

    omegas = np.array(grid)
    observables = [cache[w][0] for w in grid]
    failures = tuple(
        (i, cache[w][1]) for i, w in enumerate(grid) if cache[w][1] is not None
    )
    return ResonanceSpectrum(
        omega_rep=omegas, observables=observables, config=cfg, failures=failures
    )


def detect_and_match(
    spectrum: ResonanceSpectrum,
    min_prominence_frac: Optional[float] = None,
) -> ResonanceSpectrum:
    """Run peak detection on the configured channel and label the peaks
    against the scenario's predicted comb. Fills peaks/match_report in place
    and returns the spectrum for chaining."""
    cfg = spectrum.config
    frac = (
        min_prominence_frac
        if min_prominence_frac is not None
        else cfg.min_prominence_frac
    )
    peaks = detect_peaks(
        spectrum.omega_rep,
        spectrum.channel(cfg.channel),
        min_prominence_frac=frac,
        orientation=cfg.orientation,
    )
    comb = cfg.predicted_comb(min_frequency=10.0 * cfg.grid_step)
    tol_abs = 0.5 * cfg.grid_step if cfg.match_tol_half_step else None
    labeled, report = match_peaks(
        peaks, comb, tol_frac=cfg.match_tol_frac, tol_abs=tol_abs
    )
    spectrum.peaks = labeled
    spectrum.match_report = report
    return spectrum


def run_pipeline(cfg: SweepConfig, workers: Optional[int] = None) -> ResonanceSpectrum:
    """run_sweep followed by detect_and_match."""
    return detect_and_match(run_sweep(cfg, workers=workers))


def spectrum_rows(spectrum: ResonanceSpectrum) -> np.ndarray:
    cols = [spectrum.omega_rep]
    for name in (
        "osc_amp_bc", "pop_a", "pop_b", "pop_c",
        "abs_pump", "abs_probe", "inv_pump", "inv_probe", "osc_amp_ab",
    ):
        cols.append(spectrum.channel(name))
    return np.column_stack(cols)


def write_spectrum_csv(spectrum: ResonanceSpectrum, path) -> None:
    """Write the sweep as CSV with full decimal precision (17 significant
    digits), so reruns are byte-comparable. Failed points carry nan."""
    rows = spectrum_rows(spectrum)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(SPECTRUM_CSV_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
