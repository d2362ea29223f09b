"""Pulse-train driven three-level lambda atom and its fractional resonance combs."""

from .drive import DriveEnvelope, cw, evaluate, mixed, off, pulse_train, rep_rate_to_period
from .integrator import IntegrationError, Trajectory, integrate
from .model import DensityState, SystemParams, master_rhs, rho_cc
from .observables import ObservableSet, analyze, steady_window, transient_time
from .dressed import PredictedComb, predict_rational_comb, predict_resonances
from .spectra import Peak, detect_peaks, match_peaks
from .oracle import OscillatorParams, classical_amplitude_analytic, classical_amplitude_timedomain, classical_sweep
from .sweep import ResonanceSpectrum, SweepConfig, make_config, run_pipeline, run_sweep, write_spectrum_csv

__version__ = "0.1.0"

__all__ = [
    "DriveEnvelope",
    "cw",
    "off",
    "pulse_train",
    "mixed",
    "evaluate",
    "rep_rate_to_period",
    "SystemParams",
    "DensityState",
    "master_rhs",
    "rho_cc",
    "integrate",
    "Trajectory",
    "IntegrationError",
    "ObservableSet",
    "analyze",
    "steady_window",
    "transient_time",
    "PredictedComb",
    "predict_resonances",
    "predict_rational_comb",
    "Peak",
    "detect_peaks",
    "match_peaks",
    "OscillatorParams",
    "classical_amplitude_analytic",
    "classical_amplitude_timedomain",
    "classical_sweep",
    "SweepConfig",
    "make_config",
    "ResonanceSpectrum",
    "run_sweep",
    "run_pipeline",
    "write_spectrum_csv",
    "__version__",
]
