"""Steady-state observables extracted from a trajectory.

Two oscillation amplitudes are reported. osc_amplitude_bc is half the
peak-to-peak excursion of Im rho_bc over the analysis window (the probe
absorption oscillation when the probe is cw). osc_amplitude_ab is the
steady precession amplitude of the ground-state coherence, mean |rho_ab|
over the window; this is the quantity the pulse train drives resonantly
(the quantum analogue of the driven oscillator's amplitude) and is the
default channel for locating fractional resonances.

Signed absorption per transition projects the coherence onto the drive
carrier: the instantaneous drive coefficient with each envelope replaced by
its window average. Positive means energy flows from field to atom (a weakly
driven atom absorbs); gain is negative. For cw envelopes this is exactly the
time-averaged work done by the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .drive import evaluate
from .integrator import IM_BC, Trajectory, min_eigenvalues

CPT = "CPT"
GWI_PROBE = "GWI_probe"
ADI_PUMP = "ADI_pump"

CPT_POPULATION_THRESHOLD = 0.6
# Strict-sign floor for the gain/inversion flags. The EIT-suppressed probe
# channel carries genuine signals at the 1e-5 scale, well above the windowing
# residue (~1e-6 for the default window).
SIGN_NOISE_FLOOR = 1e-5
DEFAULT_WINDOW_FRACTION = 0.25
MIN_WINDOW_PERIODS = 5


@dataclass(frozen=True)
class ObservableSet:
    """Windowed steady-state observables plus physicality diagnostics."""

    osc_amplitude_bc: float
    osc_amplitude_ab: float
    mean_pops: Tuple[float, float, float]
    absorption_pump: float
    absorption_probe: float
    inversion_pump: float
    inversion_probe: float
    flags: frozenset
    trace_error: float
    min_eigenvalue: float
    window: Tuple[float, float]


def steady_window(traj: Trajectory, fraction: float = DEFAULT_WINDOW_FRACTION):
    """Analysis window covering the final `fraction` of the run."""
    t_final = traj.times[-1]
    return ((1.0 - fraction) * t_final, t_final)


def transient_time(params, rep_period: float) -> float:
    """Default integration span: long enough for the slowest decay to settle
    and for many pulse periods to elapse (max of 50/gamma_min and 200 periods)."""
    g = params.gamma_min
    t_decay = 50.0 / g if g > 0 else 0.0
    return max(t_decay, 200.0 * rep_period)


def analyze(traj: Trajectory, window: Optional[Tuple[float, float]] = None) -> ObservableSet:
    """Extract the observable set over the given (t_lo, t_hi) window.

    The window must exclude the transient; by default the final 25% of the
    run is used. For pulsed drives the window must span at least 5 repetition
    periods or the oscillation amplitude is ill-defined.
    """
    if window is None:
        window = steady_window(traj)
    t_lo, t_hi = window
    if not (traj.times[0] <= t_lo < t_hi <= traj.times[-1] + 1e-12):
        raise ValueError(f"window {window} not inside trajectory span")
    rep_periods = [env.rep_period for env in (traj.f1, traj.f2) if env.has_pulses]
    if rep_periods:
        min_span = MIN_WINDOW_PERIODS * max(rep_periods)
        if t_hi - t_lo < min_span:
            raise ValueError(
                f"window span {t_hi - t_lo:.4g} shorter than "
                f"{MIN_WINDOW_PERIODS} repetition periods ({min_span:.4g})"
            )

    i_lo = int(np.searchsorted(traj.times, t_lo - 1e-12))
    i_hi = int(np.searchsorted(traj.times, t_hi + 1e-12))
    t = traj.times[i_lo:i_hi]
    im_bc = traj.data[i_lo:i_hi, IM_BC]
    osc_amp_bc = 0.5 * (float(im_bc.max()) - float(im_bc.min()))

    aa = traj.rho_aa[i_lo:i_hi]
    bb = traj.rho_bb[i_lo:i_hi]
    cc = 1.0 - aa - bb
    mean_pops = (float(aa.mean()), float(bb.mean()), float(cc.mean()))

    params = traj.params
    r_ac = traj.rho_ac[i_lo:i_hi]
    r_bc = traj.rho_bc[i_lo:i_hi]
    r_ab = traj.rho_ab[i_lo:i_hi]
    osc_amp_ab = float(np.mean(np.abs(r_ab)))

    # carrier lock-in: envelopes enter through their window means
    f1_mean = float(np.mean(evaluate(traj.f1, t)))
    f2_mean = float(np.mean(evaluate(traj.f2, t)))
    phase = np.exp(1j * params.omega_ab * t)
    carrier_ac = params.rabi_ac * f1_mean + params.rabi_bca * f2_mean * np.conj(phase)
    carrier_bc = params.rabi_bc * f2_mean + params.rabi_acb * f1_mean * phase
    absorption_pump = -float(np.mean(np.imag(np.conj(carrier_ac) * r_ac)))
    absorption_probe = -float(np.mean(np.imag(np.conj(carrier_bc) * r_bc)))

    inversion_pump = float(np.mean(cc - aa))
    inversion_probe = float(np.mean(cc - bb))

    flags = set()
    if mean_pops[1] > CPT_POPULATION_THRESHOLD:
        flags.add(CPT)
    if absorption_probe < -SIGN_NOISE_FLOOR and inversion_probe < -SIGN_NOISE_FLOOR:
        flags.add(GWI_PROBE)
    if absorption_pump > SIGN_NOISE_FLOOR and inversion_pump > SIGN_NOISE_FLOOR:
        flags.add(ADI_PUMP)

    return ObservableSet(
        osc_amplitude_bc=osc_amp_bc,
        osc_amplitude_ab=osc_amp_ab,
        mean_pops=mean_pops,
        absorption_pump=absorption_pump,
        absorption_probe=absorption_probe,
        inversion_pump=inversion_pump,
        inversion_probe=inversion_probe,
        flags=frozenset(flags),
        trace_error=traj.trace_error(),
        min_eigenvalue=float(np.min(min_eigenvalues(traj.data))),
        window=(float(t_lo), float(t_hi)),
    )
