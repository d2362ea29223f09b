"""Classical driven damped oscillator cross-check.

x'' + b x' + w0^2 x = sum_n delta(t - n*tau) exhibits the same comb of
resonances at drive rates w = w0/n as the atom, so it validates the whole
sweep-and-detect pipeline against something analytically solvable. The
analytic path evaluates the Fourier series of the Dirac-comb response; the
time-domain path regularizes the deltas as unit-area Gaussians and reuses
the shared integration kernel.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import _kernel
from .integrator import _raise_on_failure


@dataclass(frozen=True)
class OscillatorParams:
    omega0: float
    damping: float
    rep_period: float

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError("omega0 must be > 0")
        if self.damping <= 0:
            raise ValueError("damping must be > 0")
        if self.rep_period <= 0:
            raise ValueError("rep_period must be > 0")


def classical_amplitude_analytic(
    p: OscillatorParams,
    rel_term_cutoff: float = 1e-12,
    n_phase: int = 4096,
) -> float:
    """Steady-state amplitude from the Fourier series of the comb response.

    x(t) = Re sum_k (1/tau) e^{i k w t} / (w0^2 - (k w)^2 + i b k w), with
    w = 2 pi / tau. Terms are accumulated until they fall below
    rel_term_cutoff of the running amplitude sum; the amplitude is half the
    peak-to-peak value of the reconstructed series over one period.
    """
    if p.damping >= 2.0 * p.omega0:
        raise ValueError("overdamped oscillator: requires damping < 2*omega0")
    w = 2.0 * math.pi / p.rep_period
    inv_tau = 1.0 / p.rep_period

    # accumulate harmonics into phase bins; the series on a uniform phase
    # grid is then a single inverse FFT (harmonics alias into bins exactly)
    bins = np.zeros(n_phase, dtype=np.complex128)
    c0 = inv_tau / (p.omega0**2)
    running = abs(c0)
    k = 0
    chunk = 4096
    while True:
        ks = np.arange(k + 1, k + 1 + chunk, dtype=np.float64)
        denom = p.omega0**2 - (ks * w) ** 2 + 1j * p.damping * ks * w
        coeff = inv_tau / denom
        np.add.at(bins, (ks.astype(np.int64) % n_phase), coeff)
        mags = np.abs(coeff)
        running += float(2.0 * mags.sum())
        k += chunk
        if float(mags[-1]) < rel_term_cutoff * running:
            break
        if k > 100_000_000:
            raise RuntimeError("Fourier series failed to converge")
    x = c0 + 2.0 * np.real(n_phase * np.fft.ifft(bins))
    return 0.5 * float(x.max() - x.min())


def classical_amplitude_timedomain(
    p: OscillatorParams,
    pulse_width: float,
    tol: float = 1e-9,
    forcing_area: float = 1.0,
) -> float:
    """Steady-state amplitude by direct integration with Gaussian kicks.

    The Dirac comb is regularized as Gaussians of the given width (must be
    <= tau/20 so the kicks stay impulsive) carrying forcing_area each.
    Integrates until the transient envelope e^{-b t / 2} has decayed below
    1e-6 and returns half the peak-to-peak excursion over the last 10 drive
    periods.
    """
    if pulse_width > p.rep_period / 20.0:
        raise ValueError("pulse_width must be <= rep_period/20")
    if p.damping >= 2.0 * p.omega0:
        raise ValueError("overdamped oscillator: requires damping < 2*omega0")

    t_settle = 2.0 * math.log(1e6) / p.damping
    t_end = t_settle + 10.0 * p.rep_period
    # sample densely enough to resolve the oscillation and the kicks
    dt = min(2.0 * math.pi / p.omega0, p.rep_period) / 40.0
    n_samples = int(math.floor(t_end / dt)) + 1

    height = forcing_area / (pulse_width * math.sqrt(2.0 * math.pi))
    env = np.array([1.0, 0.0, p.rep_period, pulse_width, height, 0.0])
    env_off = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    pp = np.array([p.omega0, p.damping])
    y0 = np.zeros(2)
    out = np.empty((n_samples, 2))
    status, t_fail, _, _ = _kernel.integrate_fixed_grid(
        _kernel.RHS_OSCILLATOR,
        y0, 0.0, dt, n_samples,
        tol, tol * 1e-2, np.inf, 0.0, 200_000_000,
        pp, env, env_off, out,
    )
    _raise_on_failure(status, t_fail)
    tail = out[:, 0][np.arange(n_samples) * dt >= t_settle]
    return 0.5 * float(tail.max() - tail.min())


def classical_sweep(
    omega_min: float,
    omega_max: float,
    grid_points: int,
    omega0: float,
    damping: float,
    pulse_width: float = 0.01,
    tol: float = 1e-9,
    workers: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Time-domain oscillator amplitude on a grid of drive rates.

    Returns (omega grid, amplitude) with the same amplitude semantics as the
    quantum sweep's oscillation-amplitude channel.
    """
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    omegas = np.linspace(omega_min, omega_max, grid_points)

    def point(i: int) -> float:
        w = float(omegas[i])
        p = OscillatorParams(omega0=omega0, damping=damping, rep_period=2.0 * math.pi / w)
        return classical_amplitude_timedomain(p, pulse_width, tol=tol)

    if workers is None or workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            amps = list(ex.map(point, range(grid_points)))
    else:
        amps = [point(i) for i in range(grid_points)]
    return omegas, np.asarray(amps)
