"""Time-dependent drive envelopes: cw, Gaussian pulse trains, and mixtures.

An envelope is the dimensionless factor multiplying a Rabi amplitude. A pulse
train places identical Gaussians at t = n*tau for integer n >= n_start, so a
repetition rate omega_rep corresponds to tau = 2*pi/omega_rep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ENVELOPE_KINDS = ("cw", "pulse_train", "mixed")

# numeric codes used by the compiled integration kernel
_KIND_CODE = {"cw": 0.0, "pulse_train": 1.0, "mixed": 2.0}


@dataclass(frozen=True)
class DriveEnvelope:
    """Dimensionless drive envelope f(t).

    kind "cw" evaluates to the constant cw_level; "pulse_train" to a sum of
    Gaussians of width pulse_width and peak pulse_height centred at n*rep_period
    (n >= n_start); "mixed" to the sum of both components.
    """

    kind: str
    cw_level: float = 0.0
    rep_period: float = 0.0
    pulse_width: float = 0.0
    pulse_height: float = 0.0
    n_start: int = 0
    width_guard: float = 6.0

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.kind in ("pulse_train", "mixed"):
            if not self.rep_period > 0:
                raise ValueError("rep_period must be > 0 for pulsed envelopes")
            if not self.pulse_width > 0:
                raise ValueError("pulse_width must be > 0 for pulsed envelopes")
            if self.pulse_width * self.width_guard >= self.rep_period:
                raise ValueError(
                    f"pulse_width {self.pulse_width} too wide for rep_period "
                    f"{self.rep_period}: pulses must stay resolvable "
                    f"(width < rep_period/{self.width_guard})"
                )

    @property
    def has_pulses(self) -> bool:
        return self.kind in ("pulse_train", "mixed")

    def as_array(self) -> np.ndarray:
        """Pack into the flat float vector the integration kernel consumes."""
        cw = self.cw_level if self.kind in ("cw", "mixed") else 0.0
        return np.array(
            [
                _KIND_CODE[self.kind],
                cw,
                self.rep_period,
                self.pulse_width,
                self.pulse_height,
                float(self.n_start),
            ],
            dtype=np.float64,
        )


def cw(level: float = 1.0) -> DriveEnvelope:
    return DriveEnvelope(kind="cw", cw_level=level)


def off() -> DriveEnvelope:
    """A switched-off field (cw envelope at level 0)."""
    return DriveEnvelope(kind="cw", cw_level=0.0)


def pulse_train(
    rep_period: float,
    pulse_width: float,
    pulse_height: float = 1.0,
    n_start: int = 0,
) -> DriveEnvelope:
    return DriveEnvelope(
        kind="pulse_train",
        rep_period=rep_period,
        pulse_width=pulse_width,
        pulse_height=pulse_height,
        n_start=n_start,
    )


def mixed(
    cw_level: float,
    rep_period: float,
    pulse_width: float,
    pulse_height: float = 1.0,
    n_start: int = 0,
) -> DriveEnvelope:
    return DriveEnvelope(
        kind="mixed",
        cw_level=cw_level,
        rep_period=rep_period,
        pulse_width=pulse_width,
        pulse_height=pulse_height,
        n_start=n_start,
    )


def rep_rate_to_period(omega_rep: float) -> float:
    """Pulse spacing tau = 2*pi/omega_rep."""
    if not omega_rep > 0:
        raise ValueError(f"omega_rep must be > 0, got {omega_rep}")
    return 2.0 * math.pi / omega_rep


def evaluate(env: DriveEnvelope, t):
    """Evaluate the envelope at time t (scalar or ndarray).

    Pulse trains sum only the <= 3 pulse centres nearest to t; with the width
    guard in force the neglected tails are below 1e-15 of a pulse peak.
    """
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    if env.kind in ("cw", "mixed"):
        out = out + env.cw_level
    if env.has_pulses:
        tau = env.rep_period
        sig = env.pulse_width
        n0 = np.rint(t / tau)
        for dn in (-1.0, 0.0, 1.0):
            n = n0 + dn
            live = n >= env.n_start
            x = (t - n * tau) / sig
            out = out + np.where(live, env.pulse_height * np.exp(-0.5 * x * x), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def pulse_area(env: DriveEnvelope) -> float:
    """Integral of a single pulse: height * width * sqrt(2*pi)."""
    if not env.has_pulses:
        return 0.0
    return env.pulse_height * env.pulse_width * math.sqrt(2.0 * math.pi)
