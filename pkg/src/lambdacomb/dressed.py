"""Predicted resonance combs from the dressed-state picture.

A pulse train at repetition rate w drives a transition of frequency W
whenever a harmonic matches: n*w = W. The bare splitting gives the
subharmonic comb W = omega_ab; a resonant coupling field of Rabi amplitude
rabi_ac dresses the levels and moves the transitions to the sum and
difference frequencies omega_ab +/- rabi_ac. Strong pulsed driving adds
rational resonances n*w = m*omega_ab.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

EIGEN = "eigen"
SUM = "sum"
DIFFERENCE = "difference"


@dataclass(frozen=True)
class CombEntry:
    frequency: float
    base: float
    m: int
    n: int
    kind: str


@dataclass(frozen=True)
class PredictedComb:
    base_frequencies: Tuple[float, ...]
    max_n: int
    entries: Tuple[CombEntry, ...]

    def frequencies(self) -> Tuple[float, ...]:
        return tuple(e.frequency for e in self.entries)


def _dedupe_sort(entries: Sequence[CombEntry], tol: float = 1e-9) -> Tuple[CombEntry, ...]:
    ordered = sorted(entries, key=lambda e: -e.frequency)
    kept = []
    for e in ordered:
        if kept and abs(kept[-1].frequency - e.frequency) < tol:
            continue
        kept.append(e)
    return tuple(kept)


def predict_resonances(
    omega_ab: float,
    rabi_ac: float,
    max_n: int,
    scenario: str = "fig3",
    min_frequency: float = 0.0,
) -> PredictedComb:
    """Comb of expected resonance positions for a scenario.

    fig2-style driving resonates at omega_ab/n. fig3-style driving (dressed
    by a cw field of amplitude rabi_ac) resonates at |omega_ab +/- rabi_ac|/n.
    Entries at or below min_frequency are dropped (degenerate differences and
    anything the sweep grid cannot resolve).
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    entries = []
    if scenario in ("fig2", "fig5"):
        bases = [(omega_ab, EIGEN)]
    elif scenario == "fig3":
        bases = [(omega_ab + rabi_ac, SUM), (abs(omega_ab - rabi_ac), DIFFERENCE)]
    else:
        raise ValueError(f"unknown scenario {scenario!r} for resonance prediction")
    for base, kind in bases:
        for n in range(1, max_n + 1):
            f = base / n
            if f > min_frequency:
                entries.append(CombEntry(f, base, 1, n, kind))
    return PredictedComb(
        base_frequencies=tuple(sorted({b for b, _ in bases}, reverse=True)),
        max_n=max_n,
        entries=_dedupe_sort(entries),
    )


def predict_rational_comb(omega_ab: float, max_m: int, max_n: int) -> PredictedComb:
    """All reduced fractions m/n <= 1 of omega_ab with m <= max_m, n <= max_n.

    Each entry is tagged with its (m, n) in lowest terms; unreduced duplicates
    (2/4 vs 1/2) are excluded by construction.
    """
    if max_m < 1 or max_n < 1:
        raise ValueError("max_m and max_n must be >= 1")
    entries = []
    for m in range(1, max_m + 1):
        for n in range(m, max_n + 1):
            if math.gcd(m, n) != 1:
                continue
            entries.append(CombEntry(omega_ab * m / n, omega_ab, m, n, EIGEN))
    return PredictedComb(
        base_frequencies=(omega_ab,),
        max_n=max_n,
        entries=_dedupe_sort(entries),
    )


def comb_to_json(comb: PredictedComb) -> list:
    return [
        {"frequency": e.frequency, "base": e.base, "m": e.m, "n": e.n, "kind": e.kind}
        for e in comb.entries
    ]
