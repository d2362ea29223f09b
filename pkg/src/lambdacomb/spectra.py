"""Peak detection on swept spectra and matching against predicted combs.

Resonances can appear as local maxima (orientation "up") or as narrow
transparency dips (orientation "down"); detection always runs on the oriented
signal, so a dip is a peak of the negated channel. Reported Peak.height is
the raw channel value at the refined location; Peak.prominence is the feature
amplitude on the oriented signal and is the right measure for comparing
resonance strengths regardless of orientation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import find_peaks


@dataclass(frozen=True)
class PeakLabel:
    base: float
    m: int
    n: int
    kind: str = ""


@dataclass(frozen=True)
class Peak:
    location: float
    height: float
    prominence: float
    fwhm: float
    orientation: str = "up"
    label: Optional[PeakLabel] = None


@dataclass(frozen=True)
class MatchReport:
    matched: Tuple[Tuple[Peak, float], ...]  # (labeled peak, predicted frequency)
    unmatched_predictions: Tuple[float, ...]
    unlabeled_peaks: Tuple[Peak, ...]


def _fill_gaps(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Interpolate NaN gaps; returns (filled values, gap mask)."""
    bad = ~np.isfinite(y)
    if not bad.any():
        return y, bad
    if bad.all():
        raise ValueError("spectrum has no finite values")
    filled = y.copy()
    filled[bad] = np.interp(x[bad], x[~bad], y[~bad])
    return filled, bad


def _parabolic_refine(x: np.ndarray, s: np.ndarray, i: int) -> Tuple[float, float]:
    """Vertex of the quadratic through the three points around index i.

    Handles non-uniform grids via a Lagrange fit; falls back to the sample
    itself at spectrum edges or degenerate curvature.
    """
    if i <= 0 or i >= len(x) - 1:
        return float(x[i]), float(s[i])
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = s[i - 1], s[i], s[i + 1]
    d0 = (y1 - y0) / (x1 - x0)
    d1 = (y2 - y1) / (x2 - x1)
    curv = (d1 - d0) / (x2 - x0)
    if not np.isfinite(curv) or curv >= 0:
        return float(x[i]), float(s[i])
    # vertex of q(x) = y0 + d0 (x-x0) + curv (x-x0)(x-x1)
    xv = 0.5 * (x0 + x1 - d0 / curv)
    lo, hi = float(x[i - 1]), float(x[i + 1])
    xv = min(max(xv, lo), hi)
    yv = y0 + d0 * (xv - x0) + curv * (xv - x0) * (xv - x1)
    return float(xv), float(yv)


def _fwhm(x: np.ndarray, s: np.ndarray, i: int, prominence: float) -> float:
    """Full width at half prominence by linear interpolation on each side."""
    half = s[i] - 0.5 * prominence
    left = x[0]
    for j in range(i - 1, -1, -1):
        if s[j] <= half:
            frac = (s[j + 1] - half) / (s[j + 1] - s[j])
            left = x[j + 1] + frac * (x[j] - x[j + 1])
            break
    else:
        left = x[0]
    right = x[-1]
    for j in range(i + 1, len(x)):
        if s[j] <= half:
            frac = (s[j - 1] - half) / (s[j - 1] - s[j])
            right = x[j - 1] + frac * (x[j] - x[j - 1])
            break
    else:
        right = x[-1]
    return float(right - left)


def detect_peaks(
    omega: Sequence[float],
    values: Sequence[float],
    min_prominence_frac: float = 0.02,
    orientation: str = "up",
) -> List[Peak]:
    """Find local maxima (or minima, orientation="down") of a swept channel.

    Peaks must have prominence of at least min_prominence_frac times the
    global max-min span of the channel. Locations and heights are refined by
    parabolic interpolation through the three points around each maximum;
    widths are measured at half prominence. NaN gaps are interpolated first.
    An all-flat channel yields no peaks.
    """
    if not (0.0 < min_prominence_frac < 1.0):
        raise ValueError("min_prominence_frac must lie in (0, 1)")
    if orientation not in ("up", "down"):
        raise ValueError("orientation must be 'up' or 'down'")
    x = np.asarray(omega, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("omega and values must be 1-D arrays of equal length")
    y, _ = _fill_gaps(x, y)

    s = y if orientation == "up" else -y
    span = float(s.max() - s.min())
    if span <= 0.0:
        return []
    idx, props = find_peaks(s, prominence=min_prominence_frac * span)
    peaks = []
    for k, i in enumerate(idx):
        prom = float(props["prominences"][k])
        loc, sv = _parabolic_refine(x, s, int(i))
        height = sv if orientation == "up" else -sv
        peaks.append(
            Peak(
                location=loc,
                height=float(height),
                prominence=prom,
                fwhm=_fwhm(x, s, int(i), prom),
                orientation=orientation,
            )
        )
    return peaks


def match_peaks(
    peaks: Sequence[Peak],
    comb,
    tol_frac: float = 0.02,
    tol_abs: Optional[float] = None,
) -> Tuple[List[Peak], MatchReport]:
    """Greedily label peaks with the nearest predicted comb entries.

    Candidate (prediction, peak) pairs are taken in order of increasing
    distance; each prediction and each peak is used at most once. A pair
    matches if the distance is within tol_abs (when given) or within
    tol_frac * predicted frequency. Returns the full peak list (matched ones
    labeled) and a report of unmatched predictions and unlabeled peaks.
    """
    entries = list(comb.entries)
    pairs = []
    for ei, e in enumerate(entries):
        tol = tol_abs if tol_abs is not None else tol_frac * e.frequency
        for pi, p in enumerate(peaks):
            d = abs(p.location - e.frequency)
            if d <= tol:
                pairs.append((d, ei, pi))
    pairs.sort(key=lambda t: (t[0], t[1], t[2]))

    labeled = {}
    assignments = []
    used_entries = set()
    used_peaks = set()
    for d, ei, pi in pairs:
        if ei in used_entries or pi in used_peaks:
            continue
        used_entries.add(ei)
        used_peaks.add(pi)
        e = entries[ei]
        labeled[pi] = replace(
            peaks[pi], label=PeakLabel(base=e.base, m=e.m, n=e.n, kind=e.kind)
        )
        assignments.append((ei, pi))

    out = [labeled.get(i, p) for i, p in enumerate(peaks)]
    assignments.sort(key=lambda t: -entries[t[0]].frequency)
    matched = tuple((labeled[pi], entries[ei].frequency) for ei, pi in assignments)
    unmatched = tuple(
        e.frequency for ei, e in enumerate(entries) if ei not in used_entries
    )
    unlabeled = tuple(p for i, p in enumerate(out) if p.label is None)
    return out, MatchReport(matched, unmatched, unlabeled)


def peak_to_json(peak: Peak) -> dict:
    d = {
        "location": peak.location,
        "height": peak.height,
        "prominence": peak.prominence,
        "fwhm": peak.fwhm,
        "orientation": peak.orientation,
        "label": None,
    }
    if peak.label is not None:
        d["label"] = {
            "base": peak.label.base,
            "m": peak.label.m,
            "n": peak.label.n,
            "kind": peak.label.kind,
        }
    return d
