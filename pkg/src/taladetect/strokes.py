"""Bayan-stroke selection (mean + std threshold) and 0.1 s window refinement."""
from __future__ import annotations

import bisect
from dataclasses import dataclass, replace

import numpy as np

from .envelope import EnvelopePeak, PeakSignal
from .errors import EmptyPeakSet

DEFAULT_WINDOW_S = 0.1
MIN_STROKES = 3
# absorbs float noise in time / window arithmetic (0.3 / 0.1 == 2.9999999999999996)
_EPS = 1e-9


@dataclass(frozen=True)
class BayanStrokeSignal:
    strokes: tuple[EnvelopePeak, ...]
    mu_bp: float
    sigma_bp: float
    threshold: float
    fallback_used: bool = False

    @property
    def times(self) -> np.ndarray:
        return np.array([p.time_s for p in self.strokes], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([p.amplitude for p in self.strokes], dtype=float)

    def __len__(self):
        return len(self.strokes)


def threshold_bayan_peaks(candidates: PeakSignal) -> BayanStrokeSignal:
    """Keep candidate peaks strictly above ``mean + std`` of all candidate amplitudes.

    Uses the population standard deviation. When fewer than three peaks pass
    (e.g. equal amplitudes, so std == 0) the threshold is relaxed to the mean
    and ``fallback_used`` is set; three strokes are the minimum for one pulse
    count pair downstream.
    """
    if len(candidates) == 0:
        raise EmptyPeakSet("no candidate peaks in the bayan band")
    amps = candidates.amplitudes
    mu = float(amps.mean())
    sigma = float(amps.std())
    threshold = mu + sigma
    keep = amps > threshold
    fallback = False
    if keep.sum() < MIN_STROKES:
        fallback = True
        # the float mean of equal values can land an ulp above all of them
        threshold = min(mu, float(amps.max()))
        keep = amps >= threshold
    strokes = tuple(p for p, k in zip(candidates.peaks, keep) if k)
    return BayanStrokeSignal(strokes, mu, sigma, threshold, fallback)


def refine(peaks: PeakSignal, window_s: float = DEFAULT_WINDOW_S) -> PeakSignal:
    """Keep the strongest peak of every fixed ``window_s`` slot of the time axis.

    Slots are anchored at t = 0. Two winners from adjacent slots can still sit
    closer than ``window_s`` across a slot boundary, so a second pass keeps
    the stronger of any such pair; the output is then spaced at least
    ``window_s`` apart.
    """
    if window_s <= 0:
        raise ValueError(f"window must be positive, got {window_s}")
    if len(peaks) == 0:
        return peaks
    best: dict[int, EnvelopePeak] = {}
    for p in peaks.peaks:
        slot = int(np.floor(p.time_s / window_s + _EPS))
        cur = best.get(slot)
        if cur is None or p.amplitude > cur.amplitude:
            best[slot] = p

    # strongest first; ties resolved towards the earlier peak
    kept_t: list[float] = []
    kept: dict[float, EnvelopePeak] = {}
    for p in sorted(best.values(), key=lambda q: (-q.amplitude, q.time_s)):
        i = bisect.bisect_left(kept_t, p.time_s)
        if i > 0 and p.time_s - kept_t[i - 1] < window_s - _EPS:
            continue
        if i < len(kept_t) and kept_t[i] - p.time_s < window_s - _EPS:
            continue
        kept_t.insert(i, p.time_s)
        kept[p.time_s] = p
    return replace(peaks, peaks=tuple(kept[t] for t in kept_t))


def refine_strokes(bayan: BayanStrokeSignal, window_s: float = DEFAULT_WINDOW_S) -> BayanStrokeSignal:
    refined = refine(PeakSignal(bayan.strokes), window_s)
    return replace(bayan, strokes=refined.peaks)
