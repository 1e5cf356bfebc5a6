"""Tempo from the durations of bayan intervals that carry the dominant pulse pair."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .cooccurrence import DominantPattern, PulseCountSeries
from .errors import NoMatchingPairs
from .strokes import BayanStrokeSignal


@dataclass(frozen=True)
class TempoEstimate:
    bpm: float  # pulses per minute
    bayan_dur_s: float
    count_pulse: int
    pulse_dur_s: float
    n: int
    matras_per_minute: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TempoEstimate":
        return cls(**d)


def estimate_tempo(bayan: BayanStrokeSignal, series: PulseCountSeries,
                   dominant: DominantPattern, matras_per_pulse: float | None = None) -> TempoEstimate:
    """Average pulse duration over every consecutive interval pair matching the dominant pair.

    Overlapping matches each contribute both of their intervals, so a shared
    interval is summed twice; ``count_pulse`` counts it twice as well.
    """
    durations = np.diff(bayan.times)
    pc = np.asarray(series.counts)
    if len(durations) != len(pc):
        raise ValueError("series and bayan strokes come from different clips")
    hit = (pc[:-1] == dominant.pcmax_1) & (pc[1:] == dominant.pcmax_2)
    n = int(hit.sum())
    if n == 0:
        raise NoMatchingPairs(f"pair {dominant.pair} never occurs in the series")
    bayan_dur = float(durations[:-1][hit].sum() + durations[1:][hit].sum())
    count_pulse = n * (dominant.pcmax_1 + dominant.pcmax_2)
    pulse_dur = bayan_dur / count_pulse
    bpm = 60.0 / pulse_dur
    mpm = bpm * matras_per_pulse if matras_per_pulse is not None else None
    return TempoEstimate(bpm, bayan_dur, count_pulse, pulse_dur, n, mpm)
