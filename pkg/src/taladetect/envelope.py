"""Differential amplitude envelope and contrast-based peak picking."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .audio_io import AudioClip
from .errors import ClipTooShort

FRAME_RATE_HZ = 200.0
SMOOTHING_CUTOFF_HZ = 10.0
DEFAULT_DF = 0.01
MIN_CLIP_S = 0.5


@dataclass(frozen=True, eq=False)
class Envelope:
    values: np.ndarray
    frame_rate_hz: float
    source_duration_s: float

    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) / self.frame_rate_hz


@dataclass(frozen=True)
class EnvelopePeak:
    time_s: float
    amplitude: float


@dataclass(frozen=True)
class PeakSignal:
    peaks: tuple[EnvelopePeak, ...] = ()
    l_max: float = 0.0
    d_f: float = DEFAULT_DF

    @property
    def times(self) -> np.ndarray:
        return np.array([p.time_s for p in self.peaks], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([p.amplitude for p in self.peaks], dtype=float)

    def __len__(self):
        return len(self.peaks)

    @classmethod
    def from_arrays(cls, times, amplitudes, l_max=None, d_f=DEFAULT_DF) -> "PeakSignal":
        times = np.asarray(times, dtype=float)
        amps = np.asarray(amplitudes, dtype=float)
        order = np.argsort(times, kind="stable")
        peaks = tuple(EnvelopePeak(float(times[i]), float(amps[i])) for i in order)
        if l_max is None:
            l_max = float(amps.max()) if amps.size else 0.0
        return cls(peaks, float(l_max), float(d_f))


def compute_envelope(clip: AudioClip, frame_rate_hz: float = FRAME_RATE_HZ,
                     cutoff_hz: float = SMOOTHING_CUTOFF_HZ) -> Envelope:
    """Rectify, smooth, decimate, differentiate and half-wave rectify.

    The smoothing low-pass is causal, so the envelope rises right at a stroke
    onset and its first difference peaks within a frame or two of it.
    """
    if clip.duration_s < MIN_CLIP_S:
        raise ClipTooShort(f"clip is {clip.duration_s:.3f} s, need at least {MIN_CLIP_S} s")
    rate = clip.sample_rate_hz
    sos = signal.butter(2, cutoff_hz, btype="lowpass", fs=rate, output="sos")
    rect = np.abs(clip.samples)
    # start settled on the first sample so a clip entering mid-sound shows no onset
    smooth, _ = signal.sosfilt(sos, rect, zi=signal.sosfilt_zi(sos) * rect[0])

    n_frames = int(np.floor(clip.duration_s * frame_rate_hz))
    frame_t = np.arange(n_frames) / frame_rate_hz
    decimated = np.interp(frame_t, np.arange(len(smooth)) / rate, smooth)

    diff = np.diff(decimated, prepend=decimated[:1])
    return Envelope(np.maximum(diff, 0.0), float(frame_rate_hz), clip.duration_s)


def _contrast_peaks(x: np.ndarray, delta: float) -> list[int]:
    """Hysteresis scan: a maximum counts once the signal has climbed more than
    ``delta`` above the preceding minimum and then dropped more than ``delta``
    below it. The envelope floor (0) stands in for the minima beyond both ends.
    """
    found = []
    looking_for_max = False
    lo = 0.0
    hi, hi_at = -np.inf, -1
    for i, v in enumerate(x):
        if looking_for_max:
            if v > hi:
                hi, hi_at = v, i
            elif hi - v > delta:
                found.append(hi_at)
                looking_for_max = False
                lo = v
        else:
            if v < lo:
                lo = v
            elif v - lo > delta:
                looking_for_max = True
                hi, hi_at = v, i
    if looking_for_max and hi > delta:
        found.append(hi_at)
    return found


def pick_peaks(env: Envelope, d_f: float = DEFAULT_DF) -> PeakSignal:
    """Envelope maxima standing more than ``d_f * l_max`` above the minima on both sides."""
    if not 0.0 <= d_f <= 1.0:
        raise ValueError(f"d_f must lie in [0, 1], got {d_f}")
    x = np.asarray(env.values, dtype=float)
    l_max = float(x.max()) if x.size else 0.0
    if l_max <= 0.0:
        return PeakSignal((), 0.0, d_f)
    idx = _contrast_peaks(x.tolist(), d_f * l_max)
    return PeakSignal(
        tuple(EnvelopePeak(i / env.frame_rate_hz, float(x[i])) for i in idx), l_max, d_f)
