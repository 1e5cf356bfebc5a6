"""ERB-spaced filterbank design and bayan-band extraction.

Centers are spaced uniformly on the Glasberg-Moore ERB-rate scale
``E(f) = 21.4 * log10(0.00437 f + 1)``. The grid holds ``n_bands + 2`` points
from 0 Hz to Nyquist; the interior points are band centers and each band
spans its two neighbours, the usual overlapping-triangle layout. At 44100 Hz
with 20 bands this puts band 2 at ~125 Hz spanning ~56-211 Hz, which is the
bass-drum region the bayan occupies.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal

from .audio_io import CANONICAL_RATE, AudioClip
from .errors import InvalidBankSpec, WrongSampleRate

BAYAN_BAND_HZ = (60.0, 200.0)
DEFAULT_N_BANDS = 20
BAYAN_BAND_INDEX = 2  # 1-based, as bands are usually counted


def erb_rate(f_hz):
    return 21.4 * np.log10(0.00437 * np.asarray(f_hz, dtype=float) + 1.0)


def inverse_erb_rate(e):
    return (10.0 ** (np.asarray(e, dtype=float) / 21.4) - 1.0) / 0.00437


@dataclass(frozen=True)
class ErbBank:
    n_bands: int
    sample_rate_hz: int
    center_frequencies_hz: tuple[float, ...]
    band_edges_hz: tuple[tuple[float, float], ...]

    def band(self, index: int) -> tuple[float, float, float]:
        """(low, center, high) of the 1-based band ``index``."""
        lo, hi = self.band_edges_hz[index - 1]
        return lo, self.center_frequencies_hz[index - 1], hi


def design_erb_bank(n_bands: int = DEFAULT_N_BANDS,
                    sample_rate_hz: int = CANONICAL_RATE) -> ErbBank:
    if n_bands < 2:
        raise InvalidBankSpec(f"need at least 2 bands, got {n_bands}")
    if sample_rate_hz < 8000:
        raise InvalidBankSpec(f"sample rate {sample_rate_hz} Hz below 8000 Hz")
    grid = inverse_erb_rate(np.linspace(0.0, erb_rate(sample_rate_hz / 2.0), n_bands + 2))
    centers = tuple(float(f) for f in grid[1:-1])
    edges = tuple((float(grid[k]), float(grid[k + 2])) for k in range(n_bands))
    return ErbBank(n_bands, int(sample_rate_hz), centers, edges)


def bandpass_sos(low_hz: float, high_hz: float, sample_rate_hz: int) -> np.ndarray:
    """4th-order Butterworth band-pass as two second-order sections."""
    return signal.butter(2, [low_hz, high_hz], btype="bandpass", fs=sample_rate_hz, output="sos")


def extract_bayan_band(clip: AudioClip, band_hz: tuple[float, float] = BAYAN_BAND_HZ) -> AudioClip:
    """Zero-phase band-pass of ``clip`` over the bayan band (60-200 Hz by default).

    Forward-backward filtering doubles the attenuation and keeps stroke onsets
    where they are in the unfiltered signal.
    """
    if clip.sample_rate_hz != CANONICAL_RATE:
        raise WrongSampleRate(f"expected {CANONICAL_RATE} Hz, got {clip.sample_rate_hz} Hz")
    sos = bandpass_sos(band_hz[0], band_hz[1], clip.sample_rate_hz)
    x = clip.samples
    padlen = min(3 * 2 * len(sos) + 1, len(x) - 1)
    if padlen < 1 or not np.any(x):
        return AudioClip(np.zeros_like(x), clip.sample_rate_hz)
    return AudioClip(signal.sosfiltfilt(sos, x, padlen=padlen), clip.sample_rate_hz)


def magnitude_response_db(freqs_hz, band_hz=BAYAN_BAND_HZ, sample_rate_hz=CANONICAL_RATE):
    """Gain of the forward-backward band filter at ``freqs_hz`` (squared single-pass gain)."""
    sos = bandpass_sos(band_hz[0], band_hz[1], sample_rate_hz)
    _, h = signal.sosfreqz(sos, worN=np.atleast_1d(np.asarray(freqs_hz, float)), fs=sample_rate_hz)
    return 20.0 * np.log10(np.abs(h) ** 2 + 1e-300)
