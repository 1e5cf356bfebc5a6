"""Labelled synthetic theka renderings used as ground truth for testing.

Every pulse of the theka becomes a decaying tone burst: bols with a bayan
component ring at 130 Hz (inside the bayan band), dayan-only bols at 600 Hz,
rests as quieter 600 Hz bursts standing in for the vocal or accompaniment
emphasis that usually fills them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .audio_io import CANONICAL_RATE, AudioClip, write_wav
from .errors import InvalidSpec
from .grammar import Theka

BAYAN_HZ = 130.0
DAYAN_HZ = 600.0
DECAY_S = 0.08
STRESSED_AMP = 1.0
UNSTRESSED_AMP = 0.55
REST_AMP = 0.4
MASTER_GAIN = 0.5
LEAD_IN_S = 0.25
TAIL_S = 0.5


@dataclass(frozen=True)
class SynthSpec:
    theka: Theka
    tempo_bpm: float
    n_avarts: int
    timing_jitter_s: float = 0.0
    amplitude_jitter: float = 0.0
    noise_floor: float = 0.0
    optional_stress_probability: float = 0.0
    seed: int = 0
    sample_rate_hz: int = CANONICAL_RATE

    def validate(self) -> None:
        if not self.tempo_bpm > 0:
            raise InvalidSpec(f"tempo must be positive, got {self.tempo_bpm}")
        if self.n_avarts < 1:
            raise InvalidSpec(f"need at least one avart, got {self.n_avarts}")
        if self.timing_jitter_s < 0:
            raise InvalidSpec("timing jitter must be non-negative")
        if not 60.0 / self.tempo_bpm > 2 * self.timing_jitter_s:
            raise InvalidSpec(
                f"timing jitter {self.timing_jitter_s} s could reorder strokes at {self.tempo_bpm} BPM")
        if not 0.0 <= self.amplitude_jitter < 1.0:
            raise InvalidSpec("amplitude jitter must lie in [0, 1)")
        if not 0.0 <= self.noise_floor < 1.0:
            raise InvalidSpec("noise floor must lie in [0, 1)")
        if not 0.0 <= self.optional_stress_probability <= 1.0:
            raise InvalidSpec("optional stress probability must lie in [0, 1]")
        if self.sample_rate_hz <= 0:
            raise InvalidSpec("sample rate must be positive")


@dataclass(frozen=True)
class GroundTruth:
    tala_name: str
    tempo_bpm: float
    stroke_times_s: tuple[float, ...]
    bols: tuple[str, ...]
    stressed_positions: tuple[int, ...]  # indices into stroke_times_s
    pulses_per_avart: int = 0
    seed: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def stressed_times_s(self) -> tuple[float, ...]:
        return tuple(self.stroke_times_s[i] for i in self.stressed_positions)

    def to_dict(self) -> dict:
        return {
            "tala_name": self.tala_name,
            "tempo_bpm": self.tempo_bpm,
            "pulses_per_avart": self.pulses_per_avart,
            "seed": self.seed,
            "stroke_times_s": list(self.stroke_times_s),
            "bols": list(self.bols),
            "stressed_positions": list(self.stressed_positions),
            **self.extra,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroundTruth":
        known = {"tala_name", "tempo_bpm", "pulses_per_avart", "seed",
                 "stroke_times_s", "bols", "stressed_positions"}
        return cls(d["tala_name"], float(d["tempo_bpm"]), tuple(d["stroke_times_s"]),
                   tuple(d["bols"]), tuple(d["stressed_positions"]),
                   int(d.get("pulses_per_avart", 0)), int(d.get("seed", 0)),
                   {k: v for k, v in d.items() if k not in known})


def _burst(freq_hz: float, rate: int) -> np.ndarray:
    t = np.arange(int(round(6 * DECAY_S * rate))) / rate
    return np.sin(2 * np.pi * freq_hz * t) * np.exp(-t / DECAY_S)


def synthesize(spec: SynthSpec) -> tuple[AudioClip, GroundTruth]:
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    theka = spec.theka
    p = theka.pulses_per_avart
    rate = spec.sample_rate_hz
    period = 60.0 / spec.tempo_bpm
    n = spec.n_avarts * p

    offsets = rng.uniform(-spec.timing_jitter_s, spec.timing_jitter_s, n) \
        if spec.timing_jitter_s > 0 else np.zeros(n)
    gains = 1.0 + rng.uniform(-spec.amplitude_jitter, spec.amplitude_jitter, n) \
        if spec.amplitude_jitter > 0 else np.ones(n)
    optional = set(theka.optional_positions)
    extra_stress = rng.random(n) < spec.optional_stress_probability

    times = LEAD_IN_S + np.arange(n) * period + offsets
    bayan_burst = _burst(BAYAN_HZ, rate)
    dayan_burst = _burst(DAYAN_HZ, rate)
    out = np.zeros(int(np.ceil((times[-1] + TAIL_S + 6 * DECAY_S) * rate)) + 1)

    stressed = []
    for k in range(n):
        bol = theka.bols[k % p]
        is_stressed = bol.mandatory_stressed or (k % p in optional and extra_stress[k])
        if is_stressed:
            stressed.append(k)
        if bol.is_rest:
            amp, burst = REST_AMP, dayan_burst
        else:
            amp = STRESSED_AMP if is_stressed else UNSTRESSED_AMP
            burst = bayan_burst if bol.has_bayan else dayan_burst
        start = int(round(times[k] * rate))
        out[start:start + len(burst)] += MASTER_GAIN * amp * gains[k] * burst

    if spec.noise_floor > 0:
        out += rng.normal(0.0, spec.noise_floor, len(out))
    clip = AudioClip(np.clip(out, -1.0, 1.0), rate)
    truth = GroundTruth(theka.tala_name, float(spec.tempo_bpm), tuple(float(t) for t in times),
                        tuple(theka.bols[k % p].name for k in range(n)), tuple(stressed), p, spec.seed)
    return clip, truth


def avarts_for_duration(theka: Theka, tempo_bpm: float, duration_s: float) -> int:
    """Number of whole cycles that fit (at least one) in ``duration_s``."""
    cycle_s = theka.pulses_per_avart * 60.0 / tempo_bpm
    return max(1, int((duration_s - LEAD_IN_S - TAIL_S) // cycle_s))


def write_clip(path, clip: AudioClip, truth: GroundTruth) -> Path:
    """Write ``path`` (16-bit WAV) and its ``.truth.json`` sidecar; return the sidecar path."""
    path = Path(path)
    write_wav(path, clip)
    sidecar = path.with_suffix(".truth.json")
    sidecar.write_text(json.dumps(truth.to_dict(), indent=2), encoding="utf-8")
    return sidecar
