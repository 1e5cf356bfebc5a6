"""WAV decoding, mono mixdown and sample-rate canonicalization."""
from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import UnreadableFile, UnsupportedEncoding

CANONICAL_RATE = 44100

_PCM = 0x0001
_IEEE_FLOAT = 0x0003
_EXTENSIBLE = 0xFFFE


@dataclass(frozen=True, eq=False)
class AudioClip:
    """Mono waveform in [-1, 1] together with its sample rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValueError(f"sample rate must be positive, got {self.sample_rate_hz}")
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("AudioClip holds mono samples only")
        object.__setattr__(self, "samples", samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz

    def __len__(self):
        return len(self.samples)


def _probe_format(path: Path) -> tuple[int, int, int]:
    """Return (format_tag, channels, bits_per_sample) from the RIFF fmt chunk."""
    with open(path, "rb") as fh:
        head = fh.read(12)
        if len(head) < 12 or head[:4] not in (b"RIFF", b"RIFX") or head[8:12] != b"WAVE":
            raise UnreadableFile(f"{path}: not a RIFF/WAVE file")
        endian = "<" if head[:4] == b"RIFF" else ">"
        while True:
            chunk = fh.read(8)
            if len(chunk) < 8:
                raise UnreadableFile(f"{path}: no fmt chunk")
            cid, size = chunk[:4], struct.unpack(endian + "I", chunk[4:])[0]
            if cid != b"fmt ":
                fh.seek(size + (size & 1), 1)
                continue
            body = fh.read(size)
            if len(body) < 16:
                raise UnreadableFile(f"{path}: truncated fmt chunk")
            tag, channels, _, _, _, bits = struct.unpack(endian + "HHIIHH", body[:16])
            if tag == _EXTENSIBLE and len(body) >= 26:
                tag = struct.unpack(endian + "H", body[24:26])[0]
            return tag, channels, bits


def _to_unit_float(data: np.ndarray) -> np.ndarray:
    if data.dtype == np.uint8:
        out = (data.astype(np.float64) - 128.0) / 128.0
    elif np.issubdtype(data.dtype, np.integer):
        # scipy left-justifies 24-bit samples into int32, so full-scale is the container's
        out = data.astype(np.float64) / float(-np.iinfo(data.dtype).min)
    else:
        out = data.astype(np.float64)
        out[~np.isfinite(out)] = 0.0
    return np.clip(out, -1.0, 1.0)


def load_clip(path) -> AudioClip:
    """Decode a PCM or IEEE-float WAV file into a mono :class:`AudioClip`.

    Stereo input is averaged to mono. Integer samples are scaled to [-1, 1];
    float samples are clipped to that range and non-finite values zeroed.
    """
    path = Path(path)
    if not path.is_file():
        raise UnreadableFile(f"{path}: no such file")
    tag, channels, bits = _probe_format(path)
    if tag not in (_PCM, _IEEE_FLOAT):
        raise UnsupportedEncoding(f"{path}: compressed WAV (format tag 0x{tag:04x})")
    if channels not in (1, 2):
        raise UnsupportedEncoding(f"{path}: {channels} channels (mono or stereo only)")
    if tag == _PCM and bits not in (8, 16, 24, 32):
        raise UnsupportedEncoding(f"{path}: {bits}-bit PCM")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            rate, data = wavfile.read(path)
    except (ValueError, OSError, struct.error) as exc:
        raise UnreadableFile(f"{path}: {exc}") from exc

    samples = _to_unit_float(np.asarray(data))
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    if samples.size == 0:
        raise UnreadableFile(f"{path}: no audio frames")
    return AudioClip(samples, int(rate))


def write_wav(path, clip: AudioClip) -> None:
    """Write ``clip`` as 16-bit PCM mono."""
    pcm = np.round(np.clip(clip.samples, -1.0, 1.0) * 32767.0).astype(np.int16)
    wavfile.write(path, clip.sample_rate_hz, pcm)


def resample(clip: AudioClip, target_rate_hz: int) -> AudioClip:
    """Linear-interpolation resampling; returns ``clip`` itself when rates match."""
    if target_rate_hz <= 0:
        raise ValueError(f"target rate must be positive, got {target_rate_hz}")
    if target_rate_hz == clip.sample_rate_hz:
        return clip
    n_in = len(clip.samples)
    n_out = max(1, int(round(n_in * target_rate_hz / clip.sample_rate_hz)))
    src_t = np.arange(n_in) / clip.sample_rate_hz
    dst_t = np.arange(n_out) / target_rate_hz
    return AudioClip(np.interp(dst_t, src_t, clip.samples), int(target_rate_hz))


def canonicalize(clip: AudioClip) -> AudioClip:
    return resample(clip, CANONICAL_RATE)
