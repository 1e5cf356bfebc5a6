"""End-to-end tala and tempo detection with a JSON-serializable report."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .audio_io import AudioClip, canonicalize
from .cooccurrence import (ALIGN_TOLERANCE_S, CooccurrenceMatrix, DominantPattern,
                           build_matrix, count_pulses, dominant_pattern)
from .envelope import DEFAULT_DF, compute_envelope, pick_peaks
from .errors import ClipTooShort, TalaError
from .filterbank import BAYAN_BAND_HZ, extract_bayan_band
from .grammar import (NONE_DETECTION, TalaDetection, Theka, classify, default_grammars,
                      load_thekas)
from .strokes import DEFAULT_WINDOW_S, refine, refine_strokes, threshold_bayan_peaks
from .tempo import TempoEstimate, estimate_tempo

SCHEMA_VERSION = 1
MIN_DETECT_S = 5.0


@dataclass
class DetectConfig:
    d_f: float = DEFAULT_DF
    window_s: float = DEFAULT_WINDOW_S
    band_hz: tuple[float, float] = BAYAN_BAND_HZ
    align_tolerance_s: float = ALIGN_TOLERANCE_S
    theka_path: str | None = None
    thekas: list[Theka] | None = None

    def resolved_thekas(self) -> list[Theka]:
        if self.thekas is None:
            self.thekas = load_thekas(self.theka_path)
        return self.thekas


@dataclass
class AnalysisReport:
    input_path: str | None = None
    detection: TalaDetection = NONE_DETECTION
    tempo: TempoEstimate | None = None
    matrix: CooccurrenceMatrix | None = None
    dominant: DominantPattern | None = None
    pulse_counts: list[int] = field(default_factory=list)
    bayan_stroke_times: list[float] = field(default_factory=list)
    peak_times: list[float] = field(default_factory=list)
    bayan_threshold: dict | None = None
    warnings: list[str] = field(default_factory=list)
    error: dict | None = None
    timings: dict[str, float] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "input_path": self.input_path,
            "detection": self.detection.to_dict(),
            "tempo": self.tempo.to_dict() if self.tempo else None,
            "matrix": self.matrix.to_json() if self.matrix is not None else None,
            "dominant": ({"pcmax_1": self.dominant.pcmax_1, "pcmax_2": self.dominant.pcmax_2,
                          "occurrences": self.dominant.occurrences} if self.dominant else None),
            "pulse_counts": list(self.pulse_counts),
            "bayan_stroke_times": list(self.bayan_stroke_times),
            "peak_times": list(self.peak_times),
            "bayan_threshold": self.bayan_threshold,
            "warnings": list(self.warnings),
            "error": self.error,
            "timings": dict(self.timings),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisReport":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
        dom = d.get("dominant")
        return cls(
            input_path=d.get("input_path"),
            detection=TalaDetection.from_dict(d["detection"]),
            tempo=TempoEstimate.from_dict(d["tempo"]) if d.get("tempo") else None,
            matrix=CooccurrenceMatrix.from_json(d["matrix"]) if d.get("matrix") is not None else None,
            dominant=DominantPattern(dom["pcmax_1"], dom["pcmax_2"], dom["occurrences"]) if dom else None,
            pulse_counts=list(d.get("pulse_counts", [])),
            bayan_stroke_times=list(d.get("bayan_stroke_times", [])),
            peak_times=list(d.get("peak_times", [])),
            bayan_threshold=d.get("bayan_threshold"),
            warnings=list(d.get("warnings", [])),
            error=d.get("error"),
            timings=dict(d.get("timings", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


class _Stopwatch:
    def __init__(self, timings):
        self.timings = timings
        self.t = time.perf_counter()

    def lap(self, name):
        now = time.perf_counter()
        self.timings[name] = now - self.t
        self.t = now


def detect(clip: AudioClip, config: DetectConfig | None = None,
           input_path: str | None = None) -> AnalysisReport:
    """Run the full chain on ``clip``. Stage failures come back as a NONE report, never raise."""
    config = config or DetectConfig()
    report = AnalysisReport(input_path=input_path)
    try:
        _run(clip, config, report)
    except TalaError as exc:
        report.detection = NONE_DETECTION
        report.error = {"type": type(exc).__name__, "message": str(exc)}
        report.warnings.append(f"{type(exc).__name__}: {exc}")
    return report


def _run(clip: AudioClip, config: DetectConfig, report: AnalysisReport) -> None:
    sw = _Stopwatch(report.timings)
    if clip.duration_s < MIN_DETECT_S:
        raise ClipTooShort(f"clip is {clip.duration_s:.2f} s, detection needs {MIN_DETECT_S} s")
    clip = canonicalize(clip)
    sw.lap("canonicalize")

    band = extract_bayan_band(clip, config.band_hz)
    sw.lap("bayan_band")
    band_env = compute_envelope(band)
    full_env = compute_envelope(clip)
    sw.lap("envelopes")
    band_peaks = pick_peaks(band_env, config.d_f)
    full_peaks = pick_peaks(full_env, config.d_f)
    sw.lap("peaks")

    bayan = threshold_bayan_peaks(band_peaks)
    report.bayan_threshold = {"mu_bp": bayan.mu_bp, "sigma_bp": bayan.sigma_bp,
                              "threshold": bayan.threshold, "fallback_used": bayan.fallback_used}
    if bayan.fallback_used:
        report.warnings.append("bayan threshold relaxed to the mean (fewer than 3 strokes above mean+std)")
    bayan = refine_strokes(bayan, config.window_s)
    peaks = refine(full_peaks, config.window_s)
    report.bayan_stroke_times = bayan.times.tolist()
    report.peak_times = peaks.times.tolist()
    sw.lap("refine")

    series = count_pulses(peaks, bayan, config.align_tolerance_s)
    report.pulse_counts = list(series.counts)
    if series.clamped:
        report.warnings.append(f"{len(series.clamped)} pulse counts clamped to [1, 16]")
    matrix = build_matrix(series)
    dominant = dominant_pattern(matrix)
    report.matrix, report.dominant = matrix, dominant
    sw.lap("cooccurrence")

    thekas = config.resolved_thekas()
    detection = classify(dominant, default_grammars(thekas), matrix)
    report.detection = detection
    ratio = None
    if detection.tala_name is not None:
        ratio = next(t.matras_per_pulse for t in thekas if t.tala_name == detection.tala_name)
    report.tempo = estimate_tempo(bayan, series, dominant, ratio)
    sw.lap("classify_tempo")
