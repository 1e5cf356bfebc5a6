"""Tala and tempo detection from bayan strokes in polyphonic recordings."""
from .audio_io import AudioClip, canonicalize, load_clip, resample, write_wav
from .cooccurrence import (CooccurrenceMatrix, DominantPattern, PulseCountSeries, build_matrix,
                           count_pulses, dominant_pattern)
from .envelope import Envelope, EnvelopePeak, PeakSignal, compute_envelope, pick_peaks
from .errors import TalaError
from .filterbank import ErbBank, design_erb_bank, extract_bayan_band
from .grammar import (PulsePattern, TalaDetection, Theka, basic_patterns, builtin_thekas, classify,
                      default_grammars, extended_patterns, load_thekas)
from .pipeline import AnalysisReport, DetectConfig, detect
from .strokes import BayanStrokeSignal, refine, refine_strokes, threshold_bayan_peaks
from .synth import GroundTruth, SynthSpec, synthesize, write_clip
from .tempo import TempoEstimate, estimate_tempo

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "AudioClip", "BayanStrokeSignal", "CooccurrenceMatrix", "DetectConfig",
    "DominantPattern", "Envelope", "EnvelopePeak", "ErbBank", "GroundTruth", "PeakSignal",
    "PulseCountSeries", "PulsePattern", "SynthSpec", "TalaDetection", "TalaError", "TempoEstimate",
    "Theka", "basic_patterns", "build_matrix", "builtin_thekas", "canonicalize", "classify",
    "compute_envelope", "count_pulses", "default_grammars", "design_erb_bank", "detect",
    "dominant_pattern", "estimate_tempo", "extended_patterns", "extract_bayan_band", "load_clip",
    "load_thekas", "pick_peaks", "refine", "refine_strokes", "resample", "synthesize",
    "threshold_bayan_peaks", "write_clip", "write_wav",
]
