"""
From waveform to strokes
========================

A synthetic dadra cycle (dha dhi na | na ti na) at 240 pulses per minute.
Only ``dha`` is stressed, so the bayan-stroke signal should fire once every
six pulses while the full-band peak signal fires on every pulse.
"""

import numpy as np

from taladetect.envelope import compute_envelope, pick_peaks
from taladetect.filterbank import extract_bayan_band
from taladetect.grammar import builtin_thekas
from taladetect.strokes import refine, refine_strokes, threshold_bayan_peaks
from taladetect.synth import SynthSpec, synthesize

dadra = builtin_thekas()[0]
clip, truth = synthesize(SynthSpec(dadra, 240.0, n_avarts=6, noise_floor=0.02, seed=1))
print(f"{clip.duration_s:.2f} s, {len(truth.stroke_times_s)} strokes")

# %%
# Bayan candidates: every envelope peak of the low band, then keep those
# above mean + std of the candidate amplitudes.

band_peaks = pick_peaks(compute_envelope(extract_bayan_band(clip)))
bayan = refine_strokes(threshold_bayan_peaks(band_peaks))
print(f"{len(band_peaks)} candidates -> {len(bayan)} bayan strokes "
      f"(threshold {bayan.threshold:.4f})")
print("bayan stroke spacing (s):", np.round(np.diff(bayan.times), 3))

# %%
# The peak signal marks every pulse. Refinement keeps one peak per 0.1 s.

peaks = refine(pick_peaks(compute_envelope(clip)))
print(f"{len(peaks)} pulses, median spacing {np.median(np.diff(peaks.times)):.3f} s")
