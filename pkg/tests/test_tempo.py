import numpy as np
import pytest

from corpus import thekas
from taladetect.cooccurrence import DominantPattern, PulseCountSeries
from taladetect.envelope import PeakSignal
from taladetect.errors import NoMatchingPairs
from taladetect.pipeline import detect
from taladetect.strokes import BayanStrokeSignal
from taladetect.synth import SynthSpec, synthesize
from taladetect.tempo import TempoEstimate, estimate_tempo


def _bayan(times):
    ps = PeakSignal.from_arrays(times, np.ones(len(times)))
    return BayanStrokeSignal(ps.peaks, 1.0, 0.0, 1.0)


def test_hand_arithmetic_240():
    est = estimate_tempo(_bayan([0.0, 1.5, 3.0]), PulseCountSeries((6, 6)), DominantPattern(6, 6, 1))
    assert (est.bayan_dur_s, est.count_pulse, est.n) == (3.0, 12, 1)
    assert est.pulse_dur_s == pytest.approx(0.25)
    assert est.bpm == pytest.approx(240.0)


def test_hand_arithmetic_360():
    est = estimate_tempo(_bayan([0.0, 1.0, 2.0]), PulseCountSeries((6, 6)), DominantPattern(6, 6, 1))
    assert est.bpm == pytest.approx(360.0)


def test_overlapping_matches_and_matra_rate():
    # counts 4,10,4 -> (4,10) once; intervals 1.0 and 2.5 s
    est = estimate_tempo(_bayan([0.0, 1.0, 3.5, 4.5]), PulseCountSeries((4, 10, 4)),
                         DominantPattern(4, 10, 1), matras_per_pulse=0.5)
    assert est.count_pulse == 14
    assert est.bpm == pytest.approx(60 * 14 / 3.5)
    assert est.matras_per_minute == pytest.approx(est.bpm / 2)


def test_no_match():
    with pytest.raises(NoMatchingPairs):
        estimate_tempo(_bayan([0, 1, 2]), PulseCountSeries((6, 6)), DominantPattern(8, 8, 1))


def test_length_mismatch():
    with pytest.raises(ValueError):
        estimate_tempo(_bayan([0, 1, 2, 3]), PulseCountSeries((6, 6)), DominantPattern(6, 6, 1))


def test_synth_kaharba_300():
    clip, _ = synthesize(SynthSpec(thekas()["kaharba"], 300.0, 16, seed=3))
    assert detect(clip).tempo.bpm == pytest.approx(300.0, rel=0.05)


def test_dict_roundtrip():
    est = TempoEstimate(240.0, 3.0, 12, 0.25, 1, 120.0)
    assert TempoEstimate.from_dict(est.to_dict()) == est
