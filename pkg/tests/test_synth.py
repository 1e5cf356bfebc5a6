import json

import numpy as np
import pytest

from corpus import thekas
from taladetect.audio_io import load_clip
from taladetect.errors import InvalidSpec
from taladetect.filterbank import extract_bayan_band
from taladetect.synth import (LEAD_IN_S, GroundTruth, SynthSpec, avarts_for_duration, synthesize,
                              write_clip)


def test_dadra_240_eight_avarts():
    clip, truth = synthesize(SynthSpec(thekas()["dadra"], 240.0, 8))
    assert len(truth.stroke_times_s) == 48
    np.testing.assert_allclose(np.diff(truth.stroke_times_s), 0.25)
    assert truth.stressed_positions == tuple(range(0, 48, 6))
    assert truth.bols[:6] == ("dha", "dhi", "na", "na", "ti", "na")

    # bayan-band energy right after each stroke: high on pulses 1 and 2 only
    band = extract_bayan_band(clip).samples
    win = int(0.05 * 44100)
    energy = np.array([np.sum(band[int(t * 44100):int(t * 44100) + win] ** 2)
                       for t in truth.stroke_times_s]).reshape(8, 6)
    assert np.all(energy[:, :2].min(axis=1) > 10 * energy[:, 2:].max(axis=1))


def test_one_avart():
    for t in thekas().values():
        _, truth = synthesize(SynthSpec(t, 300.0, 1))
        assert len(truth.stroke_times_s) == t.pulses_per_avart


def test_deterministic():
    spec = SynthSpec(thekas()["rupak"], 300.0, 4, 0.01, 0.15, 0.05, 0.3, seed=11)
    a, ta = synthesize(spec)
    b, tb = synthesize(spec)
    assert np.array_equal(a.samples, b.samples) and ta == tb
    c, _ = synthesize(SynthSpec(thekas()["rupak"], 300.0, 4, 0.01, 0.15, 0.05, 0.3, seed=12))
    assert not np.array_equal(a.samples, c.samples)


def test_optional_stress_recorded():
    _, truth = synthesize(SynthSpec(thekas()["kaharba"], 300.0, 50, optional_stress_probability=1.0))
    assert truth.stressed_positions == tuple(k for k in range(400) if k % 8 in (0, 1, 6))


def test_jitter_bounded():
    _, truth = synthesize(SynthSpec(thekas()["dadra"], 240.0, 4, timing_jitter_s=0.02, seed=1))
    grid = LEAD_IN_S + 0.25 * np.arange(24)
    assert np.max(np.abs(np.array(truth.stroke_times_s) - grid)) <= 0.02


@pytest.mark.parametrize("kw", [
    dict(tempo_bpm=0.0), dict(n_avarts=0), dict(timing_jitter_s=0.5),
    dict(amplitude_jitter=1.0), dict(noise_floor=-0.1), dict(optional_stress_probability=1.5),
])
def test_invalid_specs(kw):
    base = dict(theka=thekas()["dadra"], tempo_bpm=240.0, n_avarts=2)
    with pytest.raises(InvalidSpec):
        synthesize(SynthSpec(**{**base, **kw}))


def test_avarts_for_duration():
    k = thekas()["kaharba"]
    n = avarts_for_duration(k, 300.0, 60.0)
    assert n * 8 * 0.2 <= 60.0 - 0.75 < (n + 1) * 8 * 0.2


def test_write_clip(tmp_path):
    clip, truth = synthesize(SynthSpec(thekas()["dadra"], 240.0, 2))
    sidecar = write_clip(tmp_path / "d.wav", clip, truth)
    assert sidecar.name == "d.truth.json"
    assert GroundTruth.from_dict(json.loads(sidecar.read_text())) == truth
    assert load_clip(tmp_path / "d.wav").duration_s == pytest.approx(clip.duration_s)
