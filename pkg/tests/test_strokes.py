import numpy as np
import pytest

from taladetect.envelope import PeakSignal
from taladetect.errors import EmptyPeakSet
from taladetect.strokes import BayanStrokeSignal, refine, refine_strokes, threshold_bayan_peaks


def _peaks(times, amps):
    return PeakSignal.from_arrays(times, amps)


def test_threshold_hand_arithmetic():
    out = threshold_bayan_peaks(_peaks([0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
                                       [1.0, 1.0, 1.0, 5.0, 5.0, 5.0 + 1e-3]))
    assert len(out) == 3


def test_threshold_single_loud_peak_uses_fallback():
    out = threshold_bayan_peaks(_peaks([0.0, 1.0, 2.0, 3.0], [1.0, 1.0, 1.0, 5.0]))
    assert out.mu_bp == pytest.approx(2.0)
    assert out.sigma_bp == pytest.approx(np.sqrt(3.0))
    assert out.threshold == pytest.approx(2.0)
    # strict mean+std keeps only the 5.0 peak, too few, so the mean is used
    assert out.fallback_used
    np.testing.assert_array_equal(out.amplitudes, [5.0])


def test_threshold_strict_rule_without_fallback():
    amps = [1.0] * 9 + [5.0] * 3
    out = threshold_bayan_peaks(_peaks(np.arange(12.0), amps))
    mu, sd = np.mean(amps), np.std(amps)
    assert out.threshold == pytest.approx(mu + sd)
    assert not out.fallback_used
    np.testing.assert_array_equal(out.times, [9.0, 10.0, 11.0])


def test_equal_amplitudes_fallback_keeps_all():
    out = threshold_bayan_peaks(_peaks([0.0, 1.0, 2.0], [0.3, 0.3, 0.3]))
    assert out.sigma_bp == 0.0
    assert out.fallback_used
    assert len(out) == 3


def test_singleton_fallback():
    out = threshold_bayan_peaks(_peaks([0.5], [0.2]))
    assert out.fallback_used and len(out) == 1


def test_empty_candidates():
    with pytest.raises(EmptyPeakSet):
        threshold_bayan_peaks(PeakSignal())


def test_refine_keeps_window_max():
    out = refine(_peaks([0.02, 0.07], [0.3, 0.9]))
    np.testing.assert_array_equal(out.times, [0.07])


def test_refine_identity_when_spread():
    ps = _peaks([0.05, 0.2, 0.35, 1.0], [0.1, 0.5, 0.2, 0.9])
    out = refine(ps)
    assert out.peaks == ps.peaks


def test_refine_empty():
    assert len(refine(PeakSignal())) == 0


def test_refine_cross_boundary_pair():
    # 0.09 and 0.11 fall in different slots but are only 20 ms apart
    out = refine(_peaks([0.09, 0.11, 0.5], [0.4, 0.6, 0.1]))
    np.testing.assert_allclose(out.times, [0.11, 0.5])


def test_refine_window_validation():
    with pytest.raises(ValueError):
        refine(_peaks([0.1], [1.0]), 0.0)


def test_refine_strokes_keeps_statistics():
    b = BayanStrokeSignal(_peaks([0.0, 0.05, 1.0], [0.5, 0.7, 0.6]).peaks, 0.1, 0.2, 0.3, True)
    out = refine_strokes(b)
    np.testing.assert_array_equal(out.times, [0.05, 1.0])
    assert (out.mu_bp, out.sigma_bp, out.threshold, out.fallback_used) == (0.1, 0.2, 0.3, True)
