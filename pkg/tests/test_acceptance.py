"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""
import csv
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from corpus import NOISY, corpus_specs, render, thekas
from taladetect.audio_io import AudioClip, canonicalize
from taladetect.cooccurrence import PulseCountSeries, build_matrix, dominant_pattern
from taladetect.envelope import PeakSignal, compute_envelope, pick_peaks
from taladetect.filterbank import extract_bayan_band
from taladetect.grammar import basic_patterns, classify, default_grammars, extended_patterns
from taladetect.pipeline import detect
from taladetect.strokes import refine, threshold_bayan_peaks
from taladetect.synth import SynthSpec, synthesize, write_clip

TALAS = ("dadra", "kaharba", "bhajani", "rupak")


@pytest.fixture
def report_line(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
    return emit


def _run_corpus(**noise):
    rows = []
    for spec in corpus_specs(per_tala=20, **noise):
        clip, truth = render(spec)
        rep = detect(clip)
        bpm = rep.tempo.bpm if rep.tempo else float("nan")
        rows.append((truth.tala_name, rep.detection.tala_name, rep.detection.candidates,
                     abs(bpm - truth.tempo_bpm) / truth.tempo_bpm))
    return rows


def test_criterion_1_clean_oracle(report_line):
    t0 = time.perf_counter()
    rows = _run_corpus()
    elapsed = time.perf_counter() - t0
    acc = {t: float(np.mean([p == t for tt, p, _, _ in rows if tt == t])) for t in TALAS}
    worst_tempo = max(r[3] for r in rows)
    ok = all(a == 1.0 for a in acc.values()) and worst_tempo <= 0.01 and elapsed < 60
    report_line(1, ok, f"accuracy {acc}, worst tempo error {worst_tempo:.4%}, {elapsed:.1f} s")
    assert all(a == 1.0 for a in acc.values()), acc
    assert worst_tempo <= 0.01
    assert elapsed < 60


def test_criterion_2_noisy_robustness(report_line):
    rows = _run_corpus(**NOISY)
    acc, half = {}, {}
    for t in TALAS:
        mine = [r for r in rows if r[0] == t]
        acc[t] = float(np.mean([p == t for _, p, _, _ in mine]))
        half[t] = float(np.mean([1.0 if p == t else 0.5 if t in c[:2] else 0.0 for _, p, c, _ in mine]))
    tempo_ok = np.mean([r[3] <= 0.05 for r in rows])
    ok = all(a >= 0.9 for a in acc.values()) and tempo_ok >= 0.9
    report_line(2, ok, f"accuracy {acc}, tempo within 5% on {tempo_ok:.1%}, top-2 half credit {half}")
    assert all(a >= 0.9 for a in acc.values()), acc
    assert tempo_ok >= 0.9


def test_criterion_3_grammar_oracle(report_line):
    th = thekas()
    expected = {
        "dadra": {(6, 6)},
        "kaharba": {(8, 8)},
        "rupak": {(4, 10), (10, 4), (14, 14)},
        "bhajani": {(3, 13), (13, 3), (16, 16)},
    }
    got = {t: set(basic_patterns(th[t]).pairs) for t in expected}
    dadra_ext = set(extended_patterns(th["dadra"]).pairs)
    ok = got == expected and {(1, 5), (5, 1)} <= dadra_ext
    report_line(3, ok, f"basic {got}, dadra extended {sorted(dadra_ext)}")
    assert got == expected
    assert {(1, 5), (5, 1)} <= dadra_ext


def test_criterion_4_cooccurrence_oracle(report_line):
    rng = np.random.default_rng(2024)
    bad = 0
    for _ in range(1000):
        counts = rng.integers(1, 17, int(rng.integers(2, 201))).tolist()
        m = build_matrix(PulseCountSeries(tuple(counts)))
        brute = np.zeros((16, 16), dtype=np.int64)
        for a, b in zip(counts, counts[1:]):
            brute[a - 1, b - 1] += 1
        if not np.array_equal(m.cells, brute) or m.total != len(counts) - 1:
            bad += 1
    report_line(4, bad == 0, f"{bad} mismatches in 1000 random series")
    assert bad == 0


def test_criterion_5_worked_example(report_line):
    # three (1,5), one (5,1) and ten (6,6); the glue pairs land in cells of their own
    counts = [1, 5, 9, 1, 5, 9, 1, 5, 1, 3] + [6] * 11
    m = build_matrix(PulseCountSeries(tuple(counts)))
    dom = dominant_pattern(m)
    det = classify(dom, default_grammars(list(thekas().values())))
    cells = (m[6, 6], m[1, 5], m[5, 1])
    ok = cells == (10, 3, 1) and dom.pair == (6, 6) and det.tala_name == "dadra"
    report_line(5, ok, f"cells (6,6),(1,5),(5,1) = {cells}, dominant {dom.pair}, tala {det.tala_name}")
    assert cells == (10, 3, 1)
    assert dom.pair == (6, 6)
    assert det.tala_name == "dadra"


def test_criterion_6_dsp_invariants(report_line):
    rng = np.random.default_rng(6)
    theka = thekas()["kaharba"]
    clip, _ = synthesize(SynthSpec(theka, 300.0, 4, **NOISY, seed=6))
    a = rng.normal(size=clip.samples.size)
    b = rng.normal(size=clip.samples.size)
    fa, fb = (extract_bayan_band(AudioClip(x, 44100)).samples for x in (a, b))
    fab = extract_bayan_band(AudioClip(2.5 * a - 0.75 * b, 44100)).samples
    lin_err = np.max(np.abs(fab - (2.5 * fa - 0.75 * fb))) / np.max(np.abs(fab))

    env = compute_envelope(clip)
    scaled = compute_envelope(AudioClip(clip.samples * 0.3, 44100))
    t1 = pick_peaks(env, 0.01).times
    t2 = pick_peaks(scaled, 0.01).times
    scale_ok = np.array_equal(t1, t2)

    idem_ok, spacing_ok = True, True
    for _ in range(100):
        n = int(rng.integers(1, 200))
        ps = PeakSignal.from_arrays(np.sort(rng.uniform(0, 20, n)), rng.uniform(0.01, 1, n))
        r1 = refine(ps)
        r2 = refine(r1)
        idem_ok &= np.array_equal(r1.times, r2.times) and np.array_equal(r1.amplitudes, r2.amplitudes)
        spacing_ok &= bool(np.all(np.diff(r1.times) >= 0.1 - 1e-9))

    band = extract_bayan_band(canonicalize(clip))
    bp = pick_peaks(compute_envelope(band), 0.01)
    bp_loud = PeakSignal.from_arrays(bp.times, bp.amplitudes * 7.0)
    gain_ok = np.array_equal(threshold_bayan_peaks(bp).times, threshold_bayan_peaks(bp_loud).times)

    ok = lin_err < 1e-9 and scale_ok and idem_ok and spacing_ok and gain_ok
    report_line(6, ok, f"linearity rel err {lin_err:.2e}, scale invariance {scale_ok}, "
                       f"refine idempotent {idem_ok}, spacing {spacing_ok}, threshold gain {gain_ok}")
    assert lin_err < 1e-9
    assert scale_ok and idem_ok and spacing_ok and gain_ok


def test_criterion_7_tempo_covariance(report_line):
    ratios = []
    for tala, bpm in (("dadra", 240.0), ("kaharba", 300.0), ("bhajani", 330.0), ("rupak", 300.0)):
        clip, _ = synthesize(SynthSpec(thekas()[tala], bpm, 20, seed=7))
        base = detect(clip).tempo.bpm
        stretched = AudioClip(clip.samples, 44100 / 1.25)  # played back 1.25x slower
        slow = detect(canonicalize(stretched)).tempo.bpm
        ratios.append(slow / base)
    worst = max(abs(r * 1.25 - 1) for r in ratios)
    report_line(7, worst <= 0.005, f"stretched/original BPM ratios {np.round(ratios, 5).tolist()}, "
                                   f"worst deviation from 1/1.25 {worst:.3%}")
    assert worst <= 0.005


def test_criterion_8_performance(report_line, tmp_path):
    clip, _ = synthesize(SynthSpec(thekas()["rupak"], 300.0, 22, **NOISY, seed=8))
    assert clip.duration_s >= 60.0
    detect(clip)  # warm-up
    t0 = time.perf_counter()
    detect(clip)
    single = time.perf_counter() - t0

    rows = []
    for i, spec in enumerate(corpus_specs(per_tala=20, **NOISY)):
        c, truth = render(spec)
        name = f"clip_{i:03d}.wav"
        write_clip(tmp_path / name, c, truth)
        rows.append((name, truth.tala_name, truth.tempo_bpm))
    manifest = tmp_path / "manifest.csv"
    with open(manifest, "w", newline="") as fh:
        csv.writer(fh).writerows([("path", "tala", "tempo_bpm"), *rows])
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "taladetect", "eval", str(manifest), "--workers", "4"],
                          capture_output=True, text=True)
    batch = time.perf_counter() - t0
    ok = single < 2.0 and batch < 90.0 and proc.returncode == 0
    report_line(8, ok, f"60 s clip in {single:.2f} s, eval of 80 clips on 4 workers in {batch:.1f} s "
                       f"({os.cpu_count()} CPUs available)")
    assert proc.returncode == 0, proc.stderr
    assert single < 2.0
    assert batch < 90.0
