"""Command-line front end: ``analyze``, ``synth`` and ``eval``."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .audio_io import load_clip
from .envelope import DEFAULT_DF
from .errors import InvalidSpec, TalaError, UnreadableFile, UnsupportedEncoding
from .filterbank import BAYAN_BAND_HZ
from .grammar import THEKA_PATH_ENV, load_thekas
from .pipeline import AnalysisReport, DetectConfig, detect
from .strokes import DEFAULT_WINDOW_S
from .synth import SynthSpec, avarts_for_duration, synthesize, write_clip

EXIT_OK = 0
EXIT_IO = 2
EXIT_USAGE = 64
EXIT_DATAERR = 65

# tempo ranges (pulses per minute) of the reference corpus the method was built on
REFERENCE_BPM_RANGES = {
    "dadra": (140.0, 320.0),
    "kaharba": (220.0, 400.0),
    "bhajani": (300.0, 360.0),
    "rupak": (240.0, 375.0),
}
TEMPO_TOLERANCE = 0.05


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LOW:HIGH, got {text!r}") from None
    if not 0 < lo <= hi:
        raise argparse.ArgumentTypeError(f"need 0 < LOW <= HIGH, got {text!r}")
    return lo, hi


def _add_detect_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("detection")
    g.add_argument("--d-f", type=float, default=DEFAULT_DF, metavar="F",
                   help="peak contrast as a fraction of the envelope maximum "
                        f"(default {DEFAULT_DF}: keep almost every peak, later stages prune)")
    g.add_argument("--window", type=float, default=DEFAULT_WINDOW_S, metavar="S",
                   help=f"refinement window in seconds (default {DEFAULT_WINDOW_S}: "
                        "tabla strokes are never closer than 60/600 s)")
    g.add_argument("--band", type=_range, default=BAYAN_BAND_HZ, metavar="LOW:HIGH",
                   help="bayan band-pass edges in Hz (default 60:200, band 2 of a 20-band ERB bank)")
    g.add_argument("--thekas", metavar="FILE",
                   help=f"theka definition JSON (default: ${THEKA_PATH_ENV} or the bundled file)")


def _config(args) -> DetectConfig:
    if not 0.0 <= args.d_f <= 1.0:
        raise UsageError("--d-f must lie in [0, 1]")
    if args.window <= 0:
        raise UsageError("--window must be positive")
    return DetectConfig(d_f=args.d_f, window_s=args.window, band_hz=tuple(args.band),
                        theka_path=args.thekas)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="taladetect", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="detect tala and tempo of WAV clips")
    a.add_argument("paths", nargs="+", metavar="WAV")
    a.add_argument("--pretty", action="store_true", help="aligned table instead of JSON")
    _add_detect_flags(a)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("synth", help="render synthetic theka clips with ground truth")
    s.add_argument("--tala", help="tala to render (corpus mode: all four when omitted)")
    s.add_argument("--bpm", type=float, help="tempo in pulses per minute")
    s.add_argument("--bpm-range", type=_range, metavar="LOW:HIGH",
                   help="corpus tempo range (default: the reference range of each tala)")
    s.add_argument("--avarts", type=int, help="number of cycles (default: fill --duration)")
    s.add_argument("--duration", type=float, default=60.0, help="target clip length in s (default 60)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jitter", type=float, default=0.0, metavar="S", help="timing jitter bound in s")
    s.add_argument("--amp-jitter", type=float, default=0.0, help="relative amplitude jitter in [0, 1)")
    s.add_argument("--noise", type=float, default=0.0, help="broadband noise RMS in [0, 1)")
    s.add_argument("--optional-stress", type=float, default=0.0, metavar="P",
                   help="chance per cycle that each optional bayan bol is stressed")
    s.add_argument("-o", "--output", metavar="WAV", help="output file (single-clip mode)")
    s.add_argument("--corpus", type=int, metavar="N", help="emit N randomized clips per tala")
    s.add_argument("--out-dir", metavar="DIR", help="corpus output directory")
    s.add_argument("--thekas", metavar="FILE")
    s.set_defaults(func=cmd_synth)

    e = sub.add_parser("eval", help="batch-evaluate against a manifest CSV (path,tala,tempo_bpm)")
    e.add_argument("manifest")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out", metavar="JSON", help="also write the summary as JSON")
    e.add_argument("--json", action="store_true", help="print the JSON summary instead of tables")
    _add_detect_flags(e)
    e.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"taladetect: {exc}", file=sys.stderr)
        return EXIT_USAGE


# -- analyze -----------------------------------------------------------------

def render_pretty(report: AnalysisReport) -> str:
    det = report.detection
    rows = [
        ("input", report.input_path or "-"),
        ("tala", det.tala_name or "none"),
        ("match", ("exact" if det.exact else "+-1") if det.tala_name else "-"),
        ("candidates", ", ".join(det.candidates) or "-"),
        ("tempo (BPM)", f"{report.tempo.bpm:.2f}" if report.tempo else "-"),
        ("pcmax pair", f"{report.dominant.pcmax_1}-{report.dominant.pcmax_2} "
                       f"(x{report.dominant.occurrences})" if report.dominant else "-"),
        ("matrix nonzeros", ", ".join(f"[{a},{b}]={v}" for a, b, v in report.matrix.nonzero())
         if report.matrix is not None else "-"),
    ]
    if report.tempo and report.tempo.matras_per_minute is not None:
        rows.insert(5, ("matra/min", f"{report.tempo.matras_per_minute:.2f}"))
    for w in report.warnings:
        rows.append(("warning", w))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def cmd_analyze(args) -> int:
    config = _config(args)
    status = EXIT_OK
    for path in args.paths:
        try:
            clip = load_clip(path)
        except (UnreadableFile, UnsupportedEncoding) as exc:
            print(f"taladetect: {exc}", file=sys.stderr)
            status = EXIT_IO
            continue
        report = detect(clip, config, input_path=str(path))
        if args.pretty:
            print(render_pretty(report))
            print()
        elif len(args.paths) == 1:
            print(report.to_json(indent=2))
        else:
            print(report.to_json())
    return status


# -- synth -------------------------------------------------------------------

def _theka(name, thekas_path):
    thekas = {t.tala_name: t for t in load_thekas(thekas_path, include_all=True)}
    if name not in thekas:
        raise UsageError(f"unknown tala {name!r} (known: {', '.join(thekas)})")
    return thekas[name]


def _spec(args, theka, bpm, seed) -> SynthSpec:
    avarts = args.avarts or avarts_for_duration(theka, bpm, args.duration)
    spec = SynthSpec(theka, bpm, avarts, args.jitter, args.amp_jitter, args.noise,
                     args.optional_stress, seed)
    try:
        spec.validate()
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from None
    return spec


def cmd_synth(args) -> int:
    if args.corpus is not None:
        return _synth_corpus(args)
    if not args.tala or args.bpm is None:
        raise UsageError("single-clip synth needs --tala and --bpm")
    theka = _theka(args.tala, args.thekas)
    spec = _spec(args, theka, args.bpm, args.seed)
    if not args.output:
        raise UsageError("single-clip synth needs -o")
    clip, truth = synthesize(spec)
    sidecar = write_clip(args.output, clip, truth)
    print(f"wrote {args.output} ({clip.duration_s:.1f} s) and {sidecar}")
    return EXIT_OK


def _synth_corpus(args) -> int:
    import numpy as np

    if args.corpus < 1 or not args.out_dir:
        raise UsageError("--corpus needs N >= 1 and --out-dir")
    names = [args.tala] if args.tala else list(REFERENCE_BPM_RANGES)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for ti, name in enumerate(names):
        theka = _theka(name, args.thekas)
        lo, hi = args.bpm_range or REFERENCE_BPM_RANGES.get(name, (240.0, 360.0))
        rng = np.random.default_rng([args.seed, ti])
        for i in range(args.corpus):
            bpm = float(rng.uniform(lo, hi))
            spec = _spec(args, theka, bpm, seed=args.seed * 100003 + ti * 10007 + i)
            clip, truth = synthesize(spec)
            wav = out_dir / f"{name}_{i:03d}.wav"
            write_clip(wav, clip, truth)
            rows.append((wav.name, name, f"{bpm:.3f}"))
    manifest = out_dir / "manifest.csv"
    with open(manifest, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["path", "tala", "tempo_bpm"])
        w.writerows(rows)
    print(f"wrote {len(rows)} clips and {manifest}")
    return EXIT_OK


# -- eval --------------------------------------------------------------------

class ManifestError(Exception):
    pass


def read_manifest(path) -> list[tuple[Path, str, float]]:
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"path", "tala", "tempo_bpm"} <= set(reader.fieldnames):
                raise ManifestError(f"{path}: header must be path,tala,tempo_bpm")
            records = []
            for lineno, row in enumerate(reader, start=2):
                try:
                    clip_path = Path(row["path"])
                    tempo = float(row["tempo_bpm"])
                    tala = row["tala"].strip()
                except (TypeError, ValueError, AttributeError):
                    raise ManifestError(f"{path}:{lineno}: malformed record") from None
                if not tala:
                    raise ManifestError(f"{path}:{lineno}: empty tala")
                if not clip_path.is_absolute():
                    clip_path = path.parent / clip_path
                records.append((clip_path, tala, tempo))
    except OSError as exc:
        raise ManifestError(str(exc)) from exc
    if not records:
        raise ManifestError(f"{path}: manifest has no records")
    return records


def _analyze_one(job) -> dict:
    path, config = job
    try:
        clip = load_clip(path)
    except TalaError as exc:
        return AnalysisReport(input_path=str(path),
                              error={"type": type(exc).__name__, "message": str(exc)}).to_dict()
    return detect(clip, config, input_path=str(path)).to_dict()


def run_batch(paths, config: DetectConfig, workers: int = 1) -> list[dict]:
    """Analyze ``paths`` (in parallel when ``workers > 1``), results in input order."""
    config.resolved_thekas()
    jobs = [(p, config) for p in paths]
    if workers <= 1:
        return [_analyze_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_analyze_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def summarize(records, reports, tala_names) -> dict:
    """Confusion matrix (percent per truth row), tempo accuracy and pooled averages."""
    cols = list(tala_names) + ["none"]
    rows = [t for t in tala_names if any(r[1] == t for r in records)]
    rows += sorted({r[1] for r in records} - set(tala_names))
    counts = {t: {c: 0 for c in cols} for t in rows}
    n_by = {t: 0 for t in rows}
    tempo_ok = {t: 0 for t in rows}
    half = {t: 0.0 for t in rows}
    clips = []
    for (path, truth, bpm), rep in zip(records, reports):
        det = rep["detection"]
        pred = det["tala_name"] if det["tala_name"] in tala_names else "none"
        counts[truth][pred] += 1
        n_by[truth] += 1
        est = rep["tempo"]["bpm"] if rep.get("tempo") else None
        ok = est is not None and abs(est - bpm) / bpm <= TEMPO_TOLERANCE
        tempo_ok[truth] += ok
        top2 = det.get("candidates", [])[:2]
        half[truth] += 1.0 if pred == truth else (0.5 if truth in top2 else 0.0)
        clips.append({"path": str(path), "truth": truth, "predicted": pred,
                      "tempo_truth": bpm, "tempo_est": est, "tempo_ok": bool(ok),
                      "error": rep.get("error")})
    confusion = {t: {c: 100.0 * counts[t][c] / n_by[t] for c in cols} for t in rows}
    n_total = len(records)
    correct = sum(counts[t][t] for t in rows if t in counts[t])
    return {
        "columns": cols,
        "confusion_percent": confusion,
        "confusion_counts": counts,
        "clips_per_tala": n_by,
        "tempo_accuracy_percent": {t: 100.0 * tempo_ok[t] / n_by[t] for t in rows},
        "top2_half_credit_percent": {t: 100.0 * half[t] / n_by[t] for t in rows},
        "gross": {
            "matra_detection_percent": 100.0 * correct / n_total,
            "tempo_detection_percent": 100.0 * sum(tempo_ok.values()) / n_total,
        },
        "clips": clips,
    }


def render_summary(summary: dict) -> str:
    cols = summary["columns"]
    lines = ["Tala confusion matrix (% of clips per true tala)"]
    width = max(len(c) for c in cols + list(summary["confusion_percent"])) + 2
    lines.append("".ljust(width) + "".join(c.rjust(width) for c in cols))
    for t, row in summary["confusion_percent"].items():
        lines.append(t.ljust(width) + "".join(f"{row[c]:.2f}".rjust(width) for c in cols))
    lines.append("")
    lines.append(f"Tempo detection (+-{TEMPO_TOLERANCE:.0%})")
    for t, v in summary["tempo_accuracy_percent"].items():
        lines.append(f"{t.ljust(width)}{v:.2f}".rstrip())
    lines.append("")
    lines.append("Top-2 half credit")
    for t, v in summary["top2_half_credit_percent"].items():
        lines.append(f"{t.ljust(width)}{v:.2f}")
    lines.append("")
    g = summary["gross"]
    lines.append(f"matra detection {g['matra_detection_percent']:.2f}   "
                 f"tempo detection {g['tempo_detection_percent']:.2f}")
    return "\n".join(lines)


def cmd_eval(args) -> int:
    config = _config(args)
    try:
        records = read_manifest(args.manifest)
    except ManifestError as exc:
        print(f"taladetect: {exc}", file=sys.stderr)
        return EXIT_DATAERR
    tala_names = [t.tala_name for t in config.resolved_thekas()]
    reports = run_batch([r[0] for r in records], config, args.workers)
    summary = summarize(records, reports, tala_names)
    if args.out:
        Path(args.out).write_text(json.dumps(summary, indent=2), encoding="utf-8")
    if args.json:
        print(json.dumps(summary, indent=2))
    else:
        print(render_summary(summary))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
