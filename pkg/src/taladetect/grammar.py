"""Theka data model, pulse-pattern derivation and tala classification.

A theka is one cycle (avart) of bols. Strokes with a bayan component that the
player stresses show up in the bayan-stroke signal, so the pulse counts
between consecutive bayan strokes follow the gaps between stressed positions
as they repeat cycle after cycle.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .cooccurrence import MAX_PULSES, DominantPattern

THEKA_PATH_ENV = "TALA_THEKA_PATH"
BASIC = "basic"
EXTENDED = "extended"


@dataclass(frozen=True)
class Bol:
    name: str
    has_bayan: bool = False
    is_rest: bool = False
    mandatory_stressed: bool = False

    def __post_init__(self):
        if self.is_rest and self.mandatory_stressed:
            raise ValueError(f"rest cannot be stressed ({self.name})")
        if self.mandatory_stressed and not self.has_bayan:
            raise ValueError(f"stressed bol {self.name!r} must have a bayan component")


@dataclass(frozen=True)
class Theka:
    tala_name: str
    bols: tuple[Bol, ...]
    vibhaga_boundaries: tuple[int, ...] = (0,)
    matras: int | None = None
    detectable: bool = True

    def __post_init__(self):
        if not self.bols:
            raise ValueError(f"{self.tala_name}: empty theka")
        if not any(b.mandatory_stressed for b in self.bols):
            raise ValueError(f"{self.tala_name}: no stressed bayan bol in the cycle")
        if any(not 0 <= v < len(self.bols) for v in self.vibhaga_boundaries):
            raise ValueError(f"{self.tala_name}: vibhaga boundary out of range")
        if self.matras is None:
            object.__setattr__(self, "matras", len(self.bols))

    @property
    def pulses_per_avart(self) -> int:
        return len(self.bols)

    @property
    def matras_per_pulse(self) -> float:
        return self.matras / self.pulses_per_avart

    @property
    def mandatory_positions(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bols) if b.mandatory_stressed)

    @property
    def optional_positions(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bols)
                     if b.has_bayan and not b.mandatory_stressed)

    def to_dict(self) -> dict:
        bols = []
        for b in self.bols:
            d = {"bol": b.name}
            if b.has_bayan:
                d["bayan"] = True
            if b.mandatory_stressed:
                d["stress"] = True
            if b.is_rest:
                d["rest"] = True
            bols.append(d)
        return {"name": self.tala_name, "matras": self.matras, "detect": self.detectable,
                "vibhaga": list(self.vibhaga_boundaries), "bols": bols}

    @classmethod
    def from_dict(cls, d: dict) -> "Theka":
        bols = tuple(
            Bol(b["bol"], bool(b.get("bayan", False)), bool(b.get("rest", False)),
                bool(b.get("stress", False)))
            for b in d["bols"]
        )
        return cls(d["name"], bols, tuple(d.get("vibhaga", (0,))), d.get("matras"),
                   bool(d.get("detect", True)))


@dataclass(frozen=True)
class PulsePattern:
    tala_name: str
    pairs: frozenset[tuple[int, int]]
    provenance: str = BASIC


@dataclass(frozen=True)
class TalaDetection:
    tala_name: str | None
    matched_pair: tuple[int, int] | None = None
    exact: bool = False
    candidates: tuple[str, ...] = ()
    provenance: str | None = None

    def to_dict(self) -> dict:
        return {
            "tala_name": self.tala_name,
            "matched_pair": list(self.matched_pair) if self.matched_pair else None,
            "exact": self.exact,
            "candidates": list(self.candidates),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TalaDetection":
        pair = d.get("matched_pair")
        return cls(d.get("tala_name"), tuple(pair) if pair else None, bool(d.get("exact")),
                   tuple(d.get("candidates", ())), d.get("provenance"))


NONE_DETECTION = TalaDetection(None)


def _read_doc(path) -> dict:
    if path is None:
        text = resources.files("taladetect").joinpath("data/thekas.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return json.loads(text)


def load_thekas(path=None, include_all: bool = False) -> list[Theka]:
    """Read theka definitions from ``path``, ``$TALA_THEKA_PATH`` or the bundled file.

    Only thekas flagged for detection are returned unless ``include_all``.
    """
    if path is None:
        path = os.environ.get(THEKA_PATH_ENV) or None
    thekas = [Theka.from_dict(d) for d in _read_doc(path)["thekas"]]
    if not include_all:
        thekas = [t for t in thekas if t.detectable]
    return thekas


def builtin_thekas(include_all: bool = False) -> list[Theka]:
    """Bundled thekas; by default the four detectable ones (dadra, kaharba, bhajani, rupak)."""
    thekas = [Theka.from_dict(d) for d in _read_doc(None)["thekas"]]
    return thekas if include_all else [t for t in thekas if t.detectable]


def stress_gaps(positions, period: int) -> list[int]:
    """Pulse distances between consecutive stressed positions, one cycle's worth."""
    pos = sorted(set(positions))
    return [b - a for a, b in zip(pos, pos[1:] + [pos[0] + period])]


def _pairs_over_two_avarts(positions, period: int) -> set[tuple[int, int]]:
    pos = sorted(set(positions))
    walk = pos + [p + period for p in pos] + [pos[0] + 2 * period]
    gaps = [b - a for a, b in zip(walk, walk[1:])]
    return {(a, b) for a, b in zip(gaps, gaps[1:])}


def basic_patterns(theka: Theka) -> PulsePattern:
    """Consecutive gap pairs of the mandatory stresses, plus the full-cycle pair.

    The full-cycle pair (P, P) covers a cycle where only one stress registers.
    """
    p = theka.pulses_per_avart
    pairs = _pairs_over_two_avarts(theka.mandatory_positions, p)
    pairs.add((p, p))
    return PulsePattern(theka.tala_name, frozenset(_in_range(pairs)), BASIC)


def extended_patterns(theka: Theka) -> PulsePattern:
    """Gap pairs when any optional bayan bols may also be stressed, cycle by cycle.

    Each cycle picks its own subset, so a pair can straddle a cycle with extra
    stresses and one without. Three consecutive stresses ``a < b < c`` are
    possible exactly when no mandatory stress lies strictly between them.
    """
    p = theka.pulses_per_avart
    mandatory = set(theka.mandatory_positions)
    stressable = sorted(mandatory | set(theka.optional_positions))
    line = [k * p + s for k in range(3) for s in stressable]
    is_mandatory = [s in mandatory for k in range(3) for s in stressable]

    def successors(i):
        # stressable positions after i up to and including the next mandatory one
        for j in range(i + 1, len(line)):
            yield j
            if is_mandatory[j]:
                return

    pairs = set(basic_patterns(theka).pairs)
    for i in range(len(stressable)):
        for j in successors(i):
            for k in successors(j):
                pairs.add((line[j] - line[i], line[k] - line[j]))
    return PulsePattern(theka.tala_name, frozenset(_in_range(pairs)), EXTENDED)


def _in_range(pairs):
    return {(a, b) for a, b in pairs if 1 <= a <= MAX_PULSES and 1 <= b <= MAX_PULSES}


def default_grammars(thekas=None) -> list[PulsePattern]:
    """Basic patterns of every theka followed by the extended ones."""
    thekas = builtin_thekas() if thekas is None else thekas
    return [basic_patterns(t) for t in thekas] + [extended_patterns(t) for t in thekas]


def _matches(grammars, pair, tol):
    a, b = pair
    out = []
    for g in grammars:
        hits = [q for q in g.pairs if abs(q[0] - a) <= tol and abs(q[1] - b) <= tol]
        if hits:
            out.append((g, min(hits, key=lambda q: (abs(q[0] - a) + abs(q[1] - b), q))))
    return out


def _evidence(grammars, matrix) -> dict[str, tuple[int, int]]:
    """Matrix mass on each tala's basic pairs, then on all of its pairs."""
    basic: dict[str, set] = {}
    every: dict[str, set] = {}
    for g in grammars:
        every.setdefault(g.tala_name, set()).update(g.pairs)
        if g.provenance == BASIC:
            basic.setdefault(g.tala_name, set()).update(g.pairs)
    return {name: (sum(matrix[q] for q in basic.get(name, ())), sum(matrix[q] for q in qs))
            for name, qs in every.items()}


def classify(pattern: DominantPattern, grammars: list[PulsePattern],
             matrix=None) -> TalaDetection:
    """Match the dominant pair exactly, then with +-1 per component, else NONE.

    Several talas can match at the same stage. Candidates are ranked basic
    before extended, then by grammar list order. Given the co-occurrence
    ``matrix``, ties within a provenance level go to the tala whose pairs
    collect more of the matrix mass before list order is consulted.
    """
    if not grammars:
        raise ValueError("no grammars to classify against")
    evidence = _evidence(grammars, matrix) if matrix is not None else {}
    order = {BASIC: 0, EXTENDED: 1}
    for tol in (0, 1):
        hits = _matches(grammars, pattern.pair, tol)
        if hits:
            # sort is stable, so list order breaks the remaining ties
            hits.sort(key=lambda gh: (order.get(gh[0].provenance, 2),
                                      [-e for e in evidence.get(gh[0].tala_name, (0, 0))]))
            names = []
            for g, _ in hits:
                if g.tala_name not in names:
                    names.append(g.tala_name)
            top, matched = hits[0]
            return TalaDetection(top.tala_name, matched, tol == 0, tuple(names), top.provenance)
    return NONE_DETECTION
