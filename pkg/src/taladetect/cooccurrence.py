"""Pulse counting between bayan strokes and the 16x16 co-occurrence matrix."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import PeakSignal
from .errors import EmptyMatrix, InsufficientBayanStrokes, SeriesTooShort
from .strokes import BayanStrokeSignal

MAX_PULSES = 16
ALIGN_TOLERANCE_S = 0.05


@dataclass(frozen=True)
class PulseCountSeries:
    counts: tuple[int, ...]
    clamped: tuple[int, ...] = ()  # positions whose raw count fell outside [1, 16]

    def __len__(self):
        return len(self.counts)


@dataclass(frozen=True, eq=False)
class CooccurrenceMatrix:
    """``cells[a - 1, b - 1]`` counts consecutive pulse-count pairs (a, b)."""

    cells: np.ndarray

    @property
    def total(self) -> int:
        return int(self.cells.sum())

    def __getitem__(self, ab: tuple[int, int]) -> int:
        a, b = ab
        return int(self.cells[a - 1, b - 1])

    def __eq__(self, other):
        return isinstance(other, CooccurrenceMatrix) and np.array_equal(self.cells, other.cells)

    def nonzero(self) -> list[tuple[int, int, int]]:
        rows, cols = np.nonzero(self.cells)
        return [(int(r) + 1, int(c) + 1, int(self.cells[r, c])) for r, c in zip(rows, cols)]

    def to_json(self) -> list[list[int]]:
        return self.cells.tolist()

    @classmethod
    def from_json(cls, rows) -> "CooccurrenceMatrix":
        cells = np.asarray(rows, dtype=np.int64)
        if cells.shape != (MAX_PULSES, MAX_PULSES):
            raise ValueError(f"expected a {MAX_PULSES}x{MAX_PULSES} matrix, got {cells.shape}")
        return cls(cells)


@dataclass(frozen=True)
class DominantPattern:
    pcmax_1: int
    pcmax_2: int
    occurrences: int

    @property
    def pair(self) -> tuple[int, int]:
        return self.pcmax_1, self.pcmax_2


def count_pulses(peaks: PeakSignal, bayan: BayanStrokeSignal,
                 tolerance_s: float = ALIGN_TOLERANCE_S) -> PulseCountSeries:
    """Number of peak-signal pulses in each inter-bayan interval.

    Interval i is ``[b_i - tol, b_{i+1} - tol)``: the peak that coincides with
    the opening bayan stroke is counted, the closing one belongs to the next
    interval. So five peaks strictly between two strokes give six pulses.
    """
    b = bayan.times
    if len(b) < 3:
        raise InsufficientBayanStrokes(f"{len(b)} bayan strokes, need at least 3")
    t = np.sort(peaks.times)
    edges = np.searchsorted(t, b - tolerance_s, side="left")
    raw = np.diff(edges)
    counts = np.clip(raw, 1, MAX_PULSES)
    clamped = tuple(int(i) for i in np.flatnonzero(counts != raw))
    return PulseCountSeries(tuple(int(c) for c in counts), clamped)


def build_matrix(series: PulseCountSeries) -> CooccurrenceMatrix:
    pc = np.asarray(series.counts, dtype=np.int64)
    if len(pc) < 2:
        raise SeriesTooShort(f"need at least 2 pulse counts, got {len(pc)}")
    if pc.min() < 1 or pc.max() > MAX_PULSES:
        raise ValueError(f"pulse counts must lie in [1, {MAX_PULSES}]")
    cells = np.zeros((MAX_PULSES, MAX_PULSES), dtype=np.int64)
    np.add.at(cells, (pc[:-1] - 1, pc[1:] - 1), 1)
    return CooccurrenceMatrix(cells)


def dominant_pattern(matrix: CooccurrenceMatrix) -> DominantPattern:
    """Arg-max cell; ties go to the smallest row, then the smallest column."""
    if matrix.total < 1:
        raise EmptyMatrix("co-occurrence matrix is empty")
    flat = int(np.argmax(matrix.cells))
    r, c = divmod(flat, MAX_PULSES)
    return DominantPattern(r + 1, c + 1, int(matrix.cells[r, c]))
