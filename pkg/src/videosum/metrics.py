"""Evaluation measures: keyshot precision/recall/F1, jitter, speed-up deviation.

Keyshot summaries are interval sets over frame indices (end exclusive); the
overlap metrics normalize both sides first so re-splitting an interval into
adjacent pieces never changes the result.  Durations are measured in frames;
callers convert seconds via fps.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

__all__ = [
    "normalize_intervals",
    "keyshot_pr",
    "jitter_amount",
    "speedup_deviation",
]

Interval = tuple[int, int]


def normalize_intervals(intervals: Sequence[Sequence[float]]) -> list[Interval]:
    """Sort intervals and merge overlapping or adjacent ones.

    The union of covered frames is preserved.  Any record with start >= end
    is rejected with its position in the input.
    """
    cleaned = []
    for rec_no, pair in enumerate(intervals):
        start, end = pair
        if start >= end:
            raise ValueError(f"interval record {rec_no}: start {start} >= end {end}")
        cleaned.append((start, end))
    cleaned.sort()
    merged: list[Interval] = []
    for start, end in cleaned:
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def _total_length(intervals: Sequence[Interval]) -> float:
    return sum(end - start for start, end in intervals)


def _overlap_length(a: Sequence[Interval], b: Sequence[Interval]) -> float:
    """Total intersection length of two normalized interval lists."""
    total = 0.0
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if hi > lo:
            total += hi - lo
        if a[i][1] <= b[j][1]:
            i += 1
        else:
            j += 1
    return total


def keyshot_pr(
    a: Sequence[Sequence[float]], b: Sequence[Sequence[float]]
) -> tuple[float, float, float]:
    """Precision, recall and F1 of summary `a` against reference `b`.

    precision = overlap / duration(a), recall = overlap / duration(b),
    f1 = 2pr / (p + r) with f1 = 0 when both are zero.  Empty or
    zero-duration inputs are rejected.
    """
    a = normalize_intervals(a)
    b = normalize_intervals(b)
    dur_a = _total_length(a)
    dur_b = _total_length(b)
    if dur_a <= 0 or dur_b <= 0:
        raise ValueError("both interval sets must have positive duration")
    overlap = _overlap_length(a, b)
    precision = overlap / dur_a
    recall = overlap / dur_b
    if precision == 0.0 and recall == 0.0:
        return 0.0, 0.0, 0.0
    f1 = 2.0 * precision * recall / (precision + recall)
    return precision, recall, f1


def jitter_amount(track: Sequence[Sequence[float]]) -> float:
    """Mean Euclidean displacement between consecutive track points.

    `track` holds one (x, y) location per output frame; at least two points
    are required.
    """
    pts = np.asarray(track, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"track must be an (n, 2) array, got shape {pts.shape}")
    if pts.shape[0] < 2:
        raise ValueError("track needs at least 2 points")
    steps = np.diff(pts, axis=0)
    return float(np.linalg.norm(steps, axis=1).mean())


def speedup_deviation(desired: float, n_input: int, n_output: int) -> float:
    """|desired - n_input / n_output|, the gap to the achieved speed-up."""
    if n_output < 1:
        raise ValueError("n_output must be at least 1")
    if desired < 1:
        raise ValueError("desired speed-up must be at least 1")
    return abs(desired - n_input / n_output)
