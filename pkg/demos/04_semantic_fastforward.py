"""Semantic fast-forward: ROI scoring, threshold split, per-part speed-ups,
and shortest-path frame selection.

A synthetic 300-frame clip has detected regions of interest concentrated in
two 'action' stretches. Per-frame semantic scores are thresholded into
semantic / non-semantic parts, per-part speed-up rates are solved so the
overall target holds, and each part is fast-forwarded by the skip-bounded
shortest path. Jitter and speed-up deviation close the loop.
"""

import numpy as np

from videosum import (
    Roi,
    jitter_amount,
    segment_speedups,
    semantic_score,
    semantic_threshold_split,
    speedup_deviation,
    speedup_frame_selection,
)

rng = np.random.default_rng(3)
T = 300
FRAME_W, FRAME_H = 640, 360
ACTION = [(60, 120), (200, 260)]

# ROIs: plentiful, confident, and central during action; sparse elsewhere.
scores = []
for t in range(T):
    in_action = any(s <= t < e for s, e in ACTION)
    rois = []
    n = rng.integers(2, 5) if in_action else rng.integers(0, 2)
    for _ in range(n):
        if in_action:
            cx = FRAME_W / 2 + rng.normal(0, 40)
            cy = FRAME_H / 2 + rng.normal(0, 30)
            conf = float(rng.uniform(0.7, 1.0))
            area = float(rng.uniform(0.05, 0.15)) * FRAME_W * FRAME_H
        else:
            cx = float(rng.uniform(0, FRAME_W))
            cy = float(rng.uniform(0, FRAME_H))
            conf = float(rng.uniform(0.1, 0.4))
            area = float(rng.uniform(0.005, 0.02)) * FRAME_W * FRAME_H
        rois.append(Roi(confidence=conf, center=(cx, cy), area=area))
    scores.append(semantic_score(rois, FRAME_W, FRAME_H))
scores = np.asarray(scores)
print(f"semantic scores: mean {scores.mean():.4f}, max {scores.max():.4f}")

# Smooth over a short window so single noisy frames don't flicker the split.
kernel = np.ones(9) / 9.0
smoothed = np.convolve(scores, kernel, mode="same")

threshold, semantic, non_semantic = semantic_threshold_split(smoothed)
print(f"threshold {threshold:.4f}")
print(f"semantic ranges:     {semantic}")
print(f"non-semantic ranges: {non_semantic}")

len_s = sum(e - s for s, e in semantic)
len_ns = sum(e - s for s, e in non_semantic)
TARGET = 6.0
print(f"\nlengths: semantic {len_s}, non-semantic {len_ns}, target speed-up {TARGET}")

# A semantic rate that is too gentle cannot meet the overall budget; the
# solver rejects it rather than silently missing the target.
try:
    segment_speedups(len_s, len_ns, TARGET, 2.0)
except ValueError as exc:
    print(f"semantic rate 2.0 rejected: {exc}")

RHO_S = 3.0
rho_ns = segment_speedups(len_s, len_ns, TARGET, RHO_S)
print(f"semantic rate {RHO_S} -> non-semantic rate {rho_ns:.3f}")

# Fast-forward each part with its own rate; concatenate kept frame indices.
kept = []
for ranges, rho in ((semantic, RHO_S), (non_semantic, rho_ns)):
    for start, end in ranges:
        if end - start < 2:
            kept.extend(range(start, end))
            continue
        local = speedup_frame_selection(
            scores[start:end], rho, max_skip=int(2 * np.ceil(rho)), lambda_speed=1.0,
            lambda_sem=0.2,
        )
        kept.extend(start + i for i in local)
kept = sorted(set(kept))
achieved = T / len(kept)
print(f"\nkept {len(kept)} of {T} frames -> achieved speed-up {achieved:.2f}")
print(f"speed-up deviation |desired - achieved| = {speedup_deviation(TARGET, T, len(kept)):.3f}")

# Jitter of a smooth synthetic focus-of-expansion track, before/after selection.
base = np.cumsum(rng.normal(0, 1.0, size=(T, 2)), axis=0)
jitter_all = jitter_amount(base)
jitter_kept = jitter_amount(base[kept])
print(f"\nFOE jitter, all frames: {jitter_all:.3f}")
print(f"FOE jitter, fast-forwarded: {jitter_kept:.3f} (larger steps between kept frames)")
