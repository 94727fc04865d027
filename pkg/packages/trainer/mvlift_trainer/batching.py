from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from mvlift_core import MultiviewSample, ShapeMismatchError


@dataclass(frozen=True)
class WindowRef:
    """One training window: the same frame range in every view of one sample."""

    sample_index: int
    start: int
    stop: int


def window_starts(frame_count: int, window_frames: int, stride: int = 1) -> list[int]:
    if window_frames > frame_count:
        raise ShapeMismatchError(
            f"window of {window_frames} frames is longer than a {frame_count}-frame sequence"
        )
    return list(range(0, frame_count - window_frames + 1, stride))


def all_windows(
    samples: Sequence[MultiviewSample],
    window_frames: int,
    stride: int = 1,
) -> list[WindowRef]:
    return [
        WindowRef(index, start, start + window_frames)
        for index, sample in enumerate(samples)
        for start in window_starts(sample.frame_count, window_frames, stride)
    ]


def assemble_multiview_batch(
    samples: Sequence[MultiviewSample],
    window_frames: int,
    rng: np.random.Generator,
    *,
    batch_windows: int,
    stride: int = 1,
) -> list[list[WindowRef]]:
    """One epoch of batches: every valid window once, in shuffled order."""
    windows = all_windows(samples, window_frames, stride)
    order = rng.permutation(len(windows))
    shuffled = [windows[index] for index in order]
    return [
        shuffled[offset : offset + batch_windows]
        for offset in range(0, len(shuffled), batch_windows)
    ]
