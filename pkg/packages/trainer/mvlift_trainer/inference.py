from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from mvlift_contracts import LifterConfig, MetricReport
from mvlift_core import MultiviewSample, PoseSequence2D, PoseSequence3D, ShapeMismatchError
from mvlift_metrics import evaluate
from mvlift_model import LifterParams, forward

from .errors import MissingLabelsError


def tile_starts(frame_count: int, window_frames: int) -> list[int]:
    """Non-overlapping window starts; the last window is aligned to the sequence end."""
    if window_frames > frame_count:
        raise ShapeMismatchError(
            f"sequence of {frame_count} frames is shorter than the {window_frames}-frame window"
        )
    starts = list(range(0, frame_count - window_frames + 1, window_frames))
    if starts[-1] + window_frames < frame_count:
        starts.append(frame_count - window_frames)
    return starts


def predict_sequence(
    params: LifterParams,
    lifter: LifterConfig,
    keypoints: PoseSequence2D,
) -> PoseSequence3D:
    """Root-relative camera-frame joints for every frame of ``keypoints``."""
    window = lifter.window_frames
    starts = tile_starts(keypoints.frame_count, window)
    windows = np.stack([keypoints.keypoints[start : start + window] for start in starts])
    predictions, _ = forward(params, lifter, windows)
    joints = np.empty((keypoints.frame_count, lifter.joint_count, 3))
    for start, prediction in zip(starts, predictions, strict=True):
        joints[start : start + window] = prediction
    return PoseSequence3D(joints, keypoints.frame_rate_hz)


def evaluate_view(
    params: LifterParams,
    lifter: LifterConfig,
    samples: Sequence[MultiviewSample],
    view_id: str,
) -> MetricReport:
    predictions, labels, activities = [], [], []
    for sample in samples:
        view = sample.view(view_id)
        if view.joints_3d is None:
            raise MissingLabelsError(
                f"{sample.sequence_id} view {view_id} has no 3D labels to evaluate against"
            )
        predictions.append(predict_sequence(params, lifter, view.keypoints))
        labels.append(view.joints_3d)
        activities.append(sample.activity)
    return evaluate(predictions, labels, activities, root_index=lifter.root_index)
