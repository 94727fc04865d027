"""Per-window training objectives and their gradients with respect to lifter parameters.

Predictions are root-relative. 3D objectives compare them with root-centered camera-frame
labels. 2D objectives place the root on the ray through its keypoint at a per-window,
per-view depth ``exp(log_depth)`` before projecting; their consistency term compares the
root-relative predictions in normalized image units.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from mvlift_camera import unproject_normalized
from mvlift_contracts import CameraModel, LifterConfig, LossWeights, Objective, TrainConfig
from mvlift_core import MultiviewSample, PoseSequence2D
from mvlift_losses import (
    Alignments,
    LossValue,
    combined_2d_loss,
    combined_3d_loss,
    consistency_loss,
)
from mvlift_model import GradientBundle, LifterParams, backward, forward

from .batching import WindowRef
from .errors import MissingLabelsError

# Standing height assumed when guessing a subject's distance from its 2D extent.
NOMINAL_HEIGHT_MM = 1600.0


def effective_weights(config: TrainConfig, view_count: int) -> LossWeights:
    """Objective weights with the consistency term removed where it cannot apply."""
    weights = config.weights
    if not config.objective.uses_consistency or view_count < 2:
        weights = weights.model_copy(update={"lambda_con": 0.0})
    return weights


def require_labels(samples: Sequence[MultiviewSample], objective: Objective) -> None:
    if not objective.needs_3d:
        return
    for sample in samples:
        for view in sample.views:
            if view.joints_3d is None:
                raise MissingLabelsError(
                    f"{objective} needs 3D labels; {sample.sequence_id} view "
                    f"{view.view_id} has none"
                )


def initial_log_depth(sample: MultiviewSample, ref: WindowRef, view_index: int) -> float:
    """Distance guess from how tall the subject appears in the first window frame."""
    view = sample.views[view_index]
    keypoints = view.keypoints.keypoints[ref.start]
    width = view.camera.resolution[0]
    extent_px = float(np.ptp(keypoints[:, 1])) * width / 2
    extent_px = max(extent_px, 1.0)
    return float(np.log(view.camera.focal[1] * NOMINAL_HEIGHT_MM / extent_px))


@dataclass(frozen=True, eq=False)
class WindowResult:
    value: float
    components: dict[str, float]
    gradient: GradientBundle
    log_depth_gradient: np.ndarray


def _window_inputs(sample: MultiviewSample, ref: WindowRef) -> np.ndarray:
    return np.stack([view.keypoints.keypoints[ref.start : ref.stop] for view in sample.views])


def image_scale(cam: CameraModel, depth: float) -> float:
    """Normalized image units per millimetre at ``depth`` in front of the camera."""
    return 2.0 * cam.focal[0] / (cam.resolution[0] * depth)


def placed_2d_loss(
    predictions: Sequence[np.ndarray],
    keypoints: Sequence[PoseSequence2D],
    cameras: Sequence[CameraModel],
    weights: LossWeights,
    log_depths: np.ndarray,
    *,
    root_index: int = 0,
    alignments: Alignments | None = None,
) -> tuple[LossValue, np.ndarray]:
    """Reprojection and consistency for one window of root-relative predictions.

    Reprojection sees each prediction placed on its root ray at ``exp(log_depth)``.
    Consistency sees the root-relative predictions scaled by ``image_scale`` at that depth,
    so it no longer depends on where the root sits. Depths are constant inside the
    consistency term.

    Returns the loss and its gradient with respect to ``log_depths``.
    """
    depths = np.exp(np.asarray(log_depths, dtype=float))
    views = [np.asarray(prediction, dtype=float) for prediction in predictions]
    placed, rays = [], []
    for view, view_keypoints, cam, depth in zip(views, keypoints, cameras, depths, strict=True):
        root_2d = view_keypoints.keypoints[:, root_index]
        ray = unproject_normalized(cam, root_2d, np.ones(len(root_2d)))
        rays.append(ray)
        placed.append(view + depth * ray[:, None, :])
    reprojection = combined_2d_loss(
        placed, keypoints, cameras, weights.model_copy(update={"lambda_con": 0.0})
    )
    depth_gradient = np.array(
        [
            depth * float(np.sum(gradient.sum(axis=1) * ray))
            for gradient, ray, depth in zip(reprojection.gradients, rays, depths, strict=True)
        ]
    )
    if weights.lambda_con <= 0:
        return reprojection, depth_gradient

    scales = [image_scale(cam, depth) for cam, depth in zip(cameras, depths, strict=True)]
    consistency = consistency_loss(
        [scale * view for scale, view in zip(scales, views, strict=True)], alignments=alignments
    )
    gradients = tuple(
        gradient + weights.lambda_con * scale * term
        for gradient, scale, term in zip(
            reprojection.gradients, scales, consistency.gradients, strict=True
        )
    )
    loss = LossValue(
        reprojection.value + weights.lambda_con * consistency.value,
        gradients,
        {**reprojection.diagnostics, "con": consistency.value},
    )
    return loss, depth_gradient


def window_loss(
    predictions: np.ndarray,
    sample: MultiviewSample,
    ref: WindowRef,
    config: TrainConfig,
    lifter: LifterConfig,
    log_depths: np.ndarray,
) -> tuple[LossValue, np.ndarray]:
    """Objective for one window given ``(V, w, J, 3)`` predictions.

    Returns the loss and the gradient with respect to the view log-depths.
    """
    views = sample.views
    weights = effective_weights(config, len(views))
    if config.objective.needs_3d:
        labels = [
            view.joints_3d.window(ref.start, ref.stop).root_relative(lifter.root_index).joints
            for view in views
        ]
        loss = combined_3d_loss(list(predictions), labels, weights, root_index=lifter.root_index)
        return loss, np.zeros(len(views))

    return placed_2d_loss(
        list(predictions),
        [view.keypoints.window(ref.start, ref.stop) for view in views],
        [view.camera for view in views],
        weights,
        log_depths,
        root_index=lifter.root_index,
    )


def window_objective(
    params: LifterParams,
    sample: MultiviewSample,
    ref: WindowRef,
    config: TrainConfig,
    lifter: LifterConfig,
    log_depths: np.ndarray,
) -> WindowResult:
    predictions, cache = forward(params, lifter, _window_inputs(sample, ref))
    loss, depth_gradient = window_loss(predictions, sample, ref, config, lifter, log_depths)
    bundle, _ = backward(params, cache, np.stack(loss.gradients))
    return WindowResult(loss.value, dict(loss.diagnostics), bundle, depth_gradient)
