"""Weighted training objectives over all views of one sequence.

Supervised terms are averaged over views; the consistency term is added on top with
``lambda_con``. A zero weight skips its term entirely, so single-view batches work
whenever ``lambda_con`` is zero.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np
from mvlift_contracts import CameraModel, LossWeights
from mvlift_core import PoseSequence2D, PoseSequence3D, ShapeMismatchError

from .consistency import Alignments, consistency_loss
from .reprojection import reprojection_loss
from .supervised import positional_loss, scale_loss, velocity_loss
from .values import LossValue, joints_of, weighted_sum

Terms = list[tuple[float, LossValue, Sequence[int]]]


def _view_averaged(
    name: str,
    weight: float,
    term: Callable[[int], LossValue],
    view_count: int,
    terms: Terms,
    components: dict[str, float],
) -> None:
    if weight <= 0:
        return
    total = 0.0
    for view in range(view_count):
        value = term(view)
        terms.append((weight / view_count, value, (view,)))
        total += value.value
    components[name] = total / view_count


def _add_consistency(
    weight: float,
    views: list[np.ndarray],
    alignments: Alignments | None,
    terms: Terms,
    components: dict[str, float],
) -> None:
    if weight <= 0:
        return
    consistency = consistency_loss(views, alignments=alignments)
    terms.append((weight, consistency, tuple(range(len(views)))))
    components["con"] = consistency.value


def combined_3d_loss(
    preds: Sequence[PoseSequence3D | np.ndarray],
    gts: Sequence[PoseSequence3D | np.ndarray],
    weights: LossWeights,
    *,
    root_index: int = 0,
    alignments: Alignments | None = None,
    scales: Sequence[np.ndarray] | None = None,
) -> LossValue:
    """Positional, velocity and scale terms per view plus cross-view consistency.

    ``alignments`` and ``scales`` hold the fitted consistency alignments and per-view
    scale factors fixed instead of refitting them.
    """
    views = [joints_of(pred) for pred in preds]
    targets = [joints_of(gt) for gt in gts]
    if len(views) != len(targets) or not views:
        raise ShapeMismatchError(f"{len(views)} predicted views but {len(targets)} targets")
    terms: Terms = []
    components: dict[str, float] = {}
    count = len(views)

    def positional(view: int) -> LossValue:
        return positional_loss(views[view], targets[view])

    def velocity(view: int) -> LossValue:
        return velocity_loss(views[view], targets[view])

    def scale(view: int) -> LossValue:
        fixed = None if scales is None else scales[view]
        return scale_loss(views[view], targets[view], root_index=root_index, scales=fixed)

    _view_averaged("pos", weights.lambda_pos, positional, count, terms, components)
    _view_averaged("vel", weights.lambda_vel, velocity, count, terms, components)
    _view_averaged("scale", weights.lambda_scale, scale, count, terms, components)
    _add_consistency(weights.lambda_con, views, alignments, terms, components)
    return weighted_sum(terms, [view.shape for view in views], components)


def combined_2d_loss(
    preds: Sequence[PoseSequence3D | np.ndarray],
    gt_2d: Sequence[PoseSequence2D],
    cams: Sequence[CameraModel],
    weights: LossWeights,
    *,
    alignments: Alignments | None = None,
) -> LossValue:
    """Reprojection against each view's keypoints plus cross-view consistency.

    ``preds`` are camera-frame poses, one per view, in the frame of the matching camera.
    """
    views = [joints_of(pred) for pred in preds]
    if not views or not len(views) == len(gt_2d) == len(cams):
        raise ShapeMismatchError(
            f"{len(views)} predicted views, {len(gt_2d)} keypoint views, {len(cams)} cameras"
        )
    terms: Terms = []
    components: dict[str, float] = {}
    behind = 0.0

    def reprojection(view: int) -> LossValue:
        nonlocal behind
        value = reprojection_loss(views[view], gt_2d[view], cams[view])
        behind += value.diagnostics["behind_camera"]
        return value

    _view_averaged(
        "reproj", weights.lambda_2d_reproj, reprojection, len(views), terms, components
    )
    _add_consistency(weights.lambda_con, views, alignments, terms, components)
    components["behind_camera"] = behind
    return weighted_sum(terms, [view.shape for view in views], components)
