"""Parameter-space consistency for body-model predictions; no alignment is applied."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from mvlift_core import ShapeMismatchError, canonical_pairs

from .values import LossValue, safe_unit

SHAPE_COEFFICIENTS = 10
POSE_PARAMETERS = 72


@dataclass(frozen=True, eq=False)
class SmplParams:
    betas: np.ndarray
    thetas: np.ndarray

    def __post_init__(self) -> None:
        betas = np.atleast_2d(np.asarray(self.betas, dtype=float))
        thetas = np.atleast_2d(np.asarray(self.thetas, dtype=float))
        if betas.shape[-1] != SHAPE_COEFFICIENTS:
            raise ShapeMismatchError(f"betas need {SHAPE_COEFFICIENTS} coefficients")
        if thetas.shape[-1] != POSE_PARAMETERS:
            raise ShapeMismatchError(f"thetas need {POSE_PARAMETERS} values per frame")
        if betas.shape[0] not in (1, thetas.shape[0]):
            raise ShapeMismatchError("one shape estimate or one per frame is required")
        if not (np.all(np.isfinite(betas)) and np.all(np.isfinite(thetas))):
            raise ValueError("body-model parameters must be finite")
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "thetas", thetas)

    @property
    def frame_count(self) -> int:
        return self.thetas.shape[0]


def _mean_row_distance(label: str, first, second) -> LossValue:
    a = np.atleast_2d(np.asarray(first, dtype=float))
    b = np.atleast_2d(np.asarray(second, dtype=float))
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{label}: shapes {a.shape} and {b.shape} differ")
    difference = a - b
    norms = np.linalg.norm(difference, axis=-1)
    unit = safe_unit(difference, norms) / norms.size
    return LossValue(float(norms.mean()), (unit, -unit))


def smpl_shape_consistency(betas_a, betas_b) -> LossValue:
    return _mean_row_distance("shape consistency", betas_a, betas_b)


def smpl_pose_consistency(thetas_a, thetas_b) -> LossValue:
    return _mean_row_distance("pose consistency", thetas_a, thetas_b)


def smpl_multiview_consistency(
    params: Sequence[SmplParams],
    *,
    shape_weight: float = 1.0,
    pose_weight: float = 1.0,
) -> LossValue:
    """Weighted shape and pose consistency averaged over canonical view pairs.

    Gradients are ordered ``(betas_0, thetas_0, betas_1, thetas_1, ...)``.
    """
    pairs = canonical_pairs(len(params))
    gradients: list[np.ndarray] = []
    for view in params:
        gradients.extend((np.zeros_like(view.betas), np.zeros_like(view.thetas)))
    shape_total = pose_total = 0.0
    for a, b in pairs:
        shape = smpl_shape_consistency(params[a].betas, params[b].betas)
        pose = smpl_pose_consistency(params[a].thetas, params[b].thetas)
        shape_total += shape.value
        pose_total += pose.value
        gradients[2 * a] += shape_weight * shape.gradients[0]
        gradients[2 * b] += shape_weight * shape.gradients[1]
        gradients[2 * a + 1] += pose_weight * pose.gradients[0]
        gradients[2 * b + 1] += pose_weight * pose.gradients[1]
    pair_count = len(pairs)
    return LossValue(
        (shape_weight * shape_total + pose_weight * pose_total) / pair_count,
        tuple(gradient / pair_count for gradient in gradients),
        {"shape": shape_total / pair_count, "pose": pose_total / pair_count},
    )
