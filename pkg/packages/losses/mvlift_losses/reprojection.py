from __future__ import annotations

import logging

import numpy as np
from mvlift_camera import project_points, projection_jacobians
from mvlift_contracts import CameraModel
from mvlift_core import PoseSequence2D, PoseSequence3D, ShapeMismatchError

from .values import LossValue, joints_of, safe_unit

logger = logging.getLogger(__name__)


def reprojection_loss(
    pred_3d: PoseSequence3D | np.ndarray,
    gt_2d: PoseSequence2D,
    cam: CameraModel,
) -> LossValue:
    """Confidence-weighted mean distance between projected predictions and 2D keypoints.

    Joints at nonpositive depth contribute nothing; their count is reported as the
    ``behind_camera`` diagnostic.
    """
    points = joints_of(pred_3d)
    if points.shape[:2] != gt_2d.keypoints.shape[:2] or points.shape[-1] != 3:
        raise ShapeMismatchError(
            f"reprojection: prediction {points.shape} does not match keypoints "
            f"{gt_2d.keypoints.shape}"
        )
    coords, in_front = project_points(cam, points)
    behind = int(np.count_nonzero(~in_front))
    if behind:
        logger.warning("Masked %s behind-camera joints in reprojection loss", behind)

    difference = np.where(in_front[..., None], coords - gt_2d.keypoints, 0.0)
    distances = np.linalg.norm(difference, axis=-1)
    confidence = np.where(in_front, gt_2d.confidence, 0.0)
    count = distances.size
    value = float(np.sum(confidence * distances) / count)

    grad_coords = confidence[..., None] * safe_unit(difference, distances) / count
    safe_points = np.where(in_front[..., None], points, np.array([0.0, 0.0, 1.0]))
    jacobians = projection_jacobians(cam, safe_points)
    gradient = np.einsum("...i,...ij->...j", grad_coords, jacobians)
    return LossValue(value, (gradient,), {"behind_camera": float(behind)})
