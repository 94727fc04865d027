from __future__ import annotations

import numpy as np
from mvlift_core import PoseSequence3D, ShapeMismatchError

from .transform import SimilarityTransform

DEGENERACY_RATIO = 1e-9
# Sum of squared deviations (mm^2) below which a point set counts as a single point.
COLLAPSE_TOLERANCE = 1e-18


class DegenerateAlignmentError(ValueError):
    """No unique similarity fit exists.

    ``collapsed`` marks the case where one side has no spread at all; the least-squares
    infimum is then reached by scale zero and the target centroid.
    """

    def __init__(self, message: str, *, collapsed: bool = False) -> None:
        super().__init__(message)
        self.collapsed = collapsed


def _stacked(seq: PoseSequence3D | np.ndarray) -> np.ndarray:
    joints = seq.joints if isinstance(seq, PoseSequence3D) else np.asarray(seq, dtype=float)
    return joints.reshape(-1, 3)


def fit_points(source: np.ndarray, target: np.ndarray) -> SimilarityTransform:
    """Closed-form least-squares similarity mapping ``source`` rows onto ``target`` rows."""
    source = np.asarray(source, dtype=float)
    target = np.asarray(target, dtype=float)
    if source.shape != target.shape or source.ndim != 2 or source.shape[1] != 3:
        raise ShapeMismatchError(
            f"cannot align point sets of shapes {source.shape} and {target.shape}"
        )
    source_mean = source.mean(axis=0)
    target_mean = target.mean(axis=0)
    source_centered = source - source_mean
    target_centered = target - target_mean

    source_variance = float(np.sum(source_centered**2))
    if source_variance <= COLLAPSE_TOLERANCE:
        raise DegenerateAlignmentError("source points coincide", collapsed=True)
    if float(np.sum(target_centered**2)) <= COLLAPSE_TOLERANCE:
        raise DegenerateAlignmentError("target points coincide", collapsed=True)
    spread = np.linalg.svd(source_centered.T @ source_centered, compute_uv=False)
    if spread[1] < DEGENERACY_RATIO * spread[0]:
        raise DegenerateAlignmentError("source points are collinear")

    covariance = source_centered.T @ target_centered
    u, singular_values, vt = np.linalg.svd(covariance)
    correction = np.ones(3)
    if np.linalg.det(u @ vt) < 0:
        correction[-1] = -1.0
    rotation = (u * correction) @ vt
    scale = float(np.sum(singular_values * correction)) / source_variance
    if not scale > 0:
        raise DegenerateAlignmentError("optimal scale is not positive", collapsed=True)
    translation = target_mean - scale * source_mean @ rotation
    return SimilarityTransform(scale, rotation, translation)


def procrustes_fit(
    source: PoseSequence3D | np.ndarray,
    target: PoseSequence3D | np.ndarray,
) -> SimilarityTransform:
    """One similarity transform for the whole sequence, all ``n * J`` joints weighted equally."""
    source_joints = source.joints if isinstance(source, PoseSequence3D) else np.asarray(source)
    target_joints = target.joints if isinstance(target, PoseSequence3D) else np.asarray(target)
    if source_joints.shape != target_joints.shape:
        raise ShapeMismatchError(
            f"sequence shapes differ: {source_joints.shape} vs {target_joints.shape}"
        )
    return fit_points(_stacked(source_joints), _stacked(target_joints))


def alignment_objective(
    xf: SimilarityTransform,
    source: PoseSequence3D | np.ndarray,
    target: PoseSequence3D | np.ndarray,
) -> float:
    """Sum of squared joint distances after applying ``xf`` to ``source``."""
    return float(np.sum((xf.apply(_stacked(source)) - _stacked(target)) ** 2))


def aligned_residuals(
    source: PoseSequence3D | np.ndarray,
    target: PoseSequence3D | np.ndarray,
) -> np.ndarray:
    """Per-frame, per-joint distance ``(n, J)`` after the sequence-level fit."""
    xf = procrustes_fit(source, target)
    source_joints = source.joints if isinstance(source, PoseSequence3D) else np.asarray(source)
    target_joints = target.joints if isinstance(target, PoseSequence3D) else np.asarray(target)
    return np.linalg.norm(xf.apply(source_joints) - target_joints, axis=-1)
