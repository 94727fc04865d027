from __future__ import annotations

import numpy as np
from mvlift_core import PoseSequence3D, ShapeMismatchError
from mvlift_geometry import DegenerateAlignmentError, fit_points


def _joints(seq: PoseSequence3D | np.ndarray) -> np.ndarray:
    if isinstance(seq, PoseSequence3D):
        return seq.joints
    return np.asarray(seq, dtype=float)


def _checked_pair(
    pred: PoseSequence3D | np.ndarray,
    gt: PoseSequence3D | np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    p = _joints(pred)
    g = _joints(gt)
    if p.shape != g.shape or p.ndim != 3 or p.shape[-1] != 3:
        raise ShapeMismatchError(f"prediction {p.shape} does not match ground truth {g.shape}")
    if p.shape[0] == 0:
        raise ShapeMismatchError("cannot score an empty sequence")
    return p, g


def frame_mpjpe(
    pred: PoseSequence3D | np.ndarray,
    gt: PoseSequence3D | np.ndarray,
    *,
    root_index: int = 0,
) -> np.ndarray:
    """Per-frame mean joint error after root-centering both sides."""
    p, g = _checked_pair(pred, gt)
    p = p - p[:, root_index : root_index + 1]
    g = g - g[:, root_index : root_index + 1]
    return np.linalg.norm(p - g, axis=-1).mean(axis=1)


def frame_pa_mpjpe(
    pred: PoseSequence3D | np.ndarray,
    gt: PoseSequence3D | np.ndarray,
) -> np.ndarray:
    """Per-frame mean joint error after fitting one similarity transform per pose."""
    p, g = _checked_pair(pred, gt)
    errors = np.empty(p.shape[0])
    for frame, (pred_pose, gt_pose) in enumerate(zip(p, g, strict=True)):
        try:
            xf = fit_points(pred_pose, gt_pose)
        except DegenerateAlignmentError as error:
            raise DegenerateAlignmentError(
                f"frame {frame}: {error}", collapsed=error.collapsed
            ) from error
        errors[frame] = np.linalg.norm(xf.apply(pred_pose) - gt_pose, axis=-1).mean()
    return errors


def mpjpe(
    pred: PoseSequence3D | np.ndarray,
    gt: PoseSequence3D | np.ndarray,
    *,
    root_index: int = 0,
) -> float:
    return float(frame_mpjpe(pred, gt, root_index=root_index).mean())


def pa_mpjpe(pred: PoseSequence3D | np.ndarray, gt: PoseSequence3D | np.ndarray) -> float:
    return float(frame_pa_mpjpe(pred, gt).mean())
