"""3D-supervised terms: positional, velocity and scale-only distances in millimeters."""

from __future__ import annotations

import numpy as np
from mvlift_core import PoseSequence3D, ShapeMismatchError

from .values import LossValue, joints_of, require_same_shape, safe_unit


def _mean_norm_with_gradient(residual: np.ndarray) -> tuple[float, np.ndarray]:
    norms = np.linalg.norm(residual, axis=-1)
    return float(norms.mean()), safe_unit(residual, norms) / norms.size


def positional_loss(
    pred: PoseSequence3D | np.ndarray,
    gt: PoseSequence3D | np.ndarray,
) -> LossValue:
    p = joints_of(pred)
    g = joints_of(gt)
    require_same_shape("positional loss", p, g)
    value, gradient = _mean_norm_with_gradient(p - g)
    return LossValue(value, (gradient,))


def velocity_loss(
    pred: PoseSequence3D | np.ndarray,
    gt: PoseSequence3D | np.ndarray,
) -> LossValue:
    p = joints_of(pred)
    g = joints_of(gt)
    require_same_shape("velocity loss", p, g)
    if p.shape[0] < 2:
        raise ShapeMismatchError("velocity loss needs at least two frames")
    value, grad_residual = _mean_norm_with_gradient(np.diff(p, axis=0) - np.diff(g, axis=0))
    gradient = np.zeros_like(p)
    gradient[1:] += grad_residual
    gradient[:-1] -= grad_residual
    return LossValue(value, (gradient,))


def optimal_scales(p_centered: np.ndarray, g_centered: np.ndarray) -> np.ndarray:
    """Per-frame least-squares scalar mapping root-centered ``pred`` onto ``gt``."""
    energy = np.sum(p_centered**2, axis=(1, 2))
    if np.any(energy <= 0):
        frame = int(np.argmax(energy <= 0))
        raise ValueError(f"scale is undefined: prediction frame {frame} has no spread")
    return np.sum(p_centered * g_centered, axis=(1, 2)) / energy


def scale_loss(
    pred: PoseSequence3D | np.ndarray,
    gt: PoseSequence3D | np.ndarray,
    *,
    root_index: int = 0,
    scales: np.ndarray | None = None,
) -> LossValue:
    """Positional loss after per-frame optimal rescaling of the root-centered prediction.

    The fitted scales are constants for differentiation; pass ``scales`` to hold them fixed.
    """
    p = joints_of(pred)
    g = joints_of(gt)
    require_same_shape("scale loss", p, g)
    p_centered = p - p[:, root_index : root_index + 1]
    g_centered = g - g[:, root_index : root_index + 1]
    sigma = optimal_scales(p_centered, g_centered) if scales is None else np.asarray(scales)

    value, grad_residual = _mean_norm_with_gradient(
        sigma[:, None, None] * p_centered - g_centered
    )
    grad_centered = sigma[:, None, None] * grad_residual
    gradient = grad_centered.copy()
    gradient[:, root_index] -= grad_centered.sum(axis=1)
    return LossValue(value, (gradient,), {"mean_scale": float(sigma.mean())})


def fitted_scales(
    pred: PoseSequence3D | np.ndarray,
    gt: PoseSequence3D | np.ndarray,
    *,
    root_index: int = 0,
) -> np.ndarray:
    p = joints_of(pred)
    g = joints_of(gt)
    require_same_shape("scale fit", p, g)
    return optimal_scales(
        p - p[:, root_index : root_index + 1], g - g[:, root_index : root_index + 1]
    )
