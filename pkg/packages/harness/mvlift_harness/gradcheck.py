"""Central-difference checks of every analytic gradient.

Fitted alignments and scale factors are frozen at the base point, matching the
stop-alignment rule the analytic gradients follow.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from mvlift_camera import look_at_camera, project_points
from mvlift_contracts import LifterConfig, LossWeights
from mvlift_core import PoseSequence2D
from mvlift_losses import (
    combined_2d_loss,
    combined_3d_loss,
    consistency_loss,
    consistency_pair_loss,
    fit_pair_alignment,
    fitted_alignments,
    fitted_scales,
    positional_loss,
    reprojection_loss,
    scale_loss,
    smpl_pose_consistency,
    smpl_shape_consistency,
    velocity_loss,
)
from mvlift_model import LifterParams, backward, forward, init_params
from mvlift_trainer import image_scale, placed_2d_loss

LOSS_TOLERANCE = 1e-5
END_TO_END_TOLERANCE = 1e-4
STEP_SCALE = 1e-6

Case = tuple[np.ndarray, np.ndarray, Callable[[np.ndarray], float]]


@dataclass(frozen=True)
class GradientCheck:
    name: str
    case: int
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)


def central_difference(
    function: Callable[[np.ndarray], float],
    x: np.ndarray,
    indices: np.ndarray | None = None,
) -> np.ndarray:
    """Derivative estimates at ``x`` for the given flat indices (all when omitted)."""
    x = np.asarray(x, dtype=float)
    indices = np.arange(x.size) if indices is None else indices
    estimates = np.empty(len(indices))
    for position, index in enumerate(indices):
        step = STEP_SCALE * (1.0 + abs(x[index]))
        forward_point = x.copy()
        backward_point = x.copy()
        forward_point[index] += step
        backward_point[index] -= step
        estimates[position] = (function(forward_point) - function(backward_point)) / (2 * step)
    return estimates


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = max(float(np.linalg.norm(analytic)), float(np.linalg.norm(numeric)), 1e-12)
    return float(np.linalg.norm(analytic - numeric)) / scale


def _poses(rng: np.random.Generator, frames: int = 4, joints: int = 6) -> np.ndarray:
    return rng.normal(scale=300.0, size=(frames, joints, 3))


def _split(vector: np.ndarray, shape: tuple[int, ...], parts: int) -> list[np.ndarray]:
    return list(vector.reshape(parts, *shape))


def _camera_and_poses(rng: np.random.Generator, frames: int = 4, joints: int = 6):
    camera = look_at_camera(
        np.array([4000.0, 0.0, 1200.0]), np.array([0.0, 0.0, 900.0]), 1000.0, (1000, 1000)
    )
    world = rng.normal(scale=250.0, size=(frames, joints, 3)) + np.array([0.0, 0.0, 900.0])
    return camera, world @ camera.rotation.T + camera.translation


def _noisy_keypoints(rng, camera, points) -> PoseSequence2D:
    coords, _ = project_points(camera, points + rng.normal(scale=40.0, size=points.shape))
    return PoseSequence2D(coords, rng.uniform(0.1, 1.0, size=coords.shape[:2]))


def _consistency_pair_case(rng: np.random.Generator) -> Case:
    a, b = _poses(rng), _poses(rng)
    alignment = fit_pair_alignment(a, b)
    loss = consistency_pair_loss(a, b)

    def value(x: np.ndarray) -> float:
        first, second = _split(x, a.shape, 2)
        return consistency_pair_loss(first, second, transform=alignment).value

    return np.concatenate([a.ravel(), b.ravel()]), np.concatenate(
        [gradient.ravel() for gradient in loss.gradients]
    ), value


def _consistency_case(rng: np.random.Generator) -> Case:
    views = [_poses(rng) for _ in range(3)]
    alignments = fitted_alignments(views)
    loss = consistency_loss(views)

    def value(x: np.ndarray) -> float:
        return consistency_loss(_split(x, views[0].shape, 3), alignments=alignments).value

    return np.concatenate([view.ravel() for view in views]), np.concatenate(
        [gradient.ravel() for gradient in loss.gradients]
    ), value


def _reprojection_case(rng: np.random.Generator) -> Case:
    camera, points = _camera_and_poses(rng)
    keypoints = _noisy_keypoints(rng, camera, points)
    loss = reprojection_loss(points, keypoints, camera)

    def value(x: np.ndarray) -> float:
        return reprojection_loss(x.reshape(points.shape), keypoints, camera).value

    return points.ravel(), loss.gradient.ravel(), value


def _paired_case(loss_function) -> Callable[[np.random.Generator], Case]:
    def build(rng: np.random.Generator) -> Case:
        pred, gt = _poses(rng), _poses(rng)
        loss = loss_function(pred, gt)

        def value(x: np.ndarray) -> float:
            return loss_function(x.reshape(pred.shape), gt).value

        return pred.ravel(), loss.gradient.ravel(), value

    return build


def _scale_case(rng: np.random.Generator) -> Case:
    pred, gt = _poses(rng), _poses(rng)
    scales = fitted_scales(pred, gt)
    loss = scale_loss(pred, gt)

    def value(x: np.ndarray) -> float:
        return scale_loss(x.reshape(pred.shape), gt, scales=scales).value

    return pred.ravel(), loss.gradient.ravel(), value


def _smpl_case(loss_function, width: int) -> Callable[[np.random.Generator], Case]:
    def build(rng: np.random.Generator) -> Case:
        a = rng.normal(size=(5, width))
        b = rng.normal(size=(5, width))
        loss = loss_function(a, b)

        def value(x: np.ndarray) -> float:
            first, second = _split(x, a.shape, 2)
            return loss_function(first, second).value

        return np.concatenate([a.ravel(), b.ravel()]), np.concatenate(
            [gradient.ravel() for gradient in loss.gradients]
        ), value

    return build


def _combined_3d_case(rng: np.random.Generator) -> Case:
    preds = [_poses(rng) for _ in range(2)]
    gts = [_poses(rng) for _ in range(2)]
    weights = LossWeights.supervised_3d(lambda_con=0.2)
    alignments = fitted_alignments(preds)
    scales = [fitted_scales(pred, gt) for pred, gt in zip(preds, gts, strict=True)]
    loss = combined_3d_loss(preds, gts, weights)

    def value(x: np.ndarray) -> float:
        views = _split(x, preds[0].shape, 2)
        return combined_3d_loss(views, gts, weights, alignments=alignments, scales=scales).value

    return np.concatenate([pred.ravel() for pred in preds]), np.concatenate(
        [gradient.ravel() for gradient in loss.gradients]
    ), value


def _combined_2d_case(rng: np.random.Generator) -> Case:
    camera, points = _camera_and_poses(rng)
    preds = [points, points + rng.normal(scale=30.0, size=points.shape)]
    keypoints = [_noisy_keypoints(rng, camera, pred) for pred in preds]
    cameras = [camera, camera]
    weights = LossWeights.supervised_2d(lambda_con=0.3)
    alignments = fitted_alignments(preds)
    loss = combined_2d_loss(preds, keypoints, cameras, weights)

    def value(x: np.ndarray) -> float:
        views = _split(x, points.shape, 2)
        return combined_2d_loss(views, keypoints, cameras, weights, alignments=alignments).value

    return np.concatenate([pred.ravel() for pred in preds]), np.concatenate(
        [gradient.ravel() for gradient in loss.gradients]
    ), value


LOSS_CASES: dict[str, Callable[[np.random.Generator], Case]] = {
    "consistency_pair": _consistency_pair_case,
    "consistency": _consistency_case,
    "reprojection": _reprojection_case,
    "positional": _paired_case(positional_loss),
    "velocity": _paired_case(velocity_loss),
    "scale": _scale_case,
    "smpl_shape": _smpl_case(smpl_shape_consistency, 10),
    "smpl_pose": _smpl_case(smpl_pose_consistency, 72),
    "combined_3d": _combined_3d_case,
    "combined_2d": _combined_2d_case,
}


def check_loss_gradients(cases: int = 20, seed: int = 0) -> list[GradientCheck]:
    rng = np.random.default_rng(seed)
    checks = []
    for name, build in LOSS_CASES.items():
        for case in range(cases):
            x, analytic, value = build(rng)
            numeric = central_difference(value, x)
            checks.append(
                GradientCheck(name, case, relative_error(analytic, numeric), LOSS_TOLERANCE)
            )
    return checks


def end_to_end_lifter(case: int) -> tuple[LifterConfig, LifterParams]:
    lifter = LifterConfig(window_frames=3, hidden_sizes=[8], init_seed=case)
    params = init_params(lifter)
    rng = np.random.default_rng(case)
    perturbed = params.flatten() + rng.normal(scale=0.05, size=params.size)
    return lifter, LifterParams.unflatten(perturbed, params.shapes)


def _end_to_end_case(rng: np.random.Generator, case: int, supervision: str):
    lifter, params = end_to_end_lifter(case)
    inputs = rng.uniform(-0.4, 0.4, size=(2, lifter.window_frames, lifter.joint_count, 2))
    predictions, cache = forward(params, lifter, inputs)
    shape = predictions.shape[1:]

    if supervision == "3d":
        gts = [rng.normal(scale=300.0, size=shape) for _ in range(2)]
        weights = LossWeights.supervised_3d(lambda_con=0.2)
        alignments = fitted_alignments(list(predictions))
        scales = [fitted_scales(pred, gt) for pred, gt in zip(predictions, gts, strict=True)]

        def objective(views, frozen: bool):
            if frozen:
                return combined_3d_loss(
                    list(views), gts, weights, alignments=alignments, scales=scales
                )
            return combined_3d_loss(list(views), gts, weights)

    else:
        camera = look_at_camera(
            np.array([4000.0, 0.0, 1200.0]), np.array([0.0, 0.0, 900.0]), 1000.0, (1000, 1000)
        )
        root = np.array([0.0, 0.0, 8000.0])
        keypoints = [
            _noisy_keypoints(rng, camera, rng.normal(scale=300.0, size=shape) + root)
            for _ in range(2)
        ]
        weights = LossWeights.supervised_2d(lambda_con=0.3)
        log_depths = np.full(2, np.log(root[2]))
        scale = image_scale(camera, root[2])
        alignments = fitted_alignments([scale * view for view in predictions])

        def objective(views, frozen: bool):
            loss, _ = placed_2d_loss(
                list(views),
                keypoints,
                [camera, camera],
                weights,
                log_depths,
                alignments=alignments if frozen else None,
            )
            return loss

    loss = objective(predictions, frozen=False)
    bundle, _ = backward(params, cache, np.stack(loss.gradients))

    def value(vector: np.ndarray) -> float:
        candidate = LifterParams.unflatten(vector, params.shapes)
        views, _ = forward(candidate, lifter, inputs)
        return objective(views, frozen=True).value

    return params.flatten(), bundle.flatten(), value


def check_end_to_end_gradients(
    cases: int = 20,
    seed: int = 0,
    coordinates: int = 32,
) -> list[GradientCheck]:
    """Loss-through-lifter parameter gradients on a random subset of coordinates."""
    rng = np.random.default_rng(seed)
    checks = []
    for supervision in ("3d", "2d"):
        for case in range(cases):
            x, analytic, value = _end_to_end_case(rng, case, supervision)
            indices = rng.choice(x.size, size=min(coordinates, x.size), replace=False)
            numeric = central_difference(value, x, indices)
            checks.append(
                GradientCheck(
                    f"end_to_end_{supervision}",
                    case,
                    relative_error(analytic[indices], numeric),
                    END_TO_END_TOLERANCE,
                )
            )
    return checks


def summarize(checks: list[GradientCheck]) -> dict:
    by_name: dict[str, list[GradientCheck]] = {}
    for check in checks:
        by_name.setdefault(check.name, []).append(check)
    return {
        "passed": all(check.passed for check in checks),
        "checks": [
            {
                "name": name,
                "cases": len(group),
                "maxRelativeError": max(check.error for check in group),
                "tolerance": group[0].tolerance,
                "passed": all(check.passed for check in group),
            }
            for name, group in by_name.items()
        ],
    }
