"""Pinhole projection into aspect-preserving normalized image units.

Pixels map to normalized units by dividing both axes by half the image width:
``u_n = 2u / W - 1`` and ``v_n = 2v / W - H / W``. A square in pixels stays square.
"""

from __future__ import annotations

import numpy as np
from mvlift_contracts import CameraModel
from mvlift_core import Pose2D, Pose3D, PoseSequence2D, PoseSequence3D


class BehindCameraError(ValueError):
    pass


def look_at_camera(
    position: np.ndarray,
    target: np.ndarray,
    focal_px: float,
    resolution: tuple[int, int],
    up: tuple[float, float, float] = (0.0, 0.0, 1.0),
) -> CameraModel:
    """Camera at ``position`` (world, z up) looking at ``target``; image y points down."""
    position = np.asarray(position, dtype=float)
    forward = np.asarray(target, dtype=float) - position
    forward /= np.linalg.norm(forward)
    right = np.cross(forward, np.asarray(up, dtype=float))
    norm = np.linalg.norm(right)
    if norm < 1e-12:
        raise ValueError("camera viewing direction is parallel to the up vector")
    right /= norm
    down = np.cross(forward, right)
    rotation = np.stack([right, down, forward])
    width, height = resolution
    return CameraModel(
        rotation_wc=rotation.tolist(),
        translation_wc=(-rotation @ position).tolist(),
        focal=(focal_px, focal_px),
        principal=(width / 2, height / 2),
        resolution=(width, height),
    )


def world_to_camera(cam: CameraModel, seq: PoseSequence3D) -> PoseSequence3D:
    return seq.with_joints(seq.joints @ cam.rotation.T + cam.translation)


def camera_to_world(cam: CameraModel, seq: PoseSequence3D) -> PoseSequence3D:
    return seq.with_joints((seq.joints - cam.translation) @ cam.rotation)


def project_points(cam: CameraModel, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Normalized projection of ``(..., 3)`` camera-frame points.

    Returns ``(coords, in_front)``; coordinates of points with nonpositive depth are NaN.
    """
    points = np.asarray(points, dtype=float)
    fx, fy = cam.focal
    cx, cy = cam.principal
    width, height = cam.resolution
    depth = points[..., 2]
    in_front = depth > 0
    safe_depth = np.where(in_front, depth, 1.0)
    u = fx * points[..., 0] / safe_depth + cx
    v = fy * points[..., 1] / safe_depth + cy
    coords = np.stack([2 * u / width - 1, 2 * v / width - height / width], axis=-1)
    coords[~in_front] = np.nan
    return coords, in_front


def project_to_normalized(cam: CameraModel, pose: Pose3D) -> tuple[Pose2D, np.ndarray]:
    """Project one camera-frame pose; also returns the per-joint behind-camera flags."""
    coords, in_front = project_points(cam, pose.coords)
    return Pose2D(coords, np.ones(pose.joint_count)), ~in_front


def project_sequence(cam: CameraModel, seq: PoseSequence3D) -> PoseSequence2D:
    coords, in_front = project_points(cam, seq.joints)
    if not np.all(in_front):
        frame, joint = (int(index[0]) for index in np.nonzero(~in_front))
        raise BehindCameraError(f"joint {joint} in frame {frame} is behind the camera")
    return PoseSequence2D(coords, np.ones(coords.shape[:2]), seq.frame_rate_hz)


def unproject_normalized(cam: CameraModel, coords: np.ndarray, depths: np.ndarray) -> np.ndarray:
    """Camera-frame points for normalized ``(..., 2)`` coordinates at the given depths."""
    coords = np.asarray(coords, dtype=float)
    depths = np.asarray(depths, dtype=float)
    fx, fy = cam.focal
    cx, cy = cam.principal
    width, height = cam.resolution
    u = (coords[..., 0] + 1) * width / 2
    v = (coords[..., 1] + height / width) * width / 2
    return np.stack([(u - cx) * depths / fx, (v - cy) * depths / fy, depths], axis=-1)


def projection_jacobian(cam: CameraModel, point: np.ndarray) -> np.ndarray:
    """``d(u_n, v_n) / d(x, y, z)`` as a 2x3 matrix."""
    jacobians = projection_jacobians(cam, np.asarray(point, dtype=float)[None, :])
    return jacobians[0]


def projection_jacobians(cam: CameraModel, points: np.ndarray) -> np.ndarray:
    """Batched Jacobians ``(..., 2, 3)``; raises on any nonpositive depth."""
    points = np.asarray(points, dtype=float)
    x, y, z = points[..., 0], points[..., 1], points[..., 2]
    if np.any(z <= 0):
        raise BehindCameraError("projection Jacobian is undefined for nonpositive depth")
    fx, fy = cam.focal
    width = cam.resolution[0]
    ax = 2 * fx / width
    ay = 2 * fy / width
    jacobians = np.zeros(points.shape[:-1] + (2, 3))
    jacobians[..., 0, 0] = ax / z
    jacobians[..., 0, 2] = -ax * x / z**2
    jacobians[..., 1, 1] = ay / z
    jacobians[..., 1, 2] = -ay * y / z**2
    return jacobians
