"""Deterministic synthetic motion capture: forward-kinematics motion seen by a camera ring.

Motion is built on a fixed rest skeleton. Every non-leaf joint carries a local rotation made
of a static bend plus a sinusoid about a seeded axis, so bone lengths never change. The root
follows a heading-aligned travel, a lateral sway and an optional ballistic hop.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from mvlift_camera import look_at_camera, project_points, world_to_camera
from mvlift_contracts import (
    CameraModel,
    DetectionNoiseSpec,
    MotionSpec,
    RigSpec,
    Skeleton,
)
from mvlift_core import (
    H36M_SKELETON,
    MultiviewSample,
    PoseSequence2D,
    PoseSequence3D,
    ViewRecording,
)
from scipy.spatial.transform import Rotation

from .errors import RenderError

logger = logging.getLogger(__name__)

# Bone offsets from each joint's parent in the rest pose, millimeters, world z up.
H36M_REST_OFFSETS = {
    "pelvis": (0.0, 0.0, 0.0),
    "spine": (0.0, 0.0, 230.0),
    "thorax": (0.0, 0.0, 250.0),
    "neck": (0.0, 0.0, 110.0),
    "head": (0.0, 0.0, 120.0),
    "left_hip": (130.0, 0.0, 0.0),
    "left_knee": (0.0, 0.0, -450.0),
    "left_ankle": (0.0, 0.0, -440.0),
    "right_hip": (-130.0, 0.0, 0.0),
    "right_knee": (0.0, 0.0, -450.0),
    "right_ankle": (0.0, 0.0, -440.0),
    "left_shoulder": (160.0, 0.0, -20.0),
    "left_elbow": (0.0, 0.0, -280.0),
    "left_wrist": (0.0, 0.0, -250.0),
    "right_shoulder": (-160.0, 0.0, -20.0),
    "right_elbow": (0.0, 0.0, -280.0),
    "right_wrist": (0.0, 0.0, -250.0),
}
REST_OFFSETS = {H36M_SKELETON.name: H36M_REST_OFFSETS}
PELVIS_HEIGHT_MM = 930.0
DEFAULT_LIMB_AMPLITUDE = 0.1
STATIC_BEND_RAD = 0.15
SWAY_MM = 40.0

ACTIVITY_PRESETS: dict[str, dict] = {
    "soccer_kick": {
        "frequency_hz": 0.8,
        "limb_amplitudes": {
            "right_hip": 0.9,
            "right_knee": 0.7,
            "left_shoulder": 0.4,
            "right_shoulder": 0.4,
            "spine": 0.15,
        },
    },
    "tennis_serve": {
        "frequency_hz": 0.6,
        "limb_amplitudes": {
            "right_shoulder": 1.2,
            "right_elbow": 0.8,
            "left_shoulder": 0.5,
            "spine": 0.3,
        },
    },
    "baseball_pitch": {
        "frequency_hz": 0.7,
        "limb_amplitudes": {
            "right_shoulder": 1.1,
            "right_elbow": 0.9,
            "left_hip": 0.5,
            "spine": 0.35,
        },
    },
    "volley": {
        "frequency_hz": 1.0,
        "jump_height_mm": 150.0,
        "limb_amplitudes": {
            "left_shoulder": 0.9,
            "right_shoulder": 0.9,
            "left_elbow": 0.4,
            "right_elbow": 0.4,
            "left_hip": 0.3,
            "right_hip": 0.3,
        },
    },
    "jumping": {
        "frequency_hz": 1.2,
        "jump_height_mm": 350.0,
        "root_travel_mm": 0.0,
        "limb_amplitudes": {
            "left_hip": 0.4,
            "right_hip": 0.4,
            "left_knee": 0.6,
            "right_knee": 0.6,
            "left_shoulder": 0.6,
            "right_shoulder": 0.6,
        },
    },
}


def motion_preset(
    activity: str,
    seed: int,
    frame_count: int = 120,
    *,
    subject: str | None = None,
    frame_rate_hz: float = 50.0,
    heading_deg: float = 0.0,
) -> MotionSpec:
    try:
        preset = ACTIVITY_PRESETS[activity]
    except KeyError as error:
        known = ", ".join(sorted(ACTIVITY_PRESETS))
        raise KeyError(f"unknown activity {activity!r}; known: {known}") from error
    return MotionSpec(
        activity_label=activity,
        frame_count=frame_count,
        frame_rate_hz=frame_rate_hz,
        seed=seed,
        subject=subject,
        heading_deg=heading_deg,
        **preset,
    )


def _rest_offsets(skeleton: Skeleton) -> np.ndarray:
    try:
        offsets = REST_OFFSETS[skeleton.name]
    except KeyError as error:
        raise ValueError(f"no rest pose is defined for skeleton {skeleton.name}") from error
    return np.array([offsets[name] for name in skeleton.joint_names])


def _root_trajectory(spec: MotionSpec, times: np.ndarray) -> np.ndarray:
    heading = math.radians(spec.heading_deg)
    forward = np.array([math.cos(heading), math.sin(heading), 0.0])
    lateral = np.array([-math.sin(heading), math.cos(heading), 0.0])
    duration = (spec.frame_count - 1) / spec.frame_rate_hz
    phase = 2 * math.pi * spec.frequency_hz * times
    travel = spec.root_travel_mm * (times / duration - 0.5)
    hop = np.modf(spec.frequency_hz * times)[0]
    lift = spec.jump_height_mm * 4.0 * hop * (1.0 - hop)
    offset = (
        travel[:, None] * forward
        + SWAY_MM * np.sin(phase)[:, None] * lateral
        + lift[:, None] * np.array([0.0, 0.0, 1.0])
    )
    return np.array([0.0, 0.0, PELVIS_HEIGHT_MM]) + spec.amplitude * offset


def generate_motion(spec: MotionSpec, skeleton: Skeleton = H36M_SKELETON) -> PoseSequence3D:
    """World-frame joint trajectories for ``spec``; a pure function of the spec."""
    offsets = _rest_offsets(skeleton)
    rng = np.random.default_rng(spec.seed)
    times = np.arange(spec.frame_count) / spec.frame_rate_hz
    omega = 2 * math.pi * spec.frequency_hz

    local: list[Rotation] = []
    for name in skeleton.joint_names:
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        bend = rng.normal(scale=STATIC_BEND_RAD, size=3)
        phase = rng.uniform(0.0, 2 * math.pi)
        limb = spec.limb_amplitudes.get(name, DEFAULT_LIMB_AMPLITUDE)
        swing = spec.amplitude * limb * np.sin(omega * times + phase)
        local.append(Rotation.from_rotvec(bend + swing[:, None] * axis))

    heading = Rotation.from_euler("z", spec.heading_deg, degrees=True)
    joints = np.zeros((spec.frame_count, skeleton.joint_count, 3))
    world: dict[int, Rotation] = {}
    for joint in skeleton.topological_order():
        parent = skeleton.parent_index[joint]
        if parent is None:
            world[joint] = heading * local[joint]
            joints[:, joint] = _root_trajectory(spec, times)
            continue
        joints[:, joint] = joints[:, parent] + world[parent].apply(offsets[joint])
        world[joint] = world[parent] * local[joint]
    return PoseSequence3D(joints, spec.frame_rate_hz)


def rig_cameras(rig: RigSpec) -> list[tuple[str, CameraModel]]:
    """Cameras on a ring of ``radius_mm`` around ``look_at``, all aimed at it."""
    target = np.asarray(rig.look_at, dtype=float)
    cameras = []
    for view_id, azimuth in zip(rig.view_ids, rig.azimuths_deg, strict=True):
        angle = math.radians(azimuth)
        position = np.array(
            [
                target[0] + rig.radius_mm * math.cos(angle),
                target[1] + rig.radius_mm * math.sin(angle),
                rig.height_mm,
            ]
        )
        cameras.append(
            (view_id, look_at_camera(position, target, rig.focal_px, rig.resolution))
        )
    return cameras


def render_sample(
    motion: PoseSequence3D,
    rig: RigSpec,
    *,
    sequence_id: str = "synthetic",
    activity: str = "unlabeled",
    subject: str = "S00",
    skeleton: Skeleton = H36M_SKELETON,
) -> MultiviewSample:
    views = []
    names = rig.view_names or [None] * rig.camera_count
    for (view_id, camera), name in zip(rig_cameras(rig), names, strict=True):
        camera_joints = world_to_camera(camera, motion)
        coords, in_front = project_points(camera, camera_joints.joints)
        if not np.all(in_front):
            frame, joint = (int(index[0]) for index in np.nonzero(~in_front))
            raise RenderError(
                f"{sequence_id}: joint {skeleton.joint_names[joint]} in frame {frame} "
                f"is behind camera {view_id}"
            )
        views.append(
            ViewRecording(
                view_id=view_id,
                camera=camera,
                keypoints=PoseSequence2D(coords, None, motion.frame_rate_hz),
                joints_3d=camera_joints,
                joints_world=motion,
                name=name,
            )
        )
    return MultiviewSample(
        sequence_id=sequence_id,
        views=tuple(views),
        skeleton=skeleton,
        activity=activity,
        subject=subject,
    )


def sequence_id_for(spec: MotionSpec, index: int) -> str:
    return f"{spec.activity_label}-{spec.subject_id}-{index:03d}"


def generate_dataset(
    rig: RigSpec,
    motions: Sequence[MotionSpec],
    skeleton: Skeleton = H36M_SKELETON,
) -> list[MultiviewSample]:
    samples = [
        render_sample(
            generate_motion(spec, skeleton),
            rig,
            sequence_id=sequence_id_for(spec, index),
            activity=spec.activity_label,
            subject=spec.subject_id,
            skeleton=skeleton,
        )
        for index, spec in enumerate(motions)
    ]
    logger.info(
        "Generated %s samples, %s views each, %s frames",
        len(samples),
        rig.camera_count,
        sum(sample.frame_count for sample in samples),
    )
    return samples


def perturb_keypoints(
    sample: MultiviewSample,
    noise: DetectionNoiseSpec,
    seed: int,
) -> MultiviewSample:
    """Simulated detector output: pixel noise plus confidences that fall with its size."""
    rng = np.random.default_rng(seed)
    views = []
    for view in sample.views:
        keypoints = view.keypoints
        shape = keypoints.keypoints.shape
        sigma = np.where(
            rng.random(shape[:2]) < noise.outlier_rate,
            noise.outlier_sigma_px,
            noise.sigma_px,
        )
        offset_px = rng.normal(size=shape) * sigma[..., None]
        width = view.camera.resolution[0]
        distance_px = np.linalg.norm(offset_px, axis=-1)
        confidence = 1.0 / (1.0 + (distance_px / noise.confidence_scale_px) ** 2)
        perturbed = PoseSequence2D(
            keypoints.keypoints + offset_px * 2.0 / width,
            confidence,
            keypoints.frame_rate_hz,
        )
        views.append(
            ViewRecording(
                view_id=view.view_id,
                camera=view.camera,
                keypoints=perturbed,
                joints_3d=view.joints_3d,
                joints_world=view.joints_world,
                name=view.name,
            )
        )
    return sample.with_views(tuple(views))
