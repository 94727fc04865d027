from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from mvlift_contracts import CameraModel, Skeleton

from .errors import ShapeMismatchError
from .skeletons import H36M_SKELETON


def _frozen_array(values, shape_suffix: tuple[int, ...], label: str) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != len(shape_suffix) or any(
        expected is not None and actual != expected
        for actual, expected in zip(array.shape, shape_suffix, strict=True)
    ):
        raise ShapeMismatchError(f"{label} has shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Pose3D:
    """One frame of joints, ``(J, 3)`` millimeters in a camera or world frame."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", _frozen_array(self.coords, (None, 3), "Pose3D"))

    @property
    def joint_count(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True, eq=False)
class Pose2D:
    """One frame of keypoints in normalized image units with per-joint confidence."""

    coords: np.ndarray
    confidence: np.ndarray | None = None

    def __post_init__(self) -> None:
        coords = _frozen_array(self.coords, (None, 2), "Pose2D")
        if self.confidence is None:
            confidence = np.ones(coords.shape[0])
            confidence.setflags(write=False)
        else:
            confidence = _frozen_array(self.confidence, (coords.shape[0],), "Pose2D confidence")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "confidence", confidence)

    @property
    def joint_count(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True, eq=False)
class PoseSequence3D:
    joints: np.ndarray
    frame_rate_hz: float = 50.0

    def __post_init__(self) -> None:
        joints = _frozen_array(self.joints, (None, None, 3), "PoseSequence3D")
        if joints.shape[0] < 1:
            raise ShapeMismatchError("a pose sequence needs at least one frame")
        if self.frame_rate_hz <= 0:
            raise ValueError("frame rate must be positive")
        object.__setattr__(self, "joints", joints)

    @classmethod
    def from_frames(cls, frames: list[Pose3D], frame_rate_hz: float = 50.0) -> PoseSequence3D:
        return cls(np.stack([frame.coords for frame in frames]), frame_rate_hz)

    @property
    def frame_count(self) -> int:
        return self.joints.shape[0]

    @property
    def joint_count(self) -> int:
        return self.joints.shape[1]

    @property
    def frames(self) -> list[Pose3D]:
        return [Pose3D(frame) for frame in self.joints]

    def with_joints(self, joints: np.ndarray) -> PoseSequence3D:
        return PoseSequence3D(joints, self.frame_rate_hz)

    def window(self, start: int, stop: int) -> PoseSequence3D:
        return PoseSequence3D(self.joints[start:stop], self.frame_rate_hz)

    def root_relative(self, root_index: int = 0) -> PoseSequence3D:
        return self.with_joints(self.joints - self.joints[:, root_index : root_index + 1])


@dataclass(frozen=True, eq=False)
class PoseSequence2D:
    keypoints: np.ndarray
    confidence: np.ndarray | None = None
    frame_rate_hz: float = 50.0

    def __post_init__(self) -> None:
        keypoints = _frozen_array(self.keypoints, (None, None, 2), "PoseSequence2D")
        if keypoints.shape[0] < 1:
            raise ShapeMismatchError("a pose sequence needs at least one frame")
        if self.confidence is None:
            confidence = np.ones(keypoints.shape[:2])
            confidence.setflags(write=False)
        else:
            confidence = _frozen_array(
                self.confidence, keypoints.shape[:2], "PoseSequence2D confidence"
            )
        if self.frame_rate_hz <= 0:
            raise ValueError("frame rate must be positive")
        object.__setattr__(self, "keypoints", keypoints)
        object.__setattr__(self, "confidence", confidence)

    @classmethod
    def from_frames(cls, frames: list[Pose2D], frame_rate_hz: float = 50.0) -> PoseSequence2D:
        return cls(
            np.stack([frame.coords for frame in frames]),
            np.stack([frame.confidence for frame in frames]),
            frame_rate_hz,
        )

    @property
    def frame_count(self) -> int:
        return self.keypoints.shape[0]

    @property
    def joint_count(self) -> int:
        return self.keypoints.shape[1]

    @property
    def frames(self) -> list[Pose2D]:
        return [
            Pose2D(coords, confidence)
            for coords, confidence in zip(self.keypoints, self.confidence, strict=True)
        ]

    def window(self, start: int, stop: int) -> PoseSequence2D:
        return PoseSequence2D(
            self.keypoints[start:stop], self.confidence[start:stop], self.frame_rate_hz
        )


@dataclass(frozen=True, eq=False)
class ViewRecording:
    view_id: str
    camera: CameraModel
    keypoints: PoseSequence2D
    joints_3d: PoseSequence3D | None = None
    joints_world: PoseSequence3D | None = None
    name: str | None = None

    @property
    def frame_count(self) -> int:
        return self.keypoints.frame_count


@dataclass(frozen=True, eq=False)
class MultiviewSample:
    """Synchronized recordings of one sequence from one or more cameras."""

    sequence_id: str
    views: tuple[ViewRecording, ...]
    skeleton: Skeleton = field(default=H36M_SKELETON)
    activity: str = "unlabeled"
    subject: str = "S00"

    def __post_init__(self) -> None:
        object.__setattr__(self, "views", tuple(self.views))
        if not self.views:
            raise ValueError(f"sample {self.sequence_id} has no views")

    @property
    def view_ids(self) -> list[str]:
        return [view.view_id for view in self.views]

    @property
    def view_count(self) -> int:
        return len(self.views)

    @property
    def frame_count(self) -> int:
        return self.views[0].frame_count

    @property
    def frame_rate_hz(self) -> float:
        return self.views[0].keypoints.frame_rate_hz

    def view(self, view_id: str) -> ViewRecording:
        for view in self.views:
            if view.view_id == view_id:
                return view
        raise KeyError(view_id)

    def with_views(self, views: tuple[ViewRecording, ...]) -> MultiviewSample:
        return replace(self, views=tuple(views))
