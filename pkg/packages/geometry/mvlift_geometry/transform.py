from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mvlift_core import PoseSequence3D

ORTHONORMAL_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class SimilarityTransform:
    """``p -> scale * p @ rotation + translation`` for row-vector points."""

    scale: float
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self) -> None:
        rotation = np.array(self.rotation, dtype=float)
        translation = np.array(self.translation, dtype=float)
        if rotation.shape != (3, 3) or translation.shape != (3,):
            raise ValueError("similarity transforms need a 3x3 rotation and a 3-vector")
        if not self.scale > 0:
            raise ValueError(f"similarity scale must be positive, got {self.scale}")
        if np.max(np.abs(rotation.T @ rotation - np.eye(3))) > ORTHONORMAL_TOLERANCE:
            raise ValueError("similarity rotation must be orthonormal")
        if abs(np.linalg.det(rotation) - 1.0) > ORTHONORMAL_TOLERANCE:
            raise ValueError("similarity rotation must have determinant +1")
        rotation.setflags(write=False)
        translation.setflags(write=False)
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)

    @classmethod
    def identity(cls) -> SimilarityTransform:
        return cls(1.0, np.eye(3), np.zeros(3))

    def apply(self, points: np.ndarray) -> np.ndarray:
        return self.scale * np.asarray(points, dtype=float) @ self.rotation + self.translation

    def then(self, other: SimilarityTransform) -> SimilarityTransform:
        """The transform applying ``self`` first and ``other`` second."""
        return SimilarityTransform(
            scale=self.scale * other.scale,
            rotation=self.rotation @ other.rotation,
            translation=other.scale * self.translation @ other.rotation + other.translation,
        )

    def inverse(self) -> SimilarityTransform:
        return SimilarityTransform(
            scale=1.0 / self.scale,
            rotation=self.rotation.T,
            translation=-(self.translation @ self.rotation.T) / self.scale,
        )


def apply_transform(xf: SimilarityTransform, seq: PoseSequence3D) -> PoseSequence3D:
    return seq.with_joints(xf.apply(seq.joints))
