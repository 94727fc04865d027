from __future__ import annotations

from pathlib import Path

import numpy as np
from mvlift_contracts import JointRecipe, KeypointMapping, Skeleton
from mvlift_core import SKELETONS, PoseSequence2D, PoseSequence3D
from pydantic import ValidationError

from .errors import MappingError
from .paths import data_directory


def identity_mapping(skeleton: Skeleton) -> KeypointMapping:
    return KeypointMapping(
        source_format=skeleton.name,
        target_format=skeleton.name,
        source_joint_count=skeleton.joint_count,
        recipes=[
            JointRecipe(target=name, kind="copy", sources=[index])
            for index, name in enumerate(skeleton.joint_names)
        ],
    )


def load_mapping(name: str, directory: Path | None = None) -> KeypointMapping:
    path = data_directory("mappings", directory) / f"{name}.json"
    if not path.exists():
        raise MappingError(f"keypoint mapping {name} not found in {path.parent}")
    try:
        return KeypointMapping.model_validate_json(path.read_text())
    except ValidationError as error:
        raise MappingError(f"keypoint mapping {name} is invalid: {error}") from error


def _ordered_recipes(mapping: KeypointMapping) -> list[JointRecipe]:
    target = SKELETONS.get(mapping.target_format)
    if target is None:
        return list(mapping.recipes)
    by_name = {recipe.target: recipe for recipe in mapping.recipes}
    missing = [name for name in target.joint_names if name not in by_name]
    if missing or len(by_name) != target.joint_count:
        raise MappingError(
            f"mapping to {target.name} must define exactly its joints; missing: "
            f"{', '.join(missing) or 'none'}"
        )
    return [by_name[name] for name in target.joint_names]


def _mixing_matrix(recipes: list[JointRecipe], source_count: int) -> np.ndarray:
    matrix = np.zeros((len(recipes), source_count))
    for row, recipe in enumerate(recipes):
        for source, weight in recipe.source_weights():
            matrix[row, source] += weight
    return matrix


def convert_keypoints(
    seq: PoseSequence2D | PoseSequence3D,
    mapping: KeypointMapping,
) -> PoseSequence2D | PoseSequence3D:
    """Re-express a sequence in the mapping's target joint layout.

    Combined joints average their sources; a 2D joint's confidence is the lowest of its
    sources' confidences.
    """
    coords = seq.keypoints if isinstance(seq, PoseSequence2D) else seq.joints
    if coords.shape[1] != mapping.source_joint_count:
        raise MappingError(
            f"{mapping.source_format} mapping expects {mapping.source_joint_count} joints, "
            f"sequence has {coords.shape[1]}"
        )
    recipes = _ordered_recipes(mapping)
    converted = np.einsum("ts,nsc->ntc", _mixing_matrix(recipes, coords.shape[1]), coords)
    if isinstance(seq, PoseSequence3D):
        return PoseSequence3D(converted, seq.frame_rate_hz)
    confidence = np.stack(
        [seq.confidence[:, recipe.sources].min(axis=1) for recipe in recipes], axis=1
    )
    return PoseSequence2D(converted, confidence, seq.frame_rate_hz)
