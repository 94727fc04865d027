from __future__ import annotations

from enum import StrEnum
from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

DATASET_FORMAT_VERSION = "mvlift-dataset-v1"
CHECKPOINT_FORMAT_VERSION = "mvlift-lifter-checkpoint-v1"
EXPERIMENT_SCHEMA_VERSION = "mvlift-experiment-v1"
MAPPING_SCHEMA_VERSION = "mvlift-keypoint-mapping-v1"
SPLIT_SCHEMA_VERSION = "mvlift-subject-split-v1"


def to_camel(value: str) -> str:
    first, *rest = value.split("_")
    return first + "".join(part.capitalize() for part in rest)


class ContractModel(BaseModel):
    model_config = ConfigDict(
        alias_generator=to_camel,
        populate_by_name=True,
        extra="forbid",
        str_strip_whitespace=True,
    )


class ValidationSummary(ContractModel):
    valid: bool
    checks: list[str]


class Skeleton(ContractModel):
    """Joint layout. Parent of the root is ``None``."""

    name: str
    joint_names: Annotated[list[str], Field(min_length=2)]
    parent_index: list[int | None]
    root_index: Annotated[int, Field(ge=0)]

    @model_validator(mode="after")
    def validate_tree(self) -> Skeleton:
        joint_count = len(self.joint_names)
        if len(set(self.joint_names)) != joint_count:
            raise ValueError("skeleton joint names must be unique")
        if len(self.parent_index) != joint_count:
            raise ValueError(
                f"skeleton has {joint_count} joints but {len(self.parent_index)} parent entries"
            )
        if self.root_index >= joint_count:
            raise ValueError(f"root index {self.root_index} is outside the skeleton")
        for joint, parent in enumerate(self.parent_index):
            if joint == self.root_index:
                if parent is not None:
                    raise ValueError("the root joint cannot have a parent")
                continue
            if parent is None:
                raise ValueError(f"joint {self.joint_names[joint]} has no parent")
            if not 0 <= parent < joint_count or parent == joint:
                raise ValueError(f"joint {self.joint_names[joint]} has an invalid parent")
        for joint in range(joint_count):
            seen: set[int] = set()
            current: int | None = joint
            while current is not None:
                if current in seen:
                    raise ValueError(f"joint {self.joint_names[joint]} is part of a parent cycle")
                seen.add(current)
                current = self.parent_index[current]
        return self

    @property
    def joint_count(self) -> int:
        return len(self.joint_names)

    def index(self, joint_name: str) -> int:
        return self.joint_names.index(joint_name)

    def bones(self) -> list[tuple[int, int]]:
        return [
            (parent, joint)
            for joint, parent in enumerate(self.parent_index)
            if parent is not None
        ]

    def topological_order(self) -> list[int]:
        """Joints ordered so that every parent precedes its children."""
        children: dict[int, list[int]] = {joint: [] for joint in range(self.joint_count)}
        for parent, joint in self.bones():
            children[parent].append(joint)
        order = [self.root_index]
        for joint in order:
            order.extend(children[joint])
        return order


class CameraModel(ContractModel):
    """Pinhole camera. ``p_cam = rotation_wc @ p_world + translation_wc`` in millimeters."""

    rotation_wc: list[list[float]]
    translation_wc: list[float]
    focal: tuple[float, float]
    principal: tuple[float, float]
    resolution: tuple[int, int]

    @model_validator(mode="after")
    def validate_camera(self) -> CameraModel:
        rotation = np.asarray(self.rotation_wc, dtype=float)
        if rotation.shape != (3, 3):
            raise ValueError("camera rotation must be 3x3")
        if len(self.translation_wc) != 3:
            raise ValueError("camera translation must have three components")
        if not np.all(np.isfinite(rotation)) or not np.all(np.isfinite(self.translation_wc)):
            raise ValueError("camera extrinsics must be finite")
        if np.max(np.abs(rotation.T @ rotation - np.eye(3))) > 1e-9:
            raise ValueError("camera rotation must be orthonormal")
        if abs(np.linalg.det(rotation) - 1.0) > 1e-9:
            raise ValueError("camera rotation must have determinant +1")
        if min(self.focal) <= 0:
            raise ValueError("camera focal lengths must be positive")
        if min(self.resolution) <= 0:
            raise ValueError("camera resolution must be positive")
        return self

    @property
    def rotation(self) -> np.ndarray:
        return np.asarray(self.rotation_wc, dtype=float)

    @property
    def translation(self) -> np.ndarray:
        return np.asarray(self.translation_wc, dtype=float)


class RigSpec(ContractModel):
    """Cameras on a ring around ``look_at``, all sharing one set of intrinsics."""

    camera_count: Annotated[int, Field(ge=1)]
    azimuths_deg: list[float]
    radius_mm: Annotated[float, Field(gt=0)]
    height_mm: float = 1200.0
    focal_px: Annotated[float, Field(gt=0)] = 1000.0
    resolution: tuple[int, int] = (1000, 1000)
    look_at: tuple[float, float, float] = (0.0, 0.0, 900.0)
    view_names: list[str] | None = None

    @model_validator(mode="after")
    def validate_rig(self) -> RigSpec:
        if len(self.azimuths_deg) != self.camera_count:
            raise ValueError(
                f"rig declares {self.camera_count} cameras but {len(self.azimuths_deg)} azimuths"
            )
        if self.view_names is not None:
            if len(self.view_names) != self.camera_count:
                raise ValueError("rig view names must match the camera count")
            if len(set(self.view_names)) != self.camera_count:
                raise ValueError("rig view names must be unique")
        if min(self.resolution) <= 0:
            raise ValueError("rig resolution must be positive")
        return self

    @property
    def view_ids(self) -> list[str]:
        if self.view_names is not None:
            return list(self.view_names)
        return [f"cam{index}" for index in range(self.camera_count)]

    def azimuth_of(self, view_id: str) -> float:
        return self.azimuths_deg[self.view_ids.index(view_id)]


class MotionSpec(ContractModel):
    activity_label: str
    frame_count: Annotated[int, Field(ge=2)]
    frame_rate_hz: Annotated[float, Field(gt=0)] = 50.0
    seed: int
    subject: str | None = None
    amplitude: Annotated[float, Field(ge=0)] = 1.0
    frequency_hz: Annotated[float, Field(gt=0)] = 1.0
    limb_amplitudes: dict[str, Annotated[float, Field(ge=0)]] = Field(default_factory=dict)
    root_travel_mm: Annotated[float, Field(ge=0)] = 150.0
    jump_height_mm: Annotated[float, Field(ge=0)] = 0.0
    heading_deg: float = 0.0

    @property
    def subject_id(self) -> str:
        return self.subject or f"S{self.seed:02d}"


class DetectionNoiseSpec(ContractModel):
    """Simulated 2D detector: Gaussian pixel noise with noise-derived confidences."""

    sigma_px: Annotated[float, Field(ge=0)]
    outlier_rate: Annotated[float, Field(ge=0, le=1)] = 0.0
    outlier_sigma_px: Annotated[float, Field(ge=0)] = 40.0
    confidence_scale_px: Annotated[float, Field(gt=0)] = 10.0


class JointRecipe(ContractModel):
    target: str
    kind: Literal["copy", "midpoint", "blend"]
    sources: Annotated[list[int], Field(min_length=1)]
    weights: list[float] | None = None

    @model_validator(mode="after")
    def validate_recipe(self) -> JointRecipe:
        if self.kind == "copy" and len(self.sources) != 1:
            raise ValueError(f"copy recipe for {self.target} needs exactly one source")
        if self.kind == "midpoint" and len(self.sources) != 2:
            raise ValueError(f"midpoint recipe for {self.target} needs exactly two sources")
        if self.kind == "blend":
            if self.weights is None or len(self.weights) != len(self.sources):
                raise ValueError(f"blend recipe for {self.target} needs one weight per source")
            if abs(sum(self.weights) - 1.0) > 1e-12:
                raise ValueError(f"blend weights for {self.target} must sum to 1")
        elif self.weights is not None:
            raise ValueError(f"{self.kind} recipe for {self.target} does not take weights")
        return self

    def source_weights(self) -> list[tuple[int, float]]:
        if self.kind == "copy":
            return [(self.sources[0], 1.0)]
        if self.kind == "midpoint":
            return [(self.sources[0], 0.5), (self.sources[1], 0.5)]
        return list(zip(self.sources, self.weights or [], strict=True))


class KeypointMapping(ContractModel):
    schema_version: Literal["mvlift-keypoint-mapping-v1"] = MAPPING_SCHEMA_VERSION
    source_format: str
    target_format: str
    source_joint_count: Annotated[int, Field(ge=1)]
    recipes: Annotated[list[JointRecipe], Field(min_length=1)]

    @model_validator(mode="after")
    def validate_mapping(self) -> KeypointMapping:
        targets = [recipe.target for recipe in self.recipes]
        if len(targets) != len(set(targets)):
            raise ValueError("every target joint must have exactly one recipe")
        for recipe in self.recipes:
            if any(not 0 <= source < self.source_joint_count for source in recipe.sources):
                raise ValueError(f"recipe for {recipe.target} references a missing source joint")
        return self


class LossWeights(ContractModel):
    lambda_pos: Annotated[float, Field(ge=0)] = 0.0
    lambda_vel: Annotated[float, Field(ge=0)] = 0.0
    lambda_scale: Annotated[float, Field(ge=0)] = 0.0
    lambda_con: Annotated[float, Field(ge=0)] = 0.0
    lambda_2d_reproj: Annotated[float, Field(ge=0)] = 0.0

    @model_validator(mode="after")
    def validate_total(self) -> LossWeights:
        total = (
            self.lambda_pos
            + self.lambda_vel
            + self.lambda_scale
            + self.lambda_con
            + self.lambda_2d_reproj
        )
        if total <= 0:
            raise ValueError("at least one loss weight must be positive")
        return self

    @classmethod
    def supervised_3d(cls, lambda_con: float = 0.2) -> LossWeights:
        return cls(lambda_pos=1.0, lambda_vel=20.0, lambda_scale=0.5, lambda_con=lambda_con)

    @classmethod
    def supervised_2d(cls, lambda_con: float = 0.3) -> LossWeights:
        return cls(lambda_2d_reproj=1.0, lambda_con=lambda_con)


class Objective(StrEnum):
    L3D = "L3D"
    L3D_CON = "L3Dcon"
    L2D = "L2D"
    L2D_CON = "L2Dcon"

    @property
    def needs_3d(self) -> bool:
        return self in (Objective.L3D, Objective.L3D_CON)

    @property
    def uses_consistency(self) -> bool:
        return self in (Objective.L3D_CON, Objective.L2D_CON)


class LifterConfig(ContractModel):
    window_frames: Annotated[int, Field(ge=1)] = 9
    hidden_sizes: Annotated[list[Annotated[int, Field(ge=1)]], Field(min_length=1)] = Field(
        default_factory=lambda: [64, 64]
    )
    activation: Literal["tanh", "relu"] = "tanh"
    joint_count: Annotated[int, Field(ge=2)] = 17
    root_index: Annotated[int, Field(ge=0)] = 0
    init_seed: int = 0
    output_scale_mm: Annotated[float, Field(gt=0)] = 1000.0
    center_input: bool = True

    @model_validator(mode="after")
    def validate_root(self) -> LifterConfig:
        if self.root_index >= self.joint_count:
            raise ValueError("lifter root index must be a valid joint")
        return self

    @property
    def input_size(self) -> int:
        return self.window_frames * self.joint_count * 2

    @property
    def output_size(self) -> int:
        return self.window_frames * self.joint_count * 3

    @property
    def layer_sizes(self) -> list[int]:
        return [self.input_size, *self.hidden_sizes, self.output_size]


class TrainConfig(ContractModel):
    epochs: Annotated[int, Field(ge=1)] = 30
    learning_rate: Annotated[float, Field(gt=0)] = 2e-4
    adam_beta1: Annotated[float, Field(ge=0, lt=1)] = 0.9
    adam_beta2: Annotated[float, Field(ge=0, lt=1)] = 0.999
    adam_eps: Annotated[float, Field(gt=0)] = 1e-8
    batch_windows: Annotated[int, Field(ge=1)] = 16
    window_stride: Annotated[int, Field(ge=1)] = 1
    weights: LossWeights = Field(default_factory=LossWeights.supervised_2d)
    objective: Objective = Objective.L2D_CON
    seed: int = 0
    workers: Annotated[int, Field(ge=1)] = 1
    learn_root_depth: bool = True

    @model_validator(mode="after")
    def validate_objective_weights(self) -> TrainConfig:
        weights = self.weights
        if self.objective.needs_3d:
            supervised = weights.lambda_pos + weights.lambda_vel + weights.lambda_scale
            if supervised <= 0 and weights.lambda_con <= 0:
                raise ValueError(f"{self.objective} needs a positive 3D or consistency weight")
        elif weights.lambda_2d_reproj <= 0 and weights.lambda_con <= 0:
            raise ValueError(f"{self.objective} needs a positive reprojection weight")
        return self


class TrainLogEntry(ContractModel):
    epoch: Annotated[int, Field(ge=1)]
    objective: Annotated[float, Field(ge=0)]
    components: dict[str, float]
    validation_mpjpe_mm: float | None = None
    validation_pa_mpjpe_mm: float | None = None
    behind_camera_joints: Annotated[int, Field(ge=0)] = 0


class TrainLog(ContractModel):
    objective: Objective
    entries: list[TrainLogEntry] = Field(default_factory=list)


class ActivityMetrics(ContractModel):
    mpjpe_mm: Annotated[float, Field(ge=0)]
    pa_mpjpe_mm: Annotated[float, Field(ge=0)]
    frame_count: Annotated[int, Field(ge=1)]


class MetricReport(ContractModel):
    mpjpe_mm: Annotated[float, Field(ge=0)]
    pa_mpjpe_mm: Annotated[float, Field(ge=0)]
    per_activity: dict[str, ActivityMetrics]
    frame_count: Annotated[int, Field(ge=1)]


class ObjectiveCell(ContractModel):
    name: str
    objective: Objective
    weights: LossWeights


class SubjectSplit(ContractModel):
    schema_version: Literal["mvlift-subject-split-v1"] = SPLIT_SCHEMA_VERSION
    name: str
    train: list[str] = Field(default_factory=list)
    validation: list[str] = Field(default_factory=list)
    test: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_disjoint(self) -> SubjectSplit:
        parts = [set(self.train), set(self.validation), set(self.test)]
        if parts[0] & parts[1] or parts[0] & parts[2] or parts[1] & parts[2]:
            raise ValueError("a subject may appear in only one split")
        return self


class ExperimentSpec(ContractModel):
    schema_version: Literal["mvlift-experiment-v1"] = EXPERIMENT_SCHEMA_VERSION
    name: str
    rig: RigSpec
    motions: Annotated[list[MotionSpec], Field(min_length=1)]
    validation_motions: Annotated[list[MotionSpec], Field(min_length=1)]
    objective_grid: Annotated[list[ObjectiveCell], Field(min_length=1)]
    view_subsets: Annotated[list[list[str]], Field(min_length=1)]
    view_order: list[str] | None = None
    reference_view: str
    eval_view: str | None = None
    supervision: Literal["2d", "3d"] = "2d"
    lifter: LifterConfig = Field(default_factory=LifterConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    replicate_seeds: Annotated[list[int], Field(min_length=1)] = Field(
        default_factory=lambda: [0]
    )
    include_baseline: bool = False
    detection_noise: DetectionNoiseSpec | None = None

    @model_validator(mode="after")
    def validate_views(self) -> ExperimentSpec:
        view_ids = set(self.rig.view_ids)
        if self.reference_view not in view_ids:
            raise ValueError(f"reference view {self.reference_view} is not part of the rig")
        if self.eval_view is not None and self.eval_view not in view_ids:
            raise ValueError(f"evaluation view {self.eval_view} is not part of the rig")
        for subset in self.view_subsets:
            if not subset:
                raise ValueError("view subsets cannot be empty")
            if len(set(subset)) != len(subset):
                raise ValueError(f"view subset {subset} repeats a view")
            unknown = sorted(set(subset) - view_ids)
            if unknown:
                raise ValueError(f"view subset references unknown views: {', '.join(unknown)}")
        if self.view_order is not None and sorted(self.view_order) != sorted(view_ids):
            raise ValueError("view order must list every rig view exactly once")
        if self.view_order is not None and self.view_order[0] != self.reference_view:
            raise ValueError("view order must start with the reference view")
        train_subjects = {motion.subject_id for motion in self.motions}
        validation_subjects = {motion.subject_id for motion in self.validation_motions}
        if train_subjects & validation_subjects:
            raise ValueError("training and validation motions must use disjoint subjects")
        if len(set(self.replicate_seeds)) != len(self.replicate_seeds):
            raise ValueError("replicate seeds must be unique")
        return self


class ResultRow(ContractModel):
    experiment: str
    cell_id: str
    objective: str
    views: list[str]
    eval_view: str
    seed: int
    mpjpe_mm: Annotated[float, Field(ge=0)]
    pa_mpjpe_mm: Annotated[float, Field(ge=0)]
    per_activity: dict[str, ActivityMetrics]
    frame_count: Annotated[int, Field(ge=1)]
    lambda_con: Annotated[float, Field(ge=0)]
    wall_clock_seconds: Annotated[float, Field(ge=0)] = 0.0

    @property
    def view_count(self) -> int:
        return len(self.views)


class ResultTable(ContractModel):
    experiment: str
    rows: list[ResultRow] = Field(default_factory=list)

    def ordered(self) -> ResultTable:
        ordered = sorted(self.rows, key=lambda row: (row.cell_id, row.seed))
        return self.model_copy(update={"rows": ordered})


class ViewRecord(ContractModel):
    view_id: str
    name: str | None = None
    camera: CameraModel
    keypoints_2d: list[list[list[float]]]
    confidence: list[list[float]]
    joints_3d: list[list[list[float]]] | None = None
    joints_world: list[list[list[float]]] | None = None


class SampleRecord(ContractModel):
    sequence_id: str
    activity: str
    subject: str
    frame_rate_hz: Annotated[float, Field(gt=0)]
    views: Annotated[list[ViewRecord], Field(min_length=1)]


class DatasetFile(ContractModel):
    format_version: Literal["mvlift-dataset-v1"]
    skeleton: Skeleton
    samples: list[SampleRecord]


class LayerRecord(ContractModel):
    weights: list[list[float]]
    bias: list[float]


class LifterCheckpoint(ContractModel):
    format_version: Literal["mvlift-lifter-checkpoint-v1"]
    config: LifterConfig
    layers: Annotated[list[LayerRecord], Field(min_length=1)]
