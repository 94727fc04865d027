from .models import (
    CHECKPOINT_FORMAT_VERSION,
    DATASET_FORMAT_VERSION,
    EXPERIMENT_SCHEMA_VERSION,
    ActivityMetrics,
    CameraModel,
    ContractModel,
    DatasetFile,
    DetectionNoiseSpec,
    ExperimentSpec,
    JointRecipe,
    KeypointMapping,
    LayerRecord,
    LifterCheckpoint,
    LifterConfig,
    LossWeights,
    MetricReport,
    MotionSpec,
    Objective,
    ObjectiveCell,
    ResultRow,
    ResultTable,
    RigSpec,
    SampleRecord,
    Skeleton,
    SubjectSplit,
    TrainConfig,
    TrainLog,
    TrainLogEntry,
    ValidationSummary,
    ViewRecord,
)

__all__ = [
    "CHECKPOINT_FORMAT_VERSION",
    "DATASET_FORMAT_VERSION",
    "EXPERIMENT_SCHEMA_VERSION",
    "ActivityMetrics",
    "CameraModel",
    "ContractModel",
    "DatasetFile",
    "DetectionNoiseSpec",
    "ExperimentSpec",
    "JointRecipe",
    "KeypointMapping",
    "LayerRecord",
    "LifterCheckpoint",
    "LifterConfig",
    "LossWeights",
    "MetricReport",
    "MotionSpec",
    "Objective",
    "ObjectiveCell",
    "ResultRow",
    "ResultTable",
    "RigSpec",
    "SampleRecord",
    "Skeleton",
    "SubjectSplit",
    "TrainConfig",
    "TrainLog",
    "TrainLogEntry",
    "ValidationSummary",
    "ViewRecord",
]
