from .errors import InapplicableConsistencyError, ShapeMismatchError
from .poses import (
    MultiviewSample,
    Pose2D,
    Pose3D,
    PoseSequence2D,
    PoseSequence3D,
    ViewRecording,
)
from .skeletons import COCO_SKELETON, H36M_SKELETON, SKELETONS
from .validator import validate_sample
from .views import canonical_pairs, enumerate_view_pairs, select_views

__all__ = [
    "COCO_SKELETON",
    "H36M_SKELETON",
    "SKELETONS",
    "InapplicableConsistencyError",
    "MultiviewSample",
    "Pose2D",
    "Pose3D",
    "PoseSequence2D",
    "PoseSequence3D",
    "ShapeMismatchError",
    "ViewRecording",
    "canonical_pairs",
    "enumerate_view_pairs",
    "select_views",
    "validate_sample",
]
