from .dataset_io import dataset_document, parse_dataset, read_dataset, write_dataset
from .errors import DatasetFormatError, MappingError, RenderError
from .keypoints import convert_keypoints, identity_mapping, load_mapping
from .paths import DATA_DIRECTORY_ENV, data_directory
from .splits import apply_split, load_split
from .synthetic import (
    ACTIVITY_PRESETS,
    generate_dataset,
    generate_motion,
    motion_preset,
    perturb_keypoints,
    render_sample,
    rig_cameras,
)
from .validation import validate_dataset

__all__ = [
    "ACTIVITY_PRESETS",
    "DATA_DIRECTORY_ENV",
    "DatasetFormatError",
    "MappingError",
    "RenderError",
    "apply_split",
    "convert_keypoints",
    "data_directory",
    "dataset_document",
    "generate_dataset",
    "generate_motion",
    "identity_mapping",
    "load_mapping",
    "load_split",
    "motion_preset",
    "parse_dataset",
    "perturb_keypoints",
    "read_dataset",
    "render_sample",
    "rig_cameras",
    "validate_dataset",
    "write_dataset",
]
