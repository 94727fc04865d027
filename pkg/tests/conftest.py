from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
from mvlift_camera import look_at_camera
from mvlift_contracts import CameraModel, ExperimentSpec, LifterConfig, RigSpec, TrainConfig
from mvlift_core import MultiviewSample
from mvlift_data import generate_dataset, motion_preset

REPO_ROOT = Path(__file__).parents[1]
EXPERIMENTS = REPO_ROOT / "data" / "experiments"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def ring_camera() -> CameraModel:
    return look_at_camera(
        np.array([4000.0, 0.0, 1200.0]), np.array([0.0, 0.0, 900.0]), 1000.0, (1000, 1000)
    )


@pytest.fixture
def two_view_rig() -> RigSpec:
    return RigSpec(camera_count=2, azimuths_deg=[0.0, 90.0], radius_mm=4500.0)


@pytest.fixture
def small_dataset(two_view_rig) -> list[MultiviewSample]:
    motions = [
        motion_preset("tennis_serve", 1, 20, subject="S01"),
        motion_preset("jumping", 2, 20, subject="S02"),
    ]
    return generate_dataset(two_view_rig, motions)


@pytest.fixture
def tiny_lifter() -> LifterConfig:
    return LifterConfig(window_frames=5, hidden_sizes=[16])


@pytest.fixture
def quick_train() -> TrainConfig:
    return TrainConfig(epochs=2, batch_windows=8, window_stride=2, learning_rate=1e-3)


def load_reference(name: str) -> ExperimentSpec:
    return ExperimentSpec.model_validate_json((EXPERIMENTS / f"{name}.json").read_text())


def shrink(spec: ExperimentSpec, name: str) -> ExperimentSpec:
    """A few short motions, a tiny lifter and one epoch, keeping the rig and grid."""
    return spec.model_copy(
        update={
            "name": name,
            "motions": [
                motion.model_copy(update={"frame_count": 12}) for motion in spec.motions[:3]
            ],
            "validation_motions": [
                motion.model_copy(update={"frame_count": 12})
                for motion in spec.validation_motions[:2]
            ],
            "lifter": LifterConfig(window_frames=5, hidden_sizes=[8]),
            "train": spec.train.model_copy(
                update={"epochs": 1, "batch_windows": 8, "window_stride": 2}
            ),
            "replicate_seeds": [0],
        }
    )


@pytest.fixture
def reference_spec() -> ExperimentSpec:
    return load_reference("reference-two-view")


@pytest.fixture
def tiny_spec(reference_spec) -> ExperimentSpec:
    return shrink(reference_spec, "tiny")


@pytest.fixture
def tiny_spec_path(tiny_spec, tmp_path) -> Path:
    path = tmp_path / "tiny.json"
    path.write_text(tiny_spec.model_dump_json(by_alias=True, indent=2))
    return path
