from __future__ import annotations

from pathlib import Path

from mvlift_contracts import ExperimentSpec
from mvlift_data import data_directory
from pydantic import ValidationError


class ExperimentSpecError(ValueError):
    pass


def load_experiment_spec(path: Path) -> ExperimentSpec:
    path = Path(path)
    try:
        return ExperimentSpec.model_validate_json(path.read_text())
    except FileNotFoundError as error:
        raise ExperimentSpecError(f"experiment spec {path} does not exist") from error
    except ValidationError as error:
        raise ExperimentSpecError(f"{path}: {error}") from error


class ExperimentStore:
    def __init__(self, experiment_directory: Path | None = None) -> None:
        self.experiment_directory = data_directory("experiments", experiment_directory)

    def list(self) -> list[dict]:
        summaries = []
        for path in sorted(self.experiment_directory.glob("*.json")):
            spec = load_experiment_spec(path)
            summaries.append(
                {
                    "name": spec.name,
                    "file": path.name,
                    "cameraCount": spec.rig.camera_count,
                    "motionCount": len(spec.motions),
                    "objectives": [cell.name for cell in spec.objective_grid],
                    "supervision": spec.supervision,
                    "replicateSeeds": spec.replicate_seeds,
                }
            )
        return summaries

    def get(self, name: str) -> ExperimentSpec:
        for path in sorted(self.experiment_directory.glob("*.json")):
            spec = load_experiment_spec(path)
            if spec.name == name or path.stem == name:
                return spec
        raise KeyError(name)

    def resolve(self, reference: str) -> ExperimentSpec:
        """A spec by file path, or by name within the store."""
        path = Path(reference)
        if path.suffix == ".json" and path.exists():
            return load_experiment_spec(path)
        try:
            return self.get(reference)
        except KeyError as error:
            raise ExperimentSpecError(
                f"no experiment spec {reference!r} in {self.experiment_directory}"
            ) from error
