from __future__ import annotations

import csv
import io

from mvlift_contracts import TrainLog

BASE_FIELDS = [
    "epoch",
    "objective",
    "validationMpjpeMm",
    "validationPaMpjpeMm",
    "behindCameraJoints",
]


def _number(value: float | None) -> str:
    return "" if value is None else repr(value)


def train_log_to_csv(log: TrainLog) -> str:
    component_names = sorted({name for entry in log.entries for name in entry.components})
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer, fieldnames=[*BASE_FIELDS, *component_names], lineterminator="\n"
    )
    writer.writeheader()
    for entry in log.entries:
        row = {
            "epoch": entry.epoch,
            "objective": repr(entry.objective),
            "validationMpjpeMm": _number(entry.validation_mpjpe_mm),
            "validationPaMpjpeMm": _number(entry.validation_pa_mpjpe_mm),
            "behindCameraJoints": entry.behind_camera_joints,
        }
        row.update({name: _number(entry.components.get(name)) for name in component_names})
        writer.writerow(row)
    return buffer.getvalue()
