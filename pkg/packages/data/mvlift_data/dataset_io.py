"""Versioned JSON dataset files.

Layout: ``{formatVersion, skeleton, samples[]}``; each sample lists its views with the full
camera, 2D keypoints and confidences, and optional camera-frame and world-frame 3D joints.
Floats are written in shortest round-trip form, so reading returns the exact values written.
"""

from __future__ import annotations

import json
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from mvlift_contracts import (
    DATASET_FORMAT_VERSION,
    DatasetFile,
    SampleRecord,
    ViewRecord,
)
from mvlift_core import (
    H36M_SKELETON,
    MultiviewSample,
    PoseSequence2D,
    PoseSequence3D,
    ShapeMismatchError,
    ViewRecording,
)
from pydantic import ValidationError

from .errors import DatasetFormatError


def _view_record(view: ViewRecording) -> ViewRecord:
    return ViewRecord(
        view_id=view.view_id,
        name=view.name,
        camera=view.camera,
        keypoints_2d=view.keypoints.keypoints.tolist(),
        confidence=view.keypoints.confidence.tolist(),
        joints_3d=None if view.joints_3d is None else view.joints_3d.joints.tolist(),
        joints_world=None if view.joints_world is None else view.joints_world.joints.tolist(),
    )


def _require_finite(sample: MultiviewSample) -> None:
    for view in sample.views:
        arrays = [view.keypoints.keypoints, view.keypoints.confidence]
        arrays += [seq.joints for seq in (view.joints_3d, view.joints_world) if seq is not None]
        if not all(np.all(np.isfinite(array)) for array in arrays):
            raise DatasetFormatError(
                f"{sample.sequence_id} view {view.view_id} holds non-finite values"
            )


def dataset_document(samples: Sequence[MultiviewSample]) -> DatasetFile:
    skeleton = samples[0].skeleton if samples else H36M_SKELETON
    records = []
    for sample in samples:
        if sample.skeleton != skeleton:
            raise DatasetFormatError("all samples in one dataset file must share a skeleton")
        _require_finite(sample)
        records.append(
            SampleRecord(
                sequence_id=sample.sequence_id,
                activity=sample.activity,
                subject=sample.subject,
                frame_rate_hz=sample.frame_rate_hz,
                views=[_view_record(view) for view in sample.views],
            )
        )
    return DatasetFile(format_version=DATASET_FORMAT_VERSION, skeleton=skeleton, samples=records)


def write_dataset(samples: Sequence[MultiviewSample], path: Path) -> Path:
    path = Path(path)
    document = dataset_document(samples)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(document.model_dump_json(by_alias=True, indent=1) + "\n")
    return path


def _location(loc: tuple) -> str:
    parts = []
    for item in loc:
        parts.append(f"[{item}]" if isinstance(item, int) else f".{item}")
    return "".join(parts).lstrip(".")


def _sample(record: SampleRecord, document: DatasetFile, index: int) -> MultiviewSample:
    rate = record.frame_rate_hz
    views = []
    for view_index, view in enumerate(record.views):
        where = f"samples[{index}].views[{view_index}]"
        try:
            views.append(
                ViewRecording(
                    view_id=view.view_id,
                    camera=view.camera,
                    keypoints=PoseSequence2D(view.keypoints_2d, view.confidence, rate),
                    joints_3d=None
                    if view.joints_3d is None
                    else PoseSequence3D(view.joints_3d, rate),
                    joints_world=None
                    if view.joints_world is None
                    else PoseSequence3D(view.joints_world, rate),
                    name=view.name,
                )
            )
        except (ShapeMismatchError, ValueError) as error:
            raise DatasetFormatError(f"{where}: {error}") from error
    return MultiviewSample(
        sequence_id=record.sequence_id,
        views=tuple(views),
        skeleton=document.skeleton,
        activity=record.activity,
        subject=record.subject,
    )


def parse_dataset(text: str, source: str = "<dataset>") -> list[MultiviewSample]:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as error:
        raise DatasetFormatError(
            f"{source}:{error.lineno}:{error.colno}: {error.msg}"
        ) from error
    if not isinstance(payload, dict):
        raise DatasetFormatError(f"{source}: top level must be an object")
    version = payload.get("formatVersion", payload.get("format_version"))
    if version != DATASET_FORMAT_VERSION:
        raise DatasetFormatError(
            f"{source}: unsupported dataset format version {version!r}, "
            f"expected {DATASET_FORMAT_VERSION!r}"
        )
    try:
        document = DatasetFile.model_validate(payload)
    except ValidationError as error:
        first = error.errors()[0]
        raise DatasetFormatError(
            f"{source}: {_location(first['loc'])}: {first['msg']}"
        ) from error
    return [_sample(record, document, index) for index, record in enumerate(document.samples)]


def read_dataset(path: Path) -> list[MultiviewSample]:
    path = Path(path)
    return parse_dataset(path.read_text(), str(path))
