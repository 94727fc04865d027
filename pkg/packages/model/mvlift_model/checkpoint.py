from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from mvlift_contracts import (
    CHECKPOINT_FORMAT_VERSION,
    LayerRecord,
    LifterCheckpoint,
    LifterConfig,
)
from pydantic import ValidationError

from .params import LifterParams, layer_shapes


class CheckpointFormatError(ValueError):
    pass


def checkpoint_document(params: LifterParams, config: LifterConfig) -> LifterCheckpoint:
    return LifterCheckpoint(
        format_version=CHECKPOINT_FORMAT_VERSION,
        config=config,
        layers=[
            LayerRecord(weights=weight.tolist(), bias=bias.tolist())
            for weight, bias in zip(params.weights, params.biases, strict=True)
        ],
    )


def save_checkpoint(params: LifterParams, config: LifterConfig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = checkpoint_document(params, config)
    path.write_text(document.model_dump_json(by_alias=True, indent=1) + "\n")
    return path


def load_checkpoint(path: Path) -> tuple[LifterParams, LifterConfig]:
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as error:
        raise CheckpointFormatError(f"{path}:{error.lineno}:{error.colno}: {error.msg}") from error
    version = payload.get("formatVersion") if isinstance(payload, dict) else None
    if version != CHECKPOINT_FORMAT_VERSION:
        raise CheckpointFormatError(f"{path}: unsupported checkpoint version {version!r}")
    try:
        document = LifterCheckpoint.model_validate(payload)
    except ValidationError as error:
        raise CheckpointFormatError(f"{path}: {error}") from error

    shapes = layer_shapes(document.config)
    if len(document.layers) != len(shapes):
        raise CheckpointFormatError(
            f"{path}: {len(document.layers)} layers stored, config needs {len(shapes)}"
        )
    weights, biases = [], []
    for index, (layer, (fan_in, fan_out)) in enumerate(zip(document.layers, shapes, strict=True)):
        weight = np.array(layer.weights, dtype=float)
        bias = np.array(layer.bias, dtype=float)
        if weight.shape != (fan_in, fan_out) or bias.shape != (fan_out,):
            raise CheckpointFormatError(f"{path}: layer {index} has the wrong shape")
        weights.append(weight)
        biases.append(bias)
    return LifterParams(tuple(weights), tuple(biases)), document.config
