#!/usr/bin/env python3
"""Run the reproducible mvlift Procrustes and training-epoch latency benchmark."""

from __future__ import annotations

import argparse
import json
import math
import platform
import statistics
import sys
import time
from datetime import UTC, datetime
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
for package_path in (
    "packages/contracts",
    "packages/core",
    "packages/geometry",
    "packages/camera",
    "packages/losses",
    "packages/metrics",
    "packages/data",
    "packages/model",
    "packages/trainer",
):
    sys.path.insert(0, str(ROOT / package_path))

import numpy as np  # noqa: E402
from mvlift_contracts import ExperimentSpec  # noqa: E402
from mvlift_data import generate_dataset  # noqa: E402
from mvlift_geometry import procrustes_fit  # noqa: E402
from mvlift_trainer import TrainingSet, train  # noqa: E402
from scipy.spatial.transform import Rotation  # noqa: E402

PROCRUSTES_GATE_MS = 50.0
SEQUENCE_FRAMES = 243
JOINTS = 17


def percentile(values: list[float], quantile: float) -> float:
    """Return a linearly interpolated percentile for a non-empty sample."""
    ordered = sorted(values)
    index = (len(ordered) - 1) * quantile
    lower = math.floor(index)
    upper = math.ceil(index)
    if lower == upper:
        return ordered[lower]
    return ordered[lower] + (ordered[upper] - ordered[lower]) * (index - lower)


def summarize(values: list[float]) -> dict:
    return {
        "min": round(min(values), 3),
        "p50": round(statistics.median(values), 3),
        "p95": round(percentile(values, 0.95), 3),
        "max": round(max(values), 3),
    }


def procrustes_latencies(iterations: int) -> list[float]:
    """Sequence-level fits of a 243-frame, 17-joint prediction onto a similar copy."""
    rng = np.random.default_rng(0)
    timings = []
    for _ in range(iterations):
        source = rng.normal(scale=300.0, size=(SEQUENCE_FRAMES, JOINTS, 3))
        rotation = Rotation.random(None, rng).as_matrix()
        target = 1.3 * source @ rotation + rng.normal(scale=10.0, size=source.shape)
        started = time.perf_counter()
        procrustes_fit(source, target)
        timings.append((time.perf_counter() - started) * 1000)
    return timings


def epoch_latencies(spec: ExperimentSpec, epochs: int) -> list[float]:
    samples = generate_dataset(spec.rig, spec.motions)
    config = spec.train.model_copy(update={"epochs": epochs})
    marks = [time.perf_counter()]
    train(
        TrainingSet(samples, train_views=spec.view_subsets[0]),
        config,
        spec.lifter,
        on_epoch=lambda _entry: marks.append(time.perf_counter()),
    )
    return [(later - earlier) * 1000 for earlier, later in zip(marks, marks[1:], strict=False)]


def run_benchmark(iterations: int, epochs: int, spec_path: Path) -> dict:
    spec = ExperimentSpec.model_validate_json(spec_path.read_text())
    fits = procrustes_latencies(iterations)
    epoch_times = epoch_latencies(spec, epochs)
    p95_fit = percentile(fits, 0.95)
    return {
        "benchmarkVersion": "mvlift-latency-benchmark-v1",
        "generatedAt": datetime.now(UTC).isoformat(),
        "engineeringGate": {
            "metric": "p95 sequence-level procrustes_fit latency",
            "thresholdMs": PROCRUSTES_GATE_MS,
            "passed": p95_fit < PROCRUSTES_GATE_MS,
        },
        "scenario": {
            "procrustesFrames": SEQUENCE_FRAMES,
            "procrustesJoints": JOINTS,
            "experiment": spec.name,
            "trainingViews": spec.view_subsets[0],
            "trainingMotions": len(spec.motions),
            "objective": str(spec.train.objective),
            "windowStride": spec.train.window_stride,
        },
        "runtime": {
            "python": platform.python_version(),
            "platform": platform.platform(),
            "processor": platform.processor() or "not reported",
            "numpy": np.__version__,
            "iterations": iterations,
            "epochs": epochs,
            "workers": spec.train.workers,
        },
        "latencyMs": {
            "procrustesFit": summarize(fits),
            "trainingEpoch": summarize(epoch_times),
        },
    }


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--iterations", type=int, default=200)
    parser.add_argument("--epochs", type=int, default=3)
    parser.add_argument(
        "--spec",
        type=Path,
        default=ROOT / "data" / "experiments" / "reference-two-view.json",
    )
    parser.add_argument(
        "--output",
        type=Path,
        default=ROOT / "evidence" / "benchmarks" / "procrustes-and-epoch-latency.json",
    )
    args = parser.parse_args()
    payload = run_benchmark(args.iterations, args.epochs, args.spec)
    args.output.parent.mkdir(parents=True, exist_ok=True)
    args.output.write_text(json.dumps(payload, indent=2) + "\n")
    print(json.dumps(payload, indent=2))
    return 0 if payload["engineeringGate"]["passed"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
