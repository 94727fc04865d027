from __future__ import annotations

import csv
import io
from collections.abc import Sequence

import numpy as np
from mvlift_contracts import ActivityMetrics, MetricReport
from mvlift_core import PoseSequence3D

from .pose_error import frame_mpjpe, frame_pa_mpjpe

REPORT_CSV_FIELDS = ["activity", "mpjpeMm", "paMpjpeMm", "frameCount"]
ALL_ACTIVITIES = "all"


def evaluate(
    predictions: Sequence[PoseSequence3D | np.ndarray],
    ground_truth: Sequence[PoseSequence3D | np.ndarray],
    activities: Sequence[str],
    *,
    root_index: int = 0,
) -> MetricReport:
    """Per-activity and overall errors; the overall value weights every frame equally."""
    if not predictions:
        raise ValueError("nothing to evaluate")
    if not len(predictions) == len(ground_truth) == len(activities):
        raise ValueError(
            f"{len(predictions)} predictions, {len(ground_truth)} ground-truth sequences and "
            f"{len(activities)} activity labels"
        )
    by_activity: dict[str, tuple[list[np.ndarray], list[np.ndarray]]] = {}
    for pred, gt, activity in zip(predictions, ground_truth, activities, strict=True):
        errors, aligned = by_activity.setdefault(activity, ([], []))
        errors.append(frame_mpjpe(pred, gt, root_index=root_index))
        aligned.append(frame_pa_mpjpe(pred, gt))

    per_activity: dict[str, ActivityMetrics] = {}
    all_errors: list[np.ndarray] = []
    all_aligned: list[np.ndarray] = []
    for activity in sorted(by_activity):
        errors, aligned = (np.concatenate(part) for part in by_activity[activity])
        per_activity[activity] = ActivityMetrics(
            mpjpe_mm=float(errors.mean()),
            pa_mpjpe_mm=float(aligned.mean()),
            frame_count=errors.size,
        )
        all_errors.append(errors)
        all_aligned.append(aligned)
    errors = np.concatenate(all_errors)
    return MetricReport(
        mpjpe_mm=float(errors.mean()),
        pa_mpjpe_mm=float(np.concatenate(all_aligned).mean()),
        per_activity=per_activity,
        frame_count=errors.size,
    )


def report_to_csv(report: MetricReport) -> str:
    """One row per activity followed by the overall row."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=REPORT_CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    rows = [*report.per_activity.items(), (ALL_ACTIVITIES, report)]
    for activity, metrics in rows:
        writer.writerow(
            {
                "activity": activity,
                "mpjpeMm": repr(metrics.mpjpe_mm),
                "paMpjpeMm": repr(metrics.pa_mpjpe_mm),
                "frameCount": metrics.frame_count,
            }
        )
    return buffer.getvalue()


def report_to_json(report: MetricReport) -> str:
    return report.model_dump_json(by_alias=True, indent=2) + "\n"
