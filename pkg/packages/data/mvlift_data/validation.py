from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from mvlift_camera import project_points
from mvlift_contracts import ValidationSummary
from mvlift_core import MultiviewSample, validate_sample

REPROJECTION_TOLERANCE = 1e-9


def validate_dataset(
    samples: Sequence[MultiviewSample],
    *,
    check_reprojection: bool = True,
) -> ValidationSummary:
    """Per-sample checks plus agreement between each view's 3D joints and its keypoints."""
    failures: list[str] = []
    if not samples:
        failures.append("dataset has no samples")
    sequence_ids = [sample.sequence_id for sample in samples]
    if len(set(sequence_ids)) != len(sequence_ids):
        failures.append("sequence ids must be unique")
    for sample in samples:
        summary = validate_sample(sample)
        if not summary.valid:
            failures.extend(summary.checks)
            continue
        if not check_reprojection:
            continue
        for view in sample.views:
            if view.joints_3d is None:
                continue
            coords, in_front = project_points(view.camera, view.joints_3d.joints)
            if not np.all(in_front):
                failures.append(f"{sample.sequence_id} view {view.view_id}: joints behind camera")
                continue
            deviation = float(np.max(np.abs(coords - view.keypoints.keypoints)))
            if deviation > REPROJECTION_TOLERANCE:
                failures.append(
                    f"{sample.sequence_id} view {view.view_id}: projected 3D joints deviate "
                    f"from keypoints by {deviation:.3g}"
                )
    if not failures:
        return ValidationSummary(
            valid=True,
            checks=[
                "Every sample passes the per-sample checks",
                "3D joints reproject onto their keypoints",
            ],
        )
    return ValidationSummary(valid=False, checks=failures)
