from __future__ import annotations

import numpy as np
from mvlift_contracts import ValidationSummary

from .poses import MultiviewSample


def _non_finite(label: str, array: np.ndarray, skeleton_names: list[str]) -> list[str]:
    failures = []
    bad = ~np.isfinite(array)
    if array.ndim == 3:
        bad = bad.any(axis=2)
    for frame, joint in zip(*np.nonzero(bad), strict=True):
        name = skeleton_names[joint] if joint < len(skeleton_names) else str(joint)
        failures.append(f"{label} frame {frame} joint {name} has non-finite coordinates")
    return failures


def validate_sample(sample: MultiviewSample) -> ValidationSummary:
    failures: list[str] = []
    skeleton = sample.skeleton
    expected_frames = sample.frame_count
    view_ids = sample.view_ids
    if len(set(view_ids)) != len(view_ids):
        failures.append(f"{sample.sequence_id} repeats a view id")

    for view in sample.views:
        label = f"{sample.sequence_id} view {view.view_id}"
        keypoints = view.keypoints
        if keypoints.frame_count != expected_frames:
            failures.append(
                f"{label}: frame count mismatch ({keypoints.frame_count} frames, "
                f"expected {expected_frames})"
            )
        if keypoints.frame_rate_hz != sample.frame_rate_hz:
            failures.append(f"{label}: frame rate mismatch")
        if keypoints.joint_count != skeleton.joint_count:
            failures.append(
                f"{label}: skeleton mismatch ({keypoints.joint_count} joints, "
                f"{skeleton.name} has {skeleton.joint_count})"
            )
        failures.extend(_non_finite(f"{label} 2D", keypoints.keypoints, skeleton.joint_names))
        confidence = keypoints.confidence
        if np.any(~np.isfinite(confidence)) or np.any((confidence < 0) | (confidence > 1)):
            failures.append(f"{label}: confidences must lie in [0, 1]")

        for kind, sequence in (("3D", view.joints_3d), ("world 3D", view.joints_world)):
            if sequence is None:
                continue
            if sequence.frame_count != expected_frames:
                failures.append(
                    f"{label}: {kind} frame count mismatch ({sequence.frame_count} frames, "
                    f"expected {expected_frames})"
                )
            if sequence.joint_count != skeleton.joint_count:
                failures.append(f"{label}: {kind} skeleton mismatch")
            failures.extend(_non_finite(f"{label} {kind}", sequence.joints, skeleton.joint_names))

    if not failures:
        return ValidationSummary(
            valid=True,
            checks=[
                "All views share one frame count",
                "Joint counts match the skeleton",
                "Coordinates are finite and confidences lie in [0, 1]",
            ],
        )
    return ValidationSummary(valid=False, checks=failures)
