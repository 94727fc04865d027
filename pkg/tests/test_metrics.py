from __future__ import annotations

import csv
import io

import numpy as np
import pytest
from mvlift_contracts import MetricReport
from mvlift_core import ShapeMismatchError
from mvlift_geometry import DegenerateAlignmentError, aligned_residuals
from mvlift_metrics import (
    evaluate,
    frame_pa_mpjpe,
    mpjpe,
    pa_mpjpe,
    report_to_csv,
    report_to_json,
)
from scipy.spatial.transform import Rotation


def _poses(rng, frames=5, joints=17):
    return rng.normal(scale=300.0, size=(frames, joints, 3))


def test_perfect_prediction_scores_zero(rng):
    gt = _poses(rng)
    assert mpjpe(gt, gt) == 0.0
    assert pa_mpjpe(gt, gt) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("offset", [(0.0, 0.0, 12.0), (3.0, 4.0, 0.0)])
def test_non_root_offset_is_diluted_by_the_root(rng, offset):
    gt = _poses(rng)
    pred = gt.copy()
    pred[:, 1:] += np.array(offset)
    joints = gt.shape[1]
    expected = np.linalg.norm(offset) * (joints - 1) / joints
    assert mpjpe(pred, gt) == pytest.approx(expected)


def test_mpjpe_matches_direct_recomputation(rng):
    pred, gt = _poses(rng), _poses(rng)
    centered = (pred - pred[:, :1]) - (gt - gt[:, :1])
    assert mpjpe(pred, gt) == pytest.approx(np.linalg.norm(centered, axis=-1).mean())


def test_per_frame_similarities_are_forgiven(rng):
    gt = _poses(rng)
    pred = np.stack(
        [
            rng.uniform(0.5, 2.0) * frame @ Rotation.random(None, rng).as_matrix()
            + rng.normal(scale=500.0, size=3)
            for frame in gt
        ]
    )
    assert pa_mpjpe(pred, gt) <= 1e-7
    assert mpjpe(pred, gt) > 1.0


def test_single_frame_pa_equals_sequence_alignment(rng):
    pred, gt = _poses(rng, frames=1, joints=4), _poses(rng, frames=1, joints=4)
    assert pa_mpjpe(pred, gt) == pytest.approx(aligned_residuals(pred, gt).mean(), rel=1e-9)


def test_alignment_never_hurts_on_noisy_predictions(rng):
    for _ in range(200):
        gt = _poses(rng)
        pred = gt + rng.normal(scale=40.0, size=gt.shape)
        assert pa_mpjpe(pred, gt) <= mpjpe(pred, gt)


def test_degenerate_frame_is_named(rng):
    gt = _poses(rng, frames=3)
    pred = gt.copy()
    pred[1] = 0.0
    with pytest.raises(DegenerateAlignmentError, match="frame 1"):
        frame_pa_mpjpe(pred, gt)


def test_shape_mismatch(rng):
    with pytest.raises(ShapeMismatchError):
        mpjpe(_poses(rng, joints=16), _poses(rng))


def test_single_activity_report_is_zero(rng):
    gt = _poses(rng)
    report = evaluate([gt], [gt], ["tennis_serve"])
    assert report.mpjpe_mm == 0.0
    assert report.per_activity["tennis_serve"].frame_count == 5


def test_overall_is_frame_weighted(rng):
    short_gt, long_gt = _poses(rng, frames=2), _poses(rng, frames=6)
    short_pred = short_gt.copy()
    short_pred[:, 1:] += np.array([0.0, 0.0, 17.0])
    long_pred = long_gt.copy()
    long_pred[:, 1:] += np.array([0.0, 0.0, 34.0])
    report = evaluate([long_pred, short_pred], [long_gt, short_gt], ["volley", "jumping"])
    assert list(report.per_activity) == ["jumping", "volley"]
    assert report.per_activity["jumping"].mpjpe_mm == pytest.approx(16.0)
    assert report.per_activity["volley"].mpjpe_mm == pytest.approx(32.0)
    assert report.mpjpe_mm == pytest.approx((2 * 16.0 + 6 * 32.0) / 8)
    assert report.frame_count == 8


def test_evaluate_rejects_empty_and_mismatched_input(rng):
    with pytest.raises(ValueError, match="nothing to evaluate"):
        evaluate([], [], [])
    with pytest.raises(ValueError, match="activity labels"):
        evaluate([_poses(rng)], [_poses(rng)], [])


def test_report_csv_ends_with_overall_row(rng):
    gt = _poses(rng)
    report = evaluate([gt, gt], [gt, gt], ["b", "a"])
    rows = list(csv.DictReader(io.StringIO(report_to_csv(report))))
    assert [row["activity"] for row in rows] == ["a", "b", "all"]
    assert rows[-1]["frameCount"] == "10"


def test_report_json_round_trips(rng):
    pred, gt = _poses(rng), _poses(rng)
    report = evaluate([pred], [gt], ["soccer_kick"])
    assert MetricReport.model_validate_json(report_to_json(report)) == report


def test_mpjpe_ignores_a_common_translation(rng):
    gt, pred = _poses(rng), _poses(rng)
    shifted = pred + np.array([250.0, -40.0, 1200.0])
    assert mpjpe(shifted, gt) == pytest.approx(mpjpe(pred, gt), rel=1e-12)
    assert mpjpe(pred, gt + np.array([0.0, 7.0, 0.0])) == pytest.approx(mpjpe(pred, gt), rel=1e-12)
