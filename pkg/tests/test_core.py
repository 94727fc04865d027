from __future__ import annotations

import numpy as np
import pytest
from mvlift_core import (
    H36M_SKELETON,
    InapplicableConsistencyError,
    MultiviewSample,
    Pose2D,
    PoseSequence2D,
    PoseSequence3D,
    ShapeMismatchError,
    ViewRecording,
    canonical_pairs,
    enumerate_view_pairs,
    select_views,
    validate_sample,
)


def _view(view_id, camera, frames, joints=17):
    return ViewRecording(
        view_id=view_id,
        camera=camera,
        keypoints=PoseSequence2D(np.zeros((frames, joints, 2))),
    )


def test_canonical_pairs_counts():
    assert canonical_pairs(2) == [(0, 1)]
    assert len(canonical_pairs(4)) == 6
    assert len(canonical_pairs(7)) == 21
    assert all(a < b for a, b in canonical_pairs(7))


def test_single_view_has_no_pairs():
    with pytest.raises(InapplicableConsistencyError, match="at least two views"):
        canonical_pairs(1)


def test_view_pairs_use_view_ids(ring_camera):
    sample = MultiviewSample("s", (_view("a", ring_camera, 3), _view("b", ring_camera, 3)))
    assert enumerate_view_pairs(sample) == [("a", "b")]


def test_frame_count_mismatch_is_reported(ring_camera):
    sample = MultiviewSample("s", (_view("a", ring_camera, 10), _view("b", ring_camera, 9)))
    summary = validate_sample(sample)
    assert not summary.valid
    assert any("frame count mismatch" in check for check in summary.checks)


def test_skeleton_mismatch_is_reported(ring_camera):
    sample = MultiviewSample("s", (_view("a", ring_camera, 4, joints=16),))
    summary = validate_sample(sample)
    assert not summary.valid
    assert any("skeleton mismatch" in check for check in summary.checks)


def test_non_finite_joint_is_named(ring_camera):
    keypoints = np.zeros((3, 17, 2))
    keypoints[1, 4] = np.nan
    view = ViewRecording("a", ring_camera, PoseSequence2D(keypoints))
    summary = validate_sample(MultiviewSample("s", (view,)))
    assert "s view a 2D frame 1 joint head has non-finite coordinates" in summary.checks


def test_clean_sample_is_valid(ring_camera):
    summary = validate_sample(MultiviewSample("s", (_view("a", ring_camera, 4),)))
    assert summary.valid


def test_select_views_keeps_requested_order(ring_camera):
    views = tuple(_view(name, ring_camera, 2) for name in ("a", "b", "c"))
    sample = MultiviewSample("s", views)
    assert select_views(sample, ["c", "a"]).view_ids == ["c", "a"]
    with pytest.raises(KeyError):
        select_views(sample, ["d"])


def test_pose_shapes_are_checked():
    with pytest.raises(ShapeMismatchError):
        PoseSequence3D(np.zeros((2, 17, 2)))
    with pytest.raises(ShapeMismatchError, match="at least one frame"):
        PoseSequence3D(np.zeros((0, 17, 3)))


def test_poses_are_read_only():
    seq = PoseSequence3D(np.zeros((2, 3, 3)))
    with pytest.raises(ValueError):
        seq.joints[0, 0, 0] = 1.0


def test_default_confidence_is_one():
    pose = Pose2D(np.zeros((4, 2)))
    np.testing.assert_array_equal(pose.confidence, np.ones(4))


def test_sequence_round_trips_through_frames():
    seq = PoseSequence2D(np.arange(12.0).reshape(2, 3, 2), np.full((2, 3), 0.5))
    rebuilt = PoseSequence2D.from_frames(seq.frames)
    np.testing.assert_array_equal(rebuilt.keypoints, seq.keypoints)
    np.testing.assert_array_equal(rebuilt.confidence, seq.confidence)


def test_root_relative_zeroes_the_root():
    joints = np.random.default_rng(3).normal(size=(4, 17, 3))
    centered = PoseSequence3D(joints).root_relative(0).joints
    np.testing.assert_array_equal(centered[:, 0], 0.0)


def test_topological_order_visits_parents_first():
    order = H36M_SKELETON.topological_order()
    position = {joint: index for index, joint in enumerate(order)}
    for parent, joint in H36M_SKELETON.bones():
        assert position[parent] < position[joint]
