from __future__ import annotations

import numpy as np
import pytest
from mvlift_camera import (
    BehindCameraError,
    azimuth_offset,
    camera_to_world,
    look_at_camera,
    order_views_for_ablation,
    project_points,
    project_sequence,
    project_to_normalized,
    projection_jacobian,
    projection_jacobians,
    unproject_normalized,
    world_to_camera,
)
from mvlift_contracts import CameraModel, RigSpec
from mvlift_core import Pose3D, PoseSequence3D
from scipy.spatial.transform import Rotation


def _camera(
    translation=(0.0, 0.0, 0.0),
    focal=(1000.0, 1000.0),
    principal=(500.0, 500.0),
    resolution=(1000, 1000),
    rotation=None,
) -> CameraModel:
    return CameraModel(
        rotation_wc=(np.eye(3) if rotation is None else rotation).tolist(),
        translation_wc=list(translation),
        focal=focal,
        principal=principal,
        resolution=resolution,
    )


def test_identity_extrinsics_leave_points_unchanged(rng):
    seq = PoseSequence3D(rng.normal(size=(2, 4, 3)))
    np.testing.assert_array_equal(world_to_camera(_camera(), seq).joints, seq.joints)


def test_translation_shifts_depth(rng):
    seq = PoseSequence3D(rng.normal(size=(2, 4, 3)))
    moved = world_to_camera(_camera(translation=(0.0, 0.0, 1000.0)), seq).joints
    np.testing.assert_allclose(moved[..., 2], seq.joints[..., 2] + 1000.0)


def test_random_extrinsics_round_trip(rng):
    rotation = Rotation.random(None, rng).as_matrix()
    camera = _camera(translation=rng.normal(size=3), rotation=rotation)
    seq = PoseSequence3D(rng.normal(size=(2, 4, 3)))
    expected = np.einsum("ij,nkj->nki", rotation, seq.joints) + camera.translation
    np.testing.assert_allclose(world_to_camera(camera, seq).joints, expected)
    back = camera_to_world(camera, world_to_camera(camera, seq)).joints
    np.testing.assert_allclose(back, seq.joints, atol=1e-12)


def test_optical_axis_projects_to_principal_point():
    pose, behind = project_to_normalized(_camera(), Pose3D(np.array([[0.0, 0.0, 2500.0]])))
    np.testing.assert_allclose(pose.coords, [[0.0, 0.0]])
    np.testing.assert_array_equal(pose.confidence, [1.0])
    assert not behind.any()


def test_projection_matches_pinhole_arithmetic():
    camera = _camera(focal=(800.0, 900.0), principal=(320.0, 240.0), resolution=(640, 480))
    coords, in_front = project_points(camera, np.array([100.0, -50.0, 2000.0]))
    # u = 360 px, v = 217.5 px
    np.testing.assert_allclose(coords, [2 * 360 / 640 - 1, 2 * 217.5 / 640 - 480 / 640])
    assert in_front


def test_behind_camera_joints_are_flagged():
    pose = Pose3D(np.array([[0.0, 0.0, 1000.0], [0.0, 0.0, -5.0]]))
    projected, behind = project_to_normalized(_camera(), pose)
    assert behind.tolist() == [False, True]
    assert np.isnan(projected.coords[1]).all()
    with pytest.raises(BehindCameraError, match="joint 1 in frame 0"):
        project_sequence(_camera(), PoseSequence3D(pose.coords[None]))


def test_unprojection_inverts_projection(rng):
    camera = _camera(focal=(800.0, 900.0), principal=(300.0, 260.0), resolution=(640, 480))
    points = rng.normal(scale=300.0, size=(10, 3)) + np.array([0.0, 0.0, 3000.0])
    coords, _ = project_points(camera, points)
    np.testing.assert_allclose(unproject_normalized(camera, coords, points[:, 2]), points)


def test_jacobian_matches_central_differences(rng):
    camera = _camera(focal=(800.0, 900.0), principal=(300.0, 260.0), resolution=(640, 480))
    step = 1e-3
    for _ in range(100):
        point = rng.normal(scale=400.0, size=3) + np.array([0.0, 0.0, 3000.0])
        numeric = np.empty((2, 3))
        for axis in range(3):
            offset = np.zeros(3)
            offset[axis] = step
            forward, _ = project_points(camera, point + offset)
            backward, _ = project_points(camera, point - offset)
            numeric[:, axis] = (forward - backward) / (2 * step)
        analytic = projection_jacobian(camera, point)
        assert np.linalg.norm(analytic - numeric) <= 1e-6 * np.linalg.norm(numeric)


def test_jacobian_structure_on_axis():
    near = projection_jacobian(_camera(), np.array([0.0, 0.0, 1000.0]))
    far = projection_jacobian(_camera(), np.array([0.0, 0.0, 2000.0]))
    assert near[0, 1] == 0.0
    assert near[1, 0] == 0.0
    assert far[0, 0] == pytest.approx(near[0, 0] / 2)


def test_jacobian_rejects_nonpositive_depth():
    with pytest.raises(BehindCameraError):
        projection_jacobians(_camera(), np.array([[0.0, 0.0, 0.0]]))


def test_look_at_camera_centers_its_target():
    target = np.array([0.0, 0.0, 900.0])
    camera = look_at_camera(np.array([4000.0, 0.0, 1200.0]), target, 1000.0, (1000, 1000))
    coords, in_front = project_points(camera, camera.rotation @ target + camera.translation)
    np.testing.assert_allclose(coords, [0.0, 0.0], atol=1e-12)
    assert in_front


def test_azimuth_offset_wraps():
    assert azimuth_offset(350.0, 10.0) == pytest.approx(20.0)
    assert azimuth_offset(0.0, 180.0) == pytest.approx(180.0)


def test_ablation_order_puts_quarter_turn_second():
    rig = RigSpec(
        camera_count=6,
        azimuths_deg=[0.0, 30.0, 60.0, 90.0, 135.0, 180.0],
        radius_mm=4000.0,
    )
    order = order_views_for_ablation(rig, "cam0")
    assert order == ["cam0", "cam3", "cam1", "cam2", "cam4", "cam5"]


def test_single_camera_order():
    rig = RigSpec(camera_count=1, azimuths_deg=[0.0], radius_mm=4000.0)
    assert order_views_for_ablation(rig, "cam0") == ["cam0"]
