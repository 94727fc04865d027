from __future__ import annotations

import json
import re

import jsonschema
import numpy as np
import pytest
from mvlift_contracts import DatasetFile, DetectionNoiseSpec, KeypointMapping, RigSpec, SubjectSplit
from mvlift_core import COCO_SKELETON, H36M_SKELETON, PoseSequence2D, PoseSequence3D
from mvlift_data import (
    DATA_DIRECTORY_ENV,
    DatasetFormatError,
    MappingError,
    RenderError,
    apply_split,
    convert_keypoints,
    data_directory,
    generate_dataset,
    generate_motion,
    identity_mapping,
    load_mapping,
    load_split,
    motion_preset,
    parse_dataset,
    perturb_keypoints,
    read_dataset,
    render_sample,
    validate_dataset,
    write_dataset,
)
from mvlift_data.synthetic import H36M_REST_OFFSETS, sequence_id_for
from mvlift_losses import reprojection_loss


def test_motion_is_a_pure_function_of_its_spec():
    spec = motion_preset("soccer_kick", 11, 30)
    np.testing.assert_array_equal(generate_motion(spec).joints, generate_motion(spec).joints)
    other = motion_preset("soccer_kick", 12, 30)
    assert not np.array_equal(generate_motion(spec).joints, generate_motion(other).joints)


@pytest.mark.parametrize("activity", ["soccer_kick", "tennis_serve", "baseball_pitch", "volley",
                                      "jumping"])
def test_bone_lengths_stay_fixed(activity):
    joints = generate_motion(motion_preset(activity, 3, 40)).joints
    for parent, joint in H36M_SKELETON.bones():
        lengths = np.linalg.norm(joints[:, joint] - joints[:, parent], axis=-1)
        rest = np.linalg.norm(H36M_REST_OFFSETS[H36M_SKELETON.joint_names[joint]])
        np.testing.assert_allclose(lengths, rest, atol=1e-9)


def test_unknown_activity():
    with pytest.raises(KeyError, match="unknown activity 'curling'"):
        motion_preset("curling", 0)


def test_generated_views_reproject_exactly(small_dataset):
    assert validate_dataset(small_dataset).valid
    for sample in small_dataset:
        for view in sample.views:
            assert reprojection_loss(view.joints_3d, view.keypoints, view.camera).value <= 1e-9


def test_generated_samples_carry_labels(small_dataset):
    sample = small_dataset[0]
    assert sample.sequence_id == "tennis_serve-S01-000"
    assert sample.activity == "tennis_serve"
    assert sample.subject == "S01"
    assert sample.view_ids == ["cam0", "cam1"]
    np.testing.assert_array_equal(
        sample.views[0].joints_world.joints, sample.views[1].joints_world.joints
    )


def test_sequence_ids_fall_back_to_seed_subjects():
    assert sequence_id_for(motion_preset("volley", 7, 10), 3) == "volley-S07-003"


def test_single_camera_rig_gives_single_view_samples():
    rig = RigSpec(camera_count=1, azimuths_deg=[45.0], radius_mm=4000.0)
    samples = generate_dataset(rig, [motion_preset("volley", 1, 10)])
    assert samples[0].view_count == 1


def test_camera_inside_the_subject_fails_to_render():
    rig = RigSpec(camera_count=1, azimuths_deg=[0.0], radius_mm=1.0, height_mm=930.0)
    motion = generate_motion(motion_preset("jumping", 1, 10))
    with pytest.raises(RenderError, match="behind camera cam0"):
        render_sample(motion, rig)


def test_keypoint_noise_is_seeded(small_dataset):
    noise = DetectionNoiseSpec(sigma_px=3.0)
    first = perturb_keypoints(small_dataset[0], noise, 5)
    second = perturb_keypoints(small_dataset[0], noise, 5)
    for a, b in zip(first.views, second.views, strict=True):
        np.testing.assert_array_equal(a.keypoints.keypoints, b.keypoints.keypoints)
        assert np.all((a.keypoints.confidence > 0) & (a.keypoints.confidence <= 1))
    assert not validate_dataset([first]).valid
    assert validate_dataset([first], check_reprojection=False).valid


def test_zero_noise_keeps_keypoints(small_dataset):
    sample = perturb_keypoints(small_dataset[0], DetectionNoiseSpec(sigma_px=0.0), 1)
    for view, original in zip(sample.views, small_dataset[0].views, strict=True):
        np.testing.assert_array_equal(view.keypoints.keypoints, original.keypoints.keypoints)
        np.testing.assert_array_equal(view.keypoints.confidence, 1.0)


def test_dataset_file_round_trips_exactly(small_dataset, tmp_path):
    path = write_dataset(small_dataset, tmp_path / "dataset.json")
    loaded = read_dataset(path)
    assert [sample.sequence_id for sample in loaded] == [s.sequence_id for s in small_dataset]
    for original, restored in zip(small_dataset, loaded, strict=True):
        assert restored.subject == original.subject
        for a, b in zip(original.views, restored.views, strict=True):
            assert a.camera == b.camera
            np.testing.assert_array_equal(a.keypoints.keypoints, b.keypoints.keypoints)
            np.testing.assert_array_equal(a.joints_3d.joints, b.joints_3d.joints)
            np.testing.assert_array_equal(a.joints_world.joints, b.joints_world.joints)
    again = write_dataset(loaded, tmp_path / "again.json")
    assert again.read_bytes() == path.read_bytes()


def test_dataset_file_matches_its_schema(small_dataset, tmp_path):
    path = write_dataset(small_dataset, tmp_path / "dataset.json")
    jsonschema.validate(json.loads(path.read_text()), DatasetFile.model_json_schema(by_alias=True))


def test_unknown_format_version_is_rejected(small_dataset, tmp_path):
    path = write_dataset(small_dataset, tmp_path / "dataset.json")
    payload = json.loads(path.read_text())
    payload["formatVersion"] = "mvlift-dataset-v0"
    with pytest.raises(DatasetFormatError, match="unsupported dataset format version"):
        parse_dataset(json.dumps(payload))


def test_truncated_file_reports_its_position(small_dataset, tmp_path):
    path = write_dataset(small_dataset, tmp_path / "dataset.json")
    text = path.read_text()
    with pytest.raises(DatasetFormatError, match=r"dataset\.json:\d+:\d+"):
        parse_dataset(text[: len(text) // 2], str(path))


def test_ragged_keypoints_are_located(small_dataset, tmp_path):
    path = write_dataset(small_dataset, tmp_path / "dataset.json")
    payload = json.loads(path.read_text())
    payload["samples"][0]["views"][1]["keypoints2d"][3].pop()
    with pytest.raises(DatasetFormatError, match=r"samples\[0\]\.views\[1\]"):
        parse_dataset(json.dumps(payload))


def test_missing_field_is_named(small_dataset, tmp_path):
    path = write_dataset(small_dataset, tmp_path / "dataset.json")
    payload = json.loads(path.read_text())
    del payload["samples"][0]["frameRateHz"]
    with pytest.raises(DatasetFormatError, match="frameRateHz"):
        parse_dataset(json.dumps(payload))


def test_duplicate_sequence_ids_are_invalid(small_dataset):
    summary = validate_dataset([small_dataset[0], small_dataset[0]])
    assert not summary.valid
    assert "sequence ids must be unique" in summary.checks


def test_empty_dataset_is_invalid():
    assert not validate_dataset([]).valid


def test_identity_mapping_changes_nothing(rng):
    seq = PoseSequence2D(rng.normal(size=(3, 17, 2)), rng.uniform(size=(3, 17)))
    converted = convert_keypoints(seq, identity_mapping(H36M_SKELETON))
    np.testing.assert_array_equal(converted.keypoints, seq.keypoints)
    np.testing.assert_array_equal(converted.confidence, seq.confidence)


def test_coco_mapping_builds_h36m_joints(rng):
    mapping = load_mapping("coco17-to-h36m17")
    assert mapping.source_format == COCO_SKELETON.name
    keypoints = rng.normal(size=(2, 17, 2))
    confidence = rng.uniform(0.2, 1.0, size=(2, 17))
    converted = convert_keypoints(PoseSequence2D(keypoints, confidence), mapping)
    pelvis = H36M_SKELETON.index("pelvis")
    spine = H36M_SKELETON.index("spine")
    left_wrist = H36M_SKELETON.index("left_wrist")
    np.testing.assert_allclose(converted.keypoints[:, pelvis], keypoints[:, [11, 12]].mean(axis=1))
    np.testing.assert_allclose(
        converted.keypoints[:, spine], keypoints[:, [5, 6, 11, 12]].mean(axis=1)
    )
    np.testing.assert_array_equal(converted.keypoints[:, left_wrist], keypoints[:, 9])
    np.testing.assert_array_equal(
        converted.confidence[:, pelvis], confidence[:, [11, 12]].min(axis=1)
    )


def test_mapping_converts_3d_sequences(rng):
    mapping = load_mapping("coco17-to-h36m17")
    joints = rng.normal(size=(2, 17, 3))
    converted = convert_keypoints(PoseSequence3D(joints), mapping)
    assert isinstance(converted, PoseSequence3D)
    np.testing.assert_allclose(converted.joints[:, 0], joints[:, [11, 12]].mean(axis=1))


def test_mapping_rejects_wrong_joint_count(rng):
    mapping = load_mapping("coco17-to-h36m17")
    with pytest.raises(MappingError, match="expects 17 joints"):
        convert_keypoints(PoseSequence2D(rng.normal(size=(2, 16, 2))), mapping)


def test_incomplete_mapping_to_known_skeleton(rng):
    mapping = KeypointMapping(
        source_format="coco17",
        target_format="h36m17",
        source_joint_count=17,
        recipes=[{"target": "pelvis", "kind": "midpoint", "sources": [11, 12]}],
    )
    with pytest.raises(MappingError, match="missing: spine"):
        convert_keypoints(PoseSequence2D(rng.normal(size=(1, 17, 2))), mapping)


def test_missing_mapping_file(tmp_path):
    with pytest.raises(MappingError, match="not found"):
        load_mapping("nope", tmp_path)


def test_subject_split_holds_out_subjects(small_dataset):
    split = load_split("sportspose-subjects")
    assert "S04" in split.validation
    custom = SubjectSplit(name="custom", validation=["S02"])
    assert [s.subject for s in apply_split(small_dataset, custom, "train")] == ["S01"]
    assert [s.subject for s in apply_split(small_dataset, custom, "validation")] == ["S02"]
    assert apply_split(small_dataset, custom, "test") == []


def test_data_directory_honors_the_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(DATA_DIRECTORY_ENV, str(tmp_path))
    assert data_directory("mappings") == tmp_path / "mappings"
    assert data_directory("mappings", tmp_path / "elsewhere") == tmp_path / "elsewhere"


def test_configured_data_directory_is_never_bypassed(monkeypatch, tmp_path):
    monkeypatch.setenv(DATA_DIRECTORY_ENV, str(tmp_path))
    with pytest.raises(MappingError, match=re.escape(str(tmp_path / "mappings"))):
        load_mapping("coco17-to-h36m17")
    monkeypatch.setenv(DATA_DIRECTORY_ENV, str(tmp_path / "absent"))
    with pytest.raises(FileNotFoundError, match=DATA_DIRECTORY_ENV):
        data_directory("mappings")
