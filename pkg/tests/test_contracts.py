from __future__ import annotations

import pytest
from mvlift_contracts import (
    ExperimentSpec,
    JointRecipe,
    LossWeights,
    Objective,
    RigSpec,
    Skeleton,
    TrainConfig,
)
from pydantic import ValidationError


def test_reference_spec_has_expected_shape(reference_spec):
    assert reference_spec.rig.camera_count == 3
    assert len(reference_spec.motions) >= 20
    assert [cell.name for cell in reference_spec.objective_grid] == [
        "L2D",
        "L2Dcon",
        "L3D",
        "L3Dcon",
    ]
    assert reference_spec.view_subsets == [["right", "front"]]
    assert reference_spec.replicate_seeds == [0, 1, 2]


def test_reference_motions_use_distinct_subjects(reference_spec):
    subjects = [motion.subject_id for motion in reference_spec.motions]
    assert len(set(subjects)) == len(subjects)


def test_training_and_validation_subjects_must_be_disjoint(reference_spec):
    payload = reference_spec.model_dump(mode="json", by_alias=True)
    payload["validationMotions"][0]["subject"] = payload["motions"][0]["subject"]
    with pytest.raises(ValidationError, match="disjoint subjects"):
        ExperimentSpec.model_validate(payload)


def test_view_subsets_must_name_rig_views(reference_spec):
    payload = reference_spec.model_dump(mode="json", by_alias=True)
    payload["viewSubsets"] = [["right", "top"]]
    with pytest.raises(ValidationError, match="unknown views: top"):
        ExperimentSpec.model_validate(payload)


def test_view_order_starts_with_reference(reference_spec):
    payload = reference_spec.model_dump(mode="json", by_alias=True)
    payload["viewOrder"] = ["front", "right", "holdout"]
    with pytest.raises(ValidationError, match="start with the reference view"):
        ExperimentSpec.model_validate(payload)


def test_unknown_fields_are_rejected(reference_spec):
    payload = reference_spec.model_dump(mode="json", by_alias=True)
    payload["earlyStopping"] = True
    with pytest.raises(ValidationError, match="earlyStopping"):
        ExperimentSpec.model_validate(payload)


def test_loss_weights_need_one_positive_term():
    with pytest.raises(ValidationError, match="at least one loss weight"):
        LossWeights()


def test_loss_weight_aliases_are_camel_case():
    payload = LossWeights.supervised_2d().model_dump(by_alias=True)
    assert payload["lambda2dReproj"] == 1.0
    assert payload["lambdaCon"] == 0.3


def test_default_supervised_weights():
    weights = LossWeights.supervised_3d()
    assert (weights.lambda_pos, weights.lambda_vel, weights.lambda_scale) == (1.0, 20.0, 0.5)
    assert weights.lambda_con == 0.2


def test_train_config_defaults():
    config = TrainConfig()
    assert config.epochs == 30
    assert config.learning_rate == 2e-4
    assert (config.adam_beta1, config.adam_beta2, config.adam_eps) == (0.9, 0.999, 1e-8)


def test_2d_objective_needs_reprojection_weight():
    with pytest.raises(ValidationError, match="positive reprojection weight"):
        TrainConfig(objective=Objective.L2D, weights=LossWeights(lambda_pos=1.0))


def test_objective_flags():
    assert Objective.L3D_CON.needs_3d and Objective.L3D_CON.uses_consistency
    assert not Objective.L2D.needs_3d and not Objective.L2D.uses_consistency


def test_rig_azimuth_count_must_match():
    with pytest.raises(ValidationError, match="2 azimuths"):
        RigSpec(camera_count=3, azimuths_deg=[0.0, 90.0], radius_mm=4000.0)


def test_rig_default_view_ids():
    rig = RigSpec(camera_count=2, azimuths_deg=[0.0, 90.0], radius_mm=4000.0)
    assert rig.view_ids == ["cam0", "cam1"]
    assert rig.azimuth_of("cam1") == 90.0


def test_skeleton_rejects_parent_cycles():
    with pytest.raises(ValidationError, match="parent cycle"):
        Skeleton(name="loop", joint_names=["a", "b", "c"], parent_index=[None, 2, 1], root_index=0)


def test_blend_weights_must_sum_to_one():
    with pytest.raises(ValidationError, match="must sum to 1"):
        JointRecipe(target="spine", kind="blend", sources=[0, 1], weights=[0.5, 0.6])


def test_midpoint_recipe_weights():
    recipe = JointRecipe(target="pelvis", kind="midpoint", sources=[11, 12])
    assert recipe.source_weights() == [(11, 0.5), (12, 0.5)]
