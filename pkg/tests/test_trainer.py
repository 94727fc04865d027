from __future__ import annotations

import csv
import io
from dataclasses import replace

import numpy as np
import pytest
from mvlift_contracts import LossWeights, Objective, TrainConfig
from mvlift_core import ShapeMismatchError
from mvlift_data import generate_dataset, motion_preset
from mvlift_losses import consistency_loss
from mvlift_model import forward, init_params
from mvlift_trainer import (
    AdamState,
    MissingLabelsError,
    TrainingSet,
    WindowRef,
    adam_step,
    all_windows,
    assemble_multiview_batch,
    effective_weights,
    evaluate_view,
    image_scale,
    initial_log_depth,
    predict_sequence,
    tile_starts,
    train,
    train_log_to_csv,
    window_loss,
    window_objective,
    window_starts,
)

REPROJECTION_ONLY = LossWeights(lambda_2d_reproj=1.0)


def _without_labels(sample):
    return sample.with_views(tuple(replace(view, joints_3d=None) for view in sample.views))


def test_adam_ignores_zero_gradient():
    params = np.array([1.0, -2.0, 3.0])
    updated, state = adam_step(params, np.zeros(3), AdamState.zeros(3), TrainConfig())
    np.testing.assert_array_equal(updated, params)
    assert state.step == 1


def test_adam_first_step_moves_by_the_learning_rate():
    config = TrainConfig(learning_rate=0.01)
    grads = np.array([5.0, -0.2, 1e3])
    updated, _ = adam_step(np.zeros(3), grads, AdamState.zeros(3), config)
    np.testing.assert_allclose(updated, -0.01 * np.sign(grads), rtol=1e-6)


def test_adam_matches_the_bias_corrected_recursion():
    config = TrainConfig(learning_rate=0.05, adam_beta1=0.8, adam_beta2=0.9, adam_eps=1e-6)
    gradients = [np.array([1.0, -1.0]), np.array([0.5, 2.0]), np.array([-3.0, 0.25])]
    params, state = np.array([0.3, -0.7]), AdamState.zeros(2)
    expected, m, v = params.copy(), np.zeros(2), np.zeros(2)
    for step, grads in enumerate(gradients, start=1):
        params, state = adam_step(params, grads, state, config)
        m = 0.8 * m + 0.2 * grads
        v = 0.9 * v + 0.1 * grads**2
        m_hat = m / (1 - 0.8**step)
        v_hat = v / (1 - 0.9**step)
        expected = expected - 0.05 * m_hat / (np.sqrt(v_hat) + 1e-6)
    np.testing.assert_allclose(params, expected, rtol=1e-12)
    assert state.step == 3


def test_adam_rejects_mismatched_shapes():
    with pytest.raises(ShapeMismatchError):
        adam_step(np.zeros(3), np.zeros(2), AdamState.zeros(3), TrainConfig())


def test_window_starts():
    assert window_starts(20, 9) == list(range(12))
    assert window_starts(20, 9, 3) == [0, 3, 6, 9]
    assert window_starts(9, 9) == [0]
    with pytest.raises(ShapeMismatchError, match="longer than"):
        window_starts(8, 9)


def test_epoch_batches_cover_every_window_once(small_dataset):
    rng = np.random.default_rng(3)
    batches = assemble_multiview_batch(small_dataset, 5, rng, batch_windows=7, stride=2)
    flat = [ref for batch in batches for ref in batch]
    assert sorted(flat, key=lambda ref: (ref.sample_index, ref.start)) == all_windows(
        small_dataset, 5, 2
    )
    assert all(len(batch) <= 7 for batch in batches)
    assert all(ref.stop - ref.start == 5 for ref in flat)


def test_effective_weights_drop_consistency_where_it_cannot_apply():
    config = TrainConfig(objective=Objective.L2D_CON, weights=LossWeights.supervised_2d())
    assert effective_weights(config, 2).lambda_con == pytest.approx(0.3)
    assert effective_weights(config, 1).lambda_con == 0.0
    plain = config.model_copy(update={"objective": Objective.L2D})
    assert effective_weights(plain, 3).lambda_con == 0.0
    assert effective_weights(plain, 3).lambda_2d_reproj == 1.0


def test_initial_depth_is_near_the_camera_distance(small_dataset):
    depth = np.exp(initial_log_depth(small_dataset[0], WindowRef(0, 0, 5), 0))
    assert 0.6 * 4500.0 < depth < 1.6 * 4500.0


def test_ground_truth_has_no_3d_objective(small_dataset, tiny_lifter):
    config = TrainConfig(objective=Objective.L3D_CON, weights=LossWeights.supervised_3d())
    sample = small_dataset[0]
    ref = WindowRef(0, 3, 3 + tiny_lifter.window_frames)
    labels = np.stack(
        [view.joints_3d.window(ref.start, ref.stop).root_relative().joints for view in sample.views]
    )
    loss, depth_gradient = window_loss(labels, sample, ref, config, tiny_lifter, np.zeros(2))
    assert loss.value <= 1e-6
    np.testing.assert_array_equal(depth_gradient, 0.0)


def test_zero_predictions_are_not_a_2d_minimum(small_dataset, tiny_lifter):
    config = TrainConfig(objective=Objective.L2D_CON, weights=LossWeights.supervised_2d())
    sample = small_dataset[0]
    ref = WindowRef(0, 0, tiny_lifter.window_frames)
    log_depths = np.array([initial_log_depth(sample, ref, view) for view in range(2)])
    predictions = np.zeros((2, tiny_lifter.window_frames, 17, 3))
    loss, _ = window_loss(predictions, sample, ref, config, tiny_lifter, log_depths)
    assert loss.diagnostics["con"] == pytest.approx(0.0, abs=1e-9)
    assert loss.diagnostics["reproj"] > 0.0


def _noisy_labels(sample, ref, rng):
    labels = np.stack(
        [view.joints_3d.window(ref.start, ref.stop).root_relative().joints for view in sample.views]
    )
    noisy = labels + rng.normal(scale=60.0, size=labels.shape)
    noisy[..., 0, :] = 0.0
    return noisy


def test_2d_consistency_compares_root_relative_poses_in_image_units(
    small_dataset, tiny_lifter, rng
):
    config = TrainConfig(objective=Objective.L2D_CON, weights=LossWeights.supervised_2d())
    sample = small_dataset[0]
    ref = WindowRef(0, 2, 2 + tiny_lifter.window_frames)
    predictions = _noisy_labels(sample, ref, rng)
    log_depths = np.array([initial_log_depth(sample, ref, view) for view in range(2)])
    loss, _ = window_loss(predictions, sample, ref, config, tiny_lifter, log_depths)

    scales = [
        image_scale(view.camera, np.exp(depth))
        for view, depth in zip(sample.views, log_depths, strict=True)
    ]
    assert scales[0] == pytest.approx(2.0 / np.exp(log_depths[0]))
    expected = consistency_loss([s * p for s, p in zip(scales, predictions, strict=True)])
    assert loss.diagnostics["con"] == pytest.approx(expected.value, rel=1e-12)
    assert 0.0 < loss.diagnostics["con"] < 1.0


def test_2d_consistency_ignores_the_root_placement(small_dataset, tiny_lifter, rng):
    config = TrainConfig(objective=Objective.L2D_CON, weights=LossWeights.supervised_2d())
    plain = config.model_copy(update={"weights": REPROJECTION_ONLY})
    sample = small_dataset[0]
    ref = WindowRef(0, 0, tiny_lifter.window_frames)
    predictions = _noisy_labels(sample, ref, rng)
    near = np.log(np.array([4000.0, 4000.0]))
    with_term, depth_gradient = window_loss(predictions, sample, ref, config, tiny_lifter, near)
    alone, plain_gradient = window_loss(predictions, sample, ref, plain, tiny_lifter, near)
    np.testing.assert_array_equal(depth_gradient, plain_gradient)
    assert with_term.diagnostics["reproj"] == alone.diagnostics["reproj"]

    far, _ = window_loss(predictions, sample, ref, config, tiny_lifter, near + np.log(2.0))
    assert far.diagnostics["con"] == pytest.approx(with_term.diagnostics["con"] / 2, rel=1e-9)


def test_consistency_weight_changes_the_gradient(small_dataset, tiny_lifter):
    sample = small_dataset[0]
    ref = WindowRef(0, 0, tiny_lifter.window_frames)
    params = init_params(tiny_lifter)
    log_depths = np.array([initial_log_depth(sample, ref, view) for view in range(2)])
    results = [
        window_objective(
            params,
            sample,
            ref,
            TrainConfig(objective=Objective.L2D_CON, weights=LossWeights.supervised_2d(con)),
            tiny_lifter,
            log_depths,
        )
        for con in (0.0, 0.3)
    ]
    assert "con" not in results[0].components
    assert results[1].components["con"] > 0.0
    assert not np.allclose(results[0].gradient.flatten(), results[1].gradient.flatten())


def test_zero_consistency_weight_reproduces_the_2d_baseline(
    small_dataset, tiny_lifter, quick_train
):
    dataset = TrainingSet(small_dataset)
    plain = quick_train.model_copy(
        update={"objective": Objective.L2D, "weights": REPROJECTION_ONLY}
    )
    with_term = plain.model_copy(update={"objective": Objective.L2D_CON})
    params_plain, log_plain = train(dataset, plain, tiny_lifter)
    params_term, log_term = train(dataset, with_term, tiny_lifter)
    assert log_plain.entries == log_term.entries
    np.testing.assert_array_equal(params_plain.flatten(), params_term.flatten())


def test_training_is_deterministic(small_dataset, tiny_lifter, quick_train):
    dataset = TrainingSet(small_dataset)
    first_params, first_log = train(dataset, quick_train, tiny_lifter)
    second_params, second_log = train(dataset, quick_train, tiny_lifter)
    assert first_log == second_log
    np.testing.assert_array_equal(first_params.flatten(), second_params.flatten())


def test_worker_count_does_not_change_the_result(small_dataset, tiny_lifter, quick_train):
    dataset = TrainingSet(small_dataset)
    serial_params, serial_log = train(dataset, quick_train, tiny_lifter)
    threaded = quick_train.model_copy(update={"workers": 2})
    threaded_params, threaded_log = train(dataset, threaded, tiny_lifter)
    assert threaded_log == serial_log
    np.testing.assert_array_equal(threaded_params.flatten(), serial_params.flatten())


def test_single_view_training_skips_consistency(small_dataset, tiny_lifter, quick_train, caplog):
    dataset = TrainingSet(small_dataset, train_views=["cam1"])
    with caplog.at_level("WARNING", logger="mvlift_trainer.loop"):
        _, log = train(dataset, quick_train, tiny_lifter)
    assert "consistency term skipped" in caplog.text
    assert all("con" not in entry.components for entry in log.entries)
    assert all(entry.components["reproj"] > 0.0 for entry in log.entries)


def test_lifter_overfits_a_single_window(two_view_rig, tiny_lifter):
    samples = generate_dataset(two_view_rig, [motion_preset("volley", 4, 5)])
    config = TrainConfig(
        epochs=50,
        learning_rate=1e-3,
        objective=Objective.L3D,
        weights=LossWeights(lambda_pos=1.0),
    )
    _, log = train(TrainingSet(samples), config, tiny_lifter)
    assert len(log.entries) == 50
    assert log.entries[-1].objective < 0.5 * log.entries[0].objective


def test_3d_objectives_need_labels(small_dataset, tiny_lifter, quick_train):
    unlabeled = [_without_labels(sample) for sample in small_dataset]
    config = quick_train.model_copy(
        update={"objective": Objective.L3D, "weights": LossWeights.supervised_3d()}
    )
    with pytest.raises(MissingLabelsError, match="needs 3D labels"):
        train(TrainingSet(unlabeled), config, tiny_lifter)
    _, log = train(TrainingSet(unlabeled), quick_train, tiny_lifter)
    assert len(log.entries) == quick_train.epochs


def test_validation_is_recorded_per_epoch(small_dataset, tiny_lifter, quick_train):
    dataset = TrainingSet(small_dataset[:1], small_dataset[1:], eval_view="cam1")
    seen = []
    _, log = train(dataset, quick_train, tiny_lifter, on_epoch=seen.append)
    assert seen == log.entries
    assert all(entry.validation_mpjpe_mm > 0.0 for entry in log.entries)
    assert all(entry.validation_pa_mpjpe_mm > 0.0 for entry in log.entries)


def test_train_log_csv(small_dataset, tiny_lifter, quick_train):
    config = quick_train.model_copy(update={"objective": Objective.L2D})
    _, log = train(TrainingSet(small_dataset), config, tiny_lifter)
    rows = list(csv.reader(io.StringIO(train_log_to_csv(log))))
    assert rows[0] == [
        "epoch",
        "objective",
        "validationMpjpeMm",
        "validationPaMpjpeMm",
        "behindCameraJoints",
        "reproj",
    ]
    assert [row[0] for row in rows[1:]] == ["1", "2"]
    assert rows[1][2] == ""


def test_tile_starts():
    assert tile_starts(20, 9) == [0, 9, 11]
    assert tile_starts(18, 9) == [0, 9]
    assert tile_starts(9, 9) == [0]
    with pytest.raises(ShapeMismatchError):
        tile_starts(4, 9)


def test_sequence_prediction_covers_every_frame(small_dataset, tiny_lifter):
    params = init_params(tiny_lifter)
    keypoints = small_dataset[0].views[0].keypoints
    prediction = predict_sequence(params, tiny_lifter, keypoints)
    assert prediction.joints.shape == (20, 17, 3)
    last, _ = forward(params, tiny_lifter, keypoints.keypoints[15:20])
    np.testing.assert_allclose(prediction.joints[15:20], last)


def test_evaluation_needs_labels_for_the_view(small_dataset, tiny_lifter):
    params = init_params(tiny_lifter)
    report = evaluate_view(params, tiny_lifter, small_dataset, "cam0")
    assert set(report.per_activity) == {"jumping", "tennis_serve"}
    with pytest.raises(MissingLabelsError, match="cam0"):
        evaluate_view(params, tiny_lifter, [_without_labels(small_dataset[0])], "cam0")
