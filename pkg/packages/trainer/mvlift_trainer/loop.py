from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from mvlift_contracts import LifterConfig, TrainConfig, TrainLog, TrainLogEntry
from mvlift_core import MultiviewSample, select_views
from mvlift_model import GradientBundle, LifterParams, init_params

from .adam import AdamState, adam_step
from .batching import WindowRef, all_windows, assemble_multiview_batch
from .inference import evaluate_view
from .objectives import WindowResult, initial_log_depth, require_labels, window_objective

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Samples to fit, the views to train on and where validation is measured."""

    samples: Sequence[MultiviewSample]
    validation_samples: Sequence[MultiviewSample] = field(default_factory=tuple)
    train_views: Sequence[str] | None = None
    eval_view: str | None = None

    def training_samples(self) -> list[MultiviewSample]:
        if self.train_views is None:
            return list(self.samples)
        return [select_views(sample, list(self.train_views)) for sample in self.samples]


def _validation_metrics(
    params: LifterParams,
    lifter: LifterConfig,
    dataset: TrainingSet,
) -> tuple[float | None, float | None]:
    samples = list(dataset.validation_samples)
    if not samples:
        return None, None
    view_id = dataset.eval_view or samples[0].view_ids[0]
    if any(sample.view(view_id).joints_3d is None for sample in samples):
        return None, None
    report = evaluate_view(params, lifter, samples, view_id)
    return report.mpjpe_mm, report.pa_mpjpe_mm


def train(
    dataset: TrainingSet,
    config: TrainConfig,
    lifter: LifterConfig | None = None,
    *,
    params: LifterParams | None = None,
    on_epoch: Callable[[TrainLogEntry], None] | None = None,
) -> tuple[LifterParams, TrainLog]:
    """Fit the lifter with Adam; a pure function of the dataset, configs and seeds."""
    lifter = lifter or LifterConfig()
    samples = dataset.training_samples()
    if not samples:
        raise ValueError("training needs at least one sample")
    view_counts = {sample.view_count for sample in samples}
    if len(view_counts) != 1:
        raise ValueError("all training samples must have the same number of views")
    view_count = view_counts.pop()
    require_labels(samples, config.objective)
    if config.objective.uses_consistency and view_count < 2:
        logger.warning("%s trains on a single view; consistency term skipped", config.objective)

    windows = all_windows(samples, lifter.window_frames, config.window_stride)
    depth_slot = {ref: row for row, ref in enumerate(windows)}
    log_depths = np.array(
        [
            [initial_log_depth(samples[ref.sample_index], ref, view) for view in range(view_count)]
            for ref in windows
        ]
    )
    params = params or init_params(lifter)
    shapes = params.shapes
    parameter_count = params.size
    learn_depth = config.learn_root_depth and not config.objective.needs_3d
    vector = params.flatten()
    if learn_depth:
        vector = np.concatenate([vector, log_depths.ravel()])
    state = AdamState.zeros(vector.size)
    rng = np.random.default_rng(config.seed)
    log = TrainLog(objective=config.objective)

    def run(ref: WindowRef) -> WindowResult:
        return window_objective(
            params, samples[ref.sample_index], ref, config, lifter, log_depths[depth_slot[ref]]
        )

    pool = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    try:
        for epoch in range(1, config.epochs + 1):
            batches = assemble_multiview_batch(
                samples,
                lifter.window_frames,
                rng,
                batch_windows=config.batch_windows,
                stride=config.window_stride,
            )
            epoch_total = 0.0
            component_totals: dict[str, float] = {}
            behind = 0
            window_count = 0
            for batch_index, batch in enumerate(batches):
                results = list(pool.map(run, batch)) if pool else [run(ref) for ref in batch]
                gradient = GradientBundle.zeros_like(params)
                depth_gradient = np.zeros_like(log_depths)
                for ref, result in zip(batch, results, strict=True):
                    gradient = gradient + result.gradient
                    depth_gradient[depth_slot[ref]] += result.log_depth_gradient
                    epoch_total += result.value
                    for name, value in result.components.items():
                        if name == "behind_camera":
                            behind += int(value)
                        else:
                            component_totals[name] = component_totals.get(name, 0.0) + value
                batch_objective = sum(result.value for result in results) / len(batch)
                logger.debug(
                    "epoch %s batch %s objective %.6g", epoch, batch_index, batch_objective
                )
                window_count += len(batch)

                scale = 1.0 / len(batch)
                flat_gradient = gradient.scaled(scale).flatten()
                if learn_depth:
                    flat_gradient = np.concatenate([flat_gradient, scale * depth_gradient.ravel()])
                vector, state = adam_step(vector, flat_gradient, state, config)
                params = LifterParams.unflatten(vector[:parameter_count], shapes)
                if learn_depth:
                    log_depths = vector[parameter_count:].reshape(log_depths.shape)

            validation_mpjpe, validation_pa = _validation_metrics(params, lifter, dataset)
            entry = TrainLogEntry(
                epoch=epoch,
                objective=epoch_total / window_count,
                components={
                    name: total / window_count for name, total in sorted(component_totals.items())
                },
                validation_mpjpe_mm=validation_mpjpe,
                validation_pa_mpjpe_mm=validation_pa,
                behind_camera_joints=behind,
            )
            log.entries.append(entry)
            logger.info(
                "Epoch %s/%s objective %.6g validation MPJPE %s",
                epoch,
                config.epochs,
                entry.objective,
                "n/a" if validation_mpjpe is None else f"{validation_mpjpe:.2f} mm",
            )
            if on_epoch is not None:
                on_epoch(entry)
    finally:
        if pool is not None:
            pool.shutdown()
    return params, log
