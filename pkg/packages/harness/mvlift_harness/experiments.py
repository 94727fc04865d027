"""Experiment cells: one trained and evaluated lifter per (cell, seed).

Every row depends only on the spec, the cell and the seed. Rows are sorted before
they are written.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass

from mvlift_camera import order_views_for_ablation
from mvlift_contracts import (
    ExperimentSpec,
    LossWeights,
    Objective,
    ResultRow,
    ResultTable,
)
from mvlift_core import MultiviewSample
from mvlift_data import generate_dataset, perturb_keypoints
from mvlift_model import init_params
from mvlift_trainer import TrainingSet, effective_weights, evaluate_view, train

from .telemetry import RunMetrics

logger = logging.getLogger(__name__)

ABLATION_LAMBDA_CON = 1.0
BASELINE_CELL = "baseline"


@dataclass(frozen=True)
class ExperimentCell:
    cell_id: str
    objective: Objective
    weights: LossWeights
    views: tuple[str, ...]
    eval_view: str


@dataclass(frozen=True, eq=False)
class ExperimentData:
    training: list[MultiviewSample]
    validation: list[MultiviewSample]


def build_experiment_data(spec: ExperimentSpec) -> ExperimentData:
    training = generate_dataset(spec.rig, spec.motions)
    validation = generate_dataset(spec.rig, spec.validation_motions)
    if spec.detection_noise is not None:
        training = [
            perturb_keypoints(sample, spec.detection_noise, motion.seed)
            for sample, motion in zip(training, spec.motions, strict=True)
        ]
        validation = [
            perturb_keypoints(sample, spec.detection_noise, motion.seed)
            for sample, motion in zip(validation, spec.validation_motions, strict=True)
        ]
    return ExperimentData(training, validation)


def ablation_view_order(spec: ExperimentSpec) -> list[str]:
    return list(spec.view_order or order_views_for_ablation(spec.rig, spec.reference_view))


def held_out_view(spec: ExperimentSpec, train_views: Sequence[str]) -> str:
    """The configured evaluation view, else the first rig view not used for training."""
    if spec.eval_view is not None:
        return spec.eval_view
    for view_id in ablation_view_order(spec):
        if view_id not in train_views:
            return view_id
    return spec.reference_view


def ablation_weights(spec: ExperimentSpec, lambda_con: float) -> tuple[Objective, LossWeights]:
    if spec.supervision == "3d":
        return Objective.L3D_CON, LossWeights.supervised_3d(lambda_con=lambda_con)
    return Objective.L2D_CON, LossWeights.supervised_2d(lambda_con=lambda_con)


def run_cell(
    spec: ExperimentSpec,
    cell: ExperimentCell,
    seed: int,
    data: ExperimentData,
    *,
    experiment: str | None = None,
    metrics: RunMetrics | None = None,
) -> ResultRow:
    experiment = experiment or spec.name
    lifter = spec.lifter.model_copy(update={"init_seed": seed})
    config = spec.train.model_copy(
        update={"objective": cell.objective, "weights": cell.weights, "seed": seed}
    )
    logger.info("Cell %s seed %s: training on %s", cell.cell_id, seed, "+".join(cell.views))
    started = time.perf_counter()
    status = "failed"
    try:
        if cell.cell_id == BASELINE_CELL:
            params = init_params(lifter)
        else:
            params, _ = train(
                TrainingSet(data.training, data.validation, cell.views, cell.eval_view),
                config,
                lifter,
                on_epoch=(lambda _entry: metrics.epochs.inc()) if metrics else None,
            )
        report = evaluate_view(params, lifter, data.validation, cell.eval_view)
        status = "succeeded"
    finally:
        elapsed = time.perf_counter() - started
        if metrics is not None:
            metrics.cells.labels(experiment=experiment, status=status).inc()
            metrics.cell_duration.observe(elapsed)
    logger.info(
        "Cell %s seed %s: MPJPE %.2f mm, PA-MPJPE %.2f mm",
        cell.cell_id,
        seed,
        report.mpjpe_mm,
        report.pa_mpjpe_mm,
    )
    lambda_con = 0.0
    if cell.cell_id != BASELINE_CELL:
        lambda_con = effective_weights(config, len(cell.views)).lambda_con
    return ResultRow(
        experiment=experiment,
        cell_id=cell.cell_id,
        objective=cell.objective.value if cell.cell_id != BASELINE_CELL else BASELINE_CELL,
        views=list(cell.views),
        eval_view=cell.eval_view,
        seed=seed,
        mpjpe_mm=report.mpjpe_mm,
        pa_mpjpe_mm=report.pa_mpjpe_mm,
        per_activity=report.per_activity,
        frame_count=report.frame_count,
        lambda_con=lambda_con,
        wall_clock_seconds=elapsed,
    )


def run_cells(
    spec: ExperimentSpec,
    cells: Sequence[ExperimentCell],
    *,
    experiment: str | None = None,
    data: ExperimentData | None = None,
    metrics: RunMetrics | None = None,
) -> ResultTable:
    data = data or build_experiment_data(spec)
    rows = [
        run_cell(spec, cell, seed, data, experiment=experiment, metrics=metrics)
        for cell in cells
        for seed in spec.replicate_seeds
    ]
    return ResultTable(experiment=experiment or spec.name, rows=rows).ordered()


def objective_cells(spec: ExperimentSpec) -> list[ExperimentCell]:
    views = tuple(spec.view_subsets[0])
    eval_view = held_out_view(spec, views)
    cells = [
        ExperimentCell(f"{index:02d}-{cell.name}", cell.objective, cell.weights, views, eval_view)
        for index, cell in enumerate(spec.objective_grid, start=1)
    ]
    if spec.include_baseline:
        objective, weights = ablation_weights(spec, 0.0)
        cells.insert(0, ExperimentCell(BASELINE_CELL, objective, weights, views, eval_view))
    return cells


def view_count_cells(spec: ExperimentSpec, lambda_con: float) -> list[ExperimentCell]:
    order = ablation_view_order(spec)
    eval_view = spec.eval_view or spec.reference_view
    objective, weights = ablation_weights(spec, lambda_con)
    return [
        ExperimentCell(f"views-{count}", objective, weights, tuple(order[:count]), eval_view)
        for count in range(1, len(order) + 1)
    ]


def view_selection_cells(spec: ExperimentSpec) -> list[ExperimentCell]:
    reference = spec.reference_view
    eval_view = spec.eval_view or reference
    objective, weights = ablation_weights(spec, ABLATION_LAMBDA_CON)
    return [
        ExperimentCell(
            f"{reference}+{view_id}", objective, weights, (reference, view_id), eval_view
        )
        for view_id in spec.rig.view_ids
        if view_id != reference
    ]


def run_objective_comparison(
    spec: ExperimentSpec,
    *,
    data: ExperimentData | None = None,
    metrics: RunMetrics | None = None,
) -> ResultTable:
    return run_cells(spec, objective_cells(spec), data=data, metrics=metrics)


def run_view_count_ablation(
    spec: ExperimentSpec,
    *,
    lambda_con: float = ABLATION_LAMBDA_CON,
    data: ExperimentData | None = None,
    metrics: RunMetrics | None = None,
) -> ResultTable:
    """One cell per view count; a single view trains without the consistency term."""
    return run_cells(
        spec,
        view_count_cells(spec, lambda_con),
        experiment=f"{spec.name}-views",
        data=data,
        metrics=metrics,
    )


def run_view_selection_ablation(
    spec: ExperimentSpec,
    *,
    data: ExperimentData | None = None,
    metrics: RunMetrics | None = None,
) -> ResultTable:
    return run_cells(
        spec,
        view_selection_cells(spec),
        experiment=f"{spec.name}-selection",
        data=data,
        metrics=metrics,
    )


def run_data_vs_loss_attribution(
    spec: ExperimentSpec,
    *,
    data: ExperimentData | None = None,
    metrics: RunMetrics | None = None,
) -> ResultTable:
    """The view-count ablation with the consistency weight set to zero."""
    return run_cells(
        spec,
        view_count_cells(spec, 0.0),
        experiment=f"{spec.name}-attribution",
        data=data,
        metrics=metrics,
    )
