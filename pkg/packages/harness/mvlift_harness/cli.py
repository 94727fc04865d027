"""Command-line entry point: dataset synthesis, training, evaluation and experiments."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections.abc import Callable
from pathlib import Path

from mvlift_contracts import ExperimentSpec, ResultTable
from mvlift_data import validate_dataset, write_dataset
from mvlift_metrics import report_to_csv, report_to_json
from mvlift_model import load_checkpoint, save_checkpoint
from mvlift_trainer import TrainingSet, evaluate_view, train, train_log_to_csv

from .experiments import (
    ExperimentData,
    build_experiment_data,
    held_out_view,
    run_data_vs_loss_attribution,
    run_objective_comparison,
    run_view_count_ablation,
    run_view_selection_ablation,
)
from .gradcheck import check_end_to_end_gradients, check_loss_gradients, summarize
from .plotting import plot_payload, write_plot_svg
from .selftest import procrustes_selftest
from .store import ExperimentSpecError, ExperimentStore
from .tables import write_table
from .telemetry import RunMetrics

logger = logging.getLogger(__name__)

LOG_LEVEL_ENV = "MVLIFT_LOG_LEVEL"
THREADS_ENV = "MVLIFT_THREADS"
DEFAULT_SPEC = "reference-two-view"


def _emit(payload: dict | list) -> None:
    print(json.dumps(payload, indent=2))


def load_spec(args: argparse.Namespace) -> ExperimentSpec:
    spec = ExperimentStore().resolve(args.spec)
    updates: dict = {}
    if args.seed is not None:
        updates["replicate_seeds"] = [args.seed]
    threads = args.threads or int(os.getenv(THREADS_ENV, "1"))
    updates["train"] = spec.train.model_copy(update={"workers": max(threads, 1)})
    return spec.model_copy(update=updates)


def _cell(spec: ExperimentSpec, name: str | None):
    if name is None:
        return spec.objective_grid[0]
    for cell in spec.objective_grid:
        if cell.name == name:
            return cell
    raise ExperimentSpecError(f"{spec.name} has no objective cell named {name!r}")


def command_synth(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    data = build_experiment_data(spec)
    training_path = write_dataset(data.training, args.out / "dataset.json")
    validation_path = write_dataset(data.validation, args.out / "validation.json")
    summary = validate_dataset(
        [*data.training, *data.validation],
        check_reprojection=spec.detection_noise is None,
    )
    _emit(
        {
            "experiment": spec.name,
            "training": {"path": str(training_path), "samples": len(data.training)},
            "validation": {"path": str(validation_path), "samples": len(data.validation)},
            "validationSummary": summary.model_dump(by_alias=True),
        }
    )
    return 0 if summary.valid else 1


def command_train(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    cell = _cell(spec, args.cell)
    seed = spec.replicate_seeds[0]
    views = args.views.split(",") if args.views else list(spec.view_subsets[0])
    lifter = spec.lifter.model_copy(update={"init_seed": seed})
    config = spec.train.model_copy(
        update={"objective": cell.objective, "weights": cell.weights, "seed": seed}
    )
    data = build_experiment_data(spec)
    metrics = RunMetrics()
    params, log = train(
        TrainingSet(data.training, data.validation, views, held_out_view(spec, views)),
        config,
        lifter,
        on_epoch=lambda _entry: metrics.epochs.inc(),
    )
    args.out.mkdir(parents=True, exist_ok=True)
    save_checkpoint(params, lifter, args.out / "params.json")
    (args.out / "train_log.csv").write_text(train_log_to_csv(log))
    metrics.write(args.out / "metrics.prom")
    _emit(log.entries[-1].model_dump(mode="json", by_alias=True))
    return 0


def command_eval(args: argparse.Namespace) -> int:
    spec = load_spec(args)
    params, lifter = load_checkpoint(args.params)
    view_id = args.view or held_out_view(spec, spec.view_subsets[0])
    report = evaluate_view(params, lifter, build_experiment_data(spec).validation, view_id)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "report.json").write_text(report_to_json(report))
    (args.out / "report.csv").write_text(report_to_csv(report))
    _emit(report.model_dump(mode="json", by_alias=True))
    return 0


def _experiment_command(
    runner: Callable[..., ResultTable],
    x_label: str,
) -> Callable[[argparse.Namespace], int]:
    def command(args: argparse.Namespace) -> int:
        spec = load_spec(args)
        metrics = RunMetrics()
        data: ExperimentData = build_experiment_data(spec)
        table = runner(spec, data=data, metrics=metrics)
        paths = write_table(table, args.out)
        payload = plot_payload(table, title=table.experiment, x_label=x_label)
        (args.out / "plot.json").write_text(json.dumps(payload, indent=2) + "\n")
        write_plot_svg(payload, args.out / "results.svg")
        metrics.write(args.out / "metrics.prom")
        summary = {"experiment": table.experiment, "rows": len(table.rows)}
        summary.update({name: str(path) for name, path in paths.items()})
        _emit(summary)
        return 0

    return command


def command_check_gradients(args: argparse.Namespace) -> int:
    checks = check_loss_gradients(args.cases, args.seed or 0)
    checks += check_end_to_end_gradients(args.cases, args.seed or 0)
    summary = summarize(checks)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "gradients.json").write_text(json.dumps(summary, indent=2) + "\n")
    _emit(summary)
    return 0 if summary["passed"] else 1


def command_procrustes_selftest(args: argparse.Namespace) -> int:
    cases = procrustes_selftest(args.pairs, args.seed or 0)
    failed = [case for case in cases if not case.passed]
    _emit(
        {
            "passed": not failed,
            "cases": len(cases),
            "mirroredCases": sum(case.mirrored for case in cases),
            "failedCases": [case.index for case in failed],
            "maxObjectiveGap": max(
                case.fitted_objective - case.oracle_objective for case in cases
            ),
        }
    )
    return 0 if not failed else 1


def command_list_specs(args: argparse.Namespace) -> int:
    _emit(ExperimentStore().list())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", default=DEFAULT_SPEC, help="spec file or stored spec name")
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="mvlift", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", parents=[common], help="generate a synthetic dataset")
    synth.set_defaults(handler=command_synth)

    train_parser = commands.add_parser("train", parents=[common], help="train one lifter")
    train_parser.add_argument("--cell", default=None, help="objective cell name")
    train_parser.add_argument("--views", default=None, help="comma-separated training views")
    train_parser.set_defaults(handler=command_train)

    eval_parser = commands.add_parser("eval", parents=[common], help="evaluate a checkpoint")
    eval_parser.add_argument("--params", type=Path, required=True)
    eval_parser.add_argument("--view", default=None)
    eval_parser.set_defaults(handler=command_eval)

    for name, runner, x_label, help_text in (
        ("compare-objectives", run_objective_comparison, "objective", "objective comparison"),
        ("ablate-views", run_view_count_ablation, "training views", "view-count ablation"),
        ("ablate-selection", run_view_selection_ablation, "view pair", "view-pair ablation"),
        ("attribution", run_data_vs_loss_attribution, "training views", "data vs loss"),
    ):
        command = commands.add_parser(name, parents=[common], help=help_text)
        command.set_defaults(handler=_experiment_command(runner, x_label))

    gradients = commands.add_parser(
        "check-gradients", parents=[common], help="finite-difference gradient checks"
    )
    gradients.add_argument("--cases", type=int, default=20)
    gradients.set_defaults(handler=command_check_gradients)

    selftest = commands.add_parser(
        "procrustes-selftest", parents=[common], help="Procrustes fit against a numeric oracle"
    )
    selftest.add_argument("--pairs", type=int, default=100)
    selftest.set_defaults(handler=command_procrustes_selftest)

    list_specs = commands.add_parser("list-specs", parents=[common], help="list stored specs")
    list_specs.set_defaults(handler=command_list_specs)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = (args.log_level or os.getenv(LOG_LEVEL_ENV, "INFO")).upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.out is None:
        args.out = Path("runs") / args.command
    try:
        return args.handler(args)
    except (ValueError, KeyError, RuntimeError, OSError) as error:
        detail = error.args[0] if isinstance(error, KeyError) and error.args else str(error)
        print(json.dumps({"error": type(error).__name__, "detail": str(detail)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
