from .experiments import (
    ABLATION_LAMBDA_CON,
    BASELINE_CELL,
    ExperimentCell,
    ExperimentData,
    build_experiment_data,
    held_out_view,
    objective_cells,
    run_cell,
    run_data_vs_loss_attribution,
    run_objective_comparison,
    run_view_count_ablation,
    run_view_selection_ablation,
    view_count_cells,
    view_selection_cells,
)
from .gradcheck import (
    GradientCheck,
    central_difference,
    check_end_to_end_gradients,
    check_loss_gradients,
    relative_error,
)
from .plotting import plot_payload, write_plot_svg
from .selftest import ProcrustesCase, procrustes_selftest
from .store import ExperimentSpecError, ExperimentStore, load_experiment_spec
from .tables import results_csv, timings_csv, write_table
from .telemetry import RunMetrics

__all__ = [
    "ABLATION_LAMBDA_CON",
    "BASELINE_CELL",
    "ExperimentCell",
    "ExperimentData",
    "ExperimentSpecError",
    "ExperimentStore",
    "GradientCheck",
    "ProcrustesCase",
    "RunMetrics",
    "build_experiment_data",
    "central_difference",
    "check_end_to_end_gradients",
    "check_loss_gradients",
    "held_out_view",
    "load_experiment_spec",
    "objective_cells",
    "plot_payload",
    "procrustes_selftest",
    "relative_error",
    "results_csv",
    "run_cell",
    "run_data_vs_loss_attribution",
    "run_objective_comparison",
    "run_view_count_ablation",
    "run_view_selection_ablation",
    "timings_csv",
    "view_count_cells",
    "view_selection_cells",
    "write_plot_svg",
    "write_table",
]
