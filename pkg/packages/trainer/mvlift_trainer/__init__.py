from .adam import AdamState, adam_step
from .batching import WindowRef, all_windows, assemble_multiview_batch, window_starts
from .errors import MissingLabelsError
from .inference import evaluate_view, predict_sequence, tile_starts
from .log_io import train_log_to_csv
from .loop import TrainingSet, train
from .objectives import (
    NOMINAL_HEIGHT_MM,
    WindowResult,
    effective_weights,
    image_scale,
    initial_log_depth,
    placed_2d_loss,
    require_labels,
    window_loss,
    window_objective,
)

__all__ = [
    "NOMINAL_HEIGHT_MM",
    "AdamState",
    "MissingLabelsError",
    "TrainingSet",
    "WindowRef",
    "WindowResult",
    "adam_step",
    "all_windows",
    "assemble_multiview_batch",
    "effective_weights",
    "evaluate_view",
    "image_scale",
    "initial_log_depth",
    "placed_2d_loss",
    "predict_sequence",
    "require_labels",
    "tile_starts",
    "train",
    "train_log_to_csv",
    "window_loss",
    "window_objective",
    "window_starts",
]
