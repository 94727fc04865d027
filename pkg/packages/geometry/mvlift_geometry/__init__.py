from .procrustes import (
    DegenerateAlignmentError,
    aligned_residuals,
    alignment_objective,
    fit_points,
    procrustes_fit,
)
from .transform import SimilarityTransform, apply_transform

__all__ = [
    "DegenerateAlignmentError",
    "SimilarityTransform",
    "aligned_residuals",
    "alignment_objective",
    "apply_transform",
    "fit_points",
    "procrustes_fit",
]
