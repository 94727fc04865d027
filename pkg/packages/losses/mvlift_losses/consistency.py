"""Multiview consistency: disagreement between views after one sequence-level similarity fit.

Gradients treat the fitted alignment as a constant (stop-alignment rule). Pass previously
fitted alignments to evaluate the loss with them held fixed.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from mvlift_core import PoseSequence3D, canonical_pairs
from mvlift_geometry import DegenerateAlignmentError, SimilarityTransform, procrustes_fit

from .values import LossValue, joints_of, require_same_shape, safe_unit


@dataclass(frozen=True, eq=False)
class PairAlignment:
    """Alignment parameters for one view pair; scale zero marks a collapsed fit."""

    scale: float
    rotation: np.ndarray
    translation: np.ndarray

    @classmethod
    def from_transform(cls, xf: SimilarityTransform) -> PairAlignment:
        return cls(xf.scale, xf.rotation, xf.translation)


Alignments = Mapping[tuple[int, int], PairAlignment]


def fit_pair_alignment(
    pred_a: PoseSequence3D | np.ndarray,
    pred_b: PoseSequence3D | np.ndarray,
) -> PairAlignment:
    """Sequence-level fit of ``pred_a`` onto ``pred_b``.

    When either side has collapsed to a single point the fit maps everything onto the
    centroid of ``pred_b``.
    """
    a = joints_of(pred_a)
    b = joints_of(pred_b)
    try:
        xf = procrustes_fit(a, b)
    except DegenerateAlignmentError as error:
        if not error.collapsed:
            raise
        return PairAlignment(0.0, np.eye(3), b.reshape(-1, 3).mean(axis=0))
    return PairAlignment.from_transform(xf)


def fitted_alignments(
    predictions: Sequence[PoseSequence3D | np.ndarray],
) -> dict[tuple[int, int], PairAlignment]:
    views = [joints_of(prediction) for prediction in predictions]
    return {
        (a, b): fit_pair_alignment(views[a], views[b]) for a, b in canonical_pairs(len(views))
    }


def consistency_pair_loss(
    pred_a: PoseSequence3D | np.ndarray,
    pred_b: PoseSequence3D | np.ndarray,
    *,
    transform: SimilarityTransform | PairAlignment | None = None,
) -> LossValue:
    """Mean over frames of the aligned pose distance, aligning ``pred_a`` onto ``pred_b``."""
    a = joints_of(pred_a)
    b = joints_of(pred_b)
    require_same_shape("consistency pair", a, b)
    alignment = fit_pair_alignment(a, b) if transform is None else transform

    frame_count = a.shape[0]
    difference = alignment.scale * a @ alignment.rotation + alignment.translation - b
    frame_norms = np.sqrt(np.sum(difference**2, axis=(1, 2)))
    unit = safe_unit(difference, frame_norms) / frame_count
    grad_a = alignment.scale * unit @ alignment.rotation.T
    return LossValue(
        float(frame_norms.mean()),
        (grad_a, -unit),
        {"scale": float(alignment.scale)},
    )


def consistency_loss(
    predictions: Sequence[PoseSequence3D | np.ndarray],
    *,
    alignments: Alignments | None = None,
) -> LossValue:
    """Mean of the pair losses over all canonical view pairs of one sequence."""
    views = [joints_of(prediction) for prediction in predictions]
    pairs = canonical_pairs(len(views))
    gradients = [np.zeros_like(view) for view in views]
    total = 0.0
    for a, b in pairs:
        fixed = None if alignments is None else alignments[(a, b)]
        pair = consistency_pair_loss(views[a], views[b], transform=fixed)
        total += pair.value
        gradients[a] += pair.gradients[0]
        gradients[b] += pair.gradients[1]
    pair_count = len(pairs)
    return LossValue(
        total / pair_count,
        tuple(gradient / pair_count for gradient in gradients),
        {"pairs": float(pair_count)},
    )


def consistency_loss_sum(
    sequences: Sequence[Sequence[PoseSequence3D | np.ndarray]],
) -> LossValue:
    """Sum of per-sequence consistency losses; gradients flattened sequence-major."""
    total = 0.0
    gradients: list[np.ndarray] = []
    for predictions in sequences:
        term = consistency_loss(predictions)
        total += term.value
        gradients.extend(term.gradients)
    return LossValue(total, tuple(gradients), {"sequences": float(len(sequences))})
