from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from mvlift_core import PoseSequence3D, ShapeMismatchError


@dataclass(frozen=True, eq=False)
class LossValue:
    """A scalar loss and its gradient with respect to each prediction input, in order."""

    value: float
    gradients: tuple[np.ndarray, ...]
    diagnostics: dict[str, float] = field(default_factory=dict)

    @property
    def gradient(self) -> np.ndarray:
        if len(self.gradients) != 1:
            raise ValueError(f"loss has {len(self.gradients)} gradient inputs")
        return self.gradients[0]


def joints_of(seq: PoseSequence3D | np.ndarray) -> np.ndarray:
    if isinstance(seq, PoseSequence3D):
        return seq.joints
    return np.asarray(seq, dtype=float)


def require_same_shape(label: str, first: np.ndarray, second: np.ndarray) -> None:
    if first.shape != second.shape:
        raise ShapeMismatchError(f"{label}: shapes {first.shape} and {second.shape} differ")
    if first.ndim < 1 or first.shape[0] == 0:
        raise ShapeMismatchError(f"{label}: sequences need at least one frame")


def safe_unit(difference: np.ndarray, norms: np.ndarray) -> np.ndarray:
    """``difference / norms`` broadcast over the trailing axes, zero where the norm is zero."""
    expanded = norms.reshape(norms.shape + (1,) * (difference.ndim - norms.ndim))
    return np.divide(
        difference,
        expanded,
        out=np.zeros_like(difference),
        where=expanded > 0,
    )


def weighted_sum(
    terms: Sequence[tuple[float, LossValue, Sequence[int]]],
    input_shapes: Sequence[tuple[int, ...]],
    diagnostics: dict[str, float] | None = None,
) -> LossValue:
    """Sum ``weight * term`` where each term's gradients map onto the given input slots."""
    gradients = [np.zeros(shape) for shape in input_shapes]
    value = 0.0
    for weight, term, slots in terms:
        value += weight * term.value
        for slot, gradient in zip(slots, term.gradients, strict=True):
            gradients[slot] += weight * gradient
    return LossValue(value, tuple(gradients), dict(diagnostics or {}))
