from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mvlift_contracts import TrainConfig
from mvlift_core import ShapeMismatchError


@dataclass(frozen=True, eq=False)
class AdamState:
    first_moment: np.ndarray
    second_moment: np.ndarray
    step: int = 0

    @classmethod
    def zeros(cls, size: int) -> AdamState:
        return cls(np.zeros(size), np.zeros(size), 0)


def adam_step(
    params: np.ndarray,
    grads: np.ndarray,
    state: AdamState,
    config: TrainConfig,
) -> tuple[np.ndarray, AdamState]:
    """One bias-corrected Adam update of a flat parameter vector."""
    params = np.asarray(params, dtype=float)
    grads = np.asarray(grads, dtype=float)
    if params.shape != grads.shape or params.shape != state.first_moment.shape:
        raise ShapeMismatchError(
            f"parameters {params.shape}, gradients {grads.shape} and optimizer state "
            f"{state.first_moment.shape} must match"
        )
    beta1, beta2 = config.adam_beta1, config.adam_beta2
    step = state.step + 1
    first = beta1 * state.first_moment + (1 - beta1) * grads
    second = beta2 * state.second_moment + (1 - beta2) * grads**2
    first_hat = first / (1 - beta1**step)
    second_hat = second / (1 - beta2**step)
    updated = params - config.learning_rate * first_hat / (np.sqrt(second_hat) + config.adam_eps)
    return updated, AdamState(first, second, step)
