from __future__ import annotations

from dataclasses import dataclass
from typing import Self

import numpy as np
from mvlift_contracts import LifterConfig
from mvlift_core import ShapeMismatchError


def layer_shapes(config: LifterConfig) -> list[tuple[int, int]]:
    sizes = config.layer_sizes
    return list(zip(sizes[:-1], sizes[1:], strict=True))


@dataclass(frozen=True, eq=False)
class LayerStack:
    """Per-layer weight matrices ``(fan_in, fan_out)`` and bias vectors."""

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "biases", tuple(self.biases))
        if len(self.weights) != len(self.biases):
            raise ShapeMismatchError("every layer needs one weight matrix and one bias")
        for weight, bias in zip(self.weights, self.biases, strict=True):
            if weight.ndim != 2 or bias.shape != (weight.shape[1],):
                raise ShapeMismatchError(
                    f"layer weight {weight.shape} does not fit bias {bias.shape}"
                )

    @property
    def shapes(self) -> list[tuple[int, int]]:
        return [weight.shape for weight in self.weights]

    @property
    def size(self) -> int:
        pairs = zip(self.weights, self.biases, strict=True)
        return sum(weight.size + bias.size for weight, bias in pairs)

    def flatten(self) -> np.ndarray:
        parts = []
        for weight, bias in zip(self.weights, self.biases, strict=True):
            parts.extend((weight.ravel(), bias))
        return np.concatenate(parts)

    @classmethod
    def unflatten(cls, vector: np.ndarray, shapes: list[tuple[int, int]]) -> Self:
        vector = np.asarray(vector, dtype=float)
        expected = sum(fan_in * fan_out + fan_out for fan_in, fan_out in shapes)
        if vector.shape != (expected,):
            raise ShapeMismatchError(f"expected {expected} parameters, got {vector.shape}")
        weights, biases, offset = [], [], 0
        for fan_in, fan_out in shapes:
            weights.append(vector[offset : offset + fan_in * fan_out].reshape(fan_in, fan_out))
            offset += fan_in * fan_out
            biases.append(vector[offset : offset + fan_out].copy())
            offset += fan_out
        return cls(tuple(weight.copy() for weight in weights), tuple(biases))

    def matches(self, config: LifterConfig) -> bool:
        return self.shapes == layer_shapes(config)


class LifterParams(LayerStack):
    pass


class GradientBundle(LayerStack):
    @classmethod
    def zeros_like(cls, params: LayerStack) -> GradientBundle:
        return cls(
            tuple(np.zeros_like(weight) for weight in params.weights),
            tuple(np.zeros_like(bias) for bias in params.biases),
        )

    def __add__(self, other: GradientBundle) -> GradientBundle:
        return GradientBundle(
            tuple(a + b for a, b in zip(self.weights, other.weights, strict=True)),
            tuple(a + b for a, b in zip(self.biases, other.biases, strict=True)),
        )

    def scaled(self, factor: float) -> GradientBundle:
        return GradientBundle(
            tuple(factor * weight for weight in self.weights),
            tuple(factor * bias for bias in self.biases),
        )
