"""Fully connected lifter over a flattened keypoint window.

Input ``(..., w, J, 2)`` normalized keypoints, optionally centered on the root keypoint.
Output ``(..., w, J, 3)`` root-relative camera-frame joints in millimeters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mvlift_contracts import LifterConfig
from mvlift_core import ShapeMismatchError

from .params import GradientBundle, LifterParams, layer_shapes


@dataclass(frozen=True, eq=False)
class ForwardCache:
    config: LifterConfig
    leading_shape: tuple[int, ...]
    layer_inputs: tuple[np.ndarray, ...]
    activations: tuple[np.ndarray, ...]


def init_params(config: LifterConfig) -> LifterParams:
    """Glorot-uniform weights and zero biases, reproducible from ``init_seed``."""
    rng = np.random.default_rng(config.init_seed)
    weights, biases = [], []
    for fan_in, fan_out in layer_shapes(config):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return LifterParams(tuple(weights), tuple(biases))


def _activate(config: LifterConfig, values: np.ndarray) -> np.ndarray:
    if config.activation == "tanh":
        return np.tanh(values)
    return np.maximum(values, 0.0)


def _activation_slope(config: LifterConfig, output: np.ndarray) -> np.ndarray:
    if config.activation == "tanh":
        return 1.0 - output**2
    return (output > 0).astype(float)


def _subtract_root(values: np.ndarray, root_index: int) -> np.ndarray:
    return values - values[..., root_index : root_index + 1, :]


def _subtract_root_backward(upstream: np.ndarray, root_index: int) -> np.ndarray:
    gradient = upstream.copy()
    gradient[..., root_index, :] -= upstream.sum(axis=-2)
    return gradient


def _check_params(params: LifterParams, config: LifterConfig) -> None:
    if not params.matches(config):
        raise ShapeMismatchError(
            f"parameters {params.shapes} do not fit lifter layers {layer_shapes(config)}"
        )


def forward(
    params: LifterParams,
    config: LifterConfig,
    window: np.ndarray,
) -> tuple[np.ndarray, ForwardCache]:
    window = np.asarray(window, dtype=float)
    expected = (config.window_frames, config.joint_count, 2)
    if window.ndim < 3 or window.shape[-3:] != expected:
        raise ShapeMismatchError(f"window shape {window.shape} does not end with {expected}")
    _check_params(params, config)
    leading_shape = window.shape[:-3]
    if config.center_input:
        window = _subtract_root(window, config.root_index)
    hidden = window.reshape(-1, config.input_size)

    layer_inputs, activations = [], []
    last = len(params.weights) - 1
    for layer, (weight, bias) in enumerate(zip(params.weights, params.biases, strict=True)):
        layer_inputs.append(hidden)
        hidden = hidden @ weight + bias
        if layer < last:
            hidden = _activate(config, hidden)
            activations.append(hidden)

    joints = hidden.reshape(*leading_shape, config.window_frames, config.joint_count, 3)
    output = _subtract_root(config.output_scale_mm * joints, config.root_index)
    cache = ForwardCache(config, leading_shape, tuple(layer_inputs), tuple(activations))
    return output, cache


def backward(
    params: LifterParams,
    cache: ForwardCache,
    upstream: np.ndarray,
) -> tuple[GradientBundle, np.ndarray]:
    """Parameter gradients and the gradient with respect to the input window."""
    config = cache.config
    _check_params(params, config)
    if len(cache.layer_inputs) != len(params.weights):
        raise ShapeMismatchError("cache was produced by a different network")
    expected = (*cache.leading_shape, config.window_frames, config.joint_count, 3)
    upstream = np.asarray(upstream, dtype=float)
    if upstream.shape != expected:
        raise ShapeMismatchError(f"upstream gradient {upstream.shape} != output {expected}")

    grad = _subtract_root_backward(upstream, config.root_index) * config.output_scale_mm
    grad = grad.reshape(-1, config.output_size)
    weight_grads: list[np.ndarray] = []
    bias_grads: list[np.ndarray] = []
    for layer in range(len(params.weights) - 1, -1, -1):
        if layer < len(params.weights) - 1:
            grad = grad * _activation_slope(config, cache.activations[layer])
        weight_grads.append(cache.layer_inputs[layer].T @ grad)
        bias_grads.append(grad.sum(axis=0))
        grad = grad @ params.weights[layer].T

    grad_input = grad.reshape(*cache.leading_shape, config.window_frames, config.joint_count, 2)
    if config.center_input:
        grad_input = _subtract_root_backward(grad_input, config.root_index)
    bundle = GradientBundle(tuple(reversed(weight_grads)), tuple(reversed(bias_grads)))
    return bundle, grad_input
