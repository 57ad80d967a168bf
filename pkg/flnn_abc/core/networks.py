# flnn_abc/core/networks.py
"""
FLNN and single-hidden-layer MLP: parameter layouts and forward evaluation.

Parameter layouts (flat vectors):
  FLNN: weights in expansion order, then the output bias.
  MLP:  input->hidden weights row-major (hidden x input), hidden biases,
        hidden->output weights, output bias.
"""
from typing import Tuple

import numpy as np

from flnn_abc.core.errors import InputError
from flnn_abc.core.expansion import expand_matrix, expanded_dim
from flnn_abc.core.models import ClassLabel, NetworkConfig, NetworkKind

# tanh rounds to exactly +-1 in float64 past |s| ~ 19
_OUTPUT_LIMIT = np.nextafter(1.0, 0.0)


def param_count(config: NetworkConfig) -> int:
    if config.kind == NetworkKind.FLNN:
        return expanded_dim(config.expansion) + 1
    n, h = config.input_dim, config.hidden_dim
    return n * h + h + h * config.output_dim + 1


def check_params(config: NetworkConfig, params) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    expected = param_count(config)
    if params.ndim != 1 or params.shape[0] != expected:
        raise InputError(f"expected {expected} parameters for {config.structure}, got shape {params.shape}")
    if not np.all(np.isfinite(params)):
        raise InputError("parameter vector contains non-finite values")
    return params


def unpack_mlp(config: NetworkConfig, params: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Split an MLP vector into (W1, b1, w2, b2)."""
    n, h = config.input_dim, config.hidden_dim
    W1 = params[: n * h].reshape(h, n)
    b1 = params[n * h : n * h + h]
    w2 = params[n * h + h : n * h + 2 * h]
    b2 = float(params[-1])
    return W1, b1, w2, b2


def prepare_inputs(config: NetworkConfig, X) -> np.ndarray:
    """
    Design matrix the trainable layer sees.

    For FLNN this is the expanded input, for MLP the raw input. Trainers
    compute it once and reuse it for every evaluation.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[np.newaxis, :]
    if X.ndim != 2 or X.shape[1] != config.raw_input_dim:
        raise InputError(f"expected samples with {config.raw_input_dim} features, got shape {X.shape}")
    if config.kind == NetworkKind.FLNN:
        return expand_matrix(config.expansion, X)
    return X


def _tanh(s: np.ndarray) -> np.ndarray:
    return np.clip(np.tanh(s), -_OUTPUT_LIMIT, _OUTPUT_LIMIT)


def forward_prepared(config: NetworkConfig, params: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Outputs for a prepared design matrix. No validation: callers own it."""
    if config.kind == NetworkKind.FLNN:
        return _tanh(Z @ params[:-1] + params[-1])
    W1, b1, w2, b2 = unpack_mlp(config, params)
    hidden = np.tanh(Z @ W1.T + b1)
    return _tanh(hidden @ w2 + b2)


def forward_batch(config: NetworkConfig, params, X) -> np.ndarray:
    params = check_params(config, params)
    return forward_prepared(config, params, prepare_inputs(config, X))


def forward(config: NetworkConfig, params, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InputError(f"expected a single feature vector, got shape {x.shape}")
    return float(forward_batch(config, params, x)[0])


def predict_class(y: float) -> ClassLabel:
    if not np.isfinite(y):
        raise InputError(f"cannot classify non-finite output {y}")
    # a tie at exactly 0 is positive
    return ClassLabel.POSITIVE if y >= 0 else ClassLabel.NEGATIVE


def predict_classes(outputs: np.ndarray) -> np.ndarray:
    return np.where(np.asarray(outputs) >= 0, 1.0, -1.0)
