# flnn_abc/services/bp_trainer.py
"""
BackpropTrainer Service - gradient descent with momentum for FLNN and MLP.

Full-batch by default: every epoch applies one heavy-ball step
    delta_t = -learning_rate * grad(MSE) + momentum * delta_{t-1}
and records the full-batch MSE reached after the step. Training stops at
max_epochs or as soon as that MSE is at or below min_error. The FLNN
expansion is fixed, so its gradient is a single linear layer over the
expanded inputs.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from flnn_abc.core.errors import InputError, TrainingError
from flnn_abc.core.models import BpConfig, NetworkConfig, NetworkKind
from flnn_abc.core.networks import (
    check_params,
    forward_prepared,
    param_count,
    prepare_inputs,
    unpack_mlp,
)
from flnn_abc.services.dataset_loader import Dataset

logger = logging.getLogger(__name__)


@dataclass
class TrainingResult:
    params: np.ndarray
    history: List[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def loss_and_gradient(
    config: NetworkConfig, params: np.ndarray, Z: np.ndarray, targets: np.ndarray
) -> Tuple[float, np.ndarray]:
    """
    MSE and its analytic gradient for a prepared design matrix Z.

    The gradient is laid out exactly like the parameter vector.
    """
    n = Z.shape[0]
    if config.kind == NetworkKind.FLNN:
        y = forward_prepared(config, params, Z)
        error = y - targets
        delta = (2.0 / n) * error * (1.0 - y * y)
        grad = np.empty_like(params)
        grad[:-1] = Z.T @ delta
        grad[-1] = delta.sum()
        return float(np.mean(error * error)), grad

    W1, b1, w2, b2 = unpack_mlp(config, params)
    hidden = np.tanh(Z @ W1.T + b1)
    y = forward_prepared(config, params, Z)
    error = y - targets
    delta = (2.0 / n) * error * (1.0 - y * y)
    delta_hidden = np.outer(delta, w2) * (1.0 - hidden * hidden)
    grad_W1 = delta_hidden.T @ Z
    grad = np.concatenate([grad_W1.ravel(), delta_hidden.sum(axis=0), hidden.T @ delta, [delta.sum()]])
    return float(np.mean(error * error)), grad


def numerical_gradient(fn: Callable[[np.ndarray], float], params: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central finite differences of a scalar function of the parameters."""
    params = np.asarray(params, dtype=float)
    grad = np.empty_like(params)
    for i in range(params.shape[0]):
        plus = params.copy()
        minus = params.copy()
        plus[i] += h
        minus[i] -= h
        grad[i] = (fn(plus) - fn(minus)) / (2.0 * h)
    return grad


class _BackpropTrainerService:
    """Singleton service for backpropagation training."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(_BackpropTrainerService, cls).__new__(cls)
        return cls._instance

    def init_params(self, config: NetworkConfig, low: float, high: float, seed: int) -> np.ndarray:
        """Independent uniform draws from [low, high], reproducible per seed."""
        if low > high:
            raise InputError(f"empty initialization range [{low}, {high}]")
        rng = np.random.default_rng(seed)
        return rng.uniform(low, high, size=param_count(config))

    def mse(self, config: NetworkConfig, params, dataset: Dataset) -> float:
        if dataset is None or dataset.row_count == 0:
            raise InputError("mse needs a non-empty dataset")
        params = check_params(config, params)
        y = forward_prepared(config, params, prepare_inputs(config, dataset.features))
        return float(np.mean(np.square(dataset.targets - y)))

    def _online_epoch(
        self,
        config: NetworkConfig,
        params: np.ndarray,
        velocity: np.ndarray,
        Z: np.ndarray,
        targets: np.ndarray,
        bp: BpConfig,
        rng: np.random.Generator,
    ) -> Tuple[np.ndarray, np.ndarray]:
        for i in rng.permutation(Z.shape[0]):
            _, grad = loss_and_gradient(config, params, Z[i : i + 1], targets[i : i + 1])
            velocity = -bp.learning_rate * grad + bp.momentum * velocity
            params = params + velocity
        return params, velocity

    def train(self, config: NetworkConfig, bp: BpConfig, train_set: Dataset) -> TrainingResult:
        """
        Train one network from a seeded random start.

        Args:
            config: Network architecture
            bp: Learning rate, momentum, stopping rule, init range and seed
            train_set: Training fold (targets in {-1, +1})

        Returns:
            TrainingResult with final params and the per-epoch MSE history

        Raises:
            TrainingError if the MSE becomes non-finite
        """
        if train_set is None or train_set.row_count == 0:
            raise InputError("training set is empty")
        Z = prepare_inputs(config, train_set.features)
        targets = train_set.targets
        params = self.init_params(config, bp.init_low, bp.init_high, bp.seed)
        velocity = np.zeros_like(params)
        shuffle_rng = np.random.default_rng([bp.seed, 1])

        history: List[float] = []
        loss, grad = loss_and_gradient(config, params, Z, targets)
        converged = False
        for epoch in range(1, bp.max_epochs + 1):
            if bp.online:
                params, velocity = self._online_epoch(config, params, velocity, Z, targets, bp, shuffle_rng)
            else:
                velocity = -bp.learning_rate * grad + bp.momentum * velocity
                params = params + velocity
            with np.errstate(over="ignore", invalid="ignore"):
                loss, grad = loss_and_gradient(config, params, Z, targets)
            if not np.isfinite(loss) or not np.all(np.isfinite(params)):
                raise TrainingError("training diverged to a non-finite MSE", epoch=epoch)
            history.append(loss)
            if epoch % 100 == 0:
                logger.debug(f"epoch {epoch}: mse {loss:.6f}")
            if loss <= bp.min_error:
                converged = True
                break

        return TrainingResult(params=params, history=history, iterations=len(history), converged=converged)


# Create singleton instance
BackpropTrainer = _BackpropTrainerService()
