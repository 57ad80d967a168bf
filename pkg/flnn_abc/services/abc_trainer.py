# flnn_abc/services/abc_trainer.py
"""
AbcTrainer Service - trains a network by handing its training MSE to the
Artificial Bee Colony optimizer as a black-box objective over the flat
parameter vector (weights then bias).
"""
import logging

import numpy as np

from flnn_abc.core.abc_optimizer import run_abc
from flnn_abc.core.errors import ConfigError, InputError
from flnn_abc.core.models import AbcConfig, NetworkConfig, NetworkKind
from flnn_abc.core.networks import forward_prepared, param_count, prepare_inputs
from flnn_abc.services.bp_trainer import TrainingResult
from flnn_abc.services.dataset_loader import Dataset

logger = logging.getLogger(__name__)


class _AbcTrainerService:
    """Singleton service for ABC-based network training."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(_AbcTrainerService, cls).__new__(cls)
        return cls._instance

    def train(self, config: NetworkConfig, abc: AbcConfig, train_set: Dataset) -> TrainingResult:
        """
        Search the parameter box for the weights minimizing training MSE.

        Args:
            config: Network architecture (normally a 2nd order FLNN)
            abc: Colony settings; abc.dim, when set, must equal param_count(config)
            train_set: Training fold

        Returns:
            TrainingResult whose history is the best-so-far MSE per cycle
            (index 0 is the initial population)
        """
        dim = param_count(config)
        if abc.dim is not None and abc.dim != dim:
            raise ConfigError(f"ABC dimension {abc.dim} does not match {dim} parameters of {config.structure}")
        if abc.bounds is not None and len(abc.bounds) != dim:
            raise ConfigError(f"{len(abc.bounds)} ABC bounds given for {dim} parameters")
        if train_set is None or train_set.row_count == 0:
            raise InputError("training set is empty")

        Z = prepare_inputs(config, train_set.features)
        targets = train_set.targets

        def objective(position: np.ndarray) -> float:
            y = forward_prepared(config, position, Z)
            return float(np.mean(np.square(targets - y)))

        logger.debug(f"ABC search over {dim} dimensions for {config.structure}")
        result = run_abc(objective, abc, dim=dim)
        return TrainingResult(
            params=result.best_position,
            history=list(result.history),
            iterations=result.cycles_run,
            converged=result.best_objective <= abc.min_error,
        )

    def train_flnn(self, config: NetworkConfig, abc: AbcConfig, train_set: Dataset) -> TrainingResult:
        if config.kind != NetworkKind.FLNN:
            raise ConfigError(f"expected an FLNN configuration, got {config.kind.value}")
        return self.train(config, abc, train_set)


# Create singleton instance
AbcTrainer = _AbcTrainerService()
