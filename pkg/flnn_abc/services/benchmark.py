# flnn_abc/services/benchmark.py
"""
BenchmarkRunner Service - the 2-fold comparison protocol.

For every dataset x trainer x fold assignment (fold A trains and fold B
tests, then the reverse) the runner trains `trials` networks from
independently derived seeds, keeps the trial with the best training
accuracy and averages the two kept trials per dataset x trainer.

Cells are independent. With workers > 1 they run on threads through
asyncio.to_thread; results are merged back in canonical cell order, so
reports do not depend on scheduling.
"""
import asyncio
import hashlib
import logging
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from flnn_abc.core.errors import RunError
from flnn_abc.core.models import (
    ComplexityRow,
    NetworkConfig,
    RunConfig,
    SelectionReport,
    SummaryRow,
    TrialReport,
)
from flnn_abc.core.networks import forward_batch, param_count, predict_classes
from flnn_abc.services.abc_trainer import AbcTrainer
from flnn_abc.services.bp_trainer import BackpropTrainer, TrainingResult
from flnn_abc.services.dataset_loader import Dataset, DatasetLoader

logger = logging.getLogger(__name__)

FOLDS = ("a", "b")
METRICS = ("train_mse", "train_accuracy_pct", "test_mse", "test_accuracy_pct")

# Published parameter counts keyed by network structure.
REFERENCE_PARAM_COUNTS: Dict[str, int] = {
    "9-9-1": 100,
    "45-1": 46,
    "8-8-1": 83,
    "36-1": 37,
    "6-6-1": 49,
    "21-1": 22,
}

# trainer(run_config, input_dim, train_set, seed) -> (network, result)
Trainer = Callable[[RunConfig, int, Dataset, int], Tuple[NetworkConfig, TrainingResult]]


def network_for(run: RunConfig, trainer_id: str, input_dim: int) -> NetworkConfig:
    """Architecture a trainer id trains on data with `input_dim` raw features."""
    if trainer_id == "mlp_bp":
        return NetworkConfig.mlp(input_dim)
    return NetworkConfig.flnn(input_dim, order=run.order)


def _train_mlp_bp(run: RunConfig, input_dim: int, train_set: Dataset, seed: int):
    network = network_for(run, "mlp_bp", input_dim)
    bp = run.bp.model_copy(update={"seed": seed})
    return network, BackpropTrainer.train(network, bp, train_set)


def _train_flnn_bp(run: RunConfig, input_dim: int, train_set: Dataset, seed: int):
    network = network_for(run, "flnn_bp", input_dim)
    bp = run.bp.model_copy(update={"seed": seed})
    return network, BackpropTrainer.train(network, bp, train_set)


def _train_flnn_abc(run: RunConfig, input_dim: int, train_set: Dataset, seed: int):
    network = network_for(run, "flnn_abc", input_dim)
    abc = run.abc.model_copy(update={"seed": seed, "dim": None})
    return network, AbcTrainer.train_flnn(network, abc, train_set)


DEFAULT_TRAINERS: Dict[str, Trainer] = {
    "mlp_bp": _train_mlp_bp,
    "flnn_bp": _train_flnn_bp,
    "flnn_abc": _train_flnn_abc,
}


def derive_seed(master_seed: int, *parts) -> int:
    """63-bit seed from the master seed and a cell tuple."""
    key = "|".join(str(p) for p in (master_seed,) + parts)
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass
class ProtocolResult:
    trials: List[TrialReport] = field(default_factory=list)
    selections: List[SelectionReport] = field(default_factory=list)
    summary: List[SummaryRow] = field(default_factory=list)
    complexity: List[ComplexityRow] = field(default_factory=list)
    # (dataset, trainer, fold, trial) -> per-epoch or per-cycle MSE
    traces: Dict[Tuple[str, str, str, int], List[float]] = field(default_factory=dict)

    @property
    def errors(self) -> List[str]:
        return [f"{row.dataset}/{row.trainer}: {row.error}" for row in self.summary if row.status == "error"]

    def raise_for_errors(self) -> None:
        if self.errors:
            raise RunError("; ".join(self.errors))


class _BenchmarkRunnerService:
    """Singleton service running the comparison protocol."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(_BenchmarkRunnerService, cls).__new__(cls)
        return cls._instance

    def accuracy(self, config: NetworkConfig, params, dataset: Dataset) -> float:
        """Percentage of samples whose thresholded output matches the target."""
        outputs = forward_batch(config, params, dataset.features)
        return 100.0 * float(np.mean(predict_classes(outputs) == dataset.targets))

    def complexity(self, run: RunConfig, datasets: Mapping[str, Dataset]) -> List[ComplexityRow]:
        rows = []
        for schema in run.datasets:
            input_dim = datasets[schema.name].input_dim
            for label, network in (
                ("MLP", NetworkConfig.mlp(input_dim)),
                (f"FLNN order {run.order}", NetworkConfig.flnn(input_dim, order=run.order)),
            ):
                count = param_count(network)
                reference = REFERENCE_PARAM_COUNTS.get(network.structure) if run.order == 2 else None
                note = ""
                if reference is not None and reference != count:
                    note = f"published count {reference} differs from formula count {count}"
                rows.append(
                    ComplexityRow(
                        dataset=schema.name,
                        network_type=label,
                        structure=network.structure,
                        param_count=count,
                        reference_param_count=reference,
                        note=note,
                    )
                )
        return rows

    def run_trial(
        self,
        run: RunConfig,
        trainer_id: str,
        trainer: Trainer,
        fold: str,
        trial: int,
        train_set: Dataset,
        test_set: Dataset,
    ) -> Tuple[TrialReport, List[float]]:
        seed = derive_seed(run.master_seed, train_set.name, trainer_id, fold, trial)
        started = time.perf_counter()
        try:
            network, result = trainer(run, train_set.input_dim, train_set, seed)
            report = TrialReport(
                dataset=train_set.name,
                trainer=trainer_id,
                fold=fold,
                trial=trial,
                seed=seed,
                train_mse=BackpropTrainer.mse(network, result.params, train_set),
                train_accuracy_pct=self.accuracy(network, result.params, train_set),
                test_mse=BackpropTrainer.mse(network, result.params, test_set),
                test_accuracy_pct=self.accuracy(network, result.params, test_set),
                iterations=result.iterations,
                wall_time_s=time.perf_counter() - started,
            )
            return report, list(result.history)
        except Exception as e:
            logger.warning(f"{train_set.name}/{trainer_id} fold {fold} trial {trial} failed: {e}")
            report = TrialReport(
                dataset=train_set.name,
                trainer=trainer_id,
                fold=fold,
                trial=trial,
                seed=seed,
                status="error",
                wall_time_s=time.perf_counter() - started,
                error=str(e),
            )
            return report, []

    def _run_cell(
        self, run: RunConfig, trainer_id: str, trainer: Trainer, fold: str, train_set: Dataset, test_set: Dataset
    ) -> List[Tuple[TrialReport, List[float]]]:
        logger.info(f"Running {train_set.name} / {trainer_id} / fold {fold} ({run.trials} trials)")
        return [
            self.run_trial(run, trainer_id, trainer, fold, trial, train_set, test_set)
            for trial in range(run.trials)
        ]

    async def _run_cells_async(self, cells: List[tuple], workers: int):
        semaphore = asyncio.Semaphore(workers)

        async def run_one(cell):
            async with semaphore:
                return await asyncio.to_thread(self._run_cell, *cell)

        return await asyncio.gather(*(run_one(cell) for cell in cells))

    @staticmethod
    def select(trials: List[TrialReport]) -> Optional[TrialReport]:
        """Best training accuracy, then lower training MSE, then lower seed."""
        successful = [t for t in trials if t.status == "success"]
        if not successful:
            return None
        return min(successful, key=lambda t: (-t.train_accuracy_pct, t.train_mse, t.seed))

    def run_protocol(
        self,
        run: RunConfig,
        datasets: Optional[Mapping[str, Dataset]] = None,
        trainers: Optional[Mapping[str, Trainer]] = None,
    ) -> ProtocolResult:
        """
        Execute the full protocol.

        Args:
            run: Datasets, trainers, hyperparameters, trial count and master seed
            datasets: Preloaded datasets by name (loaded from run.datasets when omitted)
            trainers: Trainer callables by id (DEFAULT_TRAINERS when omitted)

        Returns:
            ProtocolResult with per-trial, per-selection, summary and complexity rows
        """
        trainers = trainers or DEFAULT_TRAINERS
        if datasets is None:
            datasets = {schema.name: DatasetLoader.load(schema) for schema in run.datasets}

        cells = []
        for schema in run.datasets:
            dataset = datasets[schema.name]
            if dataset.name != schema.name:
                dataset = replace(dataset, name=schema.name)
            folds = DatasetLoader.two_fold_split(dataset, derive_seed(run.master_seed, schema.name, "split"))
            prepared = {fold: DatasetLoader.scale_fold_pair(dataset, folds, fold) for fold in FOLDS}
            for trainer_id in run.trainers:
                for fold in FOLDS:
                    train_set, test_set = prepared[fold]
                    cells.append((run, trainer_id, trainers[trainer_id], fold, train_set, test_set))

        if run.workers > 1:
            outcomes = asyncio.run(self._run_cells_async(cells, run.workers))
        else:
            outcomes = [self._run_cell(*cell) for cell in cells]

        result = ProtocolResult(complexity=self.complexity(run, datasets))
        selected: Dict[Tuple[str, str], List[SelectionReport]] = {}
        for cell, cell_outcomes in zip(cells, outcomes):
            _, trainer_id, _, fold, train_set, _ = cell
            reports = [report for report, _ in cell_outcomes]
            result.trials.extend(reports)
            if run.save_traces:
                for report, history in cell_outcomes:
                    if report.status == "success":
                        result.traces[(report.dataset, trainer_id, fold, report.trial)] = history

            best = self.select(reports)
            successes = sum(1 for r in reports if r.status == "success")
            if best is None:
                selection = SelectionReport(
                    dataset=train_set.name,
                    trainer=trainer_id,
                    fold=fold,
                    status="error",
                    successful_trials=0,
                    error=f"no successful trials in fold {fold}",
                )
            else:
                selection = SelectionReport(
                    dataset=best.dataset,
                    trainer=trainer_id,
                    fold=fold,
                    status="success",
                    trial=best.trial,
                    seed=best.seed,
                    successful_trials=successes,
                    **{metric: getattr(best, metric) for metric in METRICS},
                )
            result.selections.append(selection)
            selected.setdefault((train_set.name, trainer_id), []).append(selection)

        for (dataset_name, trainer_id), selections in selected.items():
            failed = [s for s in selections if s.status == "error"]
            if failed:
                result.summary.append(
                    SummaryRow(
                        dataset=dataset_name,
                        trainer=trainer_id,
                        status="error",
                        error="; ".join(s.error for s in failed),
                    )
                )
                continue
            result.summary.append(
                SummaryRow(
                    dataset=dataset_name,
                    trainer=trainer_id,
                    status="success",
                    **{
                        metric: sum(getattr(s, metric) for s in selections) / len(selections)
                        for metric in METRICS
                    },
                )
            )
        return result


# Create singleton instance
BenchmarkRunner = _BenchmarkRunnerService()
