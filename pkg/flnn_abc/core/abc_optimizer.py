# flnn_abc/core/abc_optimizer.py
"""
Artificial Bee Colony optimizer over a bounded real box.

One run owns its colony and its numpy Generator; a fixed seed gives
bit-identical histories. The colony cycles through an employed phase
(one neighbour candidate per source), an onlooker phase (colony_size
roulette draws weighted by fitness) and a scout phase (at most one
exhausted source re-randomized). The best position ever seen is kept
apart from the colony, so a scout can never lose it.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from flnn_abc.core.errors import InputError, OptimizerError
from flnn_abc.core.models import AbcConfig, FoodSource

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]


def fitness(f: float) -> float:
    """Nectar amount of a source with objective value f (lower f is better)."""
    if not np.isfinite(f):
        raise InputError(f"fitness is undefined for non-finite objective {f}")
    if f >= 0:
        return 1.0 / (1.0 + f)
    return 1.0 + abs(f)


def selection_probabilities(fitness_values) -> np.ndarray:
    fitness_values = np.asarray(fitness_values, dtype=float)
    return fitness_values / fitness_values.sum()


def resolve_bounds(config: AbcConfig, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    if config.bounds is not None:
        if len(config.bounds) != dim:
            raise InputError(f"{len(config.bounds)} bounds given for {dim} dimensions")
        lower = np.array([b[0] for b in config.bounds], dtype=float)
        upper = np.array([b[1] for b in config.bounds], dtype=float)
        return lower, upper
    return np.full(dim, config.lower, dtype=float), np.full(dim, config.upper, dtype=float)


def scout_replace(lower: np.ndarray, upper: np.ndarray, rng) -> np.ndarray:
    """Uniform random position inside the box."""
    return lower + rng.random(lower.shape[0]) * (upper - lower)


@dataclass
class Colony:
    positions: np.ndarray
    objectives: np.ndarray
    fitness: np.ndarray
    trials: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def food_source(self, i: int) -> FoodSource:
        return FoodSource(
            position=tuple(float(v) for v in self.positions[i]),
            objective=float(self.objectives[i]),
            fitness=float(self.fitness[i]),
            trial_counter=int(self.trials[i]),
        )

    def set_source(self, i: int, position: np.ndarray, objective: float) -> None:
        self.positions[i] = position
        self.objectives[i] = objective
        self.fitness[i] = fitness(objective)
        self.trials[i] = 0


def neighbor_candidate(colony: Colony, i: int, rng) -> np.ndarray:
    """
    Perturb one random dimension j of source i towards or away from a
    random partner k != i: v[j] = x_i[j] + phi * (x_i[j] - x_k[j]),
    phi ~ U[-1, 1], clamped to the box.
    """
    j = int(rng.integers(colony.dim))
    k = int(rng.integers(colony.size - 1))
    if k >= i:
        k += 1
    phi = float(rng.uniform(-1.0, 1.0))
    candidate = colony.positions[i].copy()
    candidate[j] = colony.positions[i, j] + phi * (colony.positions[i, j] - colony.positions[k, j])
    candidate[j] = min(max(candidate[j], colony.lower[j]), colony.upper[j])
    return candidate


@dataclass
class AbcResult:
    best_position: np.ndarray
    best_objective: float
    # index 0 is the initial population best, then one entry per cycle
    history: List[float] = field(default_factory=list)
    cycles_run: int = 0
    evaluations: int = 0


class ArtificialBeeColony:
    """Single ABC run; call `run()` once."""

    def __init__(self, objective: Objective, config: AbcConfig, dim: Optional[int] = None):
        self.objective = objective
        self.config = config
        self.dim = dim if dim is not None else config.resolved_dim()
        if config.dim is not None and config.dim != self.dim:
            raise InputError(f"config dim {config.dim} does not match requested dim {self.dim}")
        self.lower, self.upper = resolve_bounds(config, self.dim)
        self.limit = config.limit if config.limit is not None else config.colony_size * self.dim
        self.rng = np.random.default_rng(config.seed)
        self.evaluations = 0
        self.colony: Optional[Colony] = None
        self.best_position: Optional[np.ndarray] = None
        self.best_objective = float("inf")
        self._cycle = 0

    def _evaluate(self, position: np.ndarray) -> float:
        value = float(self.objective(position))
        self.evaluations += 1
        if not np.isfinite(value):
            raise OptimizerError(f"objective returned {value}", position, cycle=self._cycle)
        return value

    def _memorize(self, position: np.ndarray, value: float) -> None:
        if value < self.best_objective:
            self.best_objective = value
            self.best_position = position.copy()

    def initialize(self) -> Colony:
        size = self.config.colony_size
        positions = np.empty((size, self.dim))
        objectives = np.empty(size)
        for i in range(size):
            positions[i] = scout_replace(self.lower, self.upper, self.rng)
            objectives[i] = self._evaluate(positions[i])
        self.colony = Colony(
            positions=positions,
            objectives=objectives,
            fitness=np.array([fitness(f) for f in objectives]),
            trials=np.zeros(size, dtype=int),
            lower=self.lower,
            upper=self.upper,
        )
        best = int(np.argmin(objectives))
        self._memorize(positions[best], float(objectives[best]))
        return self.colony

    def _try_improve(self, i: int) -> None:
        colony = self.colony
        candidate = neighbor_candidate(colony, i, self.rng)
        value = self._evaluate(candidate)
        if fitness(value) > colony.fitness[i]:
            colony.set_source(i, candidate, value)
            self._memorize(candidate, value)
        else:
            colony.trials[i] += 1

    def employed_phase(self) -> None:
        for i in range(self.colony.size):
            self._try_improve(i)

    def onlooker_phase(self) -> None:
        probs = selection_probabilities(self.colony.fitness)
        for _ in range(self.colony.size):
            i = int(self.rng.choice(self.colony.size, p=probs))
            self._try_improve(i)

    def scout_phase(self) -> Optional[int]:
        colony = self.colony
        i = int(np.argmax(colony.trials))
        if colony.trials[i] <= self.limit:
            return None
        position = scout_replace(self.lower, self.upper, self.rng)
        colony.set_source(i, position, self._evaluate(position))
        self._memorize(position, float(colony.objectives[i]))
        return i

    def run(self) -> AbcResult:
        self.initialize()
        history = [self.best_objective]
        cycles = 0
        while cycles < self.config.max_cycles and self.best_objective > self.config.min_error:
            self._cycle = cycles + 1
            self.employed_phase()
            self.onlooker_phase()
            self.scout_phase()
            cycles += 1
            history.append(self.best_objective)
            if cycles % 10 == 0:
                logger.debug(f"cycle {cycles}: best objective {self.best_objective:.6f}")
        return AbcResult(
            best_position=self.best_position.copy(),
            best_objective=self.best_objective,
            history=history,
            cycles_run=cycles,
            evaluations=self.evaluations,
        )


def run_abc(objective: Objective, config: AbcConfig, dim: Optional[int] = None) -> AbcResult:
    return ArtificialBeeColony(objective, config, dim=dim).run()
