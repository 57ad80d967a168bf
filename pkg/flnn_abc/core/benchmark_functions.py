# flnn_abc/core/benchmark_functions.py
"""Standard test objectives for exercising the ABC optimizer."""
from typing import Callable, Dict, NamedTuple

import numpy as np


def sphere(x: np.ndarray) -> float:
    return float(np.sum(np.square(x)))


def rosenbrock(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape[0] < 2:
        return float(np.square(1.0 - x[0]))
    return float(np.sum(100.0 * np.square(x[1:] - np.square(x[:-1])) + np.square(1.0 - x[:-1])))


def rastrigin(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    value = 10.0 * x.shape[0] + np.sum(np.square(x) - 10.0 * np.cos(2.0 * np.pi * x))
    return float(max(value, 0.0))


def ackley(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    term1 = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(np.square(x)) / n))
    term2 = -np.exp(np.sum(np.cos(2.0 * np.pi * x)) / n)
    # clamp float noise below the analytic minimum of 0
    return float(max(term1 + term2 + 20.0 + np.e, 0.0))


def griewank(x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.shape[0] + 1)
    value = np.sum(np.square(x)) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0
    return float(max(value, 0.0))


class BenchmarkFunction(NamedTuple):
    func: Callable[[np.ndarray], float]
    lower: float
    upper: float
    minimum: float


BENCHMARK_FUNCTIONS: Dict[str, BenchmarkFunction] = {
    "sphere": BenchmarkFunction(sphere, -10.0, 10.0, 0.0),
    "rosenbrock": BenchmarkFunction(rosenbrock, -5.0, 10.0, 0.0),
    "rastrigin": BenchmarkFunction(rastrigin, -5.12, 5.12, 0.0),
    "ackley": BenchmarkFunction(ackley, -32.768, 32.768, 0.0),
    "griewank": BenchmarkFunction(griewank, -600.0, 600.0, 0.0),
}
