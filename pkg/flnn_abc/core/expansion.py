# flnn_abc/core/expansion.py
"""
Tensor-model functional expansion.

Maps a raw feature vector to the enhanced input vector: the raw features
followed by products of feature subsets up to the configured order.
Term ordering is canonical so parameter layouts stay reproducible:
all order-1 terms in index order, then order-2 terms in lexicographic
index order, then order-3, and so on.

Term counts grow combinatorially (C(n, r) per order under the distinct
policy); orders above 3 are supported but get large quickly.
"""
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Tuple

import numpy as np

from flnn_abc.core.errors import InputError
from flnn_abc.core.models import ExpansionSpec, IndexPolicy


@lru_cache(maxsize=128)
def _term_indices(input_dim: int, order: int, policy: IndexPolicy) -> Tuple[Tuple[int, ...], ...]:
    pick = combinations if policy == IndexPolicy.DISTINCT else combinations_with_replacement
    terms = []
    for r in range(1, order + 1):
        terms.extend(pick(range(input_dim), r))
    return tuple(terms)


def term_indices(spec: ExpansionSpec) -> Tuple[Tuple[int, ...], ...]:
    """Ordered index tuples, one per enhanced feature."""
    return _term_indices(spec.input_dim, spec.order, spec.index_policy)


def expanded_dim(spec: ExpansionSpec) -> int:
    """Number of enhanced features, bias excluded."""
    n = spec.input_dim
    if spec.index_policy == IndexPolicy.DISTINCT:
        return sum(comb(n, r) for r in range(1, spec.order + 1))
    return sum(comb(n + r - 1, r) for r in range(1, spec.order + 1))


def expand_matrix(spec: ExpansionSpec, X) -> np.ndarray:
    """Expand every row of a (samples x input_dim) matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != spec.input_dim:
        raise InputError(
            f"expected samples with {spec.input_dim} features, got array of shape {X.shape}"
        )
    terms = term_indices(spec)
    out = np.empty((X.shape[0], len(terms)), dtype=float)
    for col, idx in enumerate(terms):
        out[:, col] = np.prod(X[:, list(idx)], axis=1)
    return out


def expand(spec: ExpansionSpec, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != spec.input_dim:
        raise InputError(f"expected {spec.input_dim} features, got shape {x.shape}")
    return expand_matrix(spec, x[np.newaxis, :])[0]
