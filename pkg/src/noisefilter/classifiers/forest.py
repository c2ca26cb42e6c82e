"""Bagged random forests over the binned gini tree."""

import math
from dataclasses import dataclass

import numpy as np

from ..data import Dataset
from .tree import DecisionTreeModel, _grow_tree


@dataclass(frozen=True, eq=False)
class RandomForestModel:
    trees: tuple
    feature_subset_size: int
    num_features: int
    num_classes: int
    seed: int

    @property
    def n_trees(self) -> int:
        return len(self.trees)


def _tree_rng(seed: int, index: int):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def train_random_forest(
    train: Dataset,
    n_trees: int = 100,
    max_depth: int = 10,
    max_bins: int = 32,
    seed: int = 0,
    *,
    bootstrap: bool = True,
    n_jobs: int | None = None,
) -> RandomForestModel:
    """Train `n_trees` gini trees on bootstrap resamples of the training set.

    Per-node feature subsets follow the "auto" rule: all features for a
    single tree, ceil(sqrt(num_features)) otherwise. Tree randomness derives
    deterministically from (seed, tree index), so the model is a pure
    function of (data, params, seed) whatever the worker count. `bootstrap`
    is a test hook; disabling it trains every tree on the full data.
    """
    if train.n == 0:
        raise ValueError("cannot train a forest on an empty dataset")
    if n_trees < 1:
        raise ValueError("n_trees must be at least 1")
    d = train.num_features
    m = d if n_trees == 1 else min(d, math.ceil(math.sqrt(d)))
    X, y = train.features, train.labels

    def build(index: int) -> DecisionTreeModel:
        rng = _tree_rng(seed, index)
        if bootstrap:
            rows = rng.integers(0, train.n, size=train.n)
            Xi, yi = X[rows], y[rows]
        else:
            Xi, yi = X, y
        return _grow_tree(Xi, yi, train.num_classes, max_depth, max_bins, m, rng)

    # Trees build serially: the level-wise grower is a stream of small numpy
    # kernels that keep the GIL, so thread fan-out measured slower at every
    # desk-scale size. n_jobs stays in the signature for call-site symmetry
    # and because the result never depends on it.
    del n_jobs
    trees = [build(i) for i in range(n_trees)]
    return RandomForestModel(
        trees=tuple(trees),
        feature_subset_size=m,
        num_features=d,
        num_classes=train.num_classes,
        seed=int(seed),
    )


def predict_forest(model: RandomForestModel, batch: Dataset, n_jobs: int | None = None) -> np.ndarray:
    """Majority vote over the trees, ties resolving to the lowest class index."""
    if batch.num_features != model.num_features:
        raise ValueError(
            f"batch has {batch.num_features} features, model expects {model.num_features}"
        )
    if batch.n == 0:
        return np.empty(0, dtype=np.int64)
    del n_jobs  # tree traversal is GIL-bound; see train_random_forest
    votes = [tree.predict(batch.features) for tree in model.trees]
    counts = np.zeros((model.num_classes, batch.n), dtype=np.int64)
    cols = np.arange(batch.n)
    for v in votes:
        counts[v, cols] += 1
    return counts.argmax(axis=0).astype(np.int64)
