"""Exact brute-force nearest neighbor with euclidean distance."""

from dataclasses import dataclass

import numpy as np

from .._parallel import ordered_map
from ..data import Dataset

# Distance blocks stay under ~32 MB so query chunks parallelize cleanly.
_BLOCK_ELEMENTS = 1 << 22


@dataclass(frozen=True, eq=False)
class NearestNeighborModel:
    """Lazy learner: keeps a reference to the training set, no index built."""

    train: Dataset
    k: int = 1

    def __post_init__(self):
        if self.train.n < 1:
            raise ValueError("training set must be non-empty")
        if not 1 <= self.k <= self.train.n:
            raise ValueError("k must lie in [1, len(train)]")


def predict_1nn(
    model: NearestNeighborModel,
    batch: Dataset,
    exclude_ids: np.ndarray | None = None,
    n_jobs: int | None = None,
) -> np.ndarray:
    """Label of the nearest training row per query, by squared euclidean distance.

    Distance ties resolve to the lowest training row id. `exclude_ids[i]`,
    when given, names a training row that query i may never match; callers
    use it when the batch rows are themselves training rows. Exact: every
    pairwise distance is evaluated, blocked over query chunks.
    """
    train = model.train
    if batch.num_features != train.num_features:
        raise ValueError(
            f"batch has {batch.num_features} features, model expects {train.num_features}"
        )
    if exclude_ids is not None:
        if train.n < 2:
            raise ValueError("cannot exclude rows with a single training instance")
        exclude_ids = np.asarray(exclude_ids, dtype=np.int64)
        if exclude_ids.shape != (batch.n,):
            raise ValueError("exclude_ids must name one training row per query")
        if batch.n and (exclude_ids.min() < 0 or exclude_ids.max() >= train.n):
            raise ValueError("exclude_ids out of range")
    if batch.n == 0:
        return np.empty(0, dtype=np.int64)

    T = train.features
    Q = batch.features
    block = max(1, _BLOCK_ELEMENTS // max(1, T.shape[0] * T.shape[1]))
    chunks = [(s, min(s + block, batch.n)) for s in range(0, batch.n, block)]

    def nearest(chunk):
        s, e = chunk
        d2 = ((Q[s:e, None, :] - T[None, :, :]) ** 2).sum(axis=2)
        if exclude_ids is not None:
            d2[np.arange(e - s), exclude_ids[s:e]] = np.inf
        return s, train.labels[d2.argmin(axis=1)]

    out = np.empty(batch.n, dtype=np.int64)
    for s, labels in ordered_map(nearest, chunks, n_jobs):
        out[s : s + labels.shape[0]] = labels
    return out
