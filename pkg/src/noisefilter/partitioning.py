"""Deterministic seeded k-fold partitioning with exact test-fold tiling."""

from dataclasses import dataclass

import numpy as np

from .data import Dataset


@dataclass(frozen=True, eq=False)
class FoldPair:
    """One (train, test) pair of a k-fold partitioning.

    `test_ids` and `train_ids` are row positions in the partitioned dataset;
    test folds across all pairs are disjoint and tile 0..n-1 exactly, with
    fold sizes differing by at most one.
    """

    fold_index: int
    train: Dataset
    test: Dataset
    train_ids: np.ndarray
    test_ids: np.ndarray


def k_fold(data: Dataset, partitions: int, seed: int, *, stratified: bool = False) -> list[FoldPair]:
    """Cut a seeded uniform permutation of the rows into `partitions` test folds.

    Each fold's train part is the complement of its test part. The first
    n mod P folds are one row larger. With `stratified` the permutation is
    drawn per class and dealt round-robin, keeping the same tiling and size
    guarantees. Deterministic in (data order, partitions, seed).
    """
    P = int(partitions)
    if P < 2 or P > data.n:
        raise ValueError(f"partitions must lie in [2, {data.n}], got {P}")
    rng = np.random.default_rng(seed)
    n = data.n
    if stratified:
        order = np.concatenate(
            [rng.permutation(np.flatnonzero(data.labels == c)) for c in range(data.num_classes)]
        )
        chunks = [order[i::P] for i in range(P)]
    else:
        chunks = np.array_split(rng.permutation(n), P)

    folds = []
    for i, chunk in enumerate(chunks):
        test_ids = np.sort(chunk)
        mask = np.ones(n, dtype=bool)
        mask[test_ids] = False
        train_ids = np.flatnonzero(mask)
        folds.append(
            FoldPair(
                fold_index=i,
                train=data.subset(train_ids),
                test=data.subset(test_ids),
                train_ids=train_ids,
                test_ids=test_ids,
            )
        )
    return folds
