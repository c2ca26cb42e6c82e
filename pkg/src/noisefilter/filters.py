"""Label-noise filters: cross-validated ensembles and nearest-neighbor editing.

Each filter returns a FilterReport pairing the kept dataset with the removed
row ids, per-fold removal counts, wall time, and an echo of its parameters.
Removed ids are always reported in the row coordinates of the input dataset.
"""

import json
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .classifiers import (
    NearestNeighborModel,
    predict_1nn,
    predict_forest,
    train_logistic_regression,
    train_random_forest,
)
from .data import Dataset
from .partitioning import k_fold

REPORT_FORMAT = "noisefilter-report"
REPORT_VERSION = 1


class VoteScheme(str, Enum):
    MAJORITY = "majority"
    CONSENSUS = "consensus"


def vote_decision(disagreement_count: int, vote: VoteScheme) -> bool:
    """True when an instance with this many dissenting classifiers is removed.

    Majority removes at two or more dissenters out of three; consensus only
    when all three disagree with the label.
    """
    count = int(disagreement_count)
    if count not in (0, 1, 2, 3):
        raise ValueError("disagreement count must lie in 0..3")
    if VoteScheme(vote) is VoteScheme.MAJORITY:
        return count >= 2
    return count == 3


@dataclass(frozen=True, eq=False)
class FilterReport:
    """Outcome of one filter run.

    kept row ids and `removed_ids` partition the input rows; `fold_removed`
    counts removals per fold (a single entry for un-partitioned filters).
    """

    kept: Dataset
    removed_ids: np.ndarray
    fold_removed: tuple
    wall_time_s: float
    config: dict

    @property
    def n_removed(self) -> int:
        return int(self.removed_ids.shape[0])

    @property
    def n_input(self) -> int:
        return self.kept.n + self.n_removed

    def to_dict(self, include_removed_ids: bool = True) -> dict:
        doc = {
            "format": REPORT_FORMAT,
            "version": REPORT_VERSION,
            "config": dict(self.config),
            "n_input": self.n_input,
            "n_kept": self.kept.n,
            "n_removed": self.n_removed,
            "fold_removed": list(self.fold_removed),
            "wall_time_s": self.wall_time_s,
        }
        if include_removed_ids:
            doc["removed_ids"] = [int(i) for i in self.removed_ids]
        return doc

    def save_json(self, path, include_removed_ids: bool = False) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(include_removed_ids), fh)
            fh.write("\n")


def load_report_dict(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != REPORT_FORMAT:
        raise ValueError(f"{path}: not a filter report document")
    return doc


def _derived_seeds(seed: int, count: int) -> list[int]:
    return [int(np.random.SeedSequence([int(seed), i]).generate_state(1)[0]) for i in range(count)]


def _finish(data: Dataset, marks: list, fold_removed: list, started: float, config: dict) -> FilterReport:
    removed = np.sort(np.concatenate(marks)) if marks else np.empty(0, dtype=np.int64)
    kept_ids = np.setdiff1d(np.arange(data.n), removed, assume_unique=True)
    return FilterReport(
        kept=data.subset(kept_ids),
        removed_ids=removed.astype(np.int64),
        fold_removed=tuple(int(c) for c in fold_removed),
        wall_time_s=time.perf_counter() - started,
        config=config,
    )


def hme_bd(
    data: Dataset,
    partitions: int = 4,
    n_trees: int = 100,
    max_depth: int = 10,
    max_bins: int = 32,
    seed: int = 0,
    n_jobs: int | None = None,
) -> FilterReport:
    """Homogeneous ensemble filter backed by random forests.

    The rows are cut into `partitions` folds; each fold's test part is
    predicted by a forest trained on the complement, so every row receives
    exactly one out-of-fold prediction. Rows whose prediction disagrees with
    their label are removed.
    """
    if data.n == 0:
        raise ValueError("cannot filter an empty dataset")
    started = time.perf_counter()
    folds = k_fold(data, partitions, seed)
    fold_seeds = _derived_seeds(seed, len(folds))
    marks = []
    fold_removed = []
    for fold in folds:
        forest = train_random_forest(
            fold.train,
            n_trees=n_trees,
            max_depth=max_depth,
            max_bins=max_bins,
            seed=fold_seeds[fold.fold_index],
            n_jobs=n_jobs,
        )
        predictions = predict_forest(forest, fold.test, n_jobs=n_jobs)
        bad = fold.test_ids[predictions != fold.test.labels]
        marks.append(bad)
        fold_removed.append(bad.size)
    config = {
        "filter": "hme_bd",
        "partitions": int(partitions),
        "n_trees": int(n_trees),
        "vote": None,
        "max_depth": int(max_depth),
        "max_bins": int(max_bins),
        "seed": int(seed),
        "fold_seeds": fold_seeds,
    }
    return _finish(data, marks, fold_removed, started, config)


def hte_bd(
    data: Dataset,
    partitions: int = 4,
    n_trees: int = 100,
    vote: VoteScheme = VoteScheme.MAJORITY,
    seed: int = 0,
    max_depth: int = 10,
    max_bins: int = 32,
    lr_iterations: int = 100,
    lr_step: float = 1.0,
    lr_l2: float = 0.0,
    n_jobs: int | None = None,
) -> FilterReport:
    """Heterogeneous ensemble filter: forest, logistic regression, and 1NN.

    Per fold, all three learners train on the train part and predict the
    test part. For each test row the number of predictions disagreeing with
    its label (0..3) feeds `vote_decision`; majority removes at >= 2
    dissenters, consensus at 3. Train and test parts are disjoint, so the
    1NN component needs no self-exclusion.
    """
    if data.n == 0:
        raise ValueError("cannot filter an empty dataset")
    vote = VoteScheme(vote)
    started = time.perf_counter()
    folds = k_fold(data, partitions, seed)
    fold_seeds = _derived_seeds(seed, len(folds))
    marks = []
    fold_removed = []
    for fold in folds:
        if fold.train.n < 2:
            raise ValueError("every fold's train part needs at least two instances")
        forest = train_random_forest(
            fold.train,
            n_trees=n_trees,
            max_depth=max_depth,
            max_bins=max_bins,
            seed=fold_seeds[fold.fold_index],
            n_jobs=n_jobs,
        )
        logistic = train_logistic_regression(fold.train, lr_iterations, lr_step, lr_l2)
        knn = NearestNeighborModel(fold.train)
        labels = fold.test.labels
        dissent = (
            (predict_forest(forest, fold.test, n_jobs=n_jobs) != labels).astype(np.int64)
            + (logistic.predict(fold.test.features) != labels)
            + (predict_1nn(knn, fold.test, n_jobs=n_jobs) != labels)
        )
        if vote is VoteScheme.MAJORITY:
            remove = dissent >= 2
        else:
            remove = dissent == 3
        bad = fold.test_ids[remove]
        marks.append(bad)
        fold_removed.append(bad.size)
    config = {
        "filter": "hte_bd",
        "partitions": int(partitions),
        "n_trees": int(n_trees),
        "vote": vote.value,
        "max_depth": int(max_depth),
        "max_bins": int(max_bins),
        "lr_iterations": int(lr_iterations),
        "lr_step": float(lr_step),
        "lr_l2": float(lr_l2),
        "seed": int(seed),
        "fold_seeds": fold_seeds,
    }
    return _finish(data, marks, fold_removed, started, config)


def enn_bd(data: Dataset, n_jobs: int | None = None) -> FilterReport:
    """Edited nearest neighbor: remove rows whose nearest other row disagrees.

    Every row is compared against its nearest neighbor within the dataset,
    excluding itself by row id (an exact 1NN would otherwise always return
    the row itself). No partitioning and no randomness.
    """
    if data.n < 2:
        raise ValueError("need at least two instances to edit")
    started = time.perf_counter()
    model = NearestNeighborModel(data)
    neighbors = predict_1nn(model, data, exclude_ids=np.arange(data.n), n_jobs=n_jobs)
    bad = np.flatnonzero(neighbors != data.labels)
    config = {"filter": "enn_bd", "k": 1, "distance": "euclidean"}
    return _finish(data, [bad], [bad.size], started, config)
