"""Binned gini decision trees grown breadth-first over candidate thresholds."""

from dataclasses import dataclass

import numpy as np

from ..data import Dataset

# Binning looks at no more than 1000 * max_bins sampled rows.
_BIN_SAMPLE_FACTOR = 1000
# Cross-feature ties must beat the incumbent by more than float residue.
_TIE_MARGIN = 1e-12


def gini_impurity(class_counts) -> float:
    """Gini impurity 1 - sum((c_k / total)^2) of a class-count vector."""
    counts = np.asarray(class_counts, dtype=np.float64)
    if counts.ndim != 1 or counts.size == 0:
        raise ValueError("class_counts must be a non-empty 1-D vector")
    if (counts < 0).any():
        raise ValueError("class counts must be non-negative")
    total = counts.sum()
    if total <= 0:
        raise ValueError("class counts must sum to a positive total")
    p = counts / total
    return float(1.0 - p @ p)


@dataclass(frozen=True, eq=False)
class SplitCandidateTable:
    """Ascending candidate thresholds per feature, at most max_bins - 1 each."""

    thresholds: tuple

    @property
    def num_features(self) -> int:
        return len(self.thresholds)


def build_split_candidates(train: Dataset, max_bins: int, seed: int = 0) -> SplitCandidateTable:
    """Equal-frequency candidate thresholds for every feature.

    Features with fewer than max_bins distinct values get the midpoints
    between consecutive distinct values instead (none for a constant
    feature); otherwise thresholds sit at the k/max_bins quantiles of a
    bounded row subsample, deduplicated.
    """
    if max_bins < 2:
        raise ValueError("max_bins must be at least 2")
    rng = np.random.default_rng(seed)
    return SplitCandidateTable(_candidate_thresholds(train.features, max_bins, rng))


def _candidate_thresholds(X: np.ndarray, max_bins: int, rng) -> tuple:
    n = X.shape[0]
    cap = _BIN_SAMPLE_FACTOR * max_bins
    sample = X if n <= cap else X[rng.choice(n, size=cap, replace=False)]
    quantiles = np.arange(1, max_bins) / max_bins
    out = []
    for f in range(X.shape[1]):
        distinct = np.unique(sample[:, f])
        if distinct.size <= 1:
            out.append(np.empty(0, dtype=np.float64))
        elif distinct.size < max_bins:
            out.append((distinct[:-1] + distinct[1:]) / 2.0)
        else:
            out.append(np.unique(np.quantile(sample[:, f], quantiles)))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class DecisionTreeModel:
    """Binary decision tree stored as parallel node arrays (node 0 is the root).

    Internal nodes route a row left when row[feature] <= threshold; leaves
    have feature == -1 and carry their class in `value`.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    num_features: int
    num_classes: int

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.num_features:
            raise ValueError(f"expected {self.num_features} features per row")
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.flatnonzero(self.feature[node] >= 0)
        while rows.size:
            at = node[rows]
            go_left = X[rows, self.feature[at]] <= self.threshold[at]
            node[rows] = np.where(go_left, self.left[at], self.right[at])
            rows = rows[self.feature[node[rows]] >= 0]
        return self.value[node].astype(np.int64)

    def depth(self) -> int:
        """Longest root-to-leaf path, counted in edges."""
        deepest = 0
        stack = [(0, 0)]
        while stack:
            nid, d = stack.pop()
            if self.feature[nid] < 0:
                deepest = max(deepest, d)
            else:
                stack.append((int(self.left[nid]), d + 1))
                stack.append((int(self.right[nid]), d + 1))
        return deepest


def train_decision_tree(
    train: Dataset,
    max_depth: int,
    max_bins: int = 32,
    feature_subset: int | None = None,
    seed: int = 0,
) -> DecisionTreeModel:
    """Grow a gini tree greedily, top-down.

    At every node the candidate threshold with the largest impurity decrease
    wins; ties go to the lowest feature index, then the lowest threshold.
    Growth stops at max_depth, on a pure node, or when no candidate split
    separates the rows. Leaves predict their majority class (ties to the
    lowest class index). With `feature_subset` set, each node evaluates a
    fresh random subset of that many features. Deterministic in
    (data, params, seed).
    """
    if train.n == 0:
        raise ValueError("cannot train a tree on an empty dataset")
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    m = train.num_features if feature_subset is None else int(feature_subset)
    if not 1 <= m <= train.num_features:
        raise ValueError("feature_subset must lie in [1, num_features]")
    rng = np.random.default_rng(seed)
    return _grow_tree(train.features, train.labels, train.num_classes, max_depth, max_bins, m, rng)


def _grow_tree(X, y, num_classes, max_depth, max_bins, m, rng) -> DecisionTreeModel:
    """Breadth-first growth; every level is a handful of vectorized passes.

    Nodes are numbered level by level, so the children of the r-th splitting
    node of a level sit at slots 2r and 2r+1 of the next level. Rows carry
    their level-local slot (or -1 once retired to a leaf), which keeps the
    whole bookkeeping free of per-node Python loops.
    """
    if max_bins < 2:
        raise ValueError("max_bins must be at least 2")
    n, d = X.shape
    K = num_classes
    thresholds = _candidate_thresholds(X, max_bins, rng)
    nbins = [t.size + 1 for t in thresholds]
    binned = np.empty((n, d), dtype=np.int64)
    for f in range(d):
        binned[:, f] = np.searchsorted(thresholds[f], X[:, f], side="left")
    thr_pad = np.zeros((d, max(nbins)), dtype=np.float64)
    for f in range(d):
        thr_pad[f, : nbins[f] - 1] = thresholds[f]

    feature_parts: list[np.ndarray] = []
    thresh_parts: list[np.ndarray] = []
    left_parts: list[np.ndarray] = []
    right_parts: list[np.ndarray] = []
    value_parts: list[np.ndarray] = []

    row_slot = np.zeros(n, dtype=np.int64)
    S = 1
    offset = 0
    depth = 0
    while S:
        act = np.flatnonzero(row_slot >= 0)
        sl = row_slot[act]
        y_act = y[act]

        counts = np.bincount(sl * K + y_act, minlength=S * K).reshape(S, K).astype(np.float64)
        sizes = counts.sum(axis=1)
        majority = counts.argmax(axis=1)
        pure = counts.max(axis=1) == sizes
        parent_gini = 1.0 - (counts**2).sum(axis=1) / sizes**2
        can_split = ~pure if depth < max_depth else np.zeros(S, dtype=bool)

        if m < d:
            subset = np.zeros((S, d), dtype=bool)
            for s_i in np.flatnonzero(can_split):
                subset[s_i, rng.choice(d, size=m, replace=False)] = True

        # A node splits whenever any valid split exists; a tied gain of zero
        # still splits (the two-level xor pattern needs it), so the incumbent
        # starts at -inf rather than zero.
        best_gain = np.full(S, -np.inf)
        best_f = np.full(S, -1, dtype=np.int64)
        best_s = np.full(S, -1, dtype=np.int64)
        slot_range = np.arange(S)
        for f in range(d):
            nb = nbins[f]
            if nb < 2:
                continue
            use = (subset[:, f] & can_split) if m < d else can_split
            if not use.any():
                continue
            pick = use[sl]
            sl_f = sl[pick]
            combined = (sl_f * K + y_act[pick]) * nb + binned[act[pick], f]
            hist = np.bincount(combined, minlength=S * K * nb).reshape(S, K, nb)
            cum = hist.cumsum(axis=2)[:, :, : nb - 1].astype(np.float64)
            n_left = cum.sum(axis=1)
            n_right = sizes[:, None] - n_left
            valid = (n_left > 0) & (n_right > 0) & use[:, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                gini_l = 1.0 - (cum**2).sum(axis=1) / n_left**2
                gini_r = 1.0 - ((counts[:, :, None] - cum) ** 2).sum(axis=1) / n_right**2
                gain = parent_gini[:, None] - (n_left * gini_l + n_right * gini_r) / sizes[:, None]
            gain = np.where(valid, gain, -np.inf)
            f_best_s = gain.argmax(axis=1)
            f_best_gain = gain[slot_range, f_best_s]
            improve = np.where(
                np.isinf(best_gain),
                np.isfinite(f_best_gain),
                f_best_gain > best_gain + _TIE_MARGIN,
            )
            best_f[improve] = f
            best_s[improve] = f_best_s[improve]
            best_gain[improve] = f_best_gain[improve]

        split_mask = best_f >= 0
        n_split = int(split_mask.sum())
        rank = np.cumsum(split_mask) - 1
        next_offset = offset + S
        feature_parts.append(np.where(split_mask, best_f, -1).astype(np.int32))
        thresh_parts.append(
            np.where(split_mask, thr_pad[np.maximum(best_f, 0), np.maximum(best_s, 0)], 0.0)
        )
        left_parts.append(np.where(split_mask, next_offset + 2 * rank, -1).astype(np.int32))
        right_parts.append(np.where(split_mask, next_offset + 2 * rank + 1, -1).astype(np.int32))
        value_parts.append(np.where(split_mask, -1, majority).astype(np.int32))

        if n_split:
            moving = split_mask[sl]
            rows_mv = act[moving]
            sl_mv = sl[moving]
            go_right = binned[rows_mv, best_f[sl_mv]] > best_s[sl_mv]
            row_slot[rows_mv] = 2 * rank[sl_mv] + go_right
            row_slot[act[~moving]] = -1
        else:
            row_slot[act] = -1

        offset = next_offset
        S = 2 * n_split
        depth += 1

    return DecisionTreeModel(
        feature=np.concatenate(feature_parts),
        threshold=np.concatenate(thresh_parts),
        left=np.concatenate(left_parts),
        right=np.concatenate(right_parts),
        value=np.concatenate(value_parts),
        num_features=d,
        num_classes=K,
    )
