"""Acceptance suite: one test per criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v -s`. The heavier noise-filter
workloads are cached at module scope so the determinism criterion can rerun
them at several thread counts without paying for everything twice.
"""

import os
import time

import numpy as np
import pytest

from noisefilter import (
    Dataset,
    ExperimentConfig,
    NearestNeighborModel,
    VoteScheme,
    enn_bd,
    hme_bd,
    hte_bd,
    inject_uniform_class_noise,
    k_fold,
    log_loss_and_gradient,
    noise_recall,
    predict_1nn,
    run_experiment,
    separable_blobs,
    vote_decision,
)
from noisefilter.data import round_half_up

MAX_JOBS = max(1, os.cpu_count() or 1)
THREAD_COUNTS = (1, 4, MAX_JOBS)

_cache: dict = {}


def _report(num, detail, elapsed, budget):
    assert elapsed < budget, f"criterion {num} exceeded its {budget}s budget ({elapsed:.1f}s)"
    print(f"\ncriterion {num}: PASS ({detail}; {elapsed:.1f}s < {budget:.0f}s)")


# -- shared workloads -------------------------------------------------------


def _crit6_runs(n_jobs):
    key = ("crit6", n_jobs)
    if key not in _cache:
        runs = []
        for s in range(5):
            data = separable_blobs(5000, seed=100 + s)
            noisy, ledger = inject_uniform_class_noise(data, 0.2, seed=200 + s)
            report = hme_bd(noisy, partitions=4, seed=300 + s, n_jobs=n_jobs)
            runs.append((report.removed_ids, noise_recall(report, ledger)))
        _cache[key] = runs
    return _cache[key]


def _crit7_runs(n_jobs):
    key = ("crit7", n_jobs)
    if key not in _cache:
        data = separable_blobs(5000, seed=100)
        _cache[key] = {
            "hme_bd": hme_bd(data, partitions=4, seed=400, n_jobs=n_jobs),
            "hte_bd majority": hte_bd(
                data, partitions=4, vote=VoteScheme.MAJORITY, seed=400, n_jobs=n_jobs
            ),
            "hte_bd consensus": hte_bd(
                data, partitions=4, vote=VoteScheme.CONSENSUS, seed=400, n_jobs=n_jobs
            ),
            "enn_bd": enn_bd(data, n_jobs=n_jobs),
        }
    return _cache[key]


def _crit8_rows(n_jobs):
    key = ("crit8", n_jobs)
    if key not in _cache:
        config = ExperimentConfig.from_dict(
            {
                "dataset": {"type": "synthetic", "name": "separable_blobs", "n": 5000, "seed": 100},
                "train_fraction": 0.5,
                "noise_levels": [0.0, 0.05, 0.1, 0.15, 0.2],
                "filters": [{"name": "hme", "partitions": 4}],
                "classifiers": ["1nn"],
                "repetitions": 1,
                "seed": 0,
            }
        )
        _cache[key] = run_experiment(config, n_jobs=n_jobs)
    return _cache[key]


# -- criteria ----------------------------------------------------------------


def test_criterion_01_noise_injection_exactness():
    started = time.perf_counter()
    rng = np.random.default_rng(0)
    checked = 0
    for n in (10, 101, 1000):
        base = Dataset(rng.normal(size=(n, 2)), rng.integers(0, 3, size=n), 3)
        for level in (0.0, 0.05, 0.1, 0.15, 0.2):
            noisy, ledger = inject_uniform_class_noise(base, level, seed=checked)
            assert ledger.n_flipped == round_half_up(level * n)
            assert np.unique(ledger.flipped_ids).size == ledger.n_flipped
            assert np.all(
                noisy.labels[ledger.flipped_ids] != base.labels[ledger.flipped_ids]
            )
            untouched = np.setdiff1d(np.arange(n), ledger.flipped_ids)
            assert np.array_equal(noisy.labels[untouched], base.labels[untouched])
            checked += 1
    _report(1, f"{checked} (n, level) pairs exact", time.perf_counter() - started, 1.0)


def test_criterion_02_fold_tiling():
    started = time.perf_counter()
    rng = np.random.default_rng(1)
    cases = 0
    for partitions in (2, 4, 5, 10):
        sizes = [int(rng.integers(partitions, 10_000)) for _ in range(3)] + [10_000]
        for n in sizes:
            data = Dataset(rng.normal(size=(n, 2)), rng.integers(0, 2, size=n), 2)
            folds = k_fold(data, partitions, seed=cases)
            all_test = np.concatenate([f.test_ids for f in folds])
            assert all_test.size == n
            assert np.array_equal(np.sort(all_test), np.arange(n))
            fold_sizes = [f.test_ids.size for f in folds]
            assert max(fold_sizes) - min(fold_sizes) <= 1
            cases += 1
    _report(2, f"{cases} datasets tiled exactly", time.perf_counter() - started, 5.0)


def _oracle_1nn(train, batch, exclude_ids=None):
    out = np.empty(batch.n, dtype=np.int64)
    for i in range(batch.n):
        best_d, best_j = np.inf, -1
        for j in range(train.n):
            if exclude_ids is not None and exclude_ids[i] == j:
                continue
            dist = np.sum((batch.features[i] - train.features[j]) ** 2)
            if dist < best_d:
                best_d, best_j = dist, j
        out[i] = train.labels[best_j]
    return out


def test_criterion_03_knn_oracle_equivalence():
    started = time.perf_counter()
    rng = np.random.default_rng(2)
    for case in range(50):
        n = 500 if case < 2 else int(rng.integers(2, 500))
        d = int(rng.integers(1, 6))
        k = int(rng.integers(2, 4))
        feats = np.round(rng.standard_normal((n, d)), 1)  # coarse grid forces ties
        if case % 3 == 0 and n >= 4:
            feats[: n // 2] = feats[n // 2 : 2 * (n // 2)]  # duplicated rows
        train = Dataset(feats, rng.integers(0, k, size=n), k)
        model = NearestNeighborModel(train)

        nq = min(n, 40)
        batch = Dataset(np.round(rng.standard_normal((nq, d)), 1), rng.integers(0, k, nq), k)
        assert np.array_equal(predict_1nn(model, batch), _oracle_1nn(train, batch))

        if n >= 2:
            self_ids = rng.integers(0, n, size=min(n, 40))
            self_batch = train.subset(self_ids)
            assert np.array_equal(
                predict_1nn(model, self_batch, exclude_ids=self_ids),
                _oracle_1nn(train, self_batch, exclude_ids=self_ids),
            )
    _report(3, "50 random sets match the double loop", time.perf_counter() - started, 30.0)


def test_criterion_04_logistic_gradient_check():
    started = time.perf_counter()
    rng = np.random.default_rng(3)
    X = rng.standard_normal((60, 4))
    y = rng.integers(0, 2, size=60).astype(np.float64)
    eps = 1e-6
    for _ in range(20):
        w = rng.standard_normal(4)
        b = float(rng.standard_normal())
        l2 = float(rng.uniform(0, 1))
        _, grad_w, grad_b = log_loss_and_gradient(w, b, X, y, l2)
        numeric = np.empty(4)
        for j in range(4):
            delta = np.zeros(4)
            delta[j] = eps
            lp, _, _ = log_loss_and_gradient(w + delta, b, X, y, l2)
            lm, _, _ = log_loss_and_gradient(w - delta, b, X, y, l2)
            numeric[j] = (lp - lm) / (2 * eps)
        lp, _, _ = log_loss_and_gradient(w, b + eps, X, y, l2)
        lm, _, _ = log_loss_and_gradient(w, b - eps, X, y, l2)
        numeric_b = (lp - lm) / (2 * eps)
        scale = max(1.0, float(np.abs(grad_w).max()), abs(grad_b))
        assert np.abs(grad_w - numeric).max() / scale <= 1e-5
        assert abs(grad_b - numeric_b) / scale <= 1e-5
    _report(4, "20 random points within 1e-5", time.perf_counter() - started, 5.0)


def test_criterion_05_voting_semantics():
    started = time.perf_counter()
    majority_removes = {c: vote_decision(c, VoteScheme.MAJORITY) for c in range(4)}
    consensus_removes = {c: vote_decision(c, VoteScheme.CONSENSUS) for c in range(4)}
    assert majority_removes == {0: False, 1: False, 2: True, 3: True}
    assert consensus_removes == {0: False, 1: False, 2: False, 3: True}
    rng = np.random.default_rng(4)
    counts = rng.integers(0, 4, size=2000)
    majority_set = {i for i, c in enumerate(counts) if vote_decision(c, "majority")}
    consensus_set = {i for i, c in enumerate(counts) if vote_decision(c, "consensus")}
    assert consensus_set <= majority_set
    _report(5, "truth table exact, consensus subset of majority", time.perf_counter() - started, 5.0)


def test_criterion_06_hme_noise_recall():
    started = time.perf_counter()
    runs = _crit6_runs(None)
    recalls = [recall for _, recall in runs]
    mean = float(np.mean(recalls))
    assert mean >= 0.60, f"mean recall {mean:.3f} < 0.60"
    _report(
        6,
        f"mean recall {mean:.3f} >= 0.60 over 5 seeds ({[round(r, 3) for r in recalls]})",
        time.perf_counter() - started,
        120.0,
    )


def test_criterion_07_clean_data_stability():
    started = time.perf_counter()
    reports = _crit7_runs(None)
    rates = {}
    for name, report in reports.items():
        rate = report.n_removed / report.n_input
        assert rate < 0.05, f"{name} removed {rate:.1%} of clean data"
        rates[name] = rate
    detail = ", ".join(f"{name} {rate:.2%}" for name, rate in rates.items())
    _report(7, f"all filters below 5% ({detail})", time.perf_counter() - started, 120.0)


def test_criterion_08_accuracy_rescue_pattern():
    started = time.perf_counter()
    rows = _crit8_rows(None)
    acc = {(r.filter_name, r.noise_level): r.accuracy_mean for r in rows}
    for level in (0.05, 0.1, 0.15, 0.2):
        gap = acc[("hme_bd", level)] - acc[("original", level)]
        assert gap >= 0.03, f"gap at {level:.0%} is {gap * 100:.2f} points < 3"
    flatness = abs(acc[("hme_bd", 0.2)] - acc[("hme_bd", 0.0)])
    assert flatness <= 0.02, f"filtered accuracy drifts {flatness * 100:.2f} points > 2"
    gaps = {f"{l:.0%}": round((acc[('hme_bd', l)] - acc[('original', l)]) * 100, 1)
            for l in (0.05, 0.1, 0.15, 0.2)}
    _report(
        8,
        f"gaps {gaps} points, filtered drift {flatness * 100:.2f} points",
        time.perf_counter() - started,
        300.0,
    )


def test_criterion_09_relative_filter_cost():
    started = time.perf_counter()
    data = separable_blobs(20_000, seed=500)
    hme_report = hme_bd(data, partitions=4, seed=501)
    hte_report = hte_bd(data, partitions=4, seed=501)
    enn_report = enn_bd(data)
    assert hme_report.wall_time_s < hte_report.wall_time_s
    assert hme_report.wall_time_s < enn_report.wall_time_s
    _report(
        9,
        f"hme {hme_report.wall_time_s:.1f}s < hte {hte_report.wall_time_s:.1f}s, "
        f"< enn {enn_report.wall_time_s:.1f}s at n=20000",
        time.perf_counter() - started,
        600.0,
    )


def test_criterion_10_determinism_under_parallelism():
    started = time.perf_counter()
    base6 = _crit6_runs(THREAD_COUNTS[0])
    base7 = _crit7_runs(THREAD_COUNTS[0])
    base8 = _crit8_rows(THREAD_COUNTS[0])
    for jobs in THREAD_COUNTS[1:]:
        for (removed_a, recall_a), (removed_b, recall_b) in zip(base6, _crit6_runs(jobs)):
            assert np.array_equal(removed_a, removed_b)
            assert recall_a == recall_b
        other7 = _crit7_runs(jobs)
        for name, report in base7.items():
            assert np.array_equal(report.removed_ids, other7[name].removed_ids)
        for row_a, row_b in zip(base8, _crit8_rows(jobs)):
            assert row_a.accuracy_mean == row_b.accuracy_mean
            assert row_a.instances_kept_mean == row_b.instances_kept_mean
            assert row_a.noise_recall_mean == row_b.noise_recall_mean or (
                np.isnan(row_a.noise_recall_mean) and np.isnan(row_b.noise_recall_mean)
            )
    # the cached default-thread runs must agree with the explicit counts too
    for (removed_a, _), (removed_b, _) in zip(_crit6_runs(None), _crit6_runs(1)):
        assert np.array_equal(removed_a, removed_b)
    _report(
        10,
        f"criteria 6-8 bitwise identical at thread counts {THREAD_COUNTS}",
        time.perf_counter() - started,
        900.0,
    )
