import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisefilter import Dataset, k_fold


def _check_tiling(folds, n):
    all_test = np.concatenate([f.test_ids for f in folds])
    assert all_test.size == n
    assert np.array_equal(np.sort(all_test), np.arange(n))
    sizes = [f.test_ids.size for f in folds]
    assert max(sizes) - min(sizes) <= 1
    for fold in folds:
        assert np.array_equal(
            np.sort(np.concatenate([fold.train_ids, fold.test_ids])), np.arange(n)
        )
        assert fold.train.n + fold.test.n == n


def test_equal_folds(make_random_dataset):
    folds = k_fold(make_random_dataset(10), 5, seed=0)
    assert [f.test_ids.size for f in folds] == [2, 2, 2, 2, 2]
    _check_tiling(folds, 10)


def test_uneven_folds_front_loaded(make_random_dataset):
    folds = k_fold(make_random_dataset(10), 4, seed=0)
    assert [f.test_ids.size for f in folds] == [3, 3, 2, 2]
    _check_tiling(folds, 10)


def test_deterministic(make_random_dataset):
    ds = make_random_dataset(60)
    a = k_fold(ds, 4, seed=5)
    b = k_fold(ds, 4, seed=5)
    for fa, fb in zip(a, b):
        assert np.array_equal(fa.test_ids, fb.test_ids)


def test_seed_changes_assignment_not_tiling(make_random_dataset):
    ds = make_random_dataset(40)
    a = k_fold(ds, 4, seed=1)
    b = k_fold(ds, 4, seed=2)
    assert any(not np.array_equal(fa.test_ids, fb.test_ids) for fa, fb in zip(a, b))
    _check_tiling(a, 40)
    _check_tiling(b, 40)


def test_partition_bounds(make_random_dataset):
    ds = make_random_dataset(10)
    with pytest.raises(ValueError):
        k_fold(ds, 1, seed=0)
    with pytest.raises(ValueError):
        k_fold(ds, 11, seed=0)


def test_views_match_ids(make_random_dataset):
    ds = make_random_dataset(20)
    for fold in k_fold(ds, 3, seed=2):
        assert np.array_equal(fold.test.features, ds.features[fold.test_ids])
        assert np.array_equal(fold.train.labels, ds.labels[fold.train_ids])


def test_stratified_keeps_tiling_and_balance():
    rng = np.random.default_rng(0)
    labels = np.concatenate([np.zeros(30, dtype=np.int64), np.ones(10, dtype=np.int64)])
    ds = Dataset(rng.normal(size=(40, 2)), labels, 2)
    folds = k_fold(ds, 4, seed=3, stratified=True)
    _check_tiling(folds, 40)
    for fold in folds:
        counts = np.bincount(ds.labels[fold.test_ids], minlength=2)
        assert abs(counts[0] - 30 / 4) <= 1
        assert abs(counts[1] - 10 / 4) <= 1


@given(
    n=st.integers(min_value=2, max_value=300),
    partitions=st.integers(min_value=2, max_value=10),
    seed=st.integers(min_value=0, max_value=2**31),
)
@settings(max_examples=40, deadline=None)
def test_tiling_property(n, partitions, seed):
    if partitions > n:
        partitions = n
    rng = np.random.default_rng(1)
    ds = Dataset(rng.normal(size=(n, 2)), rng.integers(0, 2, size=n), 2)
    _check_tiling(k_fold(ds, partitions, seed), n)
