import numpy as np
import pytest

from noisefilter import Dataset, predict_forest, train_decision_tree, train_random_forest
from noisefilter.classifiers import DecisionTreeModel, RandomForestModel


def _leaf_tree(label, num_features=2, num_classes=2):
    return DecisionTreeModel(
        feature=np.array([-1], dtype=np.int32),
        threshold=np.array([0.0]),
        left=np.array([-1], dtype=np.int32),
        right=np.array([-1], dtype=np.int32),
        value=np.array([label], dtype=np.int32),
        num_features=num_features,
        num_classes=num_classes,
    )


def _forest_of(labels):
    return RandomForestModel(
        trees=tuple(_leaf_tree(l) for l in labels),
        feature_subset_size=2,
        num_features=2,
        num_classes=2,
        seed=0,
    )


def test_single_tree_uses_all_features(make_random_dataset):
    model = train_random_forest(make_random_dataset(40, d=7), n_trees=1, seed=0)
    assert model.feature_subset_size == 7


def test_auto_subset_is_ceil_sqrt(make_random_dataset):
    model = train_random_forest(make_random_dataset(40, d=18), n_trees=3, max_depth=3, seed=0)
    assert model.feature_subset_size == 5


def test_deterministic(make_random_dataset):
    train = make_random_dataset(150, d=4, k=3, seed=1)
    probe = make_random_dataset(60, d=4, k=3, seed=2)
    a = train_random_forest(train, n_trees=11, max_depth=5, seed=9)
    b = train_random_forest(train, n_trees=11, max_depth=5, seed=9)
    assert np.array_equal(predict_forest(a, probe), predict_forest(b, probe))


def test_majority_vote():
    probe = Dataset([[0.0, 0.0]], [0], 2)
    assert list(predict_forest(_forest_of([0, 0, 1]), probe)) == [0]


def test_vote_tie_goes_to_lowest_class():
    probe = Dataset([[0.0, 0.0]], [0], 2)
    assert list(predict_forest(_forest_of([1, 0]), probe)) == [0]
    assert list(predict_forest(_forest_of([1, 0, 1, 0]), probe)) == [0]


def test_empty_batch():
    empty = Dataset(np.empty((0, 2)), np.empty(0, dtype=np.int64), 2)
    assert predict_forest(_forest_of([0, 1, 1]), empty).size == 0


def test_arity_mismatch(make_random_dataset):
    model = train_random_forest(make_random_dataset(30, d=3), n_trees=2, max_depth=2, seed=0)
    with pytest.raises(ValueError):
        predict_forest(model, make_random_dataset(5, d=4))


def test_empty_train_rejected():
    empty = Dataset(np.empty((0, 2)), np.empty(0, dtype=np.int64), 2)
    with pytest.raises(ValueError):
        train_random_forest(empty, n_trees=2)


def test_n_trees_validation(make_random_dataset):
    with pytest.raises(ValueError):
        train_random_forest(make_random_dataset(10), n_trees=0)


def test_bootstrap_hook_reproduces_plain_tree(make_random_dataset):
    train = make_random_dataset(120, d=3, k=3, seed=4)
    probe = make_random_dataset(80, d=3, k=3, seed=5)
    forest = train_random_forest(
        train, n_trees=1, max_depth=6, max_bins=256, seed=7, bootstrap=False
    )
    plain = train_decision_tree(train, max_depth=6, max_bins=256, seed=7)
    tree = forest.trees[0]
    assert np.array_equal(tree.feature, plain.feature)
    assert np.array_equal(tree.threshold, plain.threshold)
    assert np.array_equal(tree.value, plain.value)
    assert np.array_equal(predict_forest(forest, probe), plain.predict(probe.features))
