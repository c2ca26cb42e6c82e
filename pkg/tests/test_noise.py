import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisefilter import Dataset, NoiseLedger, inject_uniform_class_noise
from noisefilter.data import round_half_up


def _dataset(n, k=2, seed=0):
    rng = np.random.default_rng(seed)
    return Dataset(rng.normal(size=(n, 2)), rng.integers(0, k, size=n), k)


def test_level_zero_is_identity():
    ds = _dataset(30)
    noisy, ledger = inject_uniform_class_noise(ds, 0.0, seed=1)
    assert np.array_equal(noisy.labels, ds.labels)
    assert np.array_equal(noisy.features, ds.features)
    assert ledger.n_flipped == 0


def test_binary_flips_are_complements():
    ds = _dataset(100, k=2, seed=3)
    noisy, ledger = inject_uniform_class_noise(ds, 0.2, seed=5)
    assert ledger.n_flipped == 20
    assert np.unique(ledger.flipped_ids).size == 20
    for i in ledger.flipped_ids:
        assert noisy.labels[i] == 1 - ds.labels[i]
    untouched = np.setdiff1d(np.arange(100), ledger.flipped_ids)
    assert np.array_equal(noisy.labels[untouched], ds.labels[untouched])


def test_multiclass_never_preserves_label():
    ds = _dataset(1000, k=3, seed=2)
    noisy, ledger = inject_uniform_class_noise(ds, 0.1, seed=9)
    assert ledger.n_flipped == 100
    assert np.all(noisy.labels[ledger.flipped_ids] != ds.labels[ledger.flipped_ids])
    assert noisy.labels.max() < 3


def test_deterministic():
    ds = _dataset(200, k=4, seed=1)
    a, la = inject_uniform_class_noise(ds, 0.15, seed=42)
    b, lb = inject_uniform_class_noise(ds, 0.15, seed=42)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(la.flipped_ids, lb.flipped_ids)


def test_restore_roundtrip():
    ds = _dataset(150, k=3, seed=6)
    noisy, ledger = inject_uniform_class_noise(ds, 0.3, seed=7)
    restored = ledger.restore(noisy)
    assert np.array_equal(restored.labels, ds.labels)
    assert np.array_equal(restored.features, ds.features)


def test_level_out_of_range():
    ds = _dataset(10)
    for bad in (-0.1, 1.0001):
        with pytest.raises(ValueError):
            inject_uniform_class_noise(ds, bad, seed=0)


def test_ledger_json_roundtrip(tmp_path):
    ds = _dataset(40, k=3, seed=4)
    _, ledger = inject_uniform_class_noise(ds, 0.25, seed=11)
    path = tmp_path / "ledger.json"
    ledger.save_json(path)
    loaded = NoiseLedger.load_json(path)
    assert np.array_equal(loaded.flipped_ids, ledger.flipped_ids)
    assert np.array_equal(loaded.original_labels, ledger.original_labels)
    assert loaded.level == ledger.level
    assert loaded.seed == ledger.seed


@given(
    n=st.integers(min_value=1, max_value=400),
    level=st.floats(min_value=0.0, max_value=1.0),
    k=st.integers(min_value=2, max_value=5),
    seed=st.integers(min_value=0, max_value=2**31),
)
@settings(max_examples=60, deadline=None)
def test_flip_count_exact_and_labels_change(n, level, k, seed):
    ds = _dataset(n, k=k, seed=0)
    noisy, ledger = inject_uniform_class_noise(ds, level, seed=seed)
    assert ledger.n_flipped == round_half_up(level * n)
    assert np.all(noisy.labels[ledger.flipped_ids] != ds.labels[ledger.flipped_ids])
    assert np.array_equal(ledger.restore(noisy).labels, ds.labels)
