"""Bundled synthetic reference datasets for benchmarking and tests."""

import numpy as np

from .data import Dataset


def _two_blobs(n: int, seed: int, separation: float) -> Dataset:
    """Two 2-D unit-variance gaussian blobs on the diagonal, balanced classes."""
    rng = np.random.default_rng(seed)
    n0 = n - n // 2
    labels = np.concatenate([np.zeros(n0, dtype=np.int64), np.ones(n // 2, dtype=np.int64)])
    features = rng.standard_normal((n, 2))
    features[labels == 1] += separation
    order = rng.permutation(n)
    return Dataset(features[order], labels[order], num_classes=2, label_names=("0", "1"))


def separable_blobs(n: int, seed: int = 0, separation: float = 8.0) -> Dataset:
    """Well-separated blobs: the class boundary is far from both clusters."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return _two_blobs(n, seed, separation)


def overlapping_blobs(n: int, seed: int = 0, separation: float = 2.0) -> Dataset:
    """Blobs close enough that the bayes-optimal error is clearly nonzero."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return _two_blobs(n, seed, separation)


def xor_grid(n: int, seed: int = 0) -> Dataset:
    """Uniform points in [-1, 1]^2 labeled by the sign-quadrant XOR pattern."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    features = rng.uniform(-1.0, 1.0, size=(n, 2))
    labels = ((features[:, 0] > 0) ^ (features[:, 1] > 0)).astype(np.int64)
    return Dataset(features, labels, num_classes=2, label_names=("0", "1"))


GENERATORS = {
    "separable_blobs": separable_blobs,
    "overlapping_blobs": overlapping_blobs,
    "xor_grid": xor_grid,
}


def make_dataset(name: str, n: int, seed: int = 0, **params) -> Dataset:
    """Instantiate a bundled generator by name."""
    if name not in GENERATORS:
        raise ValueError(f"unknown synthetic dataset {name!r}; know {sorted(GENERATORS)}")
    return GENERATORS[name](n, seed=seed, **params)
