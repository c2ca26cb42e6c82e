"""Uniform class-noise injection with a restorable ground-truth ledger."""

import json
from dataclasses import dataclass

import numpy as np

from .data import Dataset, round_half_up

LEDGER_FORMAT = "noisefilter-ledger"
LEDGER_VERSION = 1


@dataclass(frozen=True, eq=False)
class NoiseLedger:
    """Ground truth of an injection run: which rows were flipped, from what."""

    flipped_ids: np.ndarray
    original_labels: np.ndarray
    level: float
    seed: int

    @property
    def n_flipped(self) -> int:
        return int(self.flipped_ids.shape[0])

    def original_label_map(self) -> dict[int, int]:
        return {int(i): int(l) for i, l in zip(self.flipped_ids, self.original_labels)}

    def restore(self, data: Dataset) -> Dataset:
        """Undo the recorded flips on a dataset with matching row ids."""
        labels = data.labels.copy()
        labels[self.flipped_ids] = self.original_labels
        return data.with_labels(labels)

    def to_dict(self) -> dict:
        return {
            "format": LEDGER_FORMAT,
            "version": LEDGER_VERSION,
            "level": self.level,
            "seed": self.seed,
            "flipped_ids": [int(i) for i in self.flipped_ids],
            "original_labels": [int(l) for l in self.original_labels],
        }

    def save_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)
            fh.write("\n")

    @classmethod
    def from_dict(cls, doc: dict) -> "NoiseLedger":
        if doc.get("format") != LEDGER_FORMAT:
            raise ValueError("not a noise ledger document")
        if doc.get("version") != LEDGER_VERSION:
            raise ValueError(f"unsupported ledger version {doc.get('version')}")
        return cls(
            flipped_ids=np.asarray(doc["flipped_ids"], dtype=np.int64),
            original_labels=np.asarray(doc["original_labels"], dtype=np.int64),
            level=float(doc["level"]),
            seed=int(doc["seed"]),
        )

    @classmethod
    def load_json(cls, path) -> "NoiseLedger":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def inject_uniform_class_noise(data: Dataset, level: float, seed: int) -> tuple[Dataset, NoiseLedger]:
    """Flip the labels of round(level * n) rows chosen uniformly at random.

    Each chosen row receives a new label drawn uniformly from the other
    classes, so a flip never preserves the label; features are untouched.
    Deterministic in (data, level, seed).
    """
    if not 0.0 <= level <= 1.0:
        raise ValueError("noise level must lie in [0, 1]")
    n = data.n
    flips = round_half_up(level * n)
    rng = np.random.default_rng(seed)
    flipped = np.sort(rng.permutation(n)[:flips])
    labels = data.labels.copy()
    originals = labels[flipped].copy()
    draws = rng.integers(0, data.num_classes - 1, size=flips)
    draws = draws + (draws >= originals)
    labels[flipped] = draws
    ledger = NoiseLedger(
        flipped_ids=flipped,
        original_labels=originals,
        level=float(level),
        seed=int(seed),
    )
    return data.with_labels(labels), ledger
