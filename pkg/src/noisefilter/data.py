"""Dense labeled datasets: in-memory model, file ingestion, splits, statistics."""

import csv
import json
import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

import numpy as np


class DataFormatError(ValueError):
    """Malformed input file (ragged rows, bad numbers, bad feature indices)."""


class EmptyInputError(ValueError):
    """Input file contains no data rows."""


def round_half_up(x: float) -> int:
    """Round to the nearest integer with halves going up (platform independent)."""
    return int(math.floor(x + 0.5))


class Instance(NamedTuple):
    id: int
    label: int
    features: np.ndarray


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable collection of dense-feature instances with class metadata.

    Parameters
    ----------
    features : (n, d) float64 matrix, one row per instance; all values finite.
    labels : (n,) int64 vector of 0-based class indices.
    num_classes : number of classes, at least 2; may exceed the labels present.
    label_names : original label spellings, index-aligned with class indices.

    Instances are identified by their row position (0..n-1). Operations that
    carve out subsets (hold-out splits, folds, filters) report row positions
    of the dataset they were given.
    """

    features: np.ndarray
    labels: np.ndarray
    num_classes: int
    label_names: tuple[str, ...] | None = None

    def __post_init__(self):
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        labels = np.ascontiguousarray(np.asarray(self.labels, dtype=np.int64))
        if feats.ndim != 2:
            raise ValueError("features must be a 2-D matrix")
        if feats.shape[1] < 1:
            raise ValueError("datasets need at least one feature")
        if labels.ndim != 1 or labels.shape[0] != feats.shape[0]:
            raise ValueError("labels must be a vector with one entry per feature row")
        if int(self.num_classes) < 2:
            raise ValueError("num_classes must be at least 2")
        if labels.size and (labels.min() < 0 or labels.max() >= self.num_classes):
            raise ValueError("labels must lie in [0, num_classes)")
        if feats.size and not np.isfinite(feats).all():
            raise ValueError("features must be finite")
        if self.label_names is not None and len(self.label_names) != self.num_classes:
            raise ValueError("label_names must carry one name per class")
        feats.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "num_classes", int(self.num_classes))

    @property
    def n(self) -> int:
        return int(self.labels.shape[0])

    @property
    def num_features(self) -> int:
        return int(self.features.shape[1])

    def __len__(self) -> int:
        return self.n

    def instance(self, i: int) -> Instance:
        return Instance(int(i), int(self.labels[i]), self.features[i])

    def __iter__(self) -> Iterator[Instance]:
        return (self.instance(i) for i in range(self.n))

    def subset(self, ids) -> "Dataset":
        """New dataset holding the rows named by `ids`, in the given order."""
        ids = np.asarray(ids, dtype=np.int64)
        return Dataset(self.features[ids], self.labels[ids], self.num_classes, self.label_names)

    def with_labels(self, labels) -> "Dataset":
        """Same features and metadata, different label vector."""
        return Dataset(self.features, labels, self.num_classes, self.label_names)


@dataclass(frozen=True, eq=False)
class HoldoutSplit:
    """One train/test split; `train_ids`/`test_ids` are rows of the source dataset."""

    train: Dataset
    test: Dataset
    seed: int
    train_fraction: float
    train_ids: np.ndarray
    test_ids: np.ndarray


def holdout_split(data: Dataset, train_fraction: float, seed: int) -> HoldoutSplit:
    """Split a dataset into train/test parts by a seeded uniform permutation.

    The train part gets round(train_fraction * n) rows (halves round up).
    Row ids within each part are re-densified; the original row ids are kept
    on the returned split. Deterministic in (data, train_fraction, seed).
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    if data.n < 2:
        raise ValueError("need at least two instances to split")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(data.n)
    k = round_half_up(train_fraction * data.n)
    train_ids = np.sort(perm[:k])
    test_ids = np.sort(perm[k:])
    return HoldoutSplit(
        train=data.subset(train_ids),
        test=data.subset(test_ids),
        seed=int(seed),
        train_fraction=float(train_fraction),
        train_ids=train_ids,
        test_ids=test_ids,
    )


def class_histogram(data: Dataset) -> np.ndarray:
    """Instance count per class; always sums to len(data)."""
    return np.bincount(data.labels, minlength=data.num_classes).astype(np.int64)


# ---------------------------------------------------------------------------
# ingestion


def _parse_float(cell: str):
    try:
        return float(cell)
    except ValueError:
        return None


def _looks_like_header(first: list, second: list) -> bool:
    # Header when some column is non-numeric in row 1 but numeric in row 2;
    # an all-categorical column gives no signal and is treated as data.
    if len(first) != len(second):
        return False
    return any(
        _parse_float(a) is None and _parse_float(b) is not None
        for a, b in zip(first, second)
    )


def _resolve_label_column(label_column, header, arity: int, path) -> int:
    if isinstance(label_column, str):
        if header is None:
            raise ValueError("selecting the label column by name requires a header row")
        if label_column not in header:
            raise ValueError(f"{path}: no column named {label_column!r}")
        return header.index(label_column)
    idx = int(label_column)
    if idx < 0:
        idx += arity
    if not 0 <= idx < arity:
        raise ValueError(f"label column {label_column} out of range for {arity} columns")
    return idx


def _encode_labels(raw: list) -> tuple[np.ndarray, list]:
    """Map raw label strings to dense 0-based indices.

    Integer labels that already form 0..K-1 pass through unchanged so that a
    written dataset reloads with identical labels; anything else is mapped in
    first-seen order.
    """
    try:
        ints = [int(s) for s in raw]
    except ValueError:
        ints = None
    if ints is not None:
        distinct = sorted(set(ints))
        if distinct == list(range(len(distinct))):
            return np.asarray(ints, dtype=np.int64), [str(v) for v in distinct]
    mapping: dict = {}
    labels = np.asarray([mapping.setdefault(s, len(mapping)) for s in raw], dtype=np.int64)
    return labels, list(mapping)


def _pad_label_names(names: list, num_classes: int) -> tuple:
    names = list(names) + [f"class{k}" for k in range(len(names), num_classes)]
    return tuple(names)


def load_csv(
    path,
    label_column=-1,
    *,
    has_header: bool | None = None,
    encoding: str = "ordinal",
    num_classes: int | None = None,
) -> Dataset:
    """Load a comma-separated file into a Dataset.

    Parameters
    ----------
    path : file to read.
    label_column : column index (negative counts from the end) or, when the
        file has a header, a column name. Defaults to the last column.
    has_header : force header handling; by default a header is detected when
        the first row is non-numeric in a column where the second row is.
    encoding : how non-numeric feature columns are encoded, either "ordinal"
        (first-seen category index, the default) or "onehot". Column types
        are sniffed from the first data row; a non-numeric cell inside a
        numeric column is a format error.
    num_classes : override the class count (defaults to the number of
        distinct labels, floored at two).

    Raises
    ------
    DataFormatError : ragged rows or unparseable numeric cells, with the
        offending line number.
    EmptyInputError : file holds no data rows.
    """
    if encoding not in ("ordinal", "onehot"):
        raise ValueError(f"unknown feature encoding {encoding!r}")
    raw: list[tuple[int, list]] = []
    with open(path, newline="") as fh:
        for line_no, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            raw.append((line_no, [c.strip() for c in row]))
    if not raw:
        raise EmptyInputError(f"{path}: no data rows")

    arity = len(raw[0][1])
    for line_no, row in raw:
        if len(row) != arity:
            raise DataFormatError(
                f"{path}:{line_no}: expected {arity} columns, found {len(row)}"
            )
    if arity < 2:
        raise DataFormatError(f"{path}:{raw[0][0]}: rows need at least two columns")

    header = None
    if has_header is None:
        has_header = len(raw) >= 2 and _looks_like_header(raw[0][1], raw[1][1])
    if has_header:
        header = raw[0][1]
        raw = raw[1:]
        if not raw:
            raise EmptyInputError(f"{path}: no data rows after the header")

    label_idx = _resolve_label_column(label_column, header, arity, path)
    feature_cols = [j for j in range(arity) if j != label_idx]

    first_row = raw[0][1]
    numeric_col = {j: _parse_float(first_row[j]) is not None for j in feature_cols}
    categories: dict[int, dict] = {j: {} for j in feature_cols if not numeric_col[j]}

    codes = np.empty((len(raw), len(feature_cols)), dtype=np.float64)
    labels_raw = []
    for r, (line_no, row) in enumerate(raw):
        for c, j in enumerate(feature_cols):
            cell = row[j]
            if numeric_col[j]:
                v = _parse_float(cell)
                if v is None:
                    raise DataFormatError(f"{path}:{line_no}: not a number: {cell!r}")
                if not math.isfinite(v):
                    raise DataFormatError(f"{path}:{line_no}: non-finite value: {cell!r}")
                codes[r, c] = v
            else:
                cmap = categories[j]
                codes[r, c] = float(cmap.setdefault(cell, len(cmap)))
        labels_raw.append(row[label_idx])

    if encoding == "onehot" and categories:
        blocks = []
        for c, j in enumerate(feature_cols):
            if numeric_col[j]:
                blocks.append(codes[:, c : c + 1])
            else:
                width = max(len(categories[j]), 1)
                blocks.append(np.eye(width)[codes[:, c].astype(np.int64)])
        features = np.concatenate(blocks, axis=1)
    else:
        features = codes

    labels, names = _encode_labels(labels_raw)
    ncls = int(num_classes) if num_classes is not None else max(2, len(names))
    if labels.size and labels.max() >= ncls:
        raise ValueError(f"{path}: found label index {labels.max()} >= num_classes={ncls}")
    return Dataset(features, labels, ncls, _pad_label_names(names, ncls))


def load_libsvm(path) -> Dataset:
    """Load a sparse `<label> <index>:<value> ...` file into a dense Dataset.

    Feature indices are 1-based and must be strictly ascending within a line;
    absent indices are filled with 0.0 and the feature count is the largest
    index seen anywhere. Labels are mapped to dense 0-based indices in
    ascending numeric order (so {-1, +1} becomes {0, 1}).
    """
    parsed: list[tuple[float, list]] = []
    max_idx = 0
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            parts = s.split()
            label = _parse_float(parts[0])
            if label is None or not math.isfinite(label):
                raise DataFormatError(f"{path}:{line_no}: bad label {parts[0]!r}")
            pairs = []
            prev = 0
            for tok in parts[1:]:
                idx_s, sep, val_s = tok.partition(":")
                if not sep:
                    raise DataFormatError(
                        f"{path}:{line_no}: expected index:value, found {tok!r}"
                    )
                try:
                    idx = int(idx_s)
                except ValueError:
                    raise DataFormatError(
                        f"{path}:{line_no}: bad feature index {idx_s!r}"
                    ) from None
                if idx < 1:
                    raise DataFormatError(
                        f"{path}:{line_no}: feature indices are 1-based, found {idx}"
                    )
                if idx <= prev:
                    raise DataFormatError(
                        f"{path}:{line_no}: feature indices must be ascending"
                    )
                val = _parse_float(val_s)
                if val is None or not math.isfinite(val):
                    raise DataFormatError(f"{path}:{line_no}: bad value {val_s!r}")
                pairs.append((idx, val))
                prev = idx
            max_idx = max(max_idx, prev)
            parsed.append((label, pairs))
    if not parsed:
        raise EmptyInputError(f"{path}: no data rows")
    if max_idx == 0:
        raise DataFormatError(f"{path}: no feature values present")

    features = np.zeros((len(parsed), max_idx), dtype=np.float64)
    for r, (_, pairs) in enumerate(parsed):
        for idx, val in pairs:
            features[r, idx - 1] = val

    raw_labels = [lab for lab, _ in parsed]
    distinct = sorted(set(raw_labels))
    mapping = {v: i for i, v in enumerate(distinct)}
    labels = np.asarray([mapping[lab] for lab in raw_labels], dtype=np.int64)
    names = [_format_number(v) for v in distinct]
    ncls = max(2, len(distinct))
    return Dataset(features, labels, ncls, _pad_label_names(names, ncls))


def _format_number(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


# ---------------------------------------------------------------------------
# serialization


def save_csv(data: Dataset, path, *, header: Sequence[str] | None = None) -> None:
    """Write features then the integer label per row; floats keep full precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow(list(header))
        for i in range(data.n):
            writer.writerow(
                [repr(float(v)) for v in data.features[i]] + [int(data.labels[i])]
            )


def save_libsvm(data: Dataset, path) -> None:
    """Write `<label> <index>:<value> ...` lines with every index present."""
    with open(path, "w") as fh:
        for i in range(data.n):
            pairs = " ".join(
                f"{j + 1}:{repr(float(v))}" for j, v in enumerate(data.features[i])
            )
            fh.write(f"{int(data.labels[i])} {pairs}\n" if pairs else f"{int(data.labels[i])}\n")


def dataset_metadata(data: Dataset) -> dict:
    return {
        "n": data.n,
        "num_features": data.num_features,
        "num_classes": data.num_classes,
        "label_names": list(data.label_names) if data.label_names else None,
    }


def write_metadata(data: Dataset, path) -> None:
    """Emit the small JSON sidecar describing a dataset file."""
    with open(path, "w") as fh:
        json.dump(dataset_metadata(data), fh, indent=2)
        fh.write("\n")
