"""Metrics and the experiment runner: split, inject, filter, train, score.

Both the runner and the CLI consume ExperimentConfig; results come back as
one ExperimentRow per (noise level, filter variant, classifier) cell,
averaged over repetitions. The tabular output schema is versioned.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import synthetic
from .classifiers import NearestNeighborModel, predict_1nn, train_decision_tree
from .data import Dataset, holdout_split, load_csv, load_libsvm
from .filters import FilterReport, VoteScheme, enn_bd, hme_bd, hte_bd
from .noise import NoiseLedger, inject_uniform_class_noise

RESULTS_SCHEMA_VERSION = 1

RESULTS_CSV_HEADER = [
    "dataset",
    "noise_level",
    "filter",
    "filter_params",
    "classifier",
    "accuracy_mean",
    "accuracy_std",
    "instances_kept_mean",
    "instances_kept_std",
    "noise_recall_mean",
    "noise_recall_std",
    "noise_precision_mean",
    "noise_precision_std",
    "filter_time_s_mean",
    "filter_time_s_std",
    "repetitions",
]


class UndefinedMetricError(ValueError):
    """The metric's denominator is empty for these inputs."""


def accuracy(predicted, truth) -> float:
    """Fraction of predictions equal to the true labels."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape or predicted.ndim != 1:
        raise ValueError("predicted and truth must be equal-length vectors")
    if predicted.size == 0:
        raise ValueError("cannot score an empty prediction vector")
    return float(np.mean(predicted == truth))


def _recall_from_ids(removed_ids: np.ndarray, flipped_ids: np.ndarray) -> float:
    if flipped_ids.size == 0:
        raise UndefinedMetricError("noise recall is undefined for an empty ledger")
    hits = np.intersect1d(removed_ids, flipped_ids, assume_unique=True).size
    return hits / flipped_ids.size


def _precision_from_ids(removed_ids: np.ndarray, flipped_ids: np.ndarray) -> float:
    if removed_ids.size == 0:
        raise UndefinedMetricError("noise precision is undefined when nothing was removed")
    hits = np.intersect1d(removed_ids, flipped_ids, assume_unique=True).size
    return hits / removed_ids.size


def noise_recall(report: FilterReport, ledger: NoiseLedger) -> float:
    """Fraction of the injected noisy rows that the filter removed."""
    return _recall_from_ids(report.removed_ids, ledger.flipped_ids)


def noise_precision(report: FilterReport, ledger: NoiseLedger) -> float:
    """Fraction of the filter's removals that were injected noise."""
    return _precision_from_ids(report.removed_ids, ledger.flipped_ids)


# ---------------------------------------------------------------------------
# experiment configuration


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the field."""


@dataclass(frozen=True)
class FilterSpec:
    name: str
    params: dict = field(default_factory=dict)

    def label(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))


@dataclass(frozen=True)
class ClassifierSpec:
    name: str
    params: dict = field(default_factory=dict)


_FILTER_NAMES = {"hme", "hme_bd", "hte", "hte_bd", "enn", "enn_bd"}
_CLASSIFIER_NAMES = {"1nn", "tree"}


def _canonical_filter(name: str) -> str:
    return name if name.endswith("_bd") else f"{name}_bd"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one benchmark run needs, loadable from a JSON document."""

    dataset: dict
    dataset_name: str
    train_fraction: float = 0.5
    noise_levels: tuple = (0.0, 0.05, 0.1, 0.15, 0.2)
    filters: tuple = (FilterSpec("hme_bd"),)
    classifiers: tuple = (ClassifierSpec("1nn"), ClassifierSpec("tree", {"max_depth": 20}))
    seed: int = 0
    repetitions: int = 5

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config: expected a JSON object")
        known = {
            "dataset",
            "name",
            "train_fraction",
            "noise_levels",
            "filters",
            "classifiers",
            "seed",
            "repetitions",
        }
        for key in doc:
            if key not in known:
                raise ConfigError(f"config field {key!r}: unknown field")

        source = doc.get("dataset")
        if not isinstance(source, dict) or "type" not in source:
            raise ConfigError("config field 'dataset': expected an object with a 'type'")
        if source["type"] not in ("synthetic", "csv", "libsvm"):
            raise ConfigError(f"config field 'dataset.type': unknown type {source['type']!r}")
        if source["type"] == "synthetic":
            if "name" not in source:
                raise ConfigError("config field 'dataset.name': required for synthetic sources")
            if source["name"] not in synthetic.GENERATORS:
                raise ConfigError(
                    f"config field 'dataset.name': unknown generator {source['name']!r}"
                )
            if "n" not in source:
                raise ConfigError("config field 'dataset.n': required for synthetic sources")
        elif "path" not in source:
            raise ConfigError("config field 'dataset.path': required for file sources")
        default_name = source.get("name") or str(source.get("path", "dataset"))
        name = str(doc.get("name", default_name))

        fraction = float(doc.get("train_fraction", 0.5))
        if not 0.0 < fraction < 1.0:
            raise ConfigError("config field 'train_fraction': must lie strictly in (0, 1)")

        levels = doc.get("noise_levels", [0.0, 0.05, 0.1, 0.15, 0.2])
        if not isinstance(levels, (list, tuple)) or not levels:
            raise ConfigError("config field 'noise_levels': expected a non-empty list")
        for i, level in enumerate(levels):
            if not isinstance(level, (int, float)) or not 0.0 <= float(level) <= 1.0:
                raise ConfigError(f"config field 'noise_levels[{i}]': must lie in [0, 1]")

        raw_filters = doc.get("filters", [{"name": "hme"}])
        if not isinstance(raw_filters, (list, tuple)):
            raise ConfigError("config field 'filters': expected a list")
        filters = []
        for i, item in enumerate(raw_filters):
            if isinstance(item, str):
                item = {"name": item}
            if not isinstance(item, dict) or "name" not in item:
                raise ConfigError(f"config field 'filters[{i}]': expected a name")
            if item["name"] not in _FILTER_NAMES:
                raise ConfigError(f"config field 'filters[{i}].name': unknown filter {item['name']!r}")
            params = {k: v for k, v in item.items() if k != "name"}
            filters.append(FilterSpec(_canonical_filter(item["name"]), params))

        raw_classifiers = doc.get("classifiers", ["1nn", "tree"])
        if not isinstance(raw_classifiers, (list, tuple)) or not raw_classifiers:
            raise ConfigError("config field 'classifiers': expected a non-empty list")
        classifiers = []
        for i, item in enumerate(raw_classifiers):
            if isinstance(item, str):
                item = {"name": item}
            if not isinstance(item, dict) or item.get("name") not in _CLASSIFIER_NAMES:
                raise ConfigError(
                    f"config field 'classifiers[{i}].name': expected one of {sorted(_CLASSIFIER_NAMES)}"
                )
            params = {k: v for k, v in item.items() if k != "name"}
            classifiers.append(ClassifierSpec(item["name"], params))

        repetitions = int(doc.get("repetitions", 5))
        if repetitions < 1:
            raise ConfigError("config field 'repetitions': must be at least 1")

        return cls(
            dataset=dict(source),
            dataset_name=name,
            train_fraction=fraction,
            noise_levels=tuple(float(level) for level in levels),
            filters=tuple(filters),
            classifiers=tuple(classifiers),
            seed=int(doc.get("seed", 0)),
            repetitions=repetitions,
        )

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config: not valid JSON ({exc})") from exc
        return cls.from_dict(doc)


def load_dataset_source(source: dict) -> Dataset:
    kind = source["type"]
    if kind == "synthetic":
        params = {
            k: v for k, v in source.items() if k not in ("type", "name", "n", "seed")
        }
        return synthetic.make_dataset(
            source["name"], int(source["n"]), seed=int(source.get("seed", 0)), **params
        )
    if kind == "csv":
        return load_csv(source["path"], source.get("label_column", -1))
    return load_libsvm(source["path"])


# ---------------------------------------------------------------------------
# experiment runner


@dataclass(frozen=True)
class ExperimentRow:
    """One aggregated result cell; metric stds accompany every mean."""

    dataset: str
    noise_level: float
    filter_name: str
    filter_params: str
    classifier: str
    accuracy_mean: float
    accuracy_std: float
    instances_kept_mean: float
    instances_kept_std: float
    noise_recall_mean: float
    noise_recall_std: float
    noise_precision_mean: float
    noise_precision_std: float
    filter_time_s_mean: float
    filter_time_s_std: float
    repetitions: int

    def to_dict(self) -> dict:
        return {
            key: (None if isinstance(val, float) and math.isnan(val) else val)
            for key, val in self.__dict__.items()
        }


def _seed_of(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


def _run_filter(spec: FilterSpec, data: Dataset, seed: int, n_jobs) -> FilterReport:
    params = dict(spec.params)
    if spec.name == "hme_bd":
        return hme_bd(data, seed=seed, n_jobs=n_jobs, **params)
    if spec.name == "hte_bd":
        if "vote" in params:
            params["vote"] = VoteScheme(params["vote"])
        return hte_bd(data, seed=seed, n_jobs=n_jobs, **params)
    if params:
        raise ConfigError(f"config field 'filters': enn takes no parameters, got {params}")
    return enn_bd(data, n_jobs=n_jobs)


def _fit_predict(spec: ClassifierSpec, train: Dataset, test: Dataset, seed: int, n_jobs) -> np.ndarray:
    if spec.name == "1nn":
        model = NearestNeighborModel(train)
        return predict_1nn(model, test, n_jobs=n_jobs)
    params = {"max_depth": 20, "max_bins": 32}
    params.update(spec.params)
    model = train_decision_tree(train, seed=seed, **params)
    return model.predict(test.features)


def _aggregate(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    defined = arr[~np.isnan(arr)]
    if defined.size == 0:
        return float("nan"), float("nan")
    mean = float(defined.mean())
    std = float(defined.std(ddof=1)) if defined.size > 1 else 0.0
    return mean, std


def run_experiment(config: ExperimentConfig, n_jobs: int | None = None) -> list[ExperimentRow]:
    """Run the full protocol and return one aggregated row per cell.

    Per repetition: hold-out split, then per noise level inject into the
    train part only, run every filter plus the unfiltered "original"
    baseline, train every evaluation classifier on the kept rows, and score
    on the clean test part (identical across all cells of a repetition).
    Rows come back in config order: level, then variant, then classifier.
    """
    data = load_dataset_source(config.dataset)
    variants: list = [None] + list(config.filters)
    cells: dict[tuple, dict[str, list]] = {
        (li, vi, ci): {"acc": [], "kept": [], "recall": [], "precision": [], "time": []}
        for li in range(len(config.noise_levels))
        for vi in range(len(variants))
        for ci in range(len(config.classifiers))
    }

    for rep in range(config.repetitions):
        split = holdout_split(data, config.train_fraction, seed=_seed_of(config.seed, rep))
        for li, level in enumerate(config.noise_levels):
            noisy, ledger = inject_uniform_class_noise(
                split.train, level, seed=_seed_of(config.seed, rep, 1, li)
            )
            for vi, spec in enumerate(variants):
                where = (
                    f"rep={rep} level={level} "
                    f"filter={'original' if spec is None else spec.name}"
                )
                try:
                    if spec is None:
                        kept, recall, precision, wall = noisy, float("nan"), float("nan"), float("nan")
                    else:
                        report = _run_filter(
                            spec, noisy, seed=_seed_of(config.seed, rep, 2, li, vi), n_jobs=n_jobs
                        )
                        kept = report.kept
                        wall = report.wall_time_s
                        try:
                            recall = noise_recall(report, ledger)
                        except UndefinedMetricError:
                            recall = float("nan")
                        try:
                            precision = noise_precision(report, ledger)
                        except UndefinedMetricError:
                            precision = float("nan")
                except ConfigError:
                    raise
                except Exception as exc:
                    raise RuntimeError(f"experiment cell failed ({where}): {exc}") from exc
                for ci, clf in enumerate(config.classifiers):
                    try:
                        predictions = _fit_predict(
                            clf, kept, split.test,
                            seed=_seed_of(config.seed, rep, 3, li, vi, ci), n_jobs=n_jobs,
                        )
                        acc = accuracy(predictions, split.test.labels)
                    except Exception as exc:
                        raise RuntimeError(
                            f"experiment cell failed ({where} classifier={clf.name}): {exc}"
                        ) from exc
                    cell = cells[(li, vi, ci)]
                    cell["acc"].append(acc)
                    cell["kept"].append(float(kept.n))
                    cell["recall"].append(recall)
                    cell["precision"].append(precision)
                    cell["time"].append(wall)

    rows = []
    for li, level in enumerate(config.noise_levels):
        for vi, spec in enumerate(variants):
            for ci, clf in enumerate(config.classifiers):
                cell = cells[(li, vi, ci)]
                acc_m, acc_s = _aggregate(cell["acc"])
                kept_m, kept_s = _aggregate(cell["kept"])
                rec_m, rec_s = _aggregate(cell["recall"])
                prec_m, prec_s = _aggregate(cell["precision"])
                time_m, time_s = _aggregate(cell["time"])
                rows.append(
                    ExperimentRow(
                        dataset=config.dataset_name,
                        noise_level=level,
                        filter_name="original" if spec is None else spec.name,
                        filter_params="" if spec is None else spec.label(),
                        classifier=clf.name,
                        accuracy_mean=acc_m,
                        accuracy_std=acc_s,
                        instances_kept_mean=kept_m,
                        instances_kept_std=kept_s,
                        noise_recall_mean=rec_m,
                        noise_recall_std=rec_s,
                        noise_precision_mean=prec_m,
                        noise_precision_std=prec_s,
                        filter_time_s_mean=time_m,
                        filter_time_s_std=time_s,
                        repetitions=config.repetitions,
                    )
                )
    return rows


# ---------------------------------------------------------------------------
# result serialization


def _cell_text(value) -> str:
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


_CSV_ATTRS = ["filter_name" if key == "filter" else key for key in RESULTS_CSV_HEADER]


def write_results_csv(rows: list[ExperimentRow], path) -> None:
    """One row per cell under a fixed header; undefined metrics are blank."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_CSV_HEADER)
        for row in rows:
            writer.writerow([_cell_text(getattr(row, attr)) for attr in _CSV_ATTRS])


def write_results_json(rows: list[ExperimentRow], path) -> None:
    doc = {"schema_version": RESULTS_SCHEMA_VERSION, "rows": [row.to_dict() for row in rows]}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
