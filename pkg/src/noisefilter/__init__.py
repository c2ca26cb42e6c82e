"""Label-noise filtering toolkit: ensemble filters over from-scratch
classifiers, uniform noise injection, and a benchmark harness."""

from .classifiers import (
    DecisionTreeModel,
    LogisticRegressionModel,
    NearestNeighborModel,
    RandomForestModel,
    SplitCandidateTable,
    build_split_candidates,
    dump_model,
    gini_impurity,
    load_model,
    log_loss_and_gradient,
    predict_1nn,
    predict_forest,
    train_decision_tree,
    train_logistic_regression,
    train_random_forest,
)
from .data import (
    DataFormatError,
    Dataset,
    EmptyInputError,
    HoldoutSplit,
    Instance,
    class_histogram,
    holdout_split,
    load_csv,
    load_libsvm,
    save_csv,
    save_libsvm,
    write_metadata,
)
from .evaluation import (
    ClassifierSpec,
    ConfigError,
    ExperimentConfig,
    ExperimentRow,
    FilterSpec,
    UndefinedMetricError,
    accuracy,
    noise_precision,
    noise_recall,
    run_experiment,
    write_results_csv,
    write_results_json,
)
from .filters import FilterReport, VoteScheme, enn_bd, hme_bd, hte_bd, vote_decision
from .noise import NoiseLedger, inject_uniform_class_noise
from .partitioning import FoldPair, k_fold
from .plots import render_figures
from .synthetic import make_dataset, overlapping_blobs, separable_blobs, xor_grid

__version__ = "0.1.0"

__all__ = [
    "ClassifierSpec",
    "ConfigError",
    "DataFormatError",
    "Dataset",
    "DecisionTreeModel",
    "EmptyInputError",
    "ExperimentConfig",
    "ExperimentRow",
    "FilterReport",
    "FilterSpec",
    "FoldPair",
    "HoldoutSplit",
    "Instance",
    "LogisticRegressionModel",
    "NearestNeighborModel",
    "NoiseLedger",
    "RandomForestModel",
    "SplitCandidateTable",
    "UndefinedMetricError",
    "VoteScheme",
    "accuracy",
    "build_split_candidates",
    "class_histogram",
    "dump_model",
    "enn_bd",
    "gini_impurity",
    "hme_bd",
    "holdout_split",
    "hte_bd",
    "inject_uniform_class_noise",
    "k_fold",
    "load_csv",
    "load_libsvm",
    "load_model",
    "log_loss_and_gradient",
    "make_dataset",
    "noise_precision",
    "noise_recall",
    "overlapping_blobs",
    "predict_1nn",
    "predict_forest",
    "render_figures",
    "run_experiment",
    "save_csv",
    "save_libsvm",
    "separable_blobs",
    "train_decision_tree",
    "train_logistic_regression",
    "train_random_forest",
    "vote_decision",
    "write_metadata",
    "write_results_csv",
    "write_results_json",
    "xor_grid",
]
