"""From-scratch base learners: binned gini trees, bagged forests, logistic
regression, and exact brute-force nearest neighbor."""

from .forest import RandomForestModel, predict_forest, train_random_forest
from .io import dump_model, load_model, model_from_dict, model_to_dict
from .knn import NearestNeighborModel, predict_1nn
from .logistic import LogisticRegressionModel, log_loss_and_gradient, train_logistic_regression
from .tree import (
    DecisionTreeModel,
    SplitCandidateTable,
    build_split_candidates,
    gini_impurity,
    train_decision_tree,
)

__all__ = [
    "DecisionTreeModel",
    "LogisticRegressionModel",
    "NearestNeighborModel",
    "RandomForestModel",
    "SplitCandidateTable",
    "build_split_candidates",
    "dump_model",
    "gini_impurity",
    "load_model",
    "log_loss_and_gradient",
    "model_from_dict",
    "model_to_dict",
    "predict_1nn",
    "predict_forest",
    "train_decision_tree",
    "train_logistic_regression",
    "train_random_forest",
]
