"""Self-describing JSON dump/load for trained models."""

import json

import numpy as np

from .forest import RandomForestModel
from .logistic import LogisticRegressionModel
from .tree import DecisionTreeModel

MODEL_FORMAT = "noisefilter-model"
MODEL_VERSION = 1


def _tree_to_nested(model: DecisionTreeModel, nid: int = 0) -> dict:
    if model.feature[nid] < 0:
        return {"class": int(model.value[nid])}
    return {
        "feature": int(model.feature[nid]),
        "threshold": float(model.threshold[nid]),
        "left": _tree_to_nested(model, int(model.left[nid])),
        "right": _tree_to_nested(model, int(model.right[nid])),
    }


def _nested_to_tree(root: dict, num_features: int, num_classes: int) -> DecisionTreeModel:
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[int] = []

    def walk(node: dict) -> int:
        nid = len(feature)
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(-1)
        if "class" in node:
            value[nid] = int(node["class"])
        else:
            feature[nid] = int(node["feature"])
            threshold[nid] = float(node["threshold"])
            left[nid] = walk(node["left"])
            right[nid] = walk(node["right"])
        return nid

    walk(root)
    return DecisionTreeModel(
        feature=np.asarray(feature, dtype=np.int32),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        value=np.asarray(value, dtype=np.int32),
        num_features=num_features,
        num_classes=num_classes,
    )


def model_to_dict(model) -> dict:
    doc = {"format": MODEL_FORMAT, "version": MODEL_VERSION}
    if isinstance(model, DecisionTreeModel):
        doc.update(
            kind="decision_tree",
            num_features=model.num_features,
            num_classes=model.num_classes,
            root=_tree_to_nested(model),
        )
    elif isinstance(model, RandomForestModel):
        doc.update(
            kind="random_forest",
            num_features=model.num_features,
            num_classes=model.num_classes,
            feature_subset_size=model.feature_subset_size,
            seed=model.seed,
            trees=[_tree_to_nested(tree) for tree in model.trees],
        )
    elif isinstance(model, LogisticRegressionModel):
        doc.update(
            kind="logistic_regression",
            num_classes=model.num_classes,
            coef=model.coef.tolist(),
            intercept=model.intercept.tolist(),
        )
    else:
        raise TypeError(f"cannot serialize model of type {type(model).__name__}")
    return doc


def model_from_dict(doc: dict):
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError("not a model document")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model document version {doc.get('version')}")
    kind = doc.get("kind")
    if kind == "decision_tree":
        return _nested_to_tree(doc["root"], int(doc["num_features"]), int(doc["num_classes"]))
    if kind == "random_forest":
        trees = tuple(
            _nested_to_tree(root, int(doc["num_features"]), int(doc["num_classes"]))
            for root in doc["trees"]
        )
        return RandomForestModel(
            trees=trees,
            feature_subset_size=int(doc["feature_subset_size"]),
            num_features=int(doc["num_features"]),
            num_classes=int(doc["num_classes"]),
            seed=int(doc["seed"]),
        )
    if kind == "logistic_regression":
        return LogisticRegressionModel(
            coef=np.asarray(doc["coef"], dtype=np.float64),
            intercept=np.asarray(doc["intercept"], dtype=np.float64),
            num_classes=int(doc["num_classes"]),
            loss_history=(),
        )
    raise ValueError(f"unknown model kind {kind!r}")


def dump_model(model, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh)
        fh.write("\n")


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
