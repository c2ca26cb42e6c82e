"""One-vs-rest logistic regression trained by full-batch gradient descent."""

import math
from dataclasses import dataclass

import numpy as np

from ..data import Dataset


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_loss_and_gradient(weights: np.ndarray, intercept: float, X: np.ndarray, y01: np.ndarray, l2: float = 0.0):
    """Mean binary log-loss with an L2 weight penalty, and its gradient.

    Returns (loss, grad_weights, grad_intercept) for labels y01 in {0, 1}.
    The intercept is not penalized.
    """
    weights = np.asarray(weights, dtype=np.float64)
    y01 = np.asarray(y01, dtype=np.float64)
    scores = X @ weights + intercept
    n = X.shape[0]
    loss = float(np.mean(np.logaddexp(0.0, scores) - y01 * scores) + 0.5 * l2 * (weights @ weights))
    residual = (_sigmoid(scores) - y01) / n
    return loss, X.T @ residual + l2 * weights, float(residual.sum())


@dataclass(frozen=True, eq=False)
class LogisticRegressionModel:
    """Linear classifier; one weight row for binary, one per class otherwise.

    `loss_history` holds the training loss at the start of each descent
    iteration, summed over the one-vs-rest subproblems.
    """

    coef: np.ndarray
    intercept: np.ndarray
    num_classes: int
    loss_history: tuple

    @property
    def num_features(self) -> int:
        return int(self.coef.shape[1])

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.num_features:
            raise ValueError(f"expected {self.num_features} features per row")
        return X @ self.coef.T + self.intercept

    def predict(self, X: np.ndarray) -> np.ndarray:
        scores = self.decision_scores(X)
        if self.coef.shape[0] == 1:
            return (scores[:, 0] > 0).astype(np.int64)
        return scores.argmax(axis=1).astype(np.int64)


def train_logistic_regression(
    train: Dataset,
    iterations: int = 100,
    step: float = 1.0,
    l2: float = 0.0,
) -> LogisticRegressionModel:
    """Minimize the binary log-loss by full-batch gradient descent.

    The step size decays as step / sqrt(t). Features are standardized to
    zero mean and unit variance internally and the learned weights are
    folded back to the original feature scale. More than two classes train
    one-vs-rest with the prediction taken as the best score (ties to the
    lowest class index). Deterministic: descent starts from zero weights.
    """
    if train.n == 0:
        raise ValueError("cannot train logistic regression on an empty dataset")
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    if step <= 0:
        raise ValueError("step must be positive")
    X = train.features
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale = np.where(scale == 0, 1.0, scale)
    Z = (X - mean) / scale

    K = train.num_classes
    targets = [train.labels == 1] if K == 2 else [train.labels == k for k in range(K)]

    coef_rows = []
    intercepts = []
    history = np.zeros(iterations)
    for y01 in targets:
        y01 = y01.astype(np.float64)
        w = np.zeros(Z.shape[1])
        b = 0.0
        for t in range(1, iterations + 1):
            loss, grad_w, grad_b = log_loss_and_gradient(w, b, Z, y01, l2)
            history[t - 1] += loss
            lr = step / math.sqrt(t)
            w = w - lr * grad_w
            b = b - lr * grad_b
        coef_rows.append(w / scale)
        intercepts.append(b - float((w * mean / scale).sum()))

    return LogisticRegressionModel(
        coef=np.asarray(coef_rows),
        intercept=np.asarray(intercepts),
        num_classes=K,
        loss_history=tuple(float(v) for v in history),
    )
