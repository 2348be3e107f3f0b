"""Logistic regression trained by plain per-sample stochastic gradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..flowdata import FeatureMatrix
from ._common import Prediction, check_width, logistic_loss, sigmoid, threshold_labels, training_arrays


@dataclass(frozen=True)
class SgdConfig:
    learning_rate: float = 0.01
    epochs: int = 20
    l2: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 0 or self.l2 < 0:
            raise ValueError("epochs and l2 must be >= 0")


@dataclass(frozen=True, eq=False)
class SgdLinearModel:
    weights: np.ndarray
    bias: float
    learning_rate: float
    epochs: int
    l2: float
    seed: int = 0

    kind = "sgd"

    @property
    def feature_count(self) -> int:
        return self.weights.shape[0]

    def predict_proba(self, rows) -> np.ndarray:
        x = check_width(rows, self.feature_count)
        return sigmoid(x @ self.weights + self.bias)

    def predict(self, rows) -> Prediction:
        p = self.predict_proba(rows)
        return Prediction(threshold_labels(p), p)

    def hyperparameters(self) -> dict:
        return {"learning_rate": self.learning_rate, "epochs": self.epochs,
                "l2": self.l2, "seed": self.seed}

    def state(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias}

    @classmethod
    def from_state(cls, hyper: dict, state: dict) -> "SgdLinearModel":
        return cls(np.array(state["weights"], dtype=np.float64), float(state["bias"]),
                   float(hyper["learning_rate"]), int(hyper["epochs"]),
                   float(hyper["l2"]), int(hyper.get("seed", 0)))


def sample_objective(theta, bias, x, y, l2):
    """Per-sample objective J = logistic loss + (l2/2)|theta|^2 and its gradient.

    Returns ``(J, dJ/dtheta, dJ/dbias)``.
    """
    z = float(np.dot(theta, x) + bias)
    err = float(sigmoid(np.array([z]))[0]) - y
    loss = float(logistic_loss(z, y)) + 0.5 * l2 * float(np.dot(theta, theta))
    return loss, err * np.asarray(x) + l2 * np.asarray(theta), err


def fit_sgd(train: FeatureMatrix, cfg: SgdConfig | None = None) -> SgdLinearModel:
    cfg = cfg or SgdConfig()
    x, y = training_arrays(train)
    y = y.astype(np.float64)
    rng = np.random.default_rng(cfg.seed)
    theta = np.zeros(x.shape[1])
    bias = 0.0
    eta, l2 = cfg.learning_rate, cfg.l2
    for _ in range(cfg.epochs):
        for i in rng.permutation(x.shape[0]):
            xi = x[i]
            z = float(theta @ xi) + bias
            # numerically stable sigmoid for a scalar
            p = 1.0 / (1.0 + np.exp(-z)) if z >= 0 else np.exp(z) / (1.0 + np.exp(z))
            err = p - y[i]
            theta = theta - eta * (err * xi + l2 * theta)
            bias = bias - eta * err
    theta.setflags(write=False)
    return SgdLinearModel(theta, float(bias), eta, cfg.epochs, l2, cfg.seed)


def predict_sgd(m: SgdLinearModel, rows) -> Prediction:
    return m.predict(rows)
