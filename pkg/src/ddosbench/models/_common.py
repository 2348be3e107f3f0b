from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FitError, ShapeError
from ..flowdata import FeatureMatrix


@dataclass(frozen=True, eq=False)
class Prediction:
    """Per-row hard labels and probability of the positive (ddos) class."""

    labels: np.ndarray
    proba: np.ndarray


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss(logit, y):
    """Binary cross-entropy expressed on the logit scale: log(1 + e^z) - y z."""
    logit = np.asarray(logit, dtype=np.float64)
    return np.logaddexp(0.0, logit) - y * logit


def logistic_grad_hess(logit, y):
    """First and second derivative of :func:`logistic_loss` w.r.t. the logit."""
    p = sigmoid(logit)
    return p - y, p * (1.0 - p)


def threshold_labels(proba: np.ndarray) -> np.ndarray:
    return (proba >= 0.5).astype(np.int64)


def training_arrays(train: FeatureMatrix) -> tuple[np.ndarray, np.ndarray]:
    if train.labels is None:
        raise FitError("training matrix has no labels")
    if train.n_rows < 1:
        raise FitError("training matrix has no rows")
    y = train.labels
    if not np.isin(y, (0, 1)).all():
        bad = sorted(set(np.unique(y).tolist()) - {0, 1})
        raise FitError(f"labels must be 0/1, found {bad}")
    return train.values, y


def check_width(rows: FeatureMatrix | np.ndarray, expected: int) -> np.ndarray:
    x = rows.values if isinstance(rows, FeatureMatrix) else np.asarray(rows, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != expected:
        raise ShapeError(f"model expects {expected} features, got shape {x.shape}")
    return x
