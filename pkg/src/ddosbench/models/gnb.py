"""Gaussian naive Bayes with log-space posteriors and variance smoothing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FitError
from ..flowdata import FeatureMatrix
from ._common import Prediction, check_width, sigmoid, training_arrays

SMOOTHING_FACTOR = 1e-9


@dataclass(frozen=True, eq=False)
class GnbModel:
    priors: np.ndarray      # (2,)
    means: np.ndarray       # (2, n_features)
    variances: np.ndarray   # (2, n_features), smoothing already added
    var_smoothing: float

    kind = "gnb"

    @property
    def feature_count(self) -> int:
        return self.means.shape[1]

    def joint_log_likelihood(self, rows) -> np.ndarray:
        """log P(C_k) + sum_f log N(x_f; mean_kf, var_kf), shape (n, 2)."""
        x = check_width(rows, self.feature_count)
        out = np.empty((x.shape[0], 2))
        for k in range(2):
            var = self.variances[k]
            log_norm = -0.5 * np.sum(np.log(2.0 * np.pi * var))
            sq = (x - self.means[k]) ** 2 / var
            out[:, k] = np.log(self.priors[k]) + log_norm - 0.5 * sq.sum(axis=1)
        return out

    @staticmethod
    def _normalize(jll: np.ndarray) -> np.ndarray:
        # with two classes, dividing by the evidence P(x) reduces to a
        # sigmoid of the log-likelihood ratio
        diff = jll[:, 1] - jll[:, 0]
        return np.column_stack([sigmoid(-diff), sigmoid(diff)])

    def posterior(self, rows) -> np.ndarray:
        return self._normalize(self.joint_log_likelihood(rows))

    def predict(self, rows) -> Prediction:
        jll = self.joint_log_likelihood(rows)
        labels = (jll[:, 1] > jll[:, 0]).astype(np.int64)
        return Prediction(labels, self._normalize(jll)[:, 1])

    def predict_proba(self, rows) -> np.ndarray:
        return self.posterior(rows)[:, 1]

    def hyperparameters(self) -> dict:
        return {"smoothing_factor": SMOOTHING_FACTOR}

    def state(self) -> dict:
        return {
            "priors": self.priors.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "var_smoothing": self.var_smoothing,
        }

    @classmethod
    def from_state(cls, hyper: dict, state: dict) -> "GnbModel":
        return cls(
            np.array(state["priors"], dtype=np.float64),
            np.array(state["means"], dtype=np.float64),
            np.array(state["variances"], dtype=np.float64),
            float(state["var_smoothing"]),
        )


def fit_gnb(train: FeatureMatrix) -> GnbModel:
    x, y = training_arrays(train)
    counts = np.array([(y == 0).sum(), (y == 1).sum()])
    if (counts == 0).any():
        missing = [k for k in (0, 1) if counts[k] == 0]
        raise FitError(f"class(es) {missing} absent from training data")
    max_var = float(x.var(axis=0).max()) if x.shape[1] else 0.0
    floor = SMOOTHING_FACTOR * max_var if max_var > 0 else SMOOTHING_FACTOR
    priors = counts / counts.sum()
    means = np.stack([x[y == k].mean(axis=0) for k in (0, 1)])
    variances = np.stack([x[y == k].var(axis=0) for k in (0, 1)]) + floor
    return GnbModel(priors, means, variances, floor)


def predict_gnb(m: GnbModel, rows) -> Prediction:
    return m.predict(rows)
