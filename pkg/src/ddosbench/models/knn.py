"""Brute-force k-nearest-neighbour classifier on Euclidean distance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FitError
from ..flowdata import FeatureMatrix
from ._common import Prediction, check_width, training_arrays

DEFAULT_K = 5
_QUERY_CHUNK = 128


@dataclass(frozen=True, eq=False)
class KnnModel:
    k: int
    points: np.ndarray
    labels: np.ndarray

    kind = "knn"

    @property
    def feature_count(self) -> int:
        return self.points.shape[1]

    def predict(self, rows) -> Prediction:
        """Majority vote of the k nearest training points.

        Distance ties rank the lower training index first. A split vote goes
        to the class whose voters have the smaller summed distance, then to
        class 0.
        """
        q = check_width(rows, self.feature_count)
        labels = np.empty(q.shape[0], dtype=np.int64)
        proba = np.empty(q.shape[0])
        k = self.k
        for start in range(0, q.shape[0], _QUERY_CHUNK):
            block = q[start:start + _QUERY_CHUNK]
            diff = block[:, None, :] - self.points[None, :, :]
            dist = np.sqrt(np.sum(diff * diff, axis=2))
            nearest = np.argsort(dist, axis=1, kind="stable")[:, :k]
            nd = np.take_along_axis(dist, nearest, axis=1)
            nl = self.labels[nearest]
            votes1 = nl.sum(axis=1)
            votes0 = k - votes1
            d1 = np.where(nl == 1, nd, 0.0).sum(axis=1)
            d0 = np.where(nl == 0, nd, 0.0).sum(axis=1)
            out = (votes1 > votes0).astype(np.int64)
            tie = votes1 == votes0
            out[tie] = (d1[tie] < d0[tie]).astype(np.int64)
            labels[start:start + len(block)] = out
            proba[start:start + len(block)] = votes1 / k
        return Prediction(labels, proba)

    def predict_proba(self, rows) -> np.ndarray:
        return self.predict(rows).proba

    def hyperparameters(self) -> dict:
        return {"k": self.k}

    def state(self) -> dict:
        return {"points": self.points.tolist(), "labels": self.labels.tolist()}

    @classmethod
    def from_state(cls, hyper: dict, state: dict) -> "KnnModel":
        points = np.array(state["points"], dtype=np.float64)
        labels = np.array(state["labels"], dtype=np.int64)
        return cls(int(hyper["k"]), points.reshape(len(labels), -1), labels)


def fit_knn(train: FeatureMatrix, k: int = DEFAULT_K) -> KnnModel:
    x, y = training_arrays(train)
    if not 1 <= k <= x.shape[0]:
        raise FitError(f"k must be in [1, {x.shape[0]}], got {k}")
    points = x.copy()
    labels = y.copy()
    points.setflags(write=False)
    labels.setflags(write=False)
    return KnnModel(int(k), points, labels)


def predict_knn(m: KnnModel, rows) -> Prediction:
    return m.predict(rows)
