"""Second-order gradient-boosted trees for binary logistic loss.

Each round fits one regression tree to the per-row gradient and hessian of
the logistic loss at the current logits, using exact greedy split search:

    gain   = 1/2 [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)] - gamma
    weight = -G / (H + lambda)

The model adds ``learning_rate * tree(x)`` to the logit after every round.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import FitError
from ..flowdata import FeatureMatrix
from ._common import (Prediction, check_width, logistic_grad_hess, sigmoid,
                      threshold_labels, training_arrays)

LEAF = -1


@dataclass(frozen=True)
class GbtParams:
    n_rounds: int = 100
    max_depth: int = 6
    learning_rate: float = 0.3
    reg_lambda: float = 1.0
    gamma: float = 0.0
    min_child_weight: float = 1.0

    def __post_init__(self):
        if self.n_rounds < 0 or self.max_depth < 0:
            raise ValueError("n_rounds and max_depth must be >= 0")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        if self.reg_lambda < 0 or self.gamma < 0 or self.min_child_weight < 0:
            raise ValueError("reg_lambda, gamma and min_child_weight must be >= 0")


@dataclass(frozen=True, eq=False)
class Tree:
    """Flat array tree. Node 0 is the root; leaves have ``feature == -1``.

    Internal nodes send ``x[feature] < threshold`` to ``left``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, x: np.ndarray) -> np.ndarray:
        node = np.zeros(x.shape[0], dtype=np.int64)
        rows = np.arange(x.shape[0])
        while True:
            feat = self.feature[node]
            active = feat != LEAF
            if not active.any():
                return self.value[node]
            a = rows[active]
            n = node[active]
            go_left = x[a, feat[active]] < self.threshold[n]
            node[a] = np.where(go_left, self.left[n], self.right[n])

    def depth(self) -> int:
        def walk(i):
            if self.feature[i] == LEAF:
                return 0
            return 1 + max(walk(self.left[i]), walk(self.right[i]))
        return walk(0)

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(
            np.array(d["feature"], dtype=np.int64),
            np.array(d["threshold"], dtype=np.float64),
            np.array(d["left"], dtype=np.int64),
            np.array(d["right"], dtype=np.int64),
            np.array(d["value"], dtype=np.float64),
        )


@dataclass(frozen=True, eq=False)
class GbtModel:
    trees: tuple[Tree, ...]
    base_logit: float
    params: GbtParams
    feature_count: int

    kind = "gbt"

    def decision_function(self, rows, n_trees: int | None = None) -> np.ndarray:
        x = check_width(rows, self.feature_count)
        trees = self.trees if n_trees is None else self.trees[:n_trees]
        total = np.zeros(x.shape[0])
        for tree in trees:
            total += tree.predict(x)
        return self.base_logit + self.params.learning_rate * total

    def predict_proba(self, rows) -> np.ndarray:
        return sigmoid(self.decision_function(rows))

    def predict(self, rows) -> Prediction:
        p = self.predict_proba(rows)
        return Prediction(threshold_labels(p), p)

    def hyperparameters(self) -> dict:
        return asdict(self.params)

    def state(self) -> dict:
        return {
            "base_logit": self.base_logit,
            "feature_count": self.feature_count,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_state(cls, hyper: dict, state: dict) -> "GbtModel":
        return cls(
            trees=tuple(Tree.from_dict(t) for t in state["trees"]),
            base_logit=float(state["base_logit"]),
            params=GbtParams(**hyper),
            feature_count=int(state["feature_count"]),
        )


@dataclass
class _TreeBuilder:
    x: np.ndarray
    g: np.ndarray
    h: np.ndarray
    params: GbtParams
    feature: list = field(default_factory=list)
    threshold: list = field(default_factory=list)
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)
    value: list = field(default_factory=list)

    def _new_node(self) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(0.0)
        return len(self.feature) - 1

    def _best_split(self, idx: np.ndarray, G: float, H: float):
        p = self.params
        lam = p.reg_lambda
        parent = G * G / (H + lam) if H + lam > 0 else 0.0
        best_gain, best = 0.0, None
        g, h = self.g[idx], self.h[idx]
        for f in range(self.x.shape[1]):
            col = self.x[idx, f]
            order = np.argsort(col, kind="stable")
            xs = col[order]
            # candidate cut after position i iff the value changes there
            cut = np.flatnonzero(xs[:-1] < xs[1:])
            if cut.size == 0:
                continue
            GL = np.cumsum(g[order])[cut]
            HL = np.cumsum(h[order])[cut]
            GR = G - GL
            HR = H - HL
            ok = (HL >= p.min_child_weight) & (HR >= p.min_child_weight)
            if not ok.any():
                continue
            with np.errstate(divide="ignore", invalid="ignore"):
                gain = 0.5 * (GL * GL / (HL + lam) + GR * GR / (HR + lam) - parent) - p.gamma
            gain = np.where(ok & np.isfinite(gain), gain, -np.inf)
            i = int(np.argmax(gain))
            if gain[i] > best_gain:
                lo, hi = xs[cut[i]], xs[cut[i] + 1]
                thr = 0.5 * (lo + hi)
                if not lo < thr:
                    thr = hi
                best_gain, best = float(gain[i]), (f, float(thr))
        return best

    def grow(self, idx: np.ndarray, depth: int) -> int:
        node = self._new_node()
        G = float(self.g[idx].sum())
        H = float(self.h[idx].sum())
        if depth < self.params.max_depth and idx.size >= 2:
            split = self._best_split(idx, G, H)
            if split is not None:
                f, thr = split
                go_left = self.x[idx, f] < thr
                self.feature[node] = f
                self.threshold[node] = thr
                self.left[node] = self.grow(idx[go_left], depth + 1)
                self.right[node] = self.grow(idx[~go_left], depth + 1)
                return node
        denom = H + self.params.reg_lambda
        self.value[node] = -G / denom if denom > 0 else 0.0
        return node

    def build(self) -> Tree:
        self.grow(np.arange(self.x.shape[0]), 0)
        return Tree(
            np.array(self.feature, dtype=np.int64),
            np.array(self.threshold, dtype=np.float64),
            np.array(self.left, dtype=np.int64),
            np.array(self.right, dtype=np.int64),
            np.array(self.value, dtype=np.float64),
        )


def fit_gbt(train: FeatureMatrix, params: GbtParams | None = None) -> GbtModel:
    params = params or GbtParams()
    x, y = training_arrays(train)
    y = y.astype(np.float64)
    base_logit = 0.0
    logits = np.full(x.shape[0], base_logit)
    trees = []
    for _ in range(params.n_rounds):
        g, h = logistic_grad_hess(logits, y)
        tree = _TreeBuilder(x, g, h, params).build()
        trees.append(tree)
        logits = logits + params.learning_rate * tree.predict(x)
    if not np.isfinite(logits).all():
        raise FitError("boosting diverged to non-finite logits")
    return GbtModel(tuple(trees), base_logit, params, x.shape[1])


def predict_gbt(m: GbtModel, rows) -> Prediction:
    return m.predict(rows)
