"""Label-correlation feature selection and min-max scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .flowdata import FeatureMatrix

DEFAULT_THRESHOLD = 0.05


@dataclass(frozen=True)
class FeatureMask:
    kept: tuple[int, ...]
    scores: tuple[float, ...]

    def apply(self, m: FeatureMatrix) -> FeatureMatrix:
        if m.n_cols != len(self.scores):
            raise ShapeError(
                f"mask built for {len(self.scores)} columns, matrix has {m.n_cols}")
        return m.select_columns(self.kept)

    def to_dict(self) -> dict:
        return {"kept": list(self.kept), "scores": list(self.scores)}

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureMask":
        return cls(tuple(int(i) for i in d["kept"]),
                   tuple(float(s) for s in d["scores"]))


@dataclass(frozen=True)
class ScalerParams:
    min: tuple[float, ...]
    max: tuple[float, ...]

    def to_dict(self) -> dict:
        return {"min": list(self.min), "max": list(self.max)}

    @classmethod
    def from_dict(cls, d: dict) -> "ScalerParams":
        return cls(tuple(float(v) for v in d["min"]),
                   tuple(float(v) for v in d["max"]))


def label_correlations(m: FeatureMatrix) -> np.ndarray:
    """|Pearson r| of every column against the 0/1 labels (point-biserial).

    Zero-variance columns (or a constant label) score 0.
    """
    x = m.values
    y = m.labels.astype(np.float64)
    xc = x - x.mean(axis=0)
    yc = y - y.mean()
    sxx = np.einsum("ij,ij->j", xc, xc)
    syy = float(yc @ yc)
    sxy = xc.T @ yc
    denom = np.sqrt(sxx * syy)
    # exact-constant columns can leave rounding residue in xc; pin them to 0
    constant = np.ptp(x, axis=0) == 0 if x.shape[0] else np.ones(x.shape[1], bool)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where((denom > 0) & ~constant, sxy / denom, 0.0)
    return np.clip(np.abs(r), 0.0, 1.0)


def select_features(m: FeatureMatrix, threshold: float = DEFAULT_THRESHOLD) -> FeatureMask:
    if not 0.0 <= threshold < 1.0:
        raise ValueError(f"threshold must be in [0, 1), got {threshold}")
    if m.labels is None:
        raise ValueError("feature selection needs labels")
    if m.n_rows < 2:
        raise ValueError("feature selection needs at least 2 rows")
    scores = label_correlations(m)
    kept = np.flatnonzero(scores >= threshold)
    if kept.size == 0:
        # argmax returns the lowest index on ties
        kept = np.array([int(np.argmax(scores))])
    return FeatureMask(tuple(int(i) for i in kept),
                       tuple(float(s) for s in scores))


def fit_minmax(train: FeatureMatrix) -> ScalerParams:
    if train.n_rows < 1:
        raise ValueError("cannot fit a scaler on zero rows")
    lo = train.values.min(axis=0)
    hi = train.values.max(axis=0)
    return ScalerParams(tuple(float(v) for v in lo), tuple(float(v) for v in hi))


def transform_minmax(p: ScalerParams, m: FeatureMatrix) -> FeatureMatrix:
    """Map each column through (x - min) / (max - min).

    Constant training columns map to 0.0. Test values outside the training
    range are not clamped.
    """
    if m.n_cols != len(p.min):
        raise ShapeError(f"scaler fitted on {len(p.min)} columns, got {m.n_cols}")
    lo = np.array(p.min)
    span = np.array(p.max) - lo
    safe = np.where(span > 0, span, 1.0)
    with np.errstate(over="ignore"):
        out = np.where(span > 0, (m.values - lo) / safe, 0.0)
    return m.with_values(out)
