"""Confusion matrix and accuracy/precision/recall/F1 for the ddos class."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return asdict(self)


def _binary(v, name):
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError(f"{name} contains non-binary entries")
    return arr.astype(bool)


def confusion(truth, pred) -> ConfusionMatrix:
    t = _binary(truth, "truth")
    p = _binary(pred, "pred")
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape[0]} truth vs {p.shape[0]} pred")
    if t.size == 0:
        raise ValueError("need at least one prediction")
    return ConfusionMatrix(
        tp=int(np.sum(t & p)),
        tn=int(np.sum(~t & ~p)),
        fp=int(np.sum(~t & p)),
        fn=int(np.sum(t & ~p)),
    )


def _ratio(num, den) -> float:
    return num / den if den else 0.0


def report(cm: ConfusionMatrix) -> MetricReport:
    """All four metrics; any 0/0 evaluates to 0.0."""
    if cm.total < 1:
        raise ValueError("empty confusion matrix")
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    recall = _ratio(cm.tp, cm.tp + cm.fn)
    return MetricReport(
        accuracy=_ratio(cm.tp + cm.tn, cm.total),
        precision=precision,
        recall=recall,
        f1=_ratio(2 * precision * recall, precision + recall),
    )
