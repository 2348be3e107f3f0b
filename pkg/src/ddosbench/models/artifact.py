"""Self-describing JSON model artifacts.

An artifact bundles a fitted classifier with the feature mask and scaler it
was trained behind, so raw (unscaled, unselected) matrices can be scored
directly after loading. Floats are written with ``repr`` precision, which
makes save/load lossless.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..errors import ArtifactError, ShapeError
from ..flowdata import FeatureMatrix
from ..preprocess import FeatureMask, ScalerParams, transform_minmax
from ._common import Prediction
from .gbt import GbtModel
from .gnb import GnbModel
from .knn import KnnModel
from .sgd import SgdLinearModel

FORMAT = "ddosbench.model"
VERSION = 1

MODEL_TYPES = {cls.kind: cls for cls in (GbtModel, KnnModel, SgdLinearModel, GnbModel)}


@dataclass(frozen=True, eq=False)
class ModelBundle:
    model: object
    mask: FeatureMask
    scaler: ScalerParams
    input_columns: tuple[str, ...]
    seed: int

    def prepare(self, raw: FeatureMatrix) -> FeatureMatrix:
        if tuple(raw.column_names) != self.input_columns:
            raise ShapeError(
                f"artifact expects columns {list(self.input_columns)}, "
                f"got {list(raw.column_names)}")
        return transform_minmax(self.scaler, self.mask.apply(raw))

    def predict(self, raw: FeatureMatrix) -> Prediction:
        return self.model.predict(self.prepare(raw))

    def to_document(self) -> dict:
        return {
            "format": FORMAT,
            "version": VERSION,
            "kind": self.model.kind,
            "seed": self.seed,
            "input_columns": list(self.input_columns),
            "feature_mask": self.mask.to_dict(),
            "scaler": self.scaler.to_dict(),
            "hyperparameters": self.model.hyperparameters(),
            "state": self.model.state(),
        }

    @classmethod
    def from_document(cls, doc: dict) -> "ModelBundle":
        if doc.get("format") != FORMAT:
            raise ArtifactError(f"not a model artifact (format={doc.get('format')!r})")
        if doc.get("version") != VERSION:
            raise ArtifactError(f"unsupported artifact version {doc.get('version')!r}")
        kind = doc.get("kind")
        if kind not in MODEL_TYPES:
            raise ArtifactError(f"unknown model kind {kind!r}")
        try:
            model = MODEL_TYPES[kind].from_state(doc["hyperparameters"], doc["state"])
            return cls(
                model=model,
                mask=FeatureMask.from_dict(doc["feature_mask"]),
                scaler=ScalerParams.from_dict(doc["scaler"]),
                input_columns=tuple(doc["input_columns"]),
                seed=int(doc["seed"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ArtifactError(f"malformed {kind} artifact: {exc}") from exc


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(bundle: ModelBundle) -> str:
    return json.dumps(bundle.to_document(), indent=1, allow_nan=False) + "\n"


def loads(text: str) -> ModelBundle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"artifact is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ArtifactError("artifact root must be an object")
    return ModelBundle.from_document(doc)


def save(path, bundle: ModelBundle) -> None:
    atomic_write_text(path, dumps(bundle))


def load(path) -> ModelBundle:
    from ..flowdata import read_text
    return loads(read_text(path))
