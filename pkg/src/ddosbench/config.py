"""Benchmark configuration: defaults, TOML loading, flag overrides, digest."""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Optional

from .errors import ConfigError
from .models import DEFAULT_K, GbtParams
from .preprocess import DEFAULT_THRESHOLD
from .synth import GENERATORS

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class DataSource:
    input: Optional[str] = None
    synth: Optional[str] = None
    rows: int = 1000
    attack_fraction: float = 0.5
    noise_sigma: float = 1.0

    def validate(self):
        if (self.input is None) == (self.synth is None):
            raise ConfigError("set exactly one of input path or synth generator")
        if self.synth is not None and self.synth not in GENERATORS:
            raise ConfigError(
                f"unknown synth generator {self.synth!r}; choose from {sorted(GENERATORS)}")


@dataclass(frozen=True)
class SgdSettings:
    learning_rate: float = 0.01
    epochs: int = 20
    l2: float = 1e-4


@dataclass(frozen=True)
class BenchConfig:
    data: DataSource = field(default_factory=DataSource)
    seed: int = 0
    train_fraction: float = 0.8
    threshold: float = DEFAULT_THRESHOLD
    gbt: GbtParams = field(default_factory=GbtParams)
    knn_k: int = DEFAULT_K
    sgd: SgdSettings = field(default_factory=SgdSettings)
    out: Optional[str] = None

    def validate(self) -> "BenchConfig":
        self.data.validate()
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if not 0.0 <= self.threshold < 1.0:
            raise ConfigError(f"threshold must be in [0, 1), got {self.threshold}")
        if self.knn_k < 1:
            raise ConfigError(f"knn k must be >= 1, got {self.knn_k}")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        """Stable hash over every field, output directory included."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


_SECTIONS = {"data": DataSource, "gbt": GbtParams, "sgd": SgdSettings}


def _build(cls, values: dict, where: str):
    known = {f.name for f in fields(cls)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")
    try:
        return cls(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {where}: {exc}") from exc


def from_mapping(doc: dict[str, Any], base: BenchConfig | None = None) -> BenchConfig:
    """Overlay a nested mapping (TOML layout) onto ``base``."""
    base = base or BenchConfig()
    top = {}
    for key, value in doc.items():
        if key in _SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(f"[{key}] must be a table")
            current = asdict(getattr(base, key))
            current.update(value)
            top[key] = _build(_SECTIONS[key], current, f"[{key}]")
        elif key == "knn":
            if not isinstance(value, dict) or set(value) - {"k"}:
                raise ConfigError("[knn] accepts only 'k'")
            if "k" in value:
                top["knn_k"] = int(value["k"])
        else:
            top[key] = value
    known = {f.name for f in fields(BenchConfig)}
    unknown = set(top) - known
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")
    return replace(base, **top)


def load_toml(path) -> BenchConfig:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad TOML in {path}: {exc}") from exc
    return from_mapping(doc)
