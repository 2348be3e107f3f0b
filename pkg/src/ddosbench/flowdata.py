"""Flow dataset ingestion: CSV parsing, cleaning, encoding and splitting."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyDatasetError, FlowParseError, InputError, StratificationError

HEADER = ("pkt_size_mean", "pkt_rate", "duration", "protocol", "label")
NUMERIC_FIELDS = ("pkt_size_mean", "pkt_rate", "duration")
PROTOCOLS = ("TCP", "UDP", "ICMP", "OTHER")
FEATURE_COLUMNS = NUMERIC_FIELDS + tuple(f"proto_{p}" for p in PROTOCOLS)

LABEL_NAMES = {0: "benign", 1: "ddos"}
_LABEL_LOOKUP = {"benign": 0, "ddos": 1, "0": 0, "1": 1}

MISSING = math.nan


@dataclass(frozen=True)
class FlowRecord:
    pkt_size_mean: float
    pkt_rate: float
    duration: float
    protocol: str
    label: int

    def numeric(self) -> tuple[float, float, float]:
        return (self.pkt_size_mean, self.pkt_rate, self.duration)


@dataclass(frozen=True)
class Dataset:
    records: tuple[FlowRecord, ...]
    source_name: str = "<memory>"

    def __len__(self) -> int:
        return len(self.records)

    def labels(self) -> np.ndarray:
        return np.array([r.label for r in self.records], dtype=np.int64)


@dataclass(frozen=True)
class CleanStats:
    rows_in: int
    rows_dropped_missing: int
    rows_dropped_range: int
    rows_out: int


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Dense float64 matrix with named columns and optional 0/1 labels.

    The arrays are copied and frozen on construction, so instances can be
    shared freely between threads.
    """

    values: np.ndarray
    column_names: tuple[str, ...]
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim == 1 and values.size == 0:
            values = values.reshape(0, len(self.column_names))
        if values.ndim != 2:
            raise ValueError(f"values must be 2-D, got shape {values.shape}")
        names = tuple(self.column_names)
        if values.shape[1] != len(names):
            raise ValueError(
                f"{values.shape[1]} columns but {len(names)} column names")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate column names: {names}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)
        if self.labels is not None:
            labels = np.array(self.labels, dtype=np.int64, copy=True).reshape(-1)
            if labels.shape[0] != values.shape[0]:
                raise ValueError(
                    f"{labels.shape[0]} labels for {values.shape[0]} rows")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def take(self, rows: Sequence[int]) -> "FeatureMatrix":
        idx = np.asarray(rows, dtype=np.int64)
        labels = None if self.labels is None else self.labels[idx]
        return FeatureMatrix(self.values[idx], self.column_names, labels)

    def select_columns(self, cols: Sequence[int]) -> "FeatureMatrix":
        cols = list(cols)
        return FeatureMatrix(
            self.values[:, cols],
            tuple(self.column_names[c] for c in cols),
            self.labels,
        )

    def with_values(self, values: np.ndarray) -> "FeatureMatrix":
        return FeatureMatrix(values, self.column_names, self.labels)

    def __eq__(self, other):
        if not isinstance(other, FeatureMatrix):
            return NotImplemented
        if self.column_names != other.column_names:
            return False
        if not np.array_equal(self.values, other.values, equal_nan=True):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        return self.labels is None or np.array_equal(self.labels, other.labels)


def _parse_number(text: str) -> float:
    text = text.strip()
    if not text:
        return MISSING
    try:
        return float(text)
    except ValueError:
        return MISSING


def _parse_protocol(text: str) -> str:
    tag = text.strip().upper()
    return tag if tag in PROTOCOLS else "OTHER"


def parse_flow_csv(text: str, source_name: str = "<memory>") -> Dataset:
    """Parse a flow CSV document with the fixed five-column header.

    Numeric cells that do not parse become NaN and are removed later by
    :func:`clean`. Structural problems raise :class:`FlowParseError`.
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise FlowParseError("missing header row", line=1) from None
    if tuple(h.strip() for h in header) != HEADER:
        raise FlowParseError(
            f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}",
            line=1)

    records = []
    for row in reader:
        line = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(HEADER):
            raise FlowParseError(
                f"expected {len(HEADER)} columns, got {len(row)}", line=line)
        label_text = row[4].strip().lower()
        if label_text not in _LABEL_LOOKUP:
            raise FlowParseError(f"unknown label {row[4]!r}", line=line)
        records.append(FlowRecord(
            pkt_size_mean=_parse_number(row[0]),
            pkt_rate=_parse_number(row[1]),
            duration=_parse_number(row[2]),
            protocol=_parse_protocol(row[3]),
            label=_LABEL_LOOKUP[label_text],
        ))
    return Dataset(tuple(records), source_name)


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_flow_csv(path) -> Dataset:
    return parse_flow_csv(read_text(path), source_name=str(path))


def _fmt(x: float) -> str:
    if math.isnan(x):
        return ""
    return repr(float(x))


def to_csv(ds: Dataset) -> str:
    """Serialize back to the flow CSV schema (``\\n`` line endings)."""
    lines = [",".join(HEADER)]
    for r in ds.records:
        lines.append(",".join((
            _fmt(r.pkt_size_mean), _fmt(r.pkt_rate), _fmt(r.duration),
            r.protocol, LABEL_NAMES[r.label],
        )))
    return "\n".join(lines) + "\n"


def clean(ds: Dataset) -> tuple[Dataset, CleanStats]:
    """Drop records with missing/non-finite or negative numeric fields."""
    kept = []
    missing = out_of_range = 0
    for r in ds.records:
        nums = r.numeric()
        if not all(math.isfinite(v) for v in nums):
            missing += 1
        elif any(v < 0 for v in nums):
            out_of_range += 1
        else:
            kept.append(r)
    stats = CleanStats(
        rows_in=len(ds.records),
        rows_dropped_missing=missing,
        rows_dropped_range=out_of_range,
        rows_out=len(kept),
    )
    if not kept:
        raise EmptyDatasetError(
            f"no usable rows in {ds.source_name} after cleaning "
            f"({missing} missing, {out_of_range} out of range)")
    return Dataset(tuple(kept), ds.source_name), stats


def to_matrix(ds: Dataset) -> FeatureMatrix:
    """Numeric features in declared order followed by a one-hot protocol block."""
    n = len(ds.records)
    values = np.zeros((n, len(FEATURE_COLUMNS)), dtype=np.float64)
    proto_offset = len(NUMERIC_FIELDS)
    for i, r in enumerate(ds.records):
        values[i, :proto_offset] = r.numeric()
        values[i, proto_offset + PROTOCOLS.index(r.protocol)] = 1.0
    return FeatureMatrix(values, FEATURE_COLUMNS, ds.labels())


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split(m: FeatureMatrix, train_fraction: float,
                     seed: int) -> tuple[FeatureMatrix, FeatureMatrix]:
    """Seeded per-class shuffle and cut.

    Each class contributes ``round(train_fraction * count)`` rows to the
    training part, clipped so both parts keep at least one row of every
    class. Within each part rows keep their original relative order.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if m.labels is None:
        raise StratificationError("matrix has no labels")
    classes = np.unique(m.labels)
    if len(classes) < 2:
        raise StratificationError(
            f"need both classes to split, found only {classes.tolist()}")
    rng = np.random.default_rng(seed)
    train_idx, test_idx = [], []
    for cls in classes:
        idx = np.flatnonzero(m.labels == cls)
        if len(idx) < 2:
            raise StratificationError(
                f"class {int(cls)} has {len(idx)} row(s); need at least 2")
        perm = rng.permutation(idx)
        cut = min(max(_round_half_up(train_fraction * len(idx)), 1), len(idx) - 1)
        train_idx.append(perm[:cut])
        test_idx.append(perm[cut:])
    train = np.sort(np.concatenate(train_idx))
    test = np.sort(np.concatenate(test_idx))
    return m.take(train), m.take(test)


def matrix_to_csv(m: FeatureMatrix) -> str:
    """Generic ``<features...>,label`` CSV for matrices that have no flow form."""
    header = list(m.column_names) + (["label"] if m.labels is not None else [])
    lines = [",".join(header)]
    for i in range(m.n_rows):
        cells = [repr(float(v)) for v in m.values[i]]
        if m.labels is not None:
            cells.append(str(int(m.labels[i])))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def parse_matrix_csv(text: str) -> FeatureMatrix:
    if text.startswith("\ufeff"):
        text = text[1:]
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise FlowParseError("missing header row", line=1) from None
    if not header or header[-1] != "label" or len(header) < 2:
        raise FlowParseError("matrix CSV must end with a 'label' column", line=1)
    rows, labels = [], []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(header):
            raise FlowParseError(
                f"expected {len(header)} columns, got {len(row)}", line=line)
        try:
            rows.append([float(c) for c in row[:-1]])
            labels.append(_LABEL_LOOKUP[row[-1].strip().lower()])
        except (ValueError, KeyError):
            raise FlowParseError(f"bad value in row {row!r}", line=line) from None
    if not rows:
        raise EmptyDatasetError("matrix CSV has no data rows")
    return FeatureMatrix(np.array(rows), tuple(header[:-1]), np.array(labels))


def load_any_csv(path) -> Dataset | FeatureMatrix:
    """Flow CSV when the header matches the flow schema, else a matrix CSV."""
    text = read_text(path)
    first = text.lstrip("\ufeff").split("\n", 1)[0].strip()
    if tuple(h.strip() for h in first.split(",")) == HEADER:
        return parse_flow_csv(text, source_name=str(path))
    return parse_matrix_csv(text)
