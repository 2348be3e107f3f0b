"""Full comparison run of the four classifiers and its report formats."""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import flowdata, metrics, synth
from .config import BenchConfig
from .flowdata import CleanStats, Dataset, FeatureMatrix
from .metrics import ConfusionMatrix, MetricReport
from .models import MODEL_NAMES, SgdConfig, fit_gbt, fit_gnb, fit_knn, fit_sgd
from .models.artifact import atomic_write_text
from .preprocess import FeatureMask, ScalerParams, fit_minmax, select_features, transform_minmax

log = logging.getLogger(__name__)

METRIC_KEYS = ("accuracy", "precision", "recall", "f1")
TABLE_HEADERS = ("Model", "Accuracy", "Precision", "Recall", "F1 Score")


@dataclass(frozen=True)
class ModelResult:
    name: str
    confusion: ConfusionMatrix
    metrics: MetricReport
    fit_seconds: float
    predict_seconds: float


@dataclass(frozen=True)
class BenchReport:
    results: tuple[ModelResult, ...]
    seed: int
    config_digest: str
    source: str
    rows_in: int
    rows_clean: int
    rows_train: int
    rows_test: int
    kept_features: tuple[str, ...]

    def result(self, name: str) -> ModelResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "config_digest": self.config_digest,
            "source": self.source,
            "rows": {"input": self.rows_in, "clean": self.rows_clean,
                     "train": self.rows_train, "test": self.rows_test},
            "kept_features": list(self.kept_features),
            "models": [
                {"name": r.name, "confusion": r.confusion.to_dict(),
                 "metrics": r.metrics.to_dict(),
                 "fit_seconds": r.fit_seconds, "predict_seconds": r.predict_seconds}
                for r in self.results
            ],
        }


@dataclass(frozen=True, eq=False)
class Prepared:
    """Split, selected and scaled data ready for model fitting."""

    train: FeatureMatrix
    test: FeatureMatrix
    mask: FeatureMask
    scaler: ScalerParams
    input_columns: tuple[str, ...]
    rows_in: int
    rows_clean: int
    source: str
    clean_stats: Optional[CleanStats] = None


def load_source(cfg: BenchConfig) -> Dataset | FeatureMatrix:
    data = cfg.data
    if data.input is not None:
        return flowdata.load_any_csv(data.input)
    scfg = synth.SynthConfig(data.rows, data.attack_fraction, cfg.seed, data.noise_sigma)
    return synth.GENERATORS[data.synth](scfg)


def to_clean_matrix(source: Dataset | FeatureMatrix):
    """Clean and encode a flow dataset; matrices pass through unchanged."""
    if isinstance(source, FeatureMatrix):
        return source, source.n_rows, None, "matrix"
    cleaned, stats = flowdata.clean(source)
    if stats.rows_dropped_missing or stats.rows_dropped_range:
        log.info("dropped %d incomplete and %d out-of-range rows",
                 stats.rows_dropped_missing, stats.rows_dropped_range)
    return flowdata.to_matrix(cleaned), stats.rows_in, stats, source.source_name


def prepare(cfg: BenchConfig) -> Prepared:
    matrix, rows_in, stats, _ = to_clean_matrix(load_source(cfg))
    train, test = flowdata.stratified_split(matrix, cfg.train_fraction, cfg.seed)
    mask = select_features(train, cfg.threshold)
    train, test = mask.apply(train), mask.apply(test)
    scaler = fit_minmax(train)
    return Prepared(
        train=transform_minmax(scaler, train),
        test=transform_minmax(scaler, test),
        mask=mask,
        scaler=scaler,
        input_columns=matrix.column_names,
        rows_in=rows_in,
        rows_clean=matrix.n_rows,
        source=cfg.data.input or f"synth:{cfg.data.synth}",
        clean_stats=stats,
    )


def fitters(cfg: BenchConfig) -> dict:
    sgd_cfg = SgdConfig(cfg.sgd.learning_rate, cfg.sgd.epochs, cfg.sgd.l2, cfg.seed)
    return {
        "GBT": lambda m: fit_gbt(m, cfg.gbt),
        "KNN": lambda m: fit_knn(m, cfg.knn_k),
        "SGD-Linear": lambda m: fit_sgd(m, sgd_cfg),
        "GaussianNB": fit_gnb,
    }


def _evaluate(name, fit, prep: Prepared) -> ModelResult:
    t0 = time.perf_counter()
    model = fit(prep.train)
    t1 = time.perf_counter()
    pred = model.predict(prep.test)
    t2 = time.perf_counter()
    cm = metrics.confusion(prep.test.labels, pred.labels)
    log.info("%s fitted in %.3fs", name, t1 - t0)
    return ModelResult(name, cm, metrics.report(cm), t1 - t0, t2 - t1)


def run_benchmark(cfg: BenchConfig, jobs: int = 1) -> BenchReport:
    """Load/generate, clean, split, select, scale, fit all four, evaluate on test."""
    cfg.validate()
    prep = prepare(cfg)
    fits = fitters(cfg)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_evaluate, n, fits[n], prep) for n in MODEL_NAMES]
            results = tuple(f.result() for f in futures)
    else:
        results = tuple(_evaluate(n, fits[n], prep) for n in MODEL_NAMES)
    return BenchReport(
        results=results,
        seed=cfg.seed,
        config_digest=cfg.digest(),
        source=prep.source,
        rows_in=prep.rows_in,
        rows_clean=prep.rows_clean,
        rows_train=prep.train.n_rows,
        rows_test=prep.test.n_rows,
        kept_features=tuple(prep.train.column_names),
    )


def _pct(v: float) -> str:
    return f"{v * 100:.2f}%"


def emit_table(r: BenchReport) -> str:
    """Percentages with two decimals, rows in fixed model order."""
    width = max(len(n) for n in MODEL_NAMES + (TABLE_HEADERS[0],))
    lines = [" | ".join((TABLE_HEADERS[0].ljust(width),) + TABLE_HEADERS[1:])]
    lines.append("-" * len(lines[0]))
    for name in MODEL_NAMES:
        m = r.result(name).metrics
        cells = [_pct(getattr(m, k)) for k in METRIC_KEYS]
        lines.append(" | ".join([name.ljust(width)] + cells))
    return "\n".join(lines) + "\n"


def emit_heatmap_csv(r: BenchReport) -> str:
    lines = ["model,metric,value"]
    for name in MODEL_NAMES:
        m = r.result(name).metrics
        for key in METRIC_KEYS:
            lines.append(f"{name},{key},{getattr(m, key):.6f}")
    return "\n".join(lines) + "\n"


def emit_report_text(r: BenchReport) -> str:
    """Table plus run metadata. Timings are left out so reruns are byte-identical."""
    meta = [
        f"source: {r.source}",
        f"seed: {r.seed}",
        f"config digest: {r.config_digest}",
        f"rows: input={r.rows_in} clean={r.rows_clean} train={r.rows_train} test={r.rows_test}",
        f"kept features: {', '.join(r.kept_features)}",
    ]
    return emit_table(r) + "\n" + "\n".join(meta) + "\n"


def write_outputs(r: BenchReport, out_dir) -> dict[str, Path]:
    out = Path(out_dir)
    paths = {
        "report.txt": out / "report.txt",
        "heatmap.csv": out / "heatmap.csv",
        "report.json": out / "report.json",
    }
    atomic_write_text(paths["report.txt"], emit_report_text(r))
    atomic_write_text(paths["heatmap.csv"], emit_heatmap_csv(r))
    atomic_write_text(paths["report.json"], json.dumps(r.to_dict(), indent=2) + "\n")
    return paths
