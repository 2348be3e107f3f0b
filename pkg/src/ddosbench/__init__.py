"""DDoS flow classification: data pipeline, four from-scratch classifiers,
metrics and a seeded comparison benchmark."""

from .bench import BenchReport, emit_heatmap_csv, emit_table, run_benchmark
from .config import BenchConfig, DataSource
from .flowdata import (CleanStats, Dataset, FeatureMatrix, FlowRecord, clean,
                       parse_flow_csv, stratified_split, to_matrix)
from .metrics import ConfusionMatrix, MetricReport, confusion, report
from .preprocess import (FeatureMask, ScalerParams, fit_minmax, select_features,
                         transform_minmax)
from .synth import SynthConfig, gen_blobs, gen_iot_mix, gen_xor

__version__ = "0.1.0"
