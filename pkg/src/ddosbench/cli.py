"""ddosbench command line.

Subcommands::

    ddosbench generate --synth iotmix --rows 5000 --seed 7 --out flows.csv
    ddosbench train    --model gbt --input flows.csv --out gbt.json
    ddosbench evaluate --model-file gbt.json --input test.csv
    ddosbench bench    --synth iotmix --rows 5000 --seed 7 --out runs/iotmix

Failures print one JSON line on stderr and exit with a non-zero code that
identifies the failure kind.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from . import bench, flowdata, metrics, synth
from .config import BenchConfig, load_toml
from .errors import ConfigError, DdosBenchError, StratificationError
from .models import KIND_BY_NAME, MODEL_NAMES, NAME_BY_KIND
from .models import artifact
from .preprocess import fit_minmax, select_features, transform_minmax

log = logging.getLogger("ddosbench")


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("data source")
    g.add_argument("--input", help="flow CSV (or feature-matrix CSV) to read")
    g.add_argument("--synth", choices=sorted(synth.GENERATORS), help="synthetic generator")
    g.add_argument("--rows", type=int, help="synthetic row count")
    g.add_argument("--attack-fraction", type=float, help="synthetic ddos share")
    g.add_argument("--noise", type=float, dest="noise_sigma", help="synthetic noise sigma")


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="TOML config file; flags override its values")
    p.add_argument("--seed", type=int)
    p.add_argument("--train-fraction", type=float)
    p.add_argument("--threshold", type=float, help="feature selection |r| cutoff")
    g = p.add_argument_group("model hyperparameters")
    g.add_argument("--gbt-rounds", type=int)
    g.add_argument("--gbt-depth", type=int)
    g.add_argument("--gbt-lr", type=float)
    g.add_argument("--gbt-lambda", type=float)
    g.add_argument("--gbt-gamma", type=float)
    g.add_argument("--gbt-min-child-weight", type=float)
    g.add_argument("--knn-k", type=int)
    g.add_argument("--sgd-lr", type=float)
    g.add_argument("--sgd-epochs", type=int)
    g.add_argument("--sgd-l2", type=float)


def _set(obj, **changes):
    changes = {k: v for k, v in changes.items() if v is not None}
    return replace(obj, **changes) if changes else obj


def config_from_args(args) -> BenchConfig:
    cfg = load_toml(args.config) if getattr(args, "config", None) else BenchConfig()
    data = cfg.data
    if args.input is not None:
        data = replace(data, input=args.input, synth=None)
    if args.synth is not None:
        data = replace(data, synth=args.synth, input=None)
    data = _set(data, rows=args.rows, attack_fraction=args.attack_fraction,
                noise_sigma=args.noise_sigma)
    try:
        gbt = _set(cfg.gbt, n_rounds=args.gbt_rounds, max_depth=args.gbt_depth,
                   learning_rate=args.gbt_lr, reg_lambda=args.gbt_lambda,
                   gamma=args.gbt_gamma, min_child_weight=args.gbt_min_child_weight)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    sgd = _set(cfg.sgd, learning_rate=args.sgd_lr, epochs=args.sgd_epochs, l2=args.sgd_l2)
    cfg = replace(cfg, data=data, gbt=gbt, sgd=sgd)
    cfg = _set(cfg, seed=args.seed, train_fraction=args.train_fraction,
               threshold=args.threshold, knn_k=args.knn_k,
               out=getattr(args, "out", None))
    return cfg.validate()


def cmd_generate(args) -> int:
    cfg = synth.SynthConfig(args.rows, args.attack_fraction, args.seed, args.noise_sigma)
    result = synth.GENERATORS[args.synth](cfg)
    if isinstance(result, flowdata.Dataset):
        text = flowdata.to_csv(result)
    else:
        text = flowdata.matrix_to_csv(result)
    if args.out:
        artifact.atomic_write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _full_matrix(cfg: BenchConfig):
    matrix, _, _, _ = bench.to_clean_matrix(bench.load_source(cfg))
    return matrix


def cmd_train(args) -> int:
    cfg = config_from_args(args)
    matrix = _full_matrix(cfg)
    if matrix.labels is None or len(set(matrix.labels.tolist())) < 2:
        raise StratificationError("training data must contain both classes")
    mask = select_features(matrix, cfg.threshold)
    selected = mask.apply(matrix)
    scaler = fit_minmax(selected)
    train = transform_minmax(scaler, selected)
    name = NAME_BY_KIND[KIND_BY_NAME.get(args.model, args.model)]
    model = bench.fitters(cfg)[name](train)
    bundle = artifact.ModelBundle(model, mask, scaler, matrix.column_names, cfg.seed)
    artifact.save(args.model_out, bundle)
    print(json.dumps({"model": name, "artifact": args.model_out,
                      "rows": train.n_rows, "kept_features": list(train.column_names)}))
    return 0


def cmd_evaluate(args) -> int:
    bundle = artifact.load(args.model_file)
    cfg = config_from_args(args)
    matrix = _full_matrix(cfg)
    pred = bundle.predict(matrix)
    cm = metrics.confusion(matrix.labels, pred.labels)
    doc = {"model": NAME_BY_KIND[bundle.model.kind], "rows": matrix.n_rows,
           "confusion": cm.to_dict(), "metrics": metrics.report(cm).to_dict()}
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        artifact.atomic_write_text(args.out, text)
    sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    cfg = config_from_args(args)
    report = bench.run_benchmark(cfg, jobs=args.jobs)
    sys.stdout.write(bench.emit_table(report))
    if cfg.out:
        paths = bench.write_outputs(report, cfg.out)
        log.info("wrote %s", ", ".join(str(p) for p in paths.values()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ddosbench", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("generate", parents=[common], help="write a synthetic dataset as CSV")
    p.add_argument("--synth", choices=sorted(synth.GENERATORS), required=True)
    p.add_argument("--rows", type=int, default=1000)
    p.add_argument("--attack-fraction", type=float, default=0.5)
    p.add_argument("--noise", type=float, dest="noise_sigma", default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("train", parents=[common], help="fit one model on all rows and save an artifact")
    p.add_argument("--model", required=True,
                   choices=sorted(KIND_BY_NAME.values()) + list(MODEL_NAMES))
    _add_data_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--out", dest="model_out", required=True, help="artifact path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", parents=[common], help="score a saved artifact on a labelled dataset")
    p.add_argument("--model-file", required=True)
    _add_data_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--out", help="also write the metric report JSON here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", parents=[common], help="compare all four models on one split")
    _add_data_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--out", help="directory for report.txt, heatmap.csv, report.json")
    p.add_argument("--jobs", type=int, default=1, help="fit models concurrently")
    p.set_defaults(func=cmd_bench)
    return parser


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DdosBenchError as exc:
        return _fail(exc.kind, str(exc), exc.exit_code)
    except ValueError as exc:
        return _fail("invalid_argument", str(exc), 2)


if __name__ == "__main__":
    sys.exit(main())
