"""Command-line interface.

Subcommands: ``generate`` (datasets to CSV), ``fit`` (one dataset, one model,
JSON out), ``experiment`` (full sweep from a config file), ``report``
(aggregate records into summary/box-plot files). Exit codes: 0 success,
1 configuration error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .boosted_qsvm import (
    GridSpec,
    ensemble_to_json,
    fit_boosted,
    grid_search_best,
    initial_weights,
    predict_ensemble_batch,
)
from .datasets import GENERATORS, SplitDataset, dataset_from_csv, dataset_to_csv, split_and_scale
from .experiment import (
    MODEL_BASELINE,
    MODEL_BOOSTED,
    MODEL_SINGLE,
    aggregate,
    classical_svm_baseline,
    emit_report,
    load_config,
    read_records_csv,
    run_experiment,
)
from .kernels import GramCache
from .svm_solver import predict, svm_to_json


def _cmd_generate(args) -> int:
    kwargs = {}
    if args.family == "xor":
        kwargs["margin"] = args.margin
    else:
        if args.noise_std is not None:
            kwargs["noise_std"] = args.noise_std
        if args.family == "circles":
            kwargs["factor"] = args.factor
    data = GENERATORS[args.family](args.n, seed=args.seed, **kwargs)
    if args.split:
        sizes = tuple(int(s) for s in args.sizes.split(","))
        if len(sizes) != 3:
            raise ValueError(f"--sizes needs three comma-separated counts, got {args.sizes!r}")
        data = split_and_scale(data, sizes, seed=args.split_seed)
    dataset_to_csv(args.out, data)
    print(f"wrote {args.out}")
    return 0


def _fit_one(split: SplitDataset, model_id: str, max_rounds: int) -> dict:
    cache = GramCache()
    X_train, y_train = split.train.X, split.train.y
    X_val, y_val = split.val.X, split.val.y
    X_test, y_test = split.test.X, split.test.y
    if model_id == MODEL_BOOSTED:
        ensemble = fit_boosted(X_train, y_train, X_val, y_val, max_rounds=max_rounds, cache=cache)
        _, labels = predict_ensemble_batch(ensemble, X_test, X_train, cache)
        out = ensemble_to_json(ensemble)
        out["test_accuracy"] = float((labels == y_test).mean())
        return out
    if model_id == MODEL_SINGLE:
        result = grid_search_best(
            X_train, y_train, initial_weights(len(y_train)), X_val, y_val,
            grid=GridSpec(), cache=cache,
        )
        k_test = cache.fidelity(result.feature_map, X_test, X_train)
        return {
            "feature_map": result.feature_map.canonical(),
            "alpha": result.grid_point[1],
            "C": result.grid_point[2],
            "val_accuracy": result.val_accuracy,
            "test_accuracy": float((predict(result.model, k_test.values) == y_test).mean()),
            "svm": svm_to_json(result.model),
        }
    if model_id == MODEL_BASELINE:
        base = classical_svm_baseline(split, cache=cache)
        return {
            "kernel": base.kernel,
            "gamma": base.gamma,
            "C": base.C,
            "val_accuracy": base.val_accuracy,
            "test_accuracy": base.test_accuracy,
            "svm": svm_to_json(base.model),
        }
    raise ValueError(f"unknown model {model_id!r}")


def _cmd_fit(args) -> int:
    data = dataset_from_csv(args.data)
    if not isinstance(data, SplitDataset):
        raise ValueError("fit needs a split dataset CSV (generate with --split)")
    result = _fit_one(data, args.model, args.max_rounds)
    with open(args.out, "w") as fh:
        json.dump(result, fh, indent=1, sort_keys=True)
    print(f"wrote {args.out} (test accuracy {result['test_accuracy']:.3f})")
    return 0


def _cmd_experiment(args) -> int:
    config = load_config(args.config)
    if args.output_dir is not None:
        config = replace(config, output_dir=args.output_dir)
    records = run_experiment(config, verbose=not args.quiet)
    stats = aggregate(records)
    paths = emit_report(stats, records, config.output_dir)
    print(f"wrote {paths['records']}, {paths['summary']}, {paths['boxplot']}")
    return 0


def _cmd_report(args) -> int:
    records = read_records_csv(args.records)
    stats = aggregate(records)
    paths = emit_report(stats, records, args.out)
    print(f"wrote {paths['summary']} and {paths['boxplot']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsvm-boost", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a dataset CSV")
    p.add_argument("--family", choices=sorted(GENERATORS), required=True)
    p.add_argument("--n", type=int, default=150)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--margin", type=float, default=0.0, help="xor exclusion band")
    p.add_argument("--noise-std", dest="noise_std", type=float, default=None)
    p.add_argument("--factor", type=float, default=0.5, help="circles inner radius")
    p.add_argument("--split", action="store_true", help="split 50/50/50 and scale to [0, pi]")
    p.add_argument("--sizes", default="50,50,50")
    p.add_argument("--split-seed", dest="split_seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("fit", help="fit one model on one split dataset")
    p.add_argument("--data", required=True, help="split dataset CSV")
    p.add_argument("--model", choices=[MODEL_BOOSTED, MODEL_SINGLE, MODEL_BASELINE], required=True)
    p.add_argument("--max-rounds", dest="max_rounds", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("experiment", help="run a full sweep from a config file")
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--output-dir", dest="output_dir", default=None)
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("report", help="aggregate a records CSV into summary files")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
