"""Command-line front end.

Subcommands: simulate, detect, train, evaluate, report. Every command is
deterministic given its config and seed. Exit codes: 0 ok, 2 usage or
config error, 3 data error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from bsmguard import __version__
from bsmguard.bsm import DataError, aggregate, read_bsm_csv, write_bsm_csv
from bsmguard.config import (
    ConfigError,
    DetectorSettings,
    detector_settings_from_mapping,
    load_flat_config,
    parse_windows,
)
from bsmguard.detectors import DETECTOR_NAMES, make_detector
from bsmguard.evaluate import roc_points, time_inference, write_roc_csv
from bsmguard.ml import MODEL_FAMILIES
from bsmguard.model_io import load_model, save_model
from bsmguard.pipeline import (
    SCORE_ORIENTATION,
    detect_records,
    detector_report,
    evaluate_model,
    read_decisions_csv,
    train_and_evaluate,
    write_decisions_csv,
)
from bsmguard.simulate import scenario_from_mapping

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def _load_records(path: str, vehicle: str | None):
    """Materialize a single-vehicle record list from a CSV."""
    records = list(read_bsm_csv(path))
    vehicles = {r.vehicle_id for r in records}
    if vehicle is not None:
        records = [r for r in records if r.vehicle_id == vehicle]
        if not records:
            raise DataError(f"{path}: no records for vehicle {vehicle!r}")
    elif len(vehicles) > 1:
        raise DataError(
            f"{path}: {len(vehicles)} vehicles present; pick one with --vehicle"
        )
    if not records:
        raise DataError(f"{path}: no records")
    return records


def cmd_simulate(args) -> int:
    cfg = load_flat_config(args.config)
    if args.seed is not None:
        cfg["seed"] = str(args.seed)
    scenario = scenario_from_mapping(cfg)
    n = write_bsm_csv(args.out, scenario.run())
    print(f"wrote {n} records to {args.out}")
    return EXIT_OK


def _detector_settings(args) -> DetectorSettings:
    if getattr(args, "config", None):
        return detector_settings_from_mapping(load_flat_config(args.config))
    return DetectorSettings()


def _check_single_vehicle(path: str, vehicle: str | None) -> None:
    """One cheap streaming pass to catch multi-vehicle input early."""
    seen: set[str] = set()
    for r in read_bsm_csv(path):
        seen.add(r.vehicle_id)
        if vehicle is None and len(seen) > 1:
            raise DataError(
                f"{path}: multiple vehicles present; pick one with --vehicle"
            )
    if not seen:
        raise DataError(f"{path}: no records")
    if vehicle is not None and vehicle not in seen:
        raise DataError(f"{path}: no records for vehicle {vehicle!r}")


def cmd_detect(args) -> int:
    settings = _detector_settings(args)
    _check_single_vehicle(args.csv, args.vehicle)

    def records_factory():
        records = read_bsm_csv(args.csv)
        if args.vehicle is None:
            return records
        return (r for r in records if r.vehicle_id == args.vehicle)

    rows = detect_records(records_factory, args.detector, settings, window=args.window)
    n = write_decisions_csv(args.out, rows)
    print(f"wrote {n} decisions to {args.out}")
    if args.timing_out:
        # Re-run the detector over the same feature stream purely to time it.
        # Wall-clock output is intentionally kept out of the decisions file.
        samples = list(aggregate(_load_records(args.csv, args.vehicle), args.window))
        values = _feature_values(samples, args.detector, settings)
        det = make_detector(
            args.detector,
            {"bocpd": settings.bocpd, "em": settings.em, "cusum": settings.cusum}[
                args.detector
            ],
        )
        try:
            stats = time_inference(det.observe, values)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        with open(args.timing_out, "w", encoding="utf-8") as fh:
            fh.write(f"detector = {args.detector}\n")
            fh.write(f"timing_samples = {stats.n_measured}\n")
            fh.write(f"timing_mean_ms = {stats.mean_ms!r}\n")
            fh.write(f"timing_median_ms = {stats.median_ms!r}\n")
            fh.write(f"timing_p99_ms = {stats.p99_ms!r}\n")
        print(f"wrote timing stats to {args.timing_out}")
    return EXIT_OK


def _feature_values(samples, detector_name, settings):
    """Materialize the detector's input stream (timing helper)."""
    from bsmguard.bsm import TransformWindow, apply_standardizer, fit_standardizer

    mode = settings.input_mode(detector_name)
    if mode == "speed":
        return [s.avg_speed for s in samples]
    if mode == "standardized":
        std = fit_standardizer([(s.avg_speed, s.avg_accel) for s in samples])
        return [apply_standardizer(std, (s.avg_speed, s.avg_accel))[0] for s in samples]
    window = TransformWindow()
    values = []
    for s in samples:
        v = window.push(s.avg_speed, s.avg_accel)
        if v is not None:
            values.append(v)
    return values


def _parse_grid(raw: str | None):
    if raw is None:
        return None
    import json

    try:
        grid = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--grid is not valid JSON: {exc}") from None
    if not isinstance(grid, dict) or not all(isinstance(v, list) for v in grid.values()):
        raise ConfigError("--grid must be a JSON object mapping parameter to a list of values")
    return grid


def cmd_train(args) -> int:
    records = _load_records(args.csv, args.vehicle)
    samples = list(aggregate(records, args.window))
    outcome = train_and_evaluate(
        samples,
        args.model,
        seed=args.seed,
        grid=_parse_grid(args.grid),
        folds=args.folds,
        test_fraction=args.test_fraction,
    )
    save_model(args.out, outcome.model, outcome.standardizer, args.seed, outcome.test_fraction)
    report_text = outcome.report.to_text()
    if args.report_out:
        with open(args.report_out, "w", encoding="utf-8") as fh:
            fh.write(report_text)
    print(f"saved {args.model} model to {args.out}")
    print(f"grid search best: {outcome.search.best_params} "
          f"(cv accuracy {outcome.search.best_accuracy:.4f})")
    sys.stdout.write(report_text)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    from bsmguard.bsm import apply_standardizer
    from bsmguard.ml import stratified_split
    from bsmguard.pipeline import samples_to_dataset

    model, std, seed, test_fraction = load_model(args.model_file)
    records = _load_records(args.csv, args.vehicle)
    samples = list(aggregate(records, args.window))
    X_raw, y = samples_to_dataset(samples)
    if len(np.unique(y)) < 2:
        raise DataError("evaluation needs both classes present in the data")
    _, test_idx = stratified_split(y, test_fraction, seed)
    X = np.array([apply_standardizer(std, row) for row in X_raw])
    report = evaluate_model(model, model.family, X[test_idx], y[test_idx])
    text = report.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args) -> int:
    decisions = read_decisions_csv(args.decisions)
    records = _load_records(args.csv, args.vehicle)
    samples = list(aggregate(records, args.window))
    windows = parse_windows(args.windows) if args.windows else ()
    report = detector_report(
        args.detector or "detector",
        samples,
        decisions,
        windows=windows,
        exclude_warmup=args.exclude_warmup,
    )
    text = report.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    if args.roc_out:
        labels = [s.label for s in samples]
        if not (0 < sum(labels) < len(labels)):
            raise DataError("ROC output needs both classes present in the ground truth")
        orient = SCORE_ORIENTATION.get(args.detector or "", 1.0)
        points = roc_points([orient * d.score for d in decisions], labels)
        write_roc_csv(args.roc_out, points)
        print(f"wrote {len(points)} ROC points to {args.roc_out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bsmguard",
        description="Simulate, detect, and evaluate false-speed attacks on BSM streams.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a BSM CSV from a scenario config")
    p.add_argument("--config", required=True, help="scenario config file")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("detect", help="run one detector over a BSM CSV")
    p.add_argument("csv", help="input BSM CSV")
    p.add_argument("--detector", required=True, choices=DETECTOR_NAMES)
    p.add_argument("--config", default=None, help="detector config file")
    p.add_argument("--out", required=True, help="output decisions CSV")
    p.add_argument("--window", type=float, default=0.1, help="aggregation window (s)")
    p.add_argument("--vehicle", default=None, help="vehicle id for multi-vehicle CSVs")
    p.add_argument("--timing-out", default=None, help="write per-sample timing stats here")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("train", help="grid-search and fit a supervised baseline")
    p.add_argument("csv", help="labeled BSM CSV")
    p.add_argument("--model", required=True, choices=MODEL_FAMILIES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model file path")
    p.add_argument("--report-out", default=None, help="also write the test report here")
    p.add_argument("--grid", default=None,
                   help='JSON parameter grid, e.g. \'{"k": [5, 19]}\' (default per family)')
    p.add_argument("--folds", type=int, default=5, help="cross-validation folds")
    p.add_argument("--test-fraction", type=float, default=0.2, help="held-out split size")
    p.add_argument("--window", type=float, default=0.1)
    p.add_argument("--vehicle", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="re-evaluate a saved model on its test split")
    p.add_argument("model_file", help="model produced by train")
    p.add_argument("csv", help="the same labeled BSM CSV used for training")
    p.add_argument("--out", default=None, help="write the report here")
    p.add_argument("--window", type=float, default=0.1)
    p.add_argument("--vehicle", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="score a decisions CSV against ground truth")
    p.add_argument("decisions", help="decisions CSV from detect")
    p.add_argument("csv", help="the BSM CSV the decisions came from")
    p.add_argument("--detector", default=None, choices=DETECTOR_NAMES,
                   help="orients scores for AUROC")
    p.add_argument("--windows", default=None, help="attack windows as start:end[,...]")
    p.add_argument("--exclude-warmup", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--roc-out", default=None, help="write per-threshold ROC points CSV")
    p.add_argument("--window", type=float, default=0.1)
    p.add_argument("--vehicle", default=None)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
