#!/usr/bin/env python3
"""Full comparison experiment on the synthetic false-speed scenario.

Simulates multi-seed streams, runs the three online detectors and the four
supervised baselines, and prints one summary table. Everything is seeded;
re-runs reproduce the same numbers (timing columns excepted).

Usage:
    python3 scripts/run_experiment.py [--seeds N] [--out-dir DIR]
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bsmguard.bsm import aggregate
from bsmguard.config import DetectorSettings
from bsmguard.pipeline import (
    DecisionRow,
    detector_report,
    run_detection,
    train_and_evaluate,
    welford_feature_stats,
)
from bsmguard.simulate import default_scenario

DETECTORS = ("bocpd", "em", "cusum")
FAMILIES = ("knn", "cart", "rf", "nn")

#: Desk-scale grids so the whole experiment stays in the tens of seconds.
GRIDS = {
    "knn": {"k": [5, 19]},
    "cart": {"criterion": ["entropy"], "max_depth": [4, 8]},
    "rf": {"n_trees": [50], "max_depth": [16], "min_split": [12], "min_leaf": [5]},
    "nn": {"epochs": [100], "batch_size": [50], "lr": [0.2], "n_hidden": [10]},
}


def detector_rows(seeds: int):
    settings = DetectorSettings()
    rows = []
    for name in DETECTORS:
        accs, precisions, recalls, aurocs, latencies = [], [], [], [], []
        per_sample_ms = []
        for seed in range(seeds):
            samples = list(aggregate(default_scenario(seed=seed).run()))
            std = welford_feature_stats(samples)
            started = time.perf_counter()
            pairs = list(run_detection(samples, name, settings, std))
            per_sample_ms.append(1000 * (time.perf_counter() - started) / len(pairs))
            decisions = [
                DecisionRow(
                    t=s.t, score=d.score, attack=int(d.attack), warmed_up=int(d.warmed_up)
                )
                for s, d in pairs
            ]
            rep = detector_report(name, samples, decisions, windows=((100.0, 105.0),))
            accs.append(rep.quality.accuracy)
            precisions.append(rep.quality.precision_macro)
            recalls.append(rep.quality.detection_macro)
            if rep.auroc_value is not None:
                aurocs.append(rep.auroc_value)
            if rep.latency and rep.latency.detected:
                latencies.append(rep.latency.mean)
        rows.append(
            {
                "name": name,
                "accuracy": statistics.fmean(accs),
                "precision": statistics.fmean(precisions),
                "recall": statistics.fmean(recalls),
                "auroc": statistics.fmean(aurocs) if aurocs else float("nan"),
                "latency_s": statistics.fmean(latencies) if latencies else float("nan"),
                "ms_per_sample": statistics.fmean(per_sample_ms),
            }
        )
    return rows


def baseline_rows(seeds: int):
    rows = []
    for family in FAMILIES:
        accs, precisions, recalls, aurocs = [], [], [], []
        for seed in range(seeds):
            samples = list(aggregate(default_scenario(seed=seed).run()))
            outcome = train_and_evaluate(samples, family, seed=seed, grid=GRIDS[family])
            q = outcome.report.quality
            accs.append(q.accuracy)
            precisions.append(q.precision_macro)
            recalls.append(q.detection_macro)
            if outcome.report.auroc_value is not None:
                aurocs.append(outcome.report.auroc_value)
        rows.append(
            {
                "name": family,
                "accuracy": statistics.fmean(accs),
                "precision": statistics.fmean(precisions),
                "recall": statistics.fmean(recalls),
                "auroc": statistics.fmean(aurocs) if aurocs else float("nan"),
                "latency_s": float("nan"),
                "ms_per_sample": float("nan"),
            }
        )
    return rows


def print_table(rows):
    header = f"{'model':8s} {'accuracy':>9s} {'precision':>10s} {'recall':>8s} {'auroc':>7s} {'latency_s':>10s} {'ms/sample':>10s}"
    print(header)
    print("-" * len(header))
    for r in rows:
        print(
            f"{r['name']:8s} {r['accuracy']:9.4f} {r['precision']:10.4f} "
            f"{r['recall']:8.4f} {r['auroc']:7.4f} {r['latency_s']:10.3f} "
            f"{r['ms_per_sample']:10.4f}"
        )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=5, help="scenario seeds per model")
    args = parser.parse_args()

    print(f"scenario: 200 s at 10 Hz, one 5 s false-stop window, {args.seeds} seeds")
    started = time.perf_counter()
    rows = detector_rows(args.seeds) + baseline_rows(args.seeds)
    print_table(rows)
    print(f"total wall time: {time.perf_counter() - started:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
