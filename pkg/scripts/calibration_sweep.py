#!/usr/bin/env python3
"""Sweep detector alarm thresholds over pure-noise streams.

Prints the per-sample false-alarm rate of the Bayesian and CUSUM detectors
across a threshold grid, which is how the shipped defaults were sanity
checked. Streams are standardized N(0, 1) noise; rates are measured after
warm-up.

Usage:
    python3 scripts/calibration_sweep.py [--streams N] [--samples N]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bsmguard.detectors import BocpdConfig, BocpdDetector, CusumConfig, CusumDetector

BOCPD_THRESHOLDS = (2e-3, 2e-4, 2e-5)
CUSUM_THRESHOLDS = (3.0, 5.0, 8.0)


def false_alarm_rate(make_detector, streams: int, samples: int) -> float:
    alarms = 0
    measured = 0
    for seed in range(streams):
        rng = np.random.default_rng(seed)
        det = make_detector()
        for y in rng.normal(0.0, 1.0, samples):
            d = det.observe(float(y))
            if d.warmed_up:
                measured += 1
                alarms += d.attack
    return alarms / measured


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--streams", type=int, default=200)
    parser.add_argument("--samples", type=int, default=1000)
    args = parser.parse_args()

    print(f"{args.streams} noise streams x {args.samples} samples\n")
    print("bocpd predictive-density threshold -> false alarms per sample")
    for thr in BOCPD_THRESHOLDS:
        rate = false_alarm_rate(
            lambda: BocpdDetector(BocpdConfig(threshold=thr)), args.streams, args.samples
        )
        print(f"  {thr:8.0e}  {rate:.3e}")
    print("\ncusum h_sigma -> false alarms per sample")
    for h in CUSUM_THRESHOLDS:
        rate = false_alarm_rate(
            lambda: CusumDetector(CusumConfig(h_sigma=h)), args.streams, args.samples
        )
        print(f"  {h:8.1f}  {rate:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
