"""Wiring between streams, detectors, baselines, and reports.

Detection is streaming: aggregated samples flow one at a time through the
selected input transform into the detector, and memory stays bounded no
matter how long the stream is. Standardized inputs use a first pass that
only keeps running sums.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from bsmguard.bsm import (
    AggregatedSample,
    BsmRecord,
    DataError,
    StandardizationParams,
    TransformWindow,
    aggregate,
    apply_standardizer,
    fit_standardizer,
)
from bsmguard.config import DetectorSettings
from bsmguard.detectors import DetectorDecision, make_detector
from bsmguard.evaluate import EvalReport, auroc, confusion, detection_latency, metrics
from bsmguard.ml import (
    GridSearchResult,
    GridSearchSpec,
    expand_grid,
    fit_family,
    grid_search,
    stratified_split,
)

DECISIONS_HEADER = ("t", "score", "attack", "warmed_up")

#: Sign that turns each detector's score into "larger means more suspicious".
#: The Bayesian detector scores by predictive density, which drops under
#: attack.
SCORE_ORIENTATION = {"bocpd": -1.0, "em": 1.0, "cusum": 1.0}


def welford_feature_stats(samples: Iterable[AggregatedSample]) -> StandardizationParams:
    """One streaming pass over (avg_speed, avg_accel) with O(1) memory."""
    count = 0
    mean = [0.0, 0.0]
    m2 = [0.0, 0.0]
    for s in samples:
        count += 1
        for j, x in enumerate((s.avg_speed, s.avg_accel)):
            delta = x - mean[j]
            mean[j] += delta / count
            m2[j] += delta * (x - mean[j])
    if count == 0:
        raise DataError("stream produced no aggregated samples")
    stdev = tuple(max(math.sqrt(m / count), 1e-12) for m in m2)
    return StandardizationParams(mean=tuple(mean), stdev=stdev)


def run_detection(
    samples: Iterable[AggregatedSample],
    detector_name: str,
    settings: DetectorSettings | None = None,
    std_params: StandardizationParams | None = None,
) -> Iterator[tuple[AggregatedSample, DetectorDecision]]:
    """Feed a sample stream through one detector; yields one decision per sample.

    The detector's configured input mode selects what it observes: the raw
    average speed, the standardized average speed (requires ``std_params``),
    or the rolling control-variate transform. Samples consumed while the
    transform window fills get a warm-up decision.
    """
    settings = settings or DetectorSettings()
    mode = settings.input_mode(detector_name)
    config = {"bocpd": settings.bocpd, "em": settings.em, "cusum": settings.cusum}[
        detector_name
    ]
    detector = make_detector(detector_name, config)
    window = TransformWindow() if mode == "transform" else None
    if mode == "standardized" and std_params is None:
        raise ValueError("standardized input mode needs standardization parameters")

    for sample in samples:
        if mode == "speed":
            value: float | None = sample.avg_speed
        elif mode == "standardized":
            value = apply_standardizer(
                std_params, (sample.avg_speed, sample.avg_accel)
            )[0]
        else:
            value = window.push(sample.avg_speed, sample.avg_accel)
        if value is None:
            decision = DetectorDecision(attack=False, score=0.0, warmed_up=False)
        else:
            decision = detector.observe(value)
        yield sample, decision


def detect_records(
    records_factory: Callable[[], Iterable[BsmRecord]],
    detector_name: str,
    settings: DetectorSettings | None = None,
    window: float = 0.1,
) -> Iterator[tuple[AggregatedSample, DetectorDecision]]:
    """Aggregate and detect over a record stream that can be re-opened.

    ``records_factory`` is called once per pass; standardized input modes
    need a first pass for the feature statistics, raw and transform modes
    run single-pass.
    """
    settings = settings or DetectorSettings()
    std_params = None
    if settings.input_mode(detector_name) == "standardized":
        std_params = welford_feature_stats(aggregate(records_factory(), window))
    return run_detection(
        aggregate(records_factory(), window), detector_name, settings, std_params
    )


def write_decisions_csv(
    path: str, rows: Iterable[tuple[AggregatedSample, DetectorDecision]]
) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DECISIONS_HEADER)
        for sample, decision in rows:
            writer.writerow(
                [
                    repr(sample.t),
                    repr(decision.score),
                    int(decision.attack),
                    int(decision.warmed_up),
                ]
            )
            n += 1
    return n


@dataclass(frozen=True)
class DecisionRow:
    t: float
    score: float
    attack: int
    warmed_up: int


def read_decisions_csv(path: str) -> list[DecisionRow]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != DECISIONS_HEADER:
            raise DataError(f"{path}: bad decisions header {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append(
                    DecisionRow(
                        t=float(row[0]),
                        score=float(row[1]),
                        attack=int(row[2]),
                        warmed_up=int(row[3]),
                    )
                )
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    return rows


def detector_report(
    detector_name: str,
    samples: Sequence[AggregatedSample],
    decisions: Sequence[DecisionRow],
    windows: Sequence[tuple[float, float]] = (),
    exclude_warmup: bool = False,
) -> EvalReport:
    """Score a decision stream against the samples' ground-truth labels.

    Warm-up decisions are included by default (deployment behavior); pass
    ``exclude_warmup`` to drop them. AUROC orients each detector's score so
    larger means more suspicious, and needs both classes present.
    """
    if len(samples) != len(decisions):
        raise DataError(
            f"decision count {len(decisions)} does not match sample count {len(samples)}"
        )
    pairs = list(zip(samples, decisions))
    if exclude_warmup:
        pairs = [(s, d) for s, d in pairs if d.warmed_up]
        if not pairs:
            raise DataError("all decisions fell inside warm-up")
    labels = [s.label for s, _ in pairs]
    preds = [d.attack for _, d in pairs]
    cm = confusion(labels, preds)
    quality = metrics(cm)
    orient = SCORE_ORIENTATION.get(detector_name, 1.0)
    auc = None
    if 0 < sum(labels) < len(labels):
        auc = auroc([orient * d.score for _, d in pairs], labels)
    latency = None
    if windows:
        latency = detection_latency(
            [d.t for d in decisions], [d.attack for d in decisions], windows
        )
    return EvalReport(
        subject=detector_name,
        cm=cm,
        quality=quality,
        auroc_value=auc,
        latency=latency,
        extra={"excluded_warmup": int(exclude_warmup)},
    )


# ---------------------------------------------------------------------------
# Supervised baseline pipeline
# ---------------------------------------------------------------------------


def samples_to_dataset(samples: Sequence[AggregatedSample]) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([[s.avg_speed, s.avg_accel] for s in samples], dtype=float)
    y = np.array([s.label for s in samples], dtype=int)
    return X, y


@dataclass
class TrainOutcome:
    model: object  # FittedModel
    standardizer: StandardizationParams
    search: GridSearchResult
    report: EvalReport
    seed: int
    test_fraction: float


def train_and_evaluate(
    samples: Sequence[AggregatedSample],
    family: str,
    seed: int,
    grid: dict[str, list] | None = None,
    folds: int = 5,
    test_fraction: float = 0.2,
) -> TrainOutcome:
    """The full supervised pipeline on one labeled sample set.

    Stratified 80/20 split, standardizer fitted on the training split only,
    grid search by 5-fold CV with per-fold balancing, a final fit on the
    whole training split with the winning cell, and a report on the held-out
    test split.
    """
    from bsmguard.ml import DEFAULT_GRIDS

    X_raw, y = samples_to_dataset(samples)
    if len(np.unique(y)) < 2:
        raise DataError("training needs both classes present in the data")
    train_idx, test_idx = stratified_split(y, test_fraction, seed)
    std = fit_standardizer(X_raw[train_idx])
    X = np.array([apply_standardizer(std, row) for row in X_raw])

    cells = tuple(expand_grid(grid if grid is not None else DEFAULT_GRIDS[family]))
    spec = GridSearchSpec(
        family=family, cells=cells, folds=folds, train_fraction=1.0 - test_fraction
    )
    search = grid_search(spec, X[train_idx], y[train_idx], seed=seed)

    # Sub-seed for the final fit, disjoint from the (seed, cell, fold) tree
    # the grid search spawns.
    final_seed = int(np.random.SeedSequence((seed, 0xF17A1)).generate_state(1)[0])
    model = fit_family(family, search.best_params, X[train_idx], y[train_idx], final_seed)

    report = evaluate_model(model, family, X[test_idx], y[test_idx])
    return TrainOutcome(
        model=model,
        standardizer=std,
        search=search,
        report=report,
        seed=seed,
        test_fraction=test_fraction,
    )


def evaluate_model(model, family: str, X_test: np.ndarray, y_test: np.ndarray) -> EvalReport:
    labels = list(map(int, y_test))
    preds = [int(v) for v in model.predict_labels(X_test)]
    scores = [float(v) for v in model.predict_scores(X_test)]
    cm = confusion(labels, preds)
    auc = auroc(scores, labels) if 0 < sum(labels) < len(labels) else None
    return EvalReport(subject=family, cm=cm, quality=metrics(cm), auroc_value=auc)
