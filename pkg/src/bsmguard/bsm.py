"""BSM stream primitives.

Record and sample types, windowed aggregation at the infrastructure edge,
per-feature standardization, the rolling control-variate transform, and the
CSV schema used by every command.
"""

from __future__ import annotations

import csv
import math
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

NO_ATTACK = 0
ATTACK = 1

#: Native broadcast period of a BSM stream (10 Hz).
BSM_PERIOD_S = 0.1

#: Lower bound applied to fitted standard deviations so constant features
#: standardize to zero instead of blowing up.
STDEV_FLOOR = 1e-12

#: Weight of the acceleration-difference control variate in the rolling
#: transform.
CONTROL_VARIATE_COEFF = 0.99

#: Number of samples a transform window holds before it emits values.
TRANSFORM_SPAN = 10

CSV_HEADER = ("t", "vehicle_id", "speed_mps", "accel_mps2", "label")


class DataError(ValueError):
    """Malformed or inconsistent stream data."""


class NonMonotonicTimestampError(DataError):
    """Timestamps within one vehicle stream must be strictly increasing."""


@dataclass(frozen=True)
class BsmRecord:
    """One 10 Hz basic safety message."""

    t: float  # seconds, 0.1 s resolution
    vehicle_id: str
    speed: float  # m/s
    accel: float  # m/s^2
    label: int  # 0 clean, 1 attacked


@dataclass(frozen=True)
class AggregatedSample:
    """Mean speed and acceleration over one aggregation window.

    ``t`` is the window end; the window covers ``(t - w, t]``. The label is
    1 if any constituent record was attacked.
    """

    t: float
    avg_speed: float
    avg_accel: float
    label: int


def _window_index(t: float, window: float) -> int:
    # Records land in ((k-1)*w, k*w]; the 1e-9 slack absorbs float drift in
    # timestamps that are nominal multiples of the window.
    return math.ceil(t / window - 1e-9)


def aggregate(
    records: Iterable[BsmRecord], window: float = BSM_PERIOD_S
) -> Iterator[AggregatedSample]:
    """Average a single time-ordered stream into fixed windows.

    Yields one sample per non-empty window. Labels are OR-combined so any
    attacked record taints its window. Raises NonMonotonicTimestampError as
    soon as a timestamp fails to advance; use ``aggregate_by_vehicle`` for
    interleaved multi-vehicle input.
    """
    if window <= 0:
        raise ValueError(f"window must be positive, got {window}")

    key = None
    speed_sum = accel_sum = 0.0
    count = 0
    label = NO_ATTACK
    prev_t: float | None = None

    for idx, rec in enumerate(records):
        if prev_t is not None and rec.t <= prev_t:
            raise NonMonotonicTimestampError(
                f"record {idx} (vehicle {rec.vehicle_id!r}, t={rec.t!r}) does not "
                f"advance past previous t={prev_t!r}"
            )
        prev_t = rec.t
        k = _window_index(rec.t, window)
        if key is not None and k != key:
            yield AggregatedSample(
                round(key * window, 9), speed_sum / count, accel_sum / count, label
            )
            speed_sum = accel_sum = 0.0
            count = 0
            label = NO_ATTACK
        key = k
        speed_sum += rec.speed
        accel_sum += rec.accel
        count += 1
        if rec.label == ATTACK:
            label = ATTACK
    if count:
        yield AggregatedSample(
            round(key * window, 9), speed_sum / count, accel_sum / count, label
        )


def aggregate_by_vehicle(
    records: Iterable[BsmRecord], window: float = BSM_PERIOD_S
) -> dict[str, list[AggregatedSample]]:
    """Group an interleaved stream by vehicle and aggregate each stream."""
    per_vehicle: dict[str, list[BsmRecord]] = {}
    for rec in records:
        per_vehicle.setdefault(rec.vehicle_id, []).append(rec)
    return {vid: list(aggregate(recs, window)) for vid, recs in per_vehicle.items()}


@dataclass(frozen=True)
class StandardizationParams:
    """Per-feature mean and (floored) standard deviation, fitted on training data."""

    mean: tuple[float, ...]
    stdev: tuple[float, ...]


def fit_standardizer(rows: Sequence[Sequence[float]]) -> StandardizationParams:
    """Fit per-feature mean and population standard deviation.

    Zero-variance features get their stdev floored to STDEV_FLOOR and a
    warning, so applying the standardizer maps them to exactly zero.
    """
    if len(rows) == 0:
        raise ValueError("cannot fit a standardizer on an empty training set")
    n_features = len(rows[0])
    n = len(rows)
    means = []
    stdevs = []
    for j in range(n_features):
        col = [float(row[j]) for row in rows]
        mean = math.fsum(col) / n
        var = math.fsum((x - mean) ** 2 for x in col) / n
        stdev = math.sqrt(var)
        if stdev < STDEV_FLOOR:
            warnings.warn(
                f"feature {j} has (near-)zero variance; stdev floored to {STDEV_FLOOR}",
                stacklevel=2,
            )
            stdev = STDEV_FLOOR
        means.append(mean)
        stdevs.append(stdev)
    return StandardizationParams(mean=tuple(means), stdev=tuple(stdevs))


def apply_standardizer(
    params: StandardizationParams, row: Sequence[float]
) -> tuple[float, ...]:
    """Return (x - mean) / stdev per feature."""
    if len(row) != len(params.mean):
        raise ValueError(
            f"expected {len(params.mean)} features, got {len(row)}"
        )
    return tuple(
        (float(x) - m) / s for x, m, s in zip(row, params.mean, params.stdev)
    )


class TransformWindow:
    """Rolling control-variate transform of one vehicle's sample stream.

    Holds the most recent ``span`` (speed, accel) pairs. Once full, each push
    returns the unbiased sample variance of the series

        z_j = ds_j - c * (da_j - mean(da))

    where ds/da are first differences of speed and acceleration taken inside
    the window. Pushes before the window fills return None (warm-up).
    """

    def __init__(self, span: int = TRANSFORM_SPAN, coeff: float = CONTROL_VARIATE_COEFF):
        if span < 3:
            raise ValueError("transform span must be at least 3")
        self.span = span
        self.coeff = coeff
        self._speeds: deque[float] = deque(maxlen=span)
        self._accels: deque[float] = deque(maxlen=span)

    @property
    def full(self) -> bool:
        return len(self._speeds) == self.span

    def push(self, speed: float, accel: float) -> float | None:
        self._speeds.append(float(speed))
        self._accels.append(float(accel))
        if not self.full:
            return None
        return self.value()

    def value(self) -> float:
        """Transform value over the current (full) window."""
        if not self.full:
            raise ValueError("transform window is not full yet")
        s = list(self._speeds)
        a = list(self._accels)
        ds = [s[j] - s[j - 1] for j in range(1, self.span)]
        da = [a[j] - a[j - 1] for j in range(1, self.span)]
        da_mean = math.fsum(da) / len(da)
        z = [ds[j] - self.coeff * (da[j] - da_mean) for j in range(len(ds))]
        z_mean = math.fsum(z) / len(z)
        return math.fsum((v - z_mean) ** 2 for v in z) / (len(z) - 1)


def write_bsm_csv(path: str, records: Iterable[BsmRecord]) -> int:
    """Write records in the canonical CSV schema. Returns the row count."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow(
                [repr(rec.t), rec.vehicle_id, repr(rec.speed), repr(rec.accel), rec.label]
            )
            n += 1
    return n


def read_bsm_csv(path: str) -> Iterator[BsmRecord]:
    """Stream records from a canonical CSV, validating schema and labels."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if tuple(header) != CSV_HEADER:
            raise DataError(
                f"{path}: bad header {header!r}, expected {','.join(CSV_HEADER)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise DataError(f"{path}:{lineno}: expected 5 columns, got {len(row)}")
            try:
                t = float(row[0])
                speed = float(row[2])
                accel = float(row[3])
                label = int(row[4])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            if label not in (NO_ATTACK, ATTACK):
                raise DataError(f"{path}:{lineno}: label must be 0 or 1, got {row[4]!r}")
            if speed < 0:
                raise DataError(f"{path}:{lineno}: negative speed {speed!r}")
            yield BsmRecord(t=t, vehicle_id=row[1], speed=speed, accel=accel, label=label)
