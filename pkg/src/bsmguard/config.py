"""Flat key-value config files.

Scenario and detector settings share one format: ``key = value`` lines,
``#`` comments, UTF-8. Parsing errors carry the file name and line number;
the CLI turns them into exit code 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from bsmguard.detectors import BocpdConfig, CusumConfig, EmConfig


class ConfigError(ValueError):
    """Bad or missing configuration, with a line-precise message where possible."""


def parse_flat_config(text: str, source: str = "<config>") -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        if key in out:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_flat_config(path: str) -> dict[str, str]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_flat_config(fh.read(), source=path)


def _convert(raw: str, key: str, kind):
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {exc}") from None


_REQUIRED = object()


def get_value(cfg: Mapping[str, str], key: str, kind, default=_REQUIRED):
    if key not in cfg:
        if default is _REQUIRED:
            raise ConfigError(f"missing required key {key!r}")
        return default
    return _convert(cfg[key], key, kind)


def parse_windows(raw: str, key: str = "attack.windows") -> tuple[tuple[float, float], ...]:
    """Parse 'start:end[,start:end...]' into (start, end) pairs."""
    raw = raw.strip()
    if not raw:
        return ()
    windows = []
    for part in raw.split(","):
        start_s, sep, end_s = part.partition(":")
        if not sep:
            raise ConfigError(f"key {key!r}: window {part!r} is not 'start:end'")
        try:
            start, end = float(start_s), float(end_s)
        except ValueError:
            raise ConfigError(f"key {key!r}: window {part!r} has non-numeric bounds") from None
        windows.append((start, end))
    return tuple(windows)


def format_windows(windows) -> str:
    return ",".join(f"{a}:{b}" for a, b in windows)


#: How each detector's input stream is produced from aggregated samples.
INPUT_MODES = ("speed", "standardized", "transform")


@dataclass(frozen=True)
class DetectorSettings:
    """All three detectors' configs plus their input wiring."""

    bocpd: BocpdConfig = BocpdConfig()
    em: EmConfig = EmConfig()
    cusum: CusumConfig = CusumConfig()
    bocpd_input: str = "standardized"
    em_input: str = "speed"
    cusum_input: str = "standardized"

    def input_mode(self, detector: str) -> str:
        return {"bocpd": self.bocpd_input, "em": self.em_input, "cusum": self.cusum_input}[
            detector
        ]


def detector_settings_from_mapping(cfg: Mapping[str, str]) -> DetectorSettings:
    """Build DetectorSettings from flat keys, defaulting everything absent."""
    settings = DetectorSettings(
        bocpd=BocpdConfig(
            hazard=get_value(cfg, "bocpd.lambda", float, BocpdConfig.hazard),
            mu0=get_value(cfg, "bocpd.mu0", float, BocpdConfig.mu0),
            kappa=get_value(cfg, "bocpd.kappa", float, BocpdConfig.kappa),
            alpha=get_value(cfg, "bocpd.alpha", float, BocpdConfig.alpha),
            beta=get_value(cfg, "bocpd.beta", float, BocpdConfig.beta),
            threshold=get_value(cfg, "bocpd.threshold", float, BocpdConfig.threshold),
            warmup=get_value(cfg, "bocpd.warmup", int, BocpdConfig.warmup),
        ),
        em=EmConfig(
            threshold=get_value(cfg, "em.threshold", float, EmConfig.threshold),
            seed=get_value(cfg, "em.seed", int, EmConfig.seed),
        ),
        cusum=CusumConfig(
            delta=get_value(cfg, "cusum.delta", float, CusumConfig.delta),
            alpha=get_value(cfg, "cusum.alpha", float, CusumConfig.alpha),
            h_sigma=get_value(cfg, "cusum.h_sigma", float, CusumConfig.h_sigma),
            warmup=get_value(cfg, "cusum.warmup", int, CusumConfig.warmup),
        ),
        bocpd_input=get_value(cfg, "bocpd.input", str, DetectorSettings.bocpd_input),
        em_input=get_value(cfg, "em.input", str, DetectorSettings.em_input),
        cusum_input=get_value(cfg, "cusum.input", str, DetectorSettings.cusum_input),
    )
    for det in ("bocpd", "em", "cusum"):
        mode = settings.input_mode(det)
        if mode not in INPUT_MODES:
            raise ConfigError(
                f"key '{det}.input': unknown mode {mode!r}, expected one of {INPUT_MODES}"
            )
    try:
        settings.bocpd.validate()
        settings.em.validate()
        settings.cusum.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return settings
