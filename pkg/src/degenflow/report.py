"""Experiment configuration, reports and their atomic JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "SCENARIOS",
    "REQUIRED",
    "ExperimentConfig",
    "ExperimentReport",
    "ConfigError",
    "emit",
    "atomic_write_text",
]

SCENARIOS = (
    "parity-demo",
    "spectrum",
    "kernel-exponent",
    "diffusivity-exponent",
    "viscosity-limit",
    "flows-compare",
    "gamma-report",
)

REQUIRED = {
    "parity-demo": ("m", "sigma"),
    "spectrum": ("m", "sigma"),
    "kernel-exponent": ("m", "eps"),
    "diffusivity-exponent": ("m", "eps"),
    "viscosity-limit": ("m", "sigma", "t_final"),
    "flows-compare": ("m", "sigma"),
    "gamma-report": ("m", "sigma"),
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    m: int | None = None
    sigma: float | None = None
    eps: float | None = None
    t_final: float | None = None
    h_step: float | None = None
    seed: int = 0
    output_path: str | None = None
    two_d: bool = False

    def validate(self) -> "ExperimentConfig":
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        missing = [name for name in REQUIRED[self.scenario] if getattr(self, name) is None]
        if missing:
            flags = ", ".join("--" + n.replace("_", "-") for n in missing)
            raise ConfigError(f"scenario {self.scenario} requires {flags}")
        if self.m is not None and self.m < 1:
            raise ConfigError("--m must be a positive integer")
        if self.sigma is not None and not 0 <= self.sigma < 1:
            raise ConfigError("--sigma must lie in [0, 1)")
        if self.scenario in ("gamma-report", "flows-compare") and self.sigma is not None and self.sigma <= 0:
            raise ConfigError(f"scenario {self.scenario} needs --sigma > 0")
        if self.eps is not None and not 0 < self.eps < 1:
            raise ConfigError("--eps must lie in (0, 1)")
        if self.t_final is not None and not self.t_final > 0:
            raise ConfigError("--t-final must be positive")
        if self.h_step is not None and not self.h_step > 0:
            raise ConfigError("--h-step must be positive")
        if self.scenario in ("kernel-exponent", "diffusivity-exponent") and self.m < 64:
            raise ConfigError(f"scenario {self.scenario} needs --m >= 64")
        if self.scenario == "flows-compare" and self.m % 2:
            raise ConfigError("flows-compare runs the split flow and needs an even --m")
        if self.scenario == "gamma-report" and self.m < 1024:
            raise ConfigError("gamma-report mollifies at scales up to 128 and needs --m >= 1024")
        return self

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if k != "output_path"}


@dataclass
class ExperimentReport:
    scenario: str
    config: dict
    metrics: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def check(self):
        bad = [k for k, v in self.metrics.items() if isinstance(v, float) and not math.isfinite(v)]
        if bad:
            raise FloatingPointError(f"non-finite metrics: {bad}")

    def to_json(self, table_files=None) -> str:
        # wall time is left out so reruns produce identical bytes
        doc = {
            "scenario": self.scenario,
            "config": self.config,
            "metrics": self.metrics,
            "passed": self.passed,
            "all_passed": self.ok,
            "tables": table_files or {},
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return v


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def atomic_write_text(path, text: str):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise OSError(f"could not write {path}: {exc}") from exc


def emit(report: ExperimentReport, path):
    """Write ``path`` (JSON) plus one CSV per table next to it, named <stem>.<table>.csv."""
    report.check()
    path = Path(path)
    rendered, files = {}, {}
    for name, (header, rows) in sorted(report.tables.items()):
        target = path.with_name(f"{path.stem}.{name}.csv")
        rendered[target] = _csv_text(header, rows)
        files[name] = target.name
    for target, text in rendered.items():
        atomic_write_text(target, text)
    atomic_write_text(path, report.to_json(files))
