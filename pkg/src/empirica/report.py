"""Experiment reports, run manifests and deterministic emitters.

Reports are reproducibility-critical: rerunning with an identical config
and seed must give byte-identical report.json and metrics.csv whatever
the thread count.  Wall-clock information therefore lives in a separate
timing.json sidecar that is excluded from the reproducibility contract.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

__version__ = "0.1.0"

__all__ = ["RunManifest", "ExperimentReport", "canonical_json", "config_hash"]


def _plain(obj):
    """Recursively convert numpy scalars/arrays to builtin types."""
    import numpy as np

    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def canonical_json(obj) -> str:
    """Deterministic JSON text (sorted keys, fixed separators)."""
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()


@dataclass(frozen=True)
class RunManifest:
    config_hash: str
    version: str
    seed: int
    outputs: tuple = ()


@dataclass
class ExperimentReport:
    """Structured record of one experiment run.

    ``metrics`` are flat rows (one dict each, emitted as CSV); every
    ``criteria`` entry carries the checked value, its bound and either an
    ``exact`` flag or a standard error.
    """

    kind: str
    manifest: RunManifest
    config: dict
    metrics: list = field(default_factory=list)
    criteria: list = field(default_factory=list)
    summary: list = field(default_factory=list)

    @classmethod
    def build(cls, kind: str, cfg, metrics, criteria) -> "ExperimentReport":
        config = cfg.canonical()
        manifest = RunManifest(
            config_hash=config_hash(config),
            version=__version__,
            seed=int(config.get("seed", 0)),
        )
        return cls(kind, manifest, config, list(metrics), list(criteria))

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.criteria)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "manifest": asdict(self.manifest),
            "config": self.config,
            "criteria": self.criteria,
            "metrics": self.metrics,
            "passed": self.passed,
        }
        if self.summary:
            out["summary"] = self.summary
        return _plain(out)

    def write(self, outdir, stem: str | None = None) -> list:
        """Write report.json + metrics.csv; returns the paths written."""
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        stem = stem or self.kind
        report_path = outdir / f"{stem}-report.json"
        csv_path = outdir / f"{stem}-metrics.csv"
        object.__setattr__(
            self.manifest, "outputs", (report_path.name, csv_path.name)
        )
        report_path.write_text(
            json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False)
            + "\n"
        )
        fieldnames: list = []
        for row in self.metrics:
            for key in row:
                if key not in fieldnames:
                    fieldnames.append(key)
        with csv_path.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames, restval="")
            writer.writeheader()
            for row in self.metrics:
                writer.writerow({k: _fmt(v) for k, v in row.items()})
        return [report_path, csv_path]


def _fmt(value):
    import numpy as np

    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, complex):
        raise TypeError("complex metrics must be split into re/im columns")
    return value
