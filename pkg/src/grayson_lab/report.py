"""Verification reports shared by the cover, flow and harness code."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


def plain(obj):
    """Recursively convert numpy values to built-in types; non-finite floats become ``None``."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # JSON has no infinities; an empty extremum is reported as null
        return float(obj) if math.isfinite(obj) else None
    return obj


@dataclass
class Report:
    lemma: str
    samples: int = 0
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add_violation(self, **info) -> None:
        self.violations.append(info)

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "samples": int(self.samples),
            "violations": plain(self.violations),
            "stats": plain(self.stats),
        }

    def summary(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.lemma}: {self.samples} samples, {len(self.violations)} violations"


def emit_report(reports) -> dict:
    """Assemble reports, in the given order, into one schema-stable document."""
    return {"suites": [r.to_json() if isinstance(r, Report) else r for r in reports]}


def dumps(doc) -> str:
    # repr-based float formatting is the shortest round-trip form
    return json.dumps(plain(doc), indent=2, allow_nan=False) + "\n"
