"""Check records and the verification report."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CheckRecord", "VerificationReport", "to_jsonable"]

# every report lists these, null when the suite does not produce them
CONSTANT_KEYS = ("R", "beta", "delta0", "c1", "c2", "c3", "c4", "c5", "b")


def to_jsonable(v):
    """Convert numpy scalars/arrays and non-finite floats to plain JSON values."""
    if isinstance(v, dict):
        return {str(k): to_jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return to_jsonable(v.tolist())
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    return v


@dataclass
class CheckRecord:
    name: str
    citation: str
    computed: object
    bound: object
    passed: bool
    margin: float | None = None
    runtime: float = 0.0

    def to_dict(self, with_runtime: bool = True) -> dict:
        d = {
            "name": self.name,
            "citation": self.citation,
            "computed": to_jsonable(self.computed),
            "bound": to_jsonable(self.bound),
            "pass": bool(self.passed),
            "margin": to_jsonable(self.margin),
        }
        if with_runtime:
            d["runtime"] = round(self.runtime, 6)
        return d


@dataclass
class VerificationReport:
    suite: str
    meta: dict
    constants: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)  # name -> (header, rows), written as CSV

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, citation: str, computed, bound, passed: bool, margin=None,
            runtime: float = 0.0) -> CheckRecord:
        if not citation:
            raise ValueError(f"check {name!r} needs a claim citation")
        rec = CheckRecord(name, citation, computed, bound, bool(passed), margin, runtime)
        self.checks.append(rec)
        return rec

    def timed(self, name: str, citation: str, fn):
        """Run ``fn() -> (computed, bound, passed, margin)`` and record it.

        An exception inside ``fn`` becomes a failed check carrying the message.
        """
        t0 = time.perf_counter()
        try:
            computed, bound, passed, margin = fn()
        except Exception as exc:  # failures are report entries, not crashes
            computed, bound, passed, margin = f"{type(exc).__name__}: {exc}", None, False, None
        return self.add(name, citation, computed, bound, passed, margin, time.perf_counter() - t0)

    def to_dict(self, with_runtime: bool = True) -> dict:
        return {
            "suite": self.suite,
            "meta": to_jsonable(self.meta),
            "constants": to_jsonable({**dict.fromkeys(CONSTANT_KEYS), **self.constants}),
            "checks": [c.to_dict(with_runtime) for c in self.checks],
            "pass": self.passed,
        }

    def to_json(self, with_runtime: bool = True) -> str:
        return json.dumps(self.to_dict(with_runtime), indent=2, sort_keys=True)

    def summary_lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'}  {c.name}" for c in self.checks]
