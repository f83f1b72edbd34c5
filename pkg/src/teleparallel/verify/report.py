"""Verification reports and their JSON / CSV encodings.

The JSON encoding is byte-stable: keys are sorted, floats are written in
scientific notation with six significant digits and the wall time is left
out unless asked for, so two runs of one scenario give identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .config import ScenarioConfig

__all__ = ["Record", "VerificationReport", "emit_report", "write_report", "format_float"]


@dataclass
class Record:
    suite: str
    point: int
    residual: Optional[float]
    threshold: float
    passed: bool
    details: dict = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> dict:
        d = {
            "suite": self.suite,
            "point": self.point,
            "residual": self.residual,
            "threshold": self.threshold,
            "pass": self.passed,
            "details": self.details,
        }
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class VerificationReport:
    config: ScenarioConfig
    records: list
    wall_time: float = 0.0

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def suite_records(self, suite: str) -> list:
        return [r for r in self.records if r.suite == suite]

    def summary(self) -> dict:
        suites = {}
        for name in self.config.suites:
            recs = self.suite_records(name)
            values = [r.residual for r in recs if r.residual is not None]
            suites[name] = {
                "max_residual": max(values) if values else None,
                "threshold": self.config.threshold(name),
                "passed": sum(r.passed for r in recs),
                "failed": sum(not r.passed for r in recs),
                "errors": sum(r.error is not None for r in recs),
            }
        return {
            "suites": suites,
            "passed": sum(r.passed for r in self.records),
            "failed": sum(not r.passed for r in self.records),
            "all_pass": self.all_pass,
        }

    def to_dict(self, timing: bool = False) -> dict:
        scenario = self.config.to_dict()
        for key in ("output_path", "output_format"):
            scenario.pop(key)
        summary = self.summary()
        if timing:
            summary["wall_time"] = self.wall_time
        return {
            "scenario": scenario,
            "records": [r.to_dict() for r in self.records],
            "summary": summary,
        }


def format_float(value: float) -> str:
    if not math.isfinite(value):
        return "null"
    return f"{value:.5e}"


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if hasattr(obj, "item"):  # numpy scalar
        return _encode(obj.item(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def emit_report(report: VerificationReport, fmt: str = "json", timing: bool = False) -> bytes:
    """Encode a report as JSON or CSV bytes."""
    if fmt == "json":
        return (_encode(report.to_dict(timing), 2, 0) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "point", "residual", "threshold", "pass"])
        for r in report.records:
            residual = "" if r.residual is None else format_float(r.residual)
            writer.writerow([r.suite, r.point, residual, format_float(r.threshold), str(r.passed).lower()])
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


def write_report(report: VerificationReport, path: str, fmt: str = "json", timing: bool = False) -> None:
    data = emit_report(report, fmt, timing)
    with open(path, "wb") as fh:
        fh.write(data)
