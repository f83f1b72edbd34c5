"""Batch verification of the geometric identities on sampled points."""
from .config import SUITES, ScenarioConfig, parse_config
from .report import Record, VerificationReport, emit_report, write_report
from .runner import run_suites

__all__ = [
    "SUITES",
    "ScenarioConfig",
    "parse_config",
    "Record",
    "VerificationReport",
    "emit_report",
    "write_report",
    "run_suites",
]
