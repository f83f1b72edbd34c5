"""Drive the batch harness from Python and read the report back.

Equivalent to ``verify run --config scenarios/qubit_bures.json``.
"""
import json
from pathlib import Path

from teleparallel.verify import emit_report, parse_config, run_suites

here = Path(__file__).resolve().parent.parent / "scenarios"
cfg = parse_config((here / "qubit_bures.json").read_text())
report = run_suites(cfg, write=False)

summary = json.loads(emit_report(report, "json"))["summary"]
for name, s in summary["suites"].items():
    status = "ok" if s["failed"] == 0 else "FAILS"
    print(f"{name:<15} max {s['max_residual']:.2e}  threshold {s['threshold']:.0e}  {status}")

# Bures has torsion, so the torsion and amari-symmetry suites fail by design.
print("all pass:", summary["all_pass"])
