"""Command line entry point.

    verify run --config scenario.json [--out report.json] [--format json|csv] [--seed N]
    verify presets

Exit status is 0 when every record passes, 1 when any record fails and 2
when the scenario is rejected before anything is computed.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

from ..errors import ConfigError
from ..monotone import PRESETS
from .config import FORMATS, parse_config
from .report import emit_report
from .runner import run_suites

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="verify", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and write a report")
    run.add_argument("--config", required=True, help="path to a JSON scenario")
    run.add_argument("--out", help="report path (default: the scenario's output path, else stdout)")
    run.add_argument("--format", choices=FORMATS, help="report format (default: json)")
    run.add_argument("--seed", type=int, help="override the scenario seed")
    run.add_argument("--timing", action="store_true", help="include wall time in the JSON summary")

    sub.add_parser("presets", help="list the available metric presets")
    return parser


def _presets() -> int:
    print(f"{'fisher_rao':<15} {'sum u_j v_j / p_j':<50} classical Fisher-Rao metric (simplex only)")
    for name, (_, formula, metric) in PRESETS.items():
        print(f"{name:<15} {formula:<50} {metric}")
    return EXIT_OK


def _run(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.config}: {exc.strerror}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
        changes = {}
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("seed must be an unsigned 64-bit integer", field="seed")
            changes["seed"] = args.seed
        if args.out is not None:
            changes["output_path"] = args.out
        if args.format is not None:
            changes["output_format"] = args.format
        cfg = dataclasses.replace(cfg, **changes)
        report = run_suites(cfg, write=False)
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    data = emit_report(report, cfg.output_format, timing=args.timing)
    if cfg.output_path:
        try:
            with open(cfg.output_path, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            print(f"error: cannot write {cfg.output_path}: {exc.strerror}", file=sys.stderr)
            return EXIT_FAIL
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()

    summary = report.summary()
    for name, s in summary["suites"].items():
        worst = "n/a" if s["max_residual"] is None else f"{s['max_residual']:.3e}"
        print(
            f"{name:<15} max {worst}  threshold {s['threshold']:.1e}  "
            f"pass {s['passed']}  fail {s['failed']}  errors {s['errors']}",
            file=sys.stderr,
        )
    print(f"{report.wall_time:.1f}s", file=sys.stderr)
    return EXIT_OK if report.all_pass else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        return _presets()
    return _run(args)


if __name__ == "__main__":
    sys.exit(main())
