"""Sample points, run the requested suites, collect a report.

Points are drawn from one generator seeded with ``cfg.seed``.  Auxiliary
randomness inside a suite comes from ``default_rng([seed, point, suite])`` so
a record does not depend on which other suites ran or on how the points were
spread over workers.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..errors import ConfigError, GeometryError
from .config import SUITES, ScenarioConfig
from .report import Record, VerificationReport, write_report
from .suites import SUITE_FUNCTIONS, Scenario

THREADS_ENV = "VERIFY_THREADS"

_scenario_cache: dict = {}


def worker_count(samples: int) -> int:
    raw = os.environ.get(THREADS_ENV)
    cap = os.cpu_count() or 1
    if raw is not None and raw.strip():
        try:
            cap = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
        if cap < 1:
            raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return max(1, min(cap, samples))


def _scenario(cfg: ScenarioConfig) -> Scenario:
    key = repr(cfg)
    if key not in _scenario_cache:
        _scenario_cache[key] = Scenario.build(cfg)
    return _scenario_cache[key]


def sample_points(cfg: ScenarioConfig) -> np.ndarray:
    sc = _scenario(cfg)
    rng = np.random.default_rng(cfg.seed)
    return np.array([sc.chart.sample(rng) for _ in range(cfg.samples)])


def check_point(cfg: ScenarioConfig, index: int, x) -> list:
    """Run every requested suite at one point; failures become error records."""
    sc = _scenario(cfg)
    out = []
    for suite in cfg.suites:
        rng = np.random.default_rng([cfg.seed, index, SUITES.index(suite)])
        threshold = cfg.threshold(suite)
        try:
            residual, details = SUITE_FUNCTIONS[suite](sc, x, rng)
        except (GeometryError, ArithmeticError, np.linalg.LinAlgError) as exc:
            out.append(Record(suite, index, None, threshold, False, {}, f"{type(exc).__name__}: {exc}"))
            continue
        ok = bool(np.isfinite(residual) and residual < threshold)
        out.append(Record(suite, index, float(residual), threshold, ok, details))
    return out


def _check_chunk(args):
    cfg, items = args
    return [check_point(cfg, i, x) for i, x in items]


def run_suites(cfg: ScenarioConfig, workers: int | None = None, write: bool = True) -> VerificationReport:
    """Run ``cfg`` and return its report; also write it when ``cfg.output_path`` is set."""
    start = time.perf_counter()
    points = sample_points(cfg) if cfg.suites else np.empty((0, 0))
    workers = worker_count(max(1, len(points))) if workers is None else max(1, int(workers))
    items = list(enumerate(points))
    if workers == 1 or len(items) < 2:
        per_point = [check_point(cfg, i, x) for i, x in items]
    else:
        chunks = [items[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_chunk, [(cfg, c) for c in chunks]))
        per_point = [None] * len(items)
        for chunk, res in zip(chunks, results):
            for (i, _), recs in zip(chunk, res):
                per_point[i] = recs
    # order: suite by suite, points ascending inside a suite
    records = [rec for suite in cfg.suites for recs in per_point for rec in recs if rec.suite == suite]
    report = VerificationReport(cfg, records, time.perf_counter() - start)
    if write and cfg.output_path:
        write_report(report, cfg.output_path, cfg.output_format)
    return report
