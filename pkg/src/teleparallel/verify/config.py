"""Scenario configuration for the verification harness.

A scenario is a JSON object::

    {
      "manifold": {"simplex": 3} | {"quantum": 2},
      "metric": {"preset": "fisher_rao" | "bkm" | "bures" | "deformed" | "wigner_yanase",
                 "kappa": 0.5},
      "samples": 100, "seed": 0,
      "fd_step": 0.01, "richardson": true,
      "tolerance": 1e-5, "tolerances": {"torsion": 1e-6},
      "suites": ["duality", "torsion"],
      "output": {"path": "report.json", "format": "json"}
    }

Only ``manifold`` is required; the metric defaults to ``fisher_rao`` on the
simplex and must be given for quantum states.  Without an explicit
``tolerance`` the curvature and geodesic suites use ``1e-4`` and every other
suite ``1e-5``; entries of ``tolerances`` always win.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

from ..core import DiffConfig
from ..errors import ConfigError
from ..monotone import PRESETS, MonotoneFunction, preset

SUITES = (
    "duality",
    "torsion",
    "curvature",
    "amari-symmetry",
    "geodesic",
    "reduction",
    "petz-identity",
)
SIMPLEX_SUITES = tuple(s for s in SUITES if s != "petz-identity")
FORMATS = ("json", "csv")
DEFAULT_TOLERANCE = 1e-5
# Suites built on second derivatives (nested finite differences or sampled
# curves) get a looser built-in threshold; an explicit "tolerance" overrides it.
SUITE_TOLERANCES = {"curvature": 1e-4, "geodesic": 1e-4}

_TOP_LEVEL = {
    "manifold", "metric", "samples", "seed", "fd_step", "richardson",
    "tolerance", "tolerances", "suites", "output",
}


@dataclass(frozen=True)
class ScenarioConfig:
    manifold: str
    size: int
    metric: str
    kappa: Optional[float] = None
    samples: int = 100
    seed: int = 0
    fd_step: float = DiffConfig.step
    richardson: bool = True
    tolerance: float = DEFAULT_TOLERANCE
    tolerances: dict = field(default_factory=dict)
    suites: tuple = ()
    output_path: Optional[str] = None
    output_format: str = "json"

    def threshold(self, suite: str) -> float:
        return float(self.tolerances.get(suite, self.tolerance))

    def diff_config(self) -> DiffConfig:
        return DiffConfig(step=self.fd_step, richardson=self.richardson)

    def monotone(self) -> MonotoneFunction:
        return preset(self.metric, self.kappa)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["suites"] = list(self.suites)
        d["tolerances"] = dict(sorted(self.tolerances.items()))
        return d


def _line_of(text: str, key: str) -> Optional[int]:
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a JSON scenario, filling in defaults."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, line=exc.lineno) from None
    if not isinstance(raw, dict):
        raise ConfigError("scenario must be a JSON object", line=1)

    def fail(msg, key):
        raise ConfigError(msg, field=key, line=_line_of(text, key.split(".")[0]))

    unknown = sorted(set(raw) - _TOP_LEVEL)
    if unknown:
        fail(f"unknown key(s) {unknown}", unknown[0])

    man = raw.get("manifold")
    if not isinstance(man, dict) or len(man) != 1:
        fail('expected {"simplex": n} or {"quantum": dim}', "manifold")
    (kind, size), = man.items()
    if kind not in ("simplex", "quantum"):
        fail(f"unknown manifold {kind!r}", "manifold")
    if not isinstance(size, int) or isinstance(size, bool) or size < 2:
        fail("manifold size must be an integer >= 2", "manifold")

    metric = raw.get("metric", "fisher_rao" if kind == "simplex" else None)
    kappa = None
    if metric is None:
        fail("quantum scenarios need a metric preset", "metric")
    if isinstance(metric, dict):
        extra = sorted(set(metric) - {"preset", "kappa"})
        if extra:
            fail(f"unknown metric key(s) {extra}", "metric")
        kappa = metric.get("kappa")
        metric = metric.get("preset")
    if not isinstance(metric, str):
        fail("metric preset must be a string", "metric")
    metric = metric.lower().replace("-", "_")
    if metric == "fisher_rao":
        if kind != "simplex":
            fail("fisher_rao is only available on the simplex", "metric")
        if kappa is not None:
            fail("fisher_rao takes no kappa", "metric")
    else:
        if kind == "simplex":
            fail(f"preset {metric!r} is a quantum metric; the simplex uses fisher_rao", "metric")
        if metric not in PRESETS:
            fail(f"unknown preset {metric!r}; choose from {sorted(PRESETS)}", "metric")
        if kappa is not None:
            if not isinstance(kappa, (int, float)) or isinstance(kappa, bool):
                fail("kappa must be a number", "metric")
            kappa = float(kappa)
        try:
            preset(metric, kappa)
        except ValueError as exc:
            fail(str(exc), "metric")

    samples = raw.get("samples", 100)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
        fail("samples must be an integer >= 1", "samples")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        fail("seed must be an unsigned 64-bit integer", "seed")
    fd_step = raw.get("fd_step", DiffConfig.step)
    if not isinstance(fd_step, (int, float)) or not 1e-9 <= fd_step <= 1e-2:
        fail("fd_step must be a number in [1e-9, 1e-2]", "fd_step")
    richardson = raw.get("richardson", True)
    if not isinstance(richardson, bool):
        fail("richardson must be true or false", "richardson")
    tolerance = raw.get("tolerance", DEFAULT_TOLERANCE)
    if not isinstance(tolerance, (int, float)) or isinstance(tolerance, bool) or not tolerance > 0:
        fail("tolerance must be a positive number", "tolerance")

    allowed = SIMPLEX_SUITES if kind == "simplex" else SUITES
    tolerances = raw.get("tolerances", {})
    if not isinstance(tolerances, dict):
        fail("tolerances must map suite names to numbers", "tolerances")
    for name, value in tolerances.items():
        if name not in SUITES:
            fail(f"unknown suite {name!r}", "tolerances")
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0:
            fail(f"tolerance for {name!r} must be a positive number", "tolerances")

    tolerances = dict(tolerances)
    if "tolerance" not in raw:
        for name, value in SUITE_TOLERANCES.items():
            tolerances.setdefault(name, value)

    suites = raw.get("suites", [])
    if not isinstance(suites, list) or not all(isinstance(s, str) for s in suites):
        fail("suites must be a list of suite names", "suites")
    for s in suites:
        if s not in SUITES:
            fail(f"unknown suite {s!r}; choose from {list(SUITES)}", "suites")
        if s not in allowed:
            fail(f"suite {s!r} does not apply to the {kind} manifold", "suites")
    chosen = tuple(s for s in allowed if s in suites) if suites else allowed

    output = raw.get("output", {})
    if not isinstance(output, dict) or set(output) - {"path", "format"}:
        fail('output must look like {"path": ..., "format": "json"|"csv"}', "output")
    path = output.get("path")
    if path is not None and not isinstance(path, str):
        fail("output path must be a string", "output")
    fmt = output.get("format", "json")
    if fmt not in FORMATS:
        fail(f"output format must be one of {FORMATS}", "output")

    return ScenarioConfig(
        manifold=kind,
        size=size,
        metric=metric,
        kappa=kappa,
        samples=samples,
        seed=seed,
        fd_step=float(fd_step),
        richardson=richardson,
        tolerance=float(tolerance),
        tolerances={k: float(v) for k, v in tolerances.items()},
        suites=chosen,
        output_path=path,
        output_format=fmt,
    )
