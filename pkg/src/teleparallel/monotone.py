"""Operator monotone functions that label quantum monotone metrics.

A preset ``f`` maps ``(0, inf)`` to ``(0, inf)``; the normalised ones satisfy
``f(1) = 1`` and ``f(x) = x f(1/x)``.  The formulas have removable
singularities at ``x = 1``; inside ``|x - 1| < 1e-6`` a short Taylor series is
used instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

__all__ = ["MonotoneFunction", "petz_f_eval", "PRESETS", "preset"]

SERIES_WINDOW = 1e-6


@dataclass(frozen=True)
class MonotoneFunction:
    """A Petz function preset.

    kind
        ``"bkm"``: ``kappa (x - 1) / ln x``; only ``kappa = 1`` is normalised,
        other values rescale the metric.
        ``"deformed"``: ``kappa (x - 1)(x^kappa + 1) / (2 (x^kappa - 1))`` for
        ``0 < kappa <= 1``; ``kappa = 1`` is the Bures (SLD) function ``(1 + x)/2``
        and the limit ``kappa -> 0`` is BKM.
        ``"wigner_yanase"``: ``((1 + sqrt x) / 2)^2``.
        ``"custom"``: any callable supplied by the user.
    """

    kind: str
    kappa: float = 1.0
    func: Optional[Callable] = field(default=None, compare=False)
    label: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("bkm", "deformed", "wigner_yanase", "custom"):
            raise DomainError(f"unknown monotone function kind {self.kind!r}")
        if not self.kappa > 0:
            raise DomainError(f"kappa must be positive, got {self.kappa!r}")
        if self.kind == "deformed" and self.kappa > 1:
            raise DomainError(f"deformed family needs 0 < kappa <= 1, got {self.kappa!r}")
        if self.kind == "custom" and self.func is None:
            raise DomainError("custom monotone function needs a callable")

    # constructors -------------------------------------------------------

    @classmethod
    def bkm(cls, kappa: float = 1.0) -> "MonotoneFunction":
        return cls("bkm", kappa)

    @classmethod
    def deformed(cls, kappa: float) -> "MonotoneFunction":
        return cls("deformed", kappa)

    @classmethod
    def bures(cls) -> "MonotoneFunction":
        return cls("deformed", 1.0)

    @classmethod
    def wigner_yanase(cls) -> "MonotoneFunction":
        return cls("wigner_yanase")

    @classmethod
    def custom(cls, func: Callable, label: str = "custom") -> "MonotoneFunction":
        return cls("custom", 1.0, func, label)

    # ------------------------------------------------------------------

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind == "deformed" and self.kappa == 1.0:
            return "bures"
        if self.kind in ("bkm", "deformed"):
            return f"{self.kind}(kappa={self.kappa:g})"
        return self.kind

    @property
    def normalized(self) -> bool:
        return self.kind != "bkm" or self.kappa == 1.0

    def __call__(self, x):
        return petz_f_eval(self, x)


def _bkm(x, kappa):
    u = x - 1.0
    near = np.abs(u) < SERIES_WINDOW
    safe = np.where(near, 2.0, x)
    out = (safe - 1.0) / np.log(safe)
    series = 1.0 + u / 2.0 - u * u / 12.0 + u**3 / 24.0
    return kappa * np.where(near, series, out)


def _deformed(x, a):
    u = x - 1.0
    near = np.abs(u) < SERIES_WINDOW
    safe = np.where(near, 2.0, x)
    log = np.log(safe)
    out = 0.5 * a * np.expm1(log) / np.expm1(a * log) * (np.exp(a * log) + 1.0)
    series = 1.0 + u / 2.0 + (a * a - 1.0) * u * u / 12.0 + (1.0 - a * a) * u**3 / 24.0
    return np.where(near, series, out)


def petz_f_eval(f: MonotoneFunction, x):
    """Evaluate ``f`` at ``x > 0`` (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError(f"Petz functions are defined for x > 0 only, got {x!r}")
    if f.kind == "bkm":
        out = _bkm(arr, f.kappa)
    elif f.kind == "deformed":
        out = _deformed(arr, f.kappa)
    elif f.kind == "wigner_yanase":
        out = 0.25 * (1.0 + np.sqrt(arr)) ** 2
    else:
        out = np.asarray(f.func(arr), dtype=float)
    return float(out) if np.ndim(out) == 0 else out


# name -> (factory taking kappa or None, formula, metric)
PRESETS = {
    "bkm": (lambda k: MonotoneFunction.bkm(1.0 if k is None else k),
            "kappa (x - 1) / ln(x)", "Bogoliubov-Kubo-Mori"),
    "bures": (lambda k: MonotoneFunction.bures(),
              "(1 + x) / 2", "Bures-Helstrom (SLD)"),
    "deformed": (lambda k: MonotoneFunction.deformed(0.5 if k is None else k),
                 "kappa (x - 1)(x^kappa + 1) / (2 (x^kappa - 1))", "deformed Bures family"),
    "wigner_yanase": (lambda k: MonotoneFunction.wigner_yanase(),
                      "((1 + sqrt(x)) / 2)^2", "Wigner-Yanase"),
}


def preset(name: str, kappa: Optional[float] = None) -> MonotoneFunction:
    try:
        factory = PRESETS[name][0]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return factory(kappa)
