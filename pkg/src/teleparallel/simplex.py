"""The open probability simplex with the Fisher-Rao metric.

Probability vectors live in R^n; the chart keeps the first n-1 components.
The mixture frame is the constant frame of translations ``a_k``; its almost
dual coframe is ``d(p . b_k)``.  The gradient frame of that coframe is the
frame of fundamental fields of the multiplicative action of R^n_+, whose
teleparallel connection is the exponential connection.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ManifoldChart
from .errors import DomainError, LeftManifold, SpecError

__all__ = [
    "SimplexFrameSpec",
    "SimplexChart",
    "check_probability",
    "check_simplex_tangent",
    "fisher_rao_metric",
    "mixture_frame",
    "mixture_geodesic",
    "exponential_gradient_frame",
    "rplus_action",
    "exponential_geodesic",
    "simplex_chart",
]

VALID_MARGIN = 1e-9
SAMPLE_FLOOR = 1e-2


def check_probability(p, tol=1e-12) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise DomainError("a probability vector needs at least two entries")
    if not np.all(p > 0.0):
        raise DomainError(f"probability vector must be strictly positive, got {p}")
    if abs(p.sum() - 1.0) > tol:
        raise DomainError(f"probability vector sums to {p.sum()!r}, not 1")
    return p


def check_simplex_tangent(a, tol=1e-12) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if abs(a.sum()) > tol * max(1.0, np.abs(a).max()):
        raise DomainError(f"tangent vector must sum to zero, got sum {a.sum()!r}")
    return a


@dataclass(frozen=True, eq=False)
class SimplexFrameSpec:
    """Directions of the mixture frame (``a_vectors``) and of the coframe
    (``b_vectors``); both arrays have shape ``(n-1, n)``."""

    a_vectors: np.ndarray
    b_vectors: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a_vectors, dtype=float))
        b = np.atleast_2d(np.asarray(self.b_vectors, dtype=float))
        object.__setattr__(self, "a_vectors", a)
        object.__setattr__(self, "b_vectors", b)
        if a.shape != b.shape or a.shape[1] != a.shape[0] + 1:
            raise SpecError(f"expected two (n-1, n) arrays, got {a.shape} and {b.shape}")
        for name, fam in (("a", a), ("b", b)):
            if np.max(np.abs(fam.sum(axis=1))) > 1e-12 * max(1.0, np.abs(fam).max()):
                raise SpecError(f"{name}-vectors must each sum to zero")
            if np.linalg.matrix_rank(fam) < fam.shape[0]:
                raise SpecError(f"{name}-vectors are linearly dependent")
        c = self.pairing
        if np.linalg.cond(c) > 1e12:
            raise SpecError("pairing matrix a_j . b_k is singular")

    @classmethod
    def default(cls, n: int) -> "SimplexFrameSpec":
        """``a_k = b_k = e_k - e_n``: the mixture frame becomes the chart frame."""
        if n < 2:
            raise SpecError("the simplex needs n >= 2")
        vecs = np.eye(n)[: n - 1] - np.eye(n)[n - 1]
        return cls(vecs, vecs.copy())

    @property
    def n(self) -> int:
        return self.a_vectors.shape[1]

    @property
    def pairing(self) -> np.ndarray:
        """``C[k, j] = a_j . b_k``."""
        return self.b_vectors @ self.a_vectors.T


def fisher_rao_metric(p, u, v) -> float:
    """Weighted scalar product ``sum_j u_j v_j / p_j``."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0.0):
        raise DomainError(f"Fisher-Rao metric needs a strictly positive p, got {p}")
    return float(np.sum(np.asarray(u, dtype=float) * np.asarray(v, dtype=float) / p))


def mixture_frame(spec: SimplexFrameSpec, p) -> np.ndarray:
    """Ambient components (columns) of the translation frame; independent of ``p``."""
    check_probability(p)
    return spec.a_vectors.T.copy()


def mixture_geodesic(p, v, t: float) -> np.ndarray:
    p = check_probability(p)
    v = check_simplex_tangent(v)
    q = p + t * v
    if np.any(q <= 0.0):
        raise LeftManifold(t, f"p + t v leaves the simplex at t={t:.6g}")
    return q


def exponential_gradient_frame(spec: SimplexFrameSpec, p) -> np.ndarray:
    """Ambient columns ``Y_j = ((b_j^i - p . b_j) p^i)_i``."""
    p = check_probability(p, tol=1e-9)
    b = spec.b_vectors
    return ((b - (b @ p)[:, None]) * p).T


def rplus_action(q, p) -> np.ndarray:
    """Componentwise rescaling followed by renormalisation."""
    q = np.asarray(q, dtype=float)
    if np.any(q <= 0.0):
        raise DomainError(f"group element must be strictly positive, got {q}")
    p = check_probability(p, tol=1e-9)
    w = q * p
    return w / w.sum()


def exponential_geodesic(p, v, t: float) -> np.ndarray:
    """``p_j exp(t v_j)`` renormalised; defined for every real ``t``."""
    p = check_probability(p, tol=1e-9)
    e = t * np.asarray(v, dtype=float)
    w = np.log(p) + e
    w = np.exp(w - w.max())
    return w / w.sum()


class SimplexChart(ManifoldChart):
    """Chart ``x = (p_1, ..., p_{n-1})`` of the open simplex with Fisher-Rao metric."""

    def __init__(self, spec: SimplexFrameSpec, margin=VALID_MARGIN, sample_floor=SAMPLE_FLOOR):
        self.spec = spec
        self.n = spec.n
        self.dim = self.n - 1
        self.margin = float(margin)
        self.sample_floor = float(sample_floor)
        # ambient = jac @ chart for tangent vectors
        self.jac = np.vstack([np.eye(self.dim), -np.ones((1, self.dim))])
        b = spec.b_vectors
        self._coframe = b[:, :-1] - b[:, -1:]
        self._frame = spec.a_vectors[:, :-1].T.copy()

    def probability(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.append(x, 1.0 - x.sum())

    def coords(self, p) -> np.ndarray:
        return np.asarray(p, dtype=float)[:-1].copy()

    def to_ambient(self, u) -> np.ndarray:
        return self.jac @ np.asarray(u, dtype=float)

    def is_valid(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,) or not np.all(np.isfinite(x)):
            return False
        return bool(np.all(self.probability(x) > self.margin))

    def length_scale(self, x) -> float:
        return float(self.probability(x).min())

    def sample(self, rng) -> np.ndarray:
        while True:
            p = rng.dirichlet(np.ones(self.n))
            if p.min() > max(self.sample_floor, self.margin):
                return self.coords(p)

    def metric_at(self, x) -> np.ndarray:
        p = self.probability(x)
        g = self.jac.T @ (self.jac / p[:, None])
        return 0.5 * (g + g.T)

    def frame_at(self, x) -> np.ndarray:
        return self._frame.copy()

    def coframe_at(self, x) -> np.ndarray:
        return self._coframe.copy()

    def explicit_dual_frame_at(self, x) -> np.ndarray:
        """Chart components of the closed-form exponential frame."""
        p = self.probability(x)
        b = self.spec.b_vectors
        y = ((b - (b @ p)[:, None]) * p).T
        return y[:-1]


def simplex_chart(spec: SimplexFrameSpec | None = None, n: int | None = None, **kwargs) -> SimplexChart:
    """Build the chart for ``n`` outcomes; ``spec`` defaults to ``a_k = b_k = e_k - e_n``."""
    if spec is None:
        if n is None:
            raise SpecError("give a frame spec or the number of outcomes")
        spec = SimplexFrameSpec.default(n)
    elif n is not None and n != spec.n:
        raise SpecError(f"spec is for n={spec.n}, not n={n}")
    if spec.n < 2:
        raise SpecError("the simplex needs n >= 2")
    return SimplexChart(spec, **kwargs)
