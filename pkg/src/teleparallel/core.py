"""Chart-level engine for teleparallel connections and their metric duals.

Everything here works on a manifold presented through a single global chart
(:class:`ManifoldChart`).  Points are real coordinate vectors, frames are
square matrices whose *columns* are the chart components of the frame vectors
and coframes are square matrices whose *rows* are the chart components of the
one-forms.

Index convention, used everywhere in the package::

    gamma[i, j, k] = component i of  nabla_{d_j} d_k

so a covariant derivative reads ``(nabla_U W)^i = U^j d_j W^i + gamma[i, j, k] U^j W^k``.

Derivatives of frames, metrics and connection coefficients are taken with
central differences.  The step is *relative*: the displacement used at a point
``x`` is ``cfg.step * m.length_scale(x)``, where ``length_scale`` is a lower
bound on the distance to the chart boundary.  Metrics of information geometry
blow up at the boundary, so a fixed absolute step would make every residual
meaningless there.
"""
from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    InvalidPoint,
    LeftManifold,
    SingularFrame,
    SingularMetric,
    TooFewSamples,
)

__all__ = [
    "DiffConfig",
    "ManifoldChart",
    "EuclideanChart",
    "GeodesicPath",
    "check_frame",
    "check_metric",
    "partials",
    "directional_derivative",
    "weitzenbock_coefficients",
    "levi_civita_coefficients",
    "torsion_components",
    "lie_bracket",
    "frame_brackets",
    "exterior_derivative",
    "curvature_components",
    "gradient_frame",
    "dual_weitzenbock_pair",
    "duality_residuals",
    "duality_residual",
    "amari_tensor_components",
    "amari_tensor_from_dual",
    "symmetry_defects",
    "geodesic_integrate",
    "covariant_acceleration",
    "weitzenbock_field",
    "dual_weitzenbock_field",
    "levi_civita_field",
    "zero_connection",
    "pairing_spread",
]

MAX_CONDITION = 1e12

Connection = Callable[[np.ndarray], np.ndarray]
MatrixField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class DiffConfig:
    """Finite-difference and ODE settings.

    ``step`` is relative to the chart's local length scale.  With
    ``richardson`` on, three nested central differences (h, h/2, h/4) are
    extrapolated to sixth order.
    """

    step: float = 1e-2
    richardson: bool = True
    ode_steps: int = 1000

    def __post_init__(self):
        if not (1e-9 <= self.step <= 1e-2):
            raise ValueError(f"step must lie in [1e-9, 1e-2], got {self.step!r}")
        if int(self.ode_steps) < 10:
            raise ValueError(f"ode_steps must be >= 10, got {self.ode_steps!r}")


class ManifoldChart(abc.ABC):
    """A manifold with one global chart, a metric, a frame and an almost dual coframe.

    Subclasses provide the evaluators; the dual (gradient) frame, the pairing
    matrix and point validation come for free.
    """

    dim: int

    @abc.abstractmethod
    def metric_at(self, x: np.ndarray) -> np.ndarray:
        """Metric matrix ``G[j, k]`` at ``x``."""

    @abc.abstractmethod
    def frame_at(self, x: np.ndarray) -> np.ndarray:
        """Frame matrix; column ``a`` holds the components of ``X_a``."""

    @abc.abstractmethod
    def coframe_at(self, x: np.ndarray) -> np.ndarray:
        """Coframe matrix; row ``j`` holds the components of ``theta^j``."""

    @abc.abstractmethod
    def is_valid(self, x: np.ndarray) -> bool:
        """Whether ``x`` lies in the (numerically) valid region of the chart."""

    @abc.abstractmethod
    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """Draw a random valid point."""

    def length_scale(self, x: np.ndarray) -> float:
        """Lower bound on the distance from ``x`` to the chart boundary."""
        return 1.0

    def dual_frame_at(self, x: np.ndarray) -> np.ndarray:
        """Gradient frame of the coframe with respect to the metric."""
        return gradient_frame(self.metric_at(x), self.coframe_at(x))

    def pairing_at(self, x: np.ndarray) -> np.ndarray:
        """Matrix ``C[j, k] = theta^j(X_k)``; constant for an almost dual pair."""
        return self.coframe_at(x) @ self.frame_at(x)

    def check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InvalidPoint(f"expected a point of shape ({self.dim},), got {x.shape}")
        if not self.is_valid(x):
            raise InvalidPoint(f"point {x} is outside the chart")
        return x


class EuclideanChart(ManifoldChart):
    """R^n with the identity metric and the coordinate frame."""

    def __init__(self, dim: int):
        self.dim = int(dim)

    def metric_at(self, x):
        return np.eye(self.dim)

    def frame_at(self, x):
        return np.eye(self.dim)

    def coframe_at(self, x):
        return np.eye(self.dim)

    def is_valid(self, x):
        return bool(np.all(np.isfinite(x)))

    def sample(self, rng):
        return rng.standard_normal(self.dim)


# ---------------------------------------------------------------------------
# validation helpers


def check_frame(e, name="frame") -> np.ndarray:
    e = np.asarray(e, dtype=float)
    if e.ndim != 2 or e.shape[0] != e.shape[1]:
        raise SingularFrame(f"{name} must be square, got shape {e.shape}")
    if not np.all(np.isfinite(e)):
        raise SingularFrame(f"{name} has non-finite entries")
    cond = np.linalg.cond(e)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularFrame(f"{name} condition number {cond:.3g} exceeds {MAX_CONDITION:g}")
    return e


def check_metric(g) -> np.ndarray:
    """Validate and return a symmetric positive definite metric matrix."""
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise SingularMetric(f"metric must be square, got shape {g.shape}")
    scale = np.max(np.abs(g))
    if not np.isfinite(scale) or scale == 0.0:
        raise SingularMetric("metric is zero or non-finite")
    if np.max(np.abs(g - g.T)) > 1e-12 * scale:
        raise SingularMetric("metric is not symmetric")
    eig = np.linalg.eigvalsh(0.5 * (g + g.T))
    if eig[0] <= 0.0:
        raise SingularMetric(f"metric is not positive definite (min eigenvalue {eig[0]:.3g})")
    if eig[-1] / eig[0] > MAX_CONDITION:
        raise SingularMetric(f"metric condition number {eig[-1] / eig[0]:.3g} exceeds {MAX_CONDITION:g}")
    return g


# ---------------------------------------------------------------------------
# finite differences


def _central(f, x, u, h, richardson):
    def diff(hh):
        return (np.asarray(f(x + hh * u)) - np.asarray(f(x - hh * u))) / (2.0 * hh)

    if not richardson:
        return diff(h)
    table = [diff(h / 2.0**level) for level in range(3)]
    for order in (1, 2):
        w = 4.0**order
        table = [(w * table[i + 1] - table[i]) / (w - 1.0) for i in range(len(table) - 1)]
    return table[0]


def _safe_step(m: ManifoldChart, x, u, h):
    # one step-halving retry when the stencil pokes out of the chart
    for hh in (h, 0.5 * h):
        if m.is_valid(x + hh * u) and m.is_valid(x - hh * u):
            return hh
    raise InvalidPoint(f"finite-difference stencil of size {h:.3g} leaves the chart at {x}")


def directional_derivative(f, m: ManifoldChart, x, u, cfg: DiffConfig = DiffConfig()):
    """Derivative of ``f`` at ``x`` along the (not necessarily unit) vector ``u``."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0.0:
        return np.zeros_like(np.asarray(f(x), dtype=float))
    unit = u / norm
    h = _safe_step(m, x, unit, cfg.step * m.length_scale(x))
    return norm * _central(f, x, unit, h, cfg.richardson)


def partials(f, m: ManifoldChart, x, cfg: DiffConfig = DiffConfig()) -> np.ndarray:
    """Stack of chart partial derivatives: ``out[j] = d_j f(x)``."""
    x = np.asarray(x, dtype=float)
    h0 = cfg.step * m.length_scale(x)
    basis = np.eye(x.size)
    out = []
    for j in range(x.size):
        h = _safe_step(m, x, basis[j], h0)
        out.append(_central(f, x, basis[j], h, cfg.richardson))
    return np.stack(out)


# ---------------------------------------------------------------------------
# connections


def weitzenbock_coefficients(
    m: ManifoldChart,
    x,
    cfg: DiffConfig = DiffConfig(),
    frame: Optional[MatrixField] = None,
) -> np.ndarray:
    """Coefficients of the connection that makes every frame vector parallel.

    ``gamma[i, j, k] = -sum_a d_j E[i, a] * inv(E)[a, k]``.  ``frame`` defaults
    to ``m.frame_at``; pass ``m.dual_frame_at`` (or any other frame field) to
    get the teleparallel connection of that frame instead.
    """
    frame = m.frame_at if frame is None else frame
    x = m.check_point(x)
    e = check_frame(frame(x))
    de = partials(frame, m, x, cfg)  # de[j, i, a]
    return -np.einsum("jia,ak->ijk", de, np.linalg.inv(e))


def levi_civita_coefficients(m: ManifoldChart, x, cfg: DiffConfig = DiffConfig()) -> np.ndarray:
    """Christoffel symbols of the metric, from finite differences of ``m.metric_at``."""
    x = m.check_point(x)
    g = check_metric(m.metric_at(x))
    dg = partials(m.metric_at, m, x, cfg)  # dg[j, l, k] = d_j G_lk
    lower = 0.5 * (
        np.einsum("jlk->ljk", dg) + np.einsum("kjl->ljk", dg) - dg
    )  # lower[l, j, k]
    return np.einsum("il,ljk->ijk", np.linalg.inv(g), lower)


def zero_connection(dim: int) -> Connection:
    zero = np.zeros((dim, dim, dim))
    return lambda x: zero


def weitzenbock_field(m: ManifoldChart, cfg: DiffConfig = DiffConfig(), frame=None) -> Connection:
    """Connection field ``x -> gamma(x)`` of the teleparallel connection of ``frame``."""
    return lambda x: weitzenbock_coefficients(m, x, cfg, frame)


def dual_weitzenbock_field(m: ManifoldChart, cfg: DiffConfig = DiffConfig()) -> Connection:
    return lambda x: weitzenbock_coefficients(m, x, cfg, m.dual_frame_at)


def levi_civita_field(m: ManifoldChart, cfg: DiffConfig = DiffConfig()) -> Connection:
    return lambda x: levi_civita_coefficients(m, x, cfg)


def torsion_components(c) -> np.ndarray:
    """``T[i, j, k] = gamma[i, j, k] - gamma[i, k, j]``."""
    c = np.asarray(c)
    return c - np.swapaxes(c, 1, 2)


def frame_brackets(
    m: ManifoldChart, x, cfg: DiffConfig = DiffConfig(), frame: Optional[MatrixField] = None
) -> np.ndarray:
    """All Lie brackets of a frame: ``out[i, j, k] = [X_j, X_k]^i``."""
    frame = m.frame_at if frame is None else frame
    x = m.check_point(x)
    e = np.asarray(frame(x), dtype=float)
    de = partials(frame, m, x, cfg)  # de[m, i, a] = d_m X_a^i
    along = np.einsum("mj,mik->ijk", e, de)  # X_j(X_k^i)
    return along - np.swapaxes(along, 1, 2)


def lie_bracket(
    m: ManifoldChart,
    x,
    j: int,
    k: int,
    cfg: DiffConfig = DiffConfig(),
    frame: Optional[MatrixField] = None,
) -> np.ndarray:
    """Components of ``[X_j, X_k]`` at ``x``."""
    return frame_brackets(m, x, cfg, frame)[:, j, k]


def exterior_derivative(
    m: ManifoldChart, x, cfg: DiffConfig = DiffConfig(), coframe: Optional[MatrixField] = None
) -> np.ndarray:
    """``out[l, a, b] = d_a Theta[l, b] - d_b Theta[l, a]`` for the coframe rows."""
    coframe = m.coframe_at if coframe is None else coframe
    x = m.check_point(x)
    dth = partials(coframe, m, x, cfg)  # dth[a, l, b]
    out = np.einsum("alb->lab", dth)
    return out - np.swapaxes(out, 1, 2)


def curvature_components(
    m: ManifoldChart, conn: Connection, x, cfg: DiffConfig = DiffConfig()
) -> np.ndarray:
    """Riemann tensor ``R[i, l, j, k]`` = component i of ``R(d_j, d_k) d_l``."""
    x = m.check_point(x)
    gam = np.asarray(conn(x))
    dgam = partials(conn, m, x, cfg)  # dgam[j, i, k, l] = d_j gamma[i, k, l]
    deriv = np.einsum("jikl->iljk", dgam)
    quad = np.einsum("ijm,mkl->iljk", gam, gam)
    return deriv - np.swapaxes(deriv, 2, 3) + quad - np.swapaxes(quad, 2, 3)


def gradient_frame(g, theta) -> np.ndarray:
    """Metric gradients of the coframe rows: column ``j`` is ``inv(G) @ theta[j]``."""
    g = check_metric(g)
    theta = check_frame(theta, "coframe")
    return np.linalg.solve(g, theta.T)


def dual_weitzenbock_pair(m: ManifoldChart, x, cfg: DiffConfig = DiffConfig()):
    """Return ``(gamma, gamma_dual)``: the teleparallel connection of the frame
    and of the gradient frame of its almost dual coframe."""
    return (
        weitzenbock_coefficients(m, x, cfg),
        weitzenbock_coefficients(m, x, cfg, m.dual_frame_at),
    )


def _covariant_along(e, de, gam):
    # out[i, :, j] = nabla_{E_i} E_j, from E, dE[m, :, a] and gamma
    deriv = np.einsum("mi,mpj->pij", e, de)
    conn = np.einsum("pmq,mi,qj->pij", gam, e, e)
    return np.transpose(deriv + conn, (1, 0, 2))


def duality_residuals(
    m: ManifoldChart,
    c1: Connection,
    c2: Connection,
    x,
    cfg: DiffConfig = DiffConfig(),
    fields: Optional[MatrixField] = None,
) -> np.ndarray:
    """``out[i, j, k] = |E_i G(E_j, E_k) - G(nabla_{E_i} E_j, E_k) - G(E_j, nabla*_{E_i} E_k)|``.

    The vector fields ``E`` default to the manifold's frame; any smooth field
    of invertible matrices can be passed through ``fields``.
    """
    fields = m.frame_at if fields is None else fields
    x = m.check_point(x)
    e = np.asarray(fields(x), dtype=float)
    g = check_metric(m.metric_at(x))
    n = m.dim

    def gram(y):
        ey = np.asarray(fields(y), dtype=float)
        return ey.T @ np.asarray(m.metric_at(y)) @ ey

    lhs = np.stack([directional_derivative(gram, m, x, e[:, i], cfg) for i in range(n)])
    de = partials(fields, m, x, cfg)
    cov1 = _covariant_along(e, de, np.asarray(c1(x)))
    cov2 = _covariant_along(e, de, np.asarray(c2(x)))
    t1 = np.einsum("ipj,pq,qk->ijk", cov1, g, e)
    t2 = np.einsum("pj,pq,iqk->ijk", e, g, cov2)
    return np.abs(lhs - t1 - t2)


def duality_residual(
    m: ManifoldChart,
    c1: Connection,
    c2: Connection,
    x,
    i: int,
    j: int,
    k: int,
    cfg: DiffConfig = DiffConfig(),
) -> float:
    """Duality residual for a single frame triple; see :func:`duality_residuals`."""
    return float(duality_residuals(m, c1, c2, x, cfg)[i, j, k])


def amari_tensor_components(m, conn, lc, g) -> np.ndarray:
    """``T[i, j, k] = G(nabla_i d_j, d_k) - G(nabla^G_i d_j, d_k)``."""
    conn, lc, g = np.asarray(conn), np.asarray(lc), np.asarray(g)
    if conn.shape != lc.shape or conn.shape[0] != g.shape[0]:
        raise ValueError("connection and metric shapes disagree")
    return np.einsum("lk,lij->ijk", g, conn - lc)


def amari_tensor_from_dual(dual, lc, g) -> np.ndarray:
    """The same tensor written through the dual connection:
    ``T[i, j, k] = G(d_j, nabla^G_i d_k) - G(d_j, nabla*_i d_k)``."""
    dual, lc, g = np.asarray(dual), np.asarray(lc), np.asarray(g)
    return np.einsum("jl,lik->ijk", g, lc - dual)


def symmetry_defects(t):
    """Max asymmetry of a 3-tensor in slots (1,2), (1,3) and (2,3)."""
    t = np.asarray(t)
    d12 = float(np.max(np.abs(t - np.transpose(t, (1, 0, 2)))))
    d13 = float(np.max(np.abs(t - np.transpose(t, (2, 1, 0)))))
    d23 = float(np.max(np.abs(t - np.transpose(t, (0, 2, 1)))))
    return d12, d13, d23


def pairing_spread(m: ManifoldChart, rng: np.random.Generator, samples: int = 32):
    """Per-entry variance of ``theta^j(X_k)`` over random points, and its mean."""
    stack = np.stack([m.pairing_at(m.sample(rng)) for _ in range(samples)])
    return stack.var(axis=0), stack.mean(axis=0)


# ---------------------------------------------------------------------------
# geodesics


@dataclass
class GeodesicPath:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray


def geodesic_integrate(
    conn: Connection,
    x0,
    v0,
    t_end: float,
    cfg: DiffConfig = DiffConfig(),
    is_valid: Optional[Callable[[np.ndarray], bool]] = None,
) -> GeodesicPath:
    """Fixed-step RK4 for ``x'' + gamma(x'; x') = 0`` on ``[0, t_end]``.

    ``cfg.ode_steps`` steps are taken per unit of parameter.  When
    ``is_valid`` rejects a stage point, :class:`LeftManifold` is raised with
    the partial path attached.
    """
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if is_valid is not None and not is_valid(x0):
        raise InvalidPoint(f"initial point {x0} is outside the chart")
    steps = max(1, math.ceil(cfg.ode_steps * abs(t_end)))
    h = t_end / steps
    ts = [0.0]
    xs = [x0]
    vs = [v0]

    def accel(x, v):
        if is_valid is not None and not is_valid(x):
            raise _Exit
        return -np.einsum("ijk,j,k->i", conn(x), v, v)

    x, v = x0, v0
    for s in range(steps):
        try:
            k1x, k1v = v, accel(x, v)
            k2x, k2v = v + 0.5 * h * k1v, accel(x + 0.5 * h * k1x, v + 0.5 * h * k1v)
            k3x, k3v = v + 0.5 * h * k2v, accel(x + 0.5 * h * k2x, v + 0.5 * h * k2v)
            k4x, k4v = v + h * k3v, accel(x + h * k3x, v + h * k3v)
        except _Exit:
            partial = GeodesicPath(np.array(ts), np.array(xs), np.array(vs))
            raise LeftManifold(ts[-1] + 0.5 * h, path=partial) from None
        x = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t = (s + 1) * h
        if is_valid is not None and not is_valid(x):
            partial = GeodesicPath(np.array(ts), np.array(xs), np.array(vs))
            raise LeftManifold(t, path=partial)
        ts.append(t)
        xs.append(x)
        vs.append(v)
    return GeodesicPath(np.array(ts), np.array(xs), np.array(vs))


class _Exit(Exception):
    pass


def covariant_acceleration(ts, xs, conn: Connection) -> np.ndarray:
    """Geodesic-equation residual ``x'' + gamma(x'; x')`` at interior samples.

    Velocities and accelerations come from five-point (fourth-order) stencils,
    so the first and last two samples are dropped.  Returns an array of shape
    ``(len(ts) - 4, dim)``.
    """
    ts = np.asarray(ts, dtype=float)
    xs = np.asarray(xs, dtype=float)
    if ts.size < 5 or xs.shape[0] != ts.size:
        raise TooFewSamples(f"need at least 5 samples, got {ts.size}")
    dt = np.diff(ts)
    if np.max(np.abs(dt - dt[0])) > 1e-9 * max(abs(dt[0]), 1e-300):
        raise TooFewSamples("samples must be uniformly spaced")
    h = dt[0]
    vel = (xs[:-4] - 8 * xs[1:-3] + 8 * xs[3:-1] - xs[4:]) / (12 * h)
    acc = (-xs[:-4] + 16 * xs[1:-3] - 30 * xs[2:-2] + 16 * xs[3:-1] - xs[4:]) / (12 * h * h)
    out = np.empty_like(acc)
    for n, (x, v, a) in enumerate(zip(xs[2:-2], vel, acc)):
        out[n] = a + np.einsum("ijk,j,k->i", conn(x), v, v)
    return out
