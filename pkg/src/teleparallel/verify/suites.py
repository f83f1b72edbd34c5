"""Per-point identity checks.

Each suite takes a :class:`Scenario` and a chart point and returns
``(residual, details)``: one headline number that is compared with the
threshold, plus named sub-residuals for finer analysis.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .. import core
from ..core import DiffConfig
from ..errors import GeometryError, LeftManifold
from ..monotone import MonotoneFunction
from ..quantum import (
    QuantumChart,
    apply_K,
    apply_Tf,
    bkm_geodesic,
    deformed_geodesic,
    gradient_field,
    metric_gf,
    multipliers,
    quantum_chart,
    random_tangent,
    random_unitary,
    unitary_action,
)
from ..simplex import (
    exponential_geodesic,
    fisher_rao_metric,
    mixture_geodesic,
    rplus_action,
    simplex_chart,
)
from .config import ScenarioConfig

# geodesic sampling: t in [-CURVE_SPAN, CURVE_SPAN] at CURVE_SAMPLES points
CURVE_SPAN = 2.0
CURVE_SAMPLES = 81
# Hilbert-Schmidt / Euclidean size of the exponent direction of sampled curves
CURVE_SPEED = 0.25
MIXTURE_ODE_STEPS = 20
SELF_DUALITY_GRID = np.logspace(-3, 3, 121)


@dataclass
class Scenario:
    config: ScenarioConfig
    chart: object
    diff: DiffConfig
    monotone: MonotoneFunction | None = None

    @classmethod
    def build(cls, cfg: ScenarioConfig) -> "Scenario":
        diff = cfg.diff_config()
        if cfg.manifold == "simplex":
            return cls(cfg, simplex_chart(n=cfg.size), diff)
        f = cfg.monotone()
        return cls(cfg, quantum_chart(cfg.size, f), diff, f)

    @property
    def quantum(self) -> bool:
        return isinstance(self.chart, QuantumChart)

    def mixture(self):
        return core.weitzenbock_field(self.chart, self.diff)

    def dual(self):
        return core.dual_weitzenbock_field(self.chart, self.diff)


def _max(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


# ---------------------------------------------------------------------------


def duality(sc: Scenario, x, rng):
    m, cfg = sc.chart, sc.diff
    res = core.duality_residuals(m, sc.mixture(), sc.dual(), x, cfg)
    _, gam_dual = core.dual_weitzenbock_pair(m, x, cfg)
    gam_explicit = core.weitzenbock_coefficients(m, x, cfg, m.explicit_dual_frame_at)
    pairing = m.pairing_at(x)
    return _max(res), {
        "dual_vs_explicit_frame": _max(gam_dual - gam_explicit),
        "pairing_offset": _max(pairing - sc.chart.pairing_at(sc.chart.sample(rng))),
    }


def torsion(sc: Scenario, x, rng):
    m, cfg = sc.chart, sc.diff
    gam, gam_dual = core.dual_weitzenbock_pair(m, x, cfg)
    tor_mix = core.torsion_components(gam)
    tor_dual = core.torsion_components(gam_dual)
    # for a teleparallel connection Tor(Y_j, Y_k) = -[Y_j, Y_k]
    y = m.dual_frame_at(x)
    brackets = core.frame_brackets(m, x, cfg, m.dual_frame_at)
    on_frame = np.einsum("iab,aj,bk->ijk", tor_dual, y, y)
    closed = core.exterior_derivative(m, x, cfg)
    return max(_max(tor_mix), _max(tor_dual)), {
        "mixture": _max(tor_mix),
        "dual": _max(tor_dual),
        "dual_bracket_norm": _max(brackets),
        "bracket_identity": _max(on_frame + brackets),
        "coframe_exterior_derivative": _max(closed),
    }


def curvature(sc: Scenario, x, rng):
    m, cfg = sc.chart, sc.diff
    r_mix = _max(core.curvature_components(m, sc.mixture(), x, cfg))
    r_dual = _max(core.curvature_components(m, sc.dual(), x, cfg))
    return max(r_mix, r_dual), {"mixture": r_mix, "dual": r_dual}


def amari_symmetry(sc: Scenario, x, rng):
    m, cfg = sc.chart, sc.diff
    g = m.metric_at(x)
    gam, gam_dual = core.dual_weitzenbock_pair(m, x, cfg)
    lc = core.levi_civita_coefficients(m, x, cfg)
    t = core.amari_tensor_components(m, gam, lc, g)
    t_alt = core.amari_tensor_from_dual(gam_dual, lc, g)
    d12, d13, d23 = core.symmetry_defects(t)
    return max(d12, d13, d23), {
        "d12": d12,
        "d13": d13,
        "d23": d23,
        "dual_form_gap": _max(t - t_alt),
        "tensor_norm": _max(t),
    }


def _closed_form_curve(sc: Scenario, x, rng):
    """Sampled closed-form geodesic of the dual connection through ``x``."""
    m = sc.chart
    ts = np.linspace(-CURVE_SPAN, CURVE_SPAN, CURVE_SAMPLES)
    if not sc.quantum:
        v = rng.standard_normal(m.n)
        v *= CURVE_SPEED / np.linalg.norm(v)
        p = m.probability(x)
        ps = np.array([exponential_geodesic(p, v, t) for t in ts])
        orbit = max(_max(exponential_geodesic(p, v, t) - rplus_action(np.exp(t * v), p)) for t in ts[::10])
        return ts, ps[:, :-1], {
            "normalization": _max(ps.sum(axis=1) - 1.0),
            "positivity": float(ps.min()),
            "orbit_gap": orbit,
        }
    st = m.state(x)
    v = random_tangent(m.n, rng)
    v *= CURVE_SPEED / np.linalg.norm(v)
    f = sc.monotone
    if f.kind == "bkm":
        curve = lambda t: bkm_geodesic(st, v, t)
    else:
        a = {"deformed": f.kappa, "wigner_yanase": 0.5}.get(f.kind)
        if a is None:
            raise GeometryError(f"no closed-form geodesic for {f.name}")
        curve = lambda t: deformed_geodesic(st, v, t, a * a)
    states = [curve(t) for t in ts]
    xs = np.array([m.coords(s) for s in states])
    traces = np.array([np.trace(s.rho).real for s in states])
    return ts, xs, {
        "normalization": _max(traces - 1.0),
        "positivity": float(min(s.p[0] for s in states)),
    }


def _mixture_gap(sc: Scenario, x, rng):
    """Integrate the mixture connection and compare with the straight line."""
    m = sc.chart
    u = rng.standard_normal(m.dim)
    u *= CURVE_SPEED / np.linalg.norm(u)
    # RK4 integrates straight lines exactly, so a coarse grid loses nothing
    cfg = replace(sc.diff, ode_steps=MIXTURE_ODE_STEPS)
    try:
        path = core.geodesic_integrate(sc.mixture(), x, u, 1.0, cfg, m.is_valid)
    except LeftManifold as exc:
        path = exc.path
    gap = 0.0
    for t, xt in zip(path.t, path.x):
        if sc.quantum:
            exact = x + t * u
        else:
            exact = m.coords(mixture_geodesic(m.probability(x), m.to_ambient(u), t))
        gap = max(gap, _max(xt - exact))
    return gap


def geodesic(sc: Scenario, x, rng):
    ts, xs, details = _closed_form_curve(sc, x, rng)
    acc = core.covariant_acceleration(ts, xs, sc.dual())
    details["mixture_gap"] = _mixture_gap(sc, x, rng)
    return _max(acc), details


def reduction(sc: Scenario, x, rng):
    m = sc.chart
    if not sc.quantum:
        p = m.probability(x)
        g = m.metric_at(x)
        u, w = rng.standard_normal((2, m.dim))
        fr = fisher_rao_metric(p, m.to_ambient(u), m.to_ambient(w))
        frames = _max(m.dual_frame_at(x) - m.explicit_dual_frame_at(x))
        q1, q2 = rng.uniform(0.1, 10.0, (2, m.n))
        law = _max(rplus_action(q1, rplus_action(q2, p)) - rplus_action(q1 * q2, p))
        unit = _max(rplus_action(np.ones(m.n), p) - p)
        details = {
            "fisher_rao": abs(u @ g @ w - fr),
            "gradient_frame": frames,
            "group_law": law,
            "group_identity": unit,
        }
        return max(details.values()), details
    st = m.state(x)
    a, b = rng.standard_normal((2, m.n))
    a -= a.mean()
    b -= b.mean()
    vecs = st.vecs
    v = (vecs * a) @ vecs.conj().T
    w = (vecs * b) @ vecs.conj().T
    gap = abs(metric_gf(st, sc.monotone, v, w) - fisher_rao_metric(st.p, a, b))
    k_id = _max(apply_K(st, sc.monotone, np.eye(m.n)) - st.rho)
    trace = _max(np.trace(gradient_field(st, sc.monotone, m.omega), axis1=1, axis2=2))
    details = {"fisher_rao": gap, "k_identity": k_id, "gradient_trace": trace}
    return max(details.values()), details


def petz_identity(sc: Scenario, x, rng):
    f, m = sc.monotone, sc.chart
    grid = SELF_DUALITY_GRID
    self_dual = _max(f(grid) - grid * f(1.0 / grid))
    st = m.state(x)
    c = multipliers(st, f)
    a = random_tangent(m.n, rng)
    roundtrip = _max(apply_Tf(st, f, apply_K(st, f, a)) - a)
    u = random_unitary(m.n, rng)
    v, w = random_tangent(m.n, rng), random_tangent(m.n, rng)
    moved = unitary_action(u, st)
    uv, uw = u @ v @ u.conj().T, u @ w @ u.conj().T
    invariance = abs(metric_gf(st, f, v, w) - metric_gf(moved, f, uv, uw))
    spectrum = _max(moved.p - st.p)
    details = {
        "self_duality": self_dual,
        "multiplier_symmetry": _max(c - c.T),
        "k_inverse": roundtrip,
        "unitary_invariance": invariance,
        "spectrum": spectrum,
    }
    if f.normalized:
        details["normalization"] = abs(f(1.0) - 1.0)
    return max(details.values()), details


SUITE_FUNCTIONS = {
    "duality": duality,
    "torsion": torsion,
    "curvature": curvature,
    "amari-symmetry": amari_symmetry,
    "geodesic": geodesic,
    "reduction": reduction,
    "petz-identity": petz_identity,
}

