"""The probability simplex as a pair of teleparallel connections.

Run with ``python3 demos/simplex_dual_pair.py``.
"""
import numpy as np

from teleparallel import core
from teleparallel.simplex import exponential_geodesic, rplus_action, simplex_chart

# Three outcomes, chart = (p1, p2).  The default frame spec uses the
# translation directions e_k - e_3, so the mixture frame is the chart frame.
m = simplex_chart(n=3)
rng = np.random.default_rng(0)
x = m.sample(rng)
p = m.probability(x)
print("point p =", np.round(p, 4))

# The Fisher-Rao metric in chart coordinates: diag(1/p1, 1/p2) + 1/p3.
print("metric:\n", np.round(m.metric_at(x), 3))

# Declaring the translations parallel gives the mixture connection, which is
# identically zero in this chart.  The gradient frame of the coframe dp_k
# gives the other one.
gam, dual = core.dual_weitzenbock_pair(m, x)
print("mixture coefficients vanish:", np.all(gam == 0.0))
print("dual coefficients, slice i=0:\n", np.round(dual[0], 3))

# The two connections are metric duals of each other: the derivative of
# G(X_j, X_k) splits into the two covariant derivatives.
res = core.duality_residuals(m, core.weitzenbock_field(m), core.dual_weitzenbock_field(m), x)
print(f"largest duality residual over all frame triples: {res.max():.2e}")

# The gradient fields are the infinitesimal generators of componentwise
# rescaling, so the dual connection is the exponential one and its geodesics
# are rescaling orbits.
v = np.array([0.3, -0.2, 0.1])
for t in (-1.0, 0.5, 2.0):
    a = exponential_geodesic(p, v, t)
    b = rplus_action(np.exp(t * v), p)
    print(f"t={t:+.1f}  curve {np.round(a, 4)}  orbit gap {np.max(np.abs(a - b)):.1e}")

ts = np.linspace(-2, 2, 41)
xs = np.array([m.coords(exponential_geodesic(p, v, t)) for t in ts])
acc = core.covariant_acceleration(ts, xs, core.dual_weitzenbock_field(m))
print(f"geodesic equation residual along the curve: {np.abs(acc).max():.1e}")

# Both connections are torsion free here, so the skewness tensor is fully symmetric.
lc = core.levi_civita_coefficients(m, x)
t = core.amari_tensor_components(m, gam, lc, m.metric_at(x))
print("symmetry defects (d12, d13, d23):", ["%.1e" % d for d in core.symmetry_defects(t)])
