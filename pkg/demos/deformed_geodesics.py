"""Closed-form geodesics of the deformed family.

The curve (e^{tv} rho^a e^{tv})^{1/a}, normalised, with a = sqrt(kappa),
solves the geodesic equation of the gradient-frame connection of the
deformed member whose exponent is a.  This script checks the match, and the
mismatch against the member whose exponent is kappa itself.  Run with
``python3 demos/deformed_geodesics.py``.
"""
import numpy as np

from teleparallel import core
from teleparallel.monotone import MonotoneFunction
from teleparallel.quantum import deformed_geodesic, quantum_chart, random_tangent


def residual(kappa, exponent, seed=3):
    m = quantum_chart(2, MonotoneFunction.deformed(exponent))
    rng = np.random.default_rng(seed)
    state = m.state(m.sample(rng))
    v = random_tangent(2, rng)
    v *= 0.25 / np.linalg.norm(v)
    ts = np.linspace(-2, 2, 81)
    xs = np.array([m.coords(deformed_geodesic(state, v, t, kappa)) for t in ts])
    return np.abs(core.covariant_acceleration(ts, xs, core.dual_weitzenbock_field(m))).max()


print(f"{'kappa':>6}{'vs sqrt(kappa)':>16}{'vs kappa':>12}")
for kappa in (0.25, 0.5, 1.0):
    print(f"{kappa:6.2f}{residual(kappa, np.sqrt(kappa)):16.1e}{residual(kappa, kappa):12.1e}")

# The member with exponent 1/2 is the Wigner-Yanase function ((1 + sqrt x)/2)^2.
x = np.logspace(-3, 3, 7)
half = MonotoneFunction.deformed(0.5)(x)
wy = MonotoneFunction.wigner_yanase()(x)
quarter = MonotoneFunction.deformed(0.25)(x)
print("deformed(1/2) - wigner_yanase:", np.abs(half - wy).max())
print("deformed(1/4) - wigner_yanase:", np.abs(quarter - wy).max())
