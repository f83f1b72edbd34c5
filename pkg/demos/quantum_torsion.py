"""Which monotone metrics make the gradient frame commute?

For each preset, look at a random qubit state and measure the torsion of the
teleparallel connection of the gradient frame and the symmetry of the
skewness tensor.  Run with ``python3 demos/quantum_torsion.py``.
"""
import numpy as np

from teleparallel import core
from teleparallel.monotone import MonotoneFunction
from teleparallel.quantum import quantum_chart

rng = np.random.default_rng(1)
presets = [
    MonotoneFunction.bkm(),
    MonotoneFunction.bures(),
    MonotoneFunction.wigner_yanase(),
    MonotoneFunction.deformed(0.25),
]

print(f"{'metric':<22}{'torsion':>10}{'bracket':>10}{'d12':>10}{'d13':>10}{'d23':>10}")
for f in presets:
    m = quantum_chart(2, f)
    x = m.sample(rng)
    gam, dual = core.dual_weitzenbock_pair(m, x)
    tor = np.abs(core.torsion_components(dual)).max()
    bracket = np.linalg.norm(core.lie_bracket(m, x, 0, 2, frame=m.dual_frame_at))
    lc = core.levi_civita_coefficients(m, x)
    d12, d13, d23 = core.symmetry_defects(core.amari_tensor_components(m, gam, lc, m.metric_at(x)))
    print(f"{f.name:<22}{tor:10.1e}{bracket:10.1e}{d12:10.1e}{d13:10.1e}{d23:10.1e}")

# Only the Kubo-Mori metric has commuting gradient fields.  The mixture
# connection is torsion free for every preset, which keeps d12 at zero, while
# d13 follows the torsion of the dual connection.  Note that d23 vanishes on
# the simplex as well even though the dual frame is not parallel for the
# mixture connection there: symmetry in the last two slots does not force
# that frame to be parallel.
