import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teleparallel import core
from teleparallel.core import DiffConfig, EuclideanChart, ManifoldChart
from teleparallel.errors import (
    InvalidPoint,
    LeftManifold,
    SingularFrame,
    SingularMetric,
    TooFewSamples,
)
from teleparallel.simplex import simplex_chart

CFG = DiffConfig()


class ExpLine(ManifoldChart):
    """One-dimensional chart with the frame e^x and the Euclidean metric."""

    dim = 1

    def metric_at(self, x):
        return np.eye(1)

    def frame_at(self, x):
        return np.array([[np.exp(x[0])]])

    def coframe_at(self, x):
        return np.array([[np.exp(-x[0])]])

    def is_valid(self, x):
        return bool(np.all(np.isfinite(x)))

    def sample(self, rng):
        return rng.uniform(-1, 1, 1)


class Polar(ManifoldChart):
    """The punctured plane in polar coordinates (r, phi), r > 0."""

    dim = 2

    def metric_at(self, x):
        return np.diag([1.0, x[0] ** 2])

    def frame_at(self, x):
        # orthonormal frame d_r, d_phi / r
        return np.diag([1.0, 1.0 / x[0]])

    def coframe_at(self, x):
        return np.diag([1.0, x[0]])

    def is_valid(self, x):
        return bool(np.all(np.isfinite(x)) and x[0] > 1e-9)

    def length_scale(self, x):
        return float(x[0])

    def sample(self, rng):
        return np.array([rng.uniform(0.5, 2.0), rng.uniform(-3, 3)])


# --- oracles -----------------------------------------------------------------


def test_constant_frame_gives_zero_connection():
    m = simplex_chart(n=4)
    x = m.sample(np.random.default_rng(0))
    assert np.all(core.weitzenbock_coefficients(m, x) == 0.0)


@pytest.mark.parametrize("x0", [-0.7, 0.0, 0.3, 1.2])
def test_exponential_frame_on_the_line(x0):
    gam = core.weitzenbock_coefficients(ExpLine(), np.array([x0]))
    assert gam.shape == (1, 1, 1)
    assert gam[0, 0, 0] == pytest.approx(-1.0, abs=1e-10)


def test_levi_civita_of_constant_metric_vanishes():
    m = EuclideanChart(3)
    assert np.all(core.levi_civita_coefficients(m, np.array([0.1, -2.0, 3.0])) == 0.0)


@pytest.mark.parametrize("p", [0.25, 0.4, 0.5, 0.9])
def test_levi_civita_on_the_two_simplex(p):
    gam = core.levi_civita_coefficients(simplex_chart(n=2), np.array([p]))
    expected = 0.5 * (2 * p - 1) / (p * (1 - p))
    assert gam[0, 0, 0] == pytest.approx(expected, rel=1e-9)


def test_levi_civita_spot_value():
    gam = core.levi_civita_coefficients(simplex_chart(n=2), np.array([0.25]))
    assert gam[0, 0, 0] == pytest.approx(-4.0 / 3.0, abs=1e-9)


def test_levi_civita_polar():
    r = 1.7
    gam = core.levi_civita_coefficients(Polar(), np.array([r, 0.4]))
    expected = np.zeros((2, 2, 2))
    expected[0, 1, 1] = -r
    expected[1, 0, 1] = expected[1, 1, 0] = 1.0 / r
    assert np.allclose(gam, expected, atol=1e-9)


def test_torsion_of_single_entry():
    c = np.zeros((3, 3, 3))
    c[0, 0, 1] = 2.5
    t = core.torsion_components(c)
    assert t[0, 0, 1] == 2.5 and t[0, 1, 0] == -2.5
    assert np.count_nonzero(t) == 2


def test_gradient_frame_identity():
    assert np.array_equal(core.gradient_frame(np.eye(3), np.eye(3)), np.eye(3))


def test_euclidean_pair_is_zero():
    m = EuclideanChart(2)
    gam, dual = core.dual_weitzenbock_pair(m, np.array([0.3, 0.1]))
    assert np.all(gam == 0.0) and np.all(dual == 0.0)


def test_amari_tensor_of_levi_civita_is_zero():
    m = Polar()
    x = np.array([1.3, 0.2])
    lc = core.levi_civita_coefficients(m, x)
    assert np.all(core.amari_tensor_components(m, lc, lc, m.metric_at(x)) == 0.0)


def test_amari_tensor_spot_values_on_two_simplex():
    m = simplex_chart(n=2)
    for p, expected in [(0.25, 64.0 / 9.0), (0.5, 0.0)]:
        x = np.array([p])
        t = core.amari_tensor_components(
            m, core.weitzenbock_coefficients(m, x), core.levi_civita_coefficients(m, x), m.metric_at(x)
        )
        assert t[0, 0, 0] == pytest.approx(expected, abs=1e-6)


def test_symmetry_defects_of_symmetric_tensor():
    a = np.random.default_rng(3).standard_normal((3, 3, 3))
    sym = sum(np.transpose(a, perm) for perm in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)])
    assert core.symmetry_defects(sym) == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)


def test_symmetry_defects_pick_the_right_slots():
    t = np.zeros((2, 2, 2))
    t[0, 1, 1] = 1.0  # symmetric in slots 2 and 3 only
    d12, d13, d23 = core.symmetry_defects(t)
    assert d23 == 0.0 and d12 == 1.0 and d13 == 1.0


# --- properties --------------------------------------------------------------


@pytest.mark.parametrize("chart", [Polar(), ExpLine(), simplex_chart(n=3)])
def test_frame_is_parallel(chart):
    rng = np.random.default_rng(1)
    for _ in range(5):
        x = chart.sample(rng)
        gam = core.weitzenbock_coefficients(chart, x)
        e = chart.frame_at(x)
        de = core.partials(chart.frame_at, chart, x)
        residual = de + np.einsum("ijm,ma->jia", gam, e)
        assert np.max(np.abs(residual)) < 10 * CFG.step**2


def test_levi_civita_is_torsion_free_and_self_dual():
    m = simplex_chart(n=3)
    lc = core.levi_civita_field(m)
    rng = np.random.default_rng(2)
    for _ in range(5):
        x = m.sample(rng)
        assert np.all(core.torsion_components(lc(x)) == 0.0)
        assert core.duality_residuals(m, lc, lc, x).max() < 10 * CFG.step


def test_frame_brackets_polar():
    # [d_r, d_phi / r] = -(1/r^2) d_phi in chart components
    r = 1.4
    m = Polar()
    br = core.frame_brackets(m, np.array([r, 0.3]))
    assert br[1, 0, 1] == pytest.approx(-1.0 / r**2, rel=1e-9)
    assert br[1, 1, 0] == pytest.approx(1.0 / r**2, rel=1e-9)
    assert np.allclose(core.lie_bracket(m, np.array([r, 0.3]), 0, 1), [0.0, -1.0 / r**2])


def test_bracket_antisymmetry_and_torsion_identity():
    m = Polar()
    x = np.array([0.8, 1.0])
    br = core.frame_brackets(m, x)
    assert np.allclose(br, -np.swapaxes(br, 1, 2), atol=1e-12)
    e = m.frame_at(x)
    tor = np.einsum("iab,aj,bk->ijk", core.torsion_components(core.weitzenbock_coefficients(m, x)), e, e)
    assert np.max(np.abs(tor - np.swapaxes(br, 1, 2))) < 1e-5


def test_exterior_derivative_matches_brackets():
    # theta^l([X_j, X_k]) = -d theta^l(X_j, X_k) when theta(X) is constant
    m = Polar()
    x = np.array([1.1, -0.5])
    e = m.frame_at(x)
    d = core.exterior_derivative(m, x)
    lhs = np.einsum("la,ajk->ljk", m.coframe_at(x), core.frame_brackets(m, x))
    rhs = -np.einsum("lab,aj,bk->ljk", d, e, e)
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_curvature_of_zero_connection():
    m = EuclideanChart(3)
    r = core.curvature_components(m, core.zero_connection(3), np.zeros(3))
    assert r.shape == (3, 3, 3, 3) and np.all(r == 0.0)


def test_teleparallel_curvature_vanishes_in_polar_chart():
    m = Polar()
    rng = np.random.default_rng(4)
    for _ in range(5):
        x = m.sample(rng)
        assert np.max(np.abs(core.curvature_components(m, core.weitzenbock_field(m), x))) < 1e-4


def test_levi_civita_curvature_of_fisher_rao():
    # the Fisher-Rao simplex is a piece of the sphere of radius 2
    m = simplex_chart(n=3)
    rng = np.random.default_rng(5)
    for _ in range(3):
        x = m.sample(rng)
        g = m.metric_at(x)
        r = core.curvature_components(m, core.levi_civita_field(m), x)
        # G(R(d_0, d_1) d_1, d_0) / (G00 G11 - G01^2)
        num = g[0] @ r[:, 1, 0, 1]
        assert num / np.linalg.det(g) == pytest.approx(0.25, rel=1e-5)


@settings(max_examples=30, deadline=None)
@given(st.floats(-2, 2), st.floats(0.1, 3.0))
def test_directional_derivative_of_polynomial(a, scale):
    m = EuclideanChart(2)
    f = lambda y: y[0] ** 3 * y[1] + np.sin(y[1])
    x = np.array([a, scale])
    u = np.array([0.6, -0.8])
    exact = 3 * a**2 * scale * 0.6 + (a**3 + np.cos(scale)) * -0.8
    assert core.directional_derivative(f, m, x, u) == pytest.approx(exact, abs=1e-8)


def test_plain_central_difference_is_second_order():
    m = EuclideanChart(1)
    f = lambda y: np.exp(y[0])
    errs = [abs(core.partials(f, m, np.zeros(1), DiffConfig(step=h, richardson=False))[0] - 1.0) for h in (1e-2, 5e-3)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=1e-2)


def test_pairing_spread_is_constant():
    var, mean = core.pairing_spread(simplex_chart(n=4), np.random.default_rng(0))
    assert var.max() < 1e-10
    assert np.allclose(mean, np.eye(3) + 1.0)


# --- errors ------------------------------------------------------------------


def test_invalid_point():
    with pytest.raises(InvalidPoint):
        core.weitzenbock_coefficients(simplex_chart(n=3), np.array([0.7, 0.4]))
    with pytest.raises(InvalidPoint):
        core.weitzenbock_coefficients(simplex_chart(n=3), np.array([0.2]))


def test_stencil_outside_chart():
    # EdgeChart has unit length scale, so the stencil crosses x = 0
    with pytest.raises(InvalidPoint):
        core.partials(lambda y: y, EdgeChart(), np.array([1e-4]))


class EdgeChart(EuclideanChart):
    def __init__(self):
        super().__init__(1)

    def is_valid(self, x):
        return bool(x[0] > 0)


def test_singular_frame_and_metric():
    with pytest.raises(SingularFrame):
        core.check_frame(np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(SingularMetric):
        core.check_metric(np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(SingularMetric):
        core.check_metric(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(SingularMetric):
        core.check_metric(np.diag([1.0, 1e-13]))


def test_diff_config_bounds():
    with pytest.raises(ValueError):
        DiffConfig(step=0.1)
    with pytest.raises(ValueError):
        DiffConfig(ode_steps=5)


# --- geodesics ---------------------------------------------------------------


def test_straight_line_integration():
    path = core.geodesic_integrate(core.zero_connection(2), np.zeros(2), np.array([1.0, 0.0]), 1.0)
    assert np.allclose(path.x[-1], [1.0, 0.0], atol=1e-14)
    assert path.t[-1] == pytest.approx(1.0)
    assert len(path.t) == CFG.ode_steps + 1


def test_integrator_follows_great_circle_in_polar_chart():
    # straight line y = 1 through (x, y) = (0, 1) in polar form
    m = Polar()
    lc = core.levi_civita_field(m)
    path = core.geodesic_integrate(lc, np.array([1.0, np.pi / 2]), np.array([0.0, -1.0]), 1.0, DiffConfig(ode_steps=200))
    r, phi = path.x[-1]
    assert r * np.cos(phi) == pytest.approx(1.0, abs=1e-8)
    assert r * np.sin(phi) == pytest.approx(1.0, abs=1e-8)


def test_integrator_reports_leaving_the_chart():
    m = simplex_chart(n=2)
    gam = core.weitzenbock_field(m)
    with pytest.raises(LeftManifold) as info:
        core.geodesic_integrate(gam, np.array([0.5]), np.array([0.6]), 1.0, DiffConfig(ode_steps=100), m.is_valid)
    assert 0.8 < info.value.t < 0.85
    assert info.value.path.x[-1][0] < 1.0


def test_covariant_acceleration_of_a_line():
    ts = np.linspace(0, 1, 11)
    xs = np.outer(ts, [1.0, 2.0]) + 0.5
    res = core.covariant_acceleration(ts, xs, core.zero_connection(2))
    assert res.shape == (7, 2)
    assert np.max(np.abs(res)) < 1e-12


def test_covariant_acceleration_needs_five_uniform_samples():
    with pytest.raises(TooFewSamples):
        core.covariant_acceleration(np.arange(4.0), np.zeros((4, 1)), core.zero_connection(1))
    with pytest.raises(TooFewSamples):
        core.covariant_acceleration(np.array([0, 1, 2, 3, 5.0]), np.zeros((5, 1)), core.zero_connection(1))
