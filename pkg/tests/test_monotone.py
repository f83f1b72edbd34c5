import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from teleparallel.errors import DomainError
from teleparallel.monotone import PRESETS, MonotoneFunction, petz_f_eval, preset

NORMALIZED = [
    MonotoneFunction.bkm(),
    MonotoneFunction.bures(),
    MonotoneFunction.deformed(0.25),
    MonotoneFunction.deformed(0.5),
    MonotoneFunction.deformed(0.8),
    MonotoneFunction.wigner_yanase(),
]


@pytest.mark.parametrize("f", NORMALIZED, ids=lambda f: f.name)
def test_value_at_one(f):
    assert f(1.0) == 1.0


def test_spot_values():
    assert MonotoneFunction.bures()(3.0) == pytest.approx(2.0, rel=1e-15)
    assert MonotoneFunction.bkm()(math.e) == pytest.approx(math.e - 1.0, rel=1e-15)
    assert MonotoneFunction.wigner_yanase()(4.0) == pytest.approx(2.25, rel=1e-15)
    assert MonotoneFunction.bkm(2.0)(1.0) == 2.0


def test_deformed_one_half_is_wigner_yanase():
    x = np.logspace(-3, 3, 61)
    half = MonotoneFunction.deformed(0.5)(x)
    assert np.allclose(half, MonotoneFunction.wigner_yanase()(x), rtol=1e-13)


def test_deformed_one_quarter_is_not_wigner_yanase():
    # (1/8) * 3 * (sqrt 2 + 1) / (sqrt 2 - 1) at x = 4, against 9/4
    value = MonotoneFunction.deformed(0.25)(4.0)
    assert value == pytest.approx(0.375 * (math.sqrt(2) + 1) / (math.sqrt(2) - 1), rel=1e-14)
    assert abs(value - 2.25) > 0.05


def test_deformed_tends_to_bkm():
    x = np.logspace(-2, 2, 41)
    assert np.allclose(MonotoneFunction.deformed(1e-4)(x), MonotoneFunction.bkm()(x), rtol=1e-7)


@pytest.mark.parametrize("f", NORMALIZED, ids=lambda f: f.name)
def test_self_duality_on_log_grid(f):
    x = np.logspace(-3, 3, 601)
    assert np.max(np.abs(f(x) - x * f(1.0 / x))) < 1e-10


@pytest.mark.parametrize("f", NORMALIZED, ids=lambda f: f.name)
def test_series_window_is_continuous(f):
    # compare the series branch just inside the window with the formula just outside
    inside = f(np.array([1 - 9e-7, 1 + 9e-7]))
    outside = f(np.array([1 - 1.1e-6, 1 + 1.1e-6]))
    slope = (outside - inside) / np.array([-2e-7, 2e-7])
    assert np.allclose(slope, 0.5, atol=1e-4)
    assert np.all(np.abs(inside - outside) < 1e-6)


@pytest.mark.parametrize("f", NORMALIZED, ids=lambda f: f.name)
def test_increasing_and_positive(f):
    x = np.logspace(-4, 4, 400)
    y = f(x)
    assert np.all(y > 0) and np.all(np.diff(y) > 0)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1e3), st.sampled_from(NORMALIZED))
def test_self_duality_property(x, f):
    assert f(x) == pytest.approx(x * f(1.0 / x), rel=1e-12)


def test_errors():
    with pytest.raises(DomainError):
        petz_f_eval(MonotoneFunction.bures(), 0.0)
    with pytest.raises(DomainError):
        MonotoneFunction.bkm()(np.array([1.0, -2.0]))
    with pytest.raises(DomainError):
        MonotoneFunction.deformed(1.5)
    with pytest.raises(DomainError):
        MonotoneFunction.bkm(0.0)
    with pytest.raises(DomainError):
        MonotoneFunction("nope")
    with pytest.raises(DomainError):
        preset("nope")


def test_custom_and_names():
    f = MonotoneFunction.custom(lambda x: np.sqrt(x), "geometric")
    assert f(4.0) == 2.0 and f.name == "geometric"
    assert MonotoneFunction.bures().name == "bures"
    assert MonotoneFunction.deformed(0.25).name == "deformed(kappa=0.25)"
    assert not MonotoneFunction.bkm(3.0).normalized


def test_presets_table():
    assert set(PRESETS) == {"bkm", "bures", "deformed", "wigner_yanase"}
    assert preset("deformed", 0.25) == MonotoneFunction.deformed(0.25)
    assert preset("bures").name == "bures"
    for name, (factory, formula, metric) in PRESETS.items():
        assert factory(None)(1.0) == 1.0
        assert formula and metric
