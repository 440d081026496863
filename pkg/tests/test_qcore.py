import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadmap.qcore import (
    EvaluationError,
    Grid,
    PhysicalParams,
    bridged,
    inner_product,
    integrate,
    l2_distance,
    l2_norm,
    sample_on_grid,
    thread_count,
)
from quadmap.states import GaussianPacket


def test_params_validation():
    assert PhysicalParams().hbar == 1.0
    with pytest.raises(ValueError):
        PhysicalParams(hbar=0.0)
    with pytest.raises(ValueError):
        PhysicalParams(mass=-1.0)


def test_grid_basics():
    g = Grid(-1.0, 1.0, 5)
    assert g.dx == 0.5
    np.testing.assert_array_equal(g.x, [-1.0, -0.5, 0.0, 0.5, 1.0])
    with pytest.raises(ValueError):
        Grid(1.0, 1.0, 5)
    with pytest.raises(ValueError):
        Grid(0.0, 1.0, 1)


def test_sample_unit_evaluator():
    g = Grid(-3, 3, 101)
    out = sample_on_grid(lambda x, t: np.ones_like(x), g, 0.0)
    np.testing.assert_array_equal(out, np.ones(101))


def test_sample_gaussian_even_and_real():
    g = Grid(-5, 5, 201)
    v = sample_on_grid(GaussianPacket(0, 0, 1), g, 0.0)
    assert np.max(np.abs(v.imag)) == 0
    np.testing.assert_allclose(v, v[::-1], rtol=0, atol=1e-15)


def test_sample_reports_coordinate():
    def bad(x, t):
        x = np.asarray(x)
        if np.any(x > 0.5):
            raise ZeroDivisionError("boom")
        return np.ones_like(x)

    with pytest.raises(EvaluationError) as err:
        sample_on_grid(bad, Grid(0, 1, 3), 0.25)
    assert err.value.x == 1.0 and err.value.t == 0.25


def test_sample_reports_non_finite():
    with pytest.raises(EvaluationError):
        sample_on_grid(lambda x, t: np.where(x == 0.5, np.nan, 1.0), Grid(0, 1, 3), 0.0)


def test_threaded_sampling_matches_serial(monkeypatch):
    g = Grid(-10, 10, 40000)
    w = GaussianPacket(0.5, 2.0, 1.3)
    monkeypatch.setenv("QUADMAP_THREADS", "1")
    a = sample_on_grid(w, g, 0.4)
    monkeypatch.setenv("QUADMAP_THREADS", "4")
    b = sample_on_grid(w, g, 0.4)
    np.testing.assert_array_equal(a, b)


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("QUADMAP_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("QUADMAP_THREADS", "0")
    assert thread_count() >= 1
    monkeypatch.setenv("QUADMAP_THREADS", "x")
    with pytest.raises(ValueError):
        thread_count()


def test_norms_and_distances():
    g = Grid(-12, 12, 2001)
    v = sample_on_grid(GaussianPacket(0, 1, 1), g, 0.0)
    assert abs(l2_norm(v, g.dx) - 1) < 1e-12
    assert l2_distance(v, v, g.dx) == 0
    assert abs(inner_product(v, v, g.dx) - 1) < 1e-12
    with pytest.raises(ValueError):
        l2_norm([], g.dx)
    with pytest.raises(ValueError):
        l2_distance(v, v[:-1], g.dx)


def test_trapezoid_exact_for_linear():
    x = np.linspace(0, 2, 11)
    assert abs(integrate(3 * x + 1, x[1] - x[0]) - 8.0) < 1e-14


def test_bridge_reproduces_smooth_function():
    f = lambda x, t: np.exp(1j * x * t) * np.cos(t)
    x = np.linspace(-1, 1, 7)
    t = np.full_like(x, 0.30000001)
    np.testing.assert_allclose(bridged(f, x, t, 0.3, 1e-4), f(x, t), atol=1e-14)
    far = np.full_like(x, 0.5)
    np.testing.assert_array_equal(bridged(f, x, far, 0.3, 1e-4), f(x, far))


@given(st.floats(-0.9, 0.9))
def test_bridge_cubic_is_exact_on_cubics(s):
    f = lambda x, t: (t - 1.0) ** 3 + 2 * t + 0 * x
    t = 1.0 + s * 1e-3
    assert abs(bridged(f, 0.0, t, 1.0, 1e-3) - f(0.0, t)) < 1e-12
