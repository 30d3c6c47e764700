import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invsim.errors import ConfigurationError
from invsim.numdiff import MIN_LENGTH, UniformSeries, derivative, derivative_array


@pytest.mark.parametrize("order, degree", [(1, 2), (2, 3), (3, 3)])
def test_polynomial_exactness(order, degree):
    dt = 0.1
    t = dt * np.arange(12)
    rng = np.random.default_rng(order)
    c = rng.normal(size=degree + 1)
    f = np.polynomial.Polynomial(c)
    got = derivative_array(f(t), dt, order)
    want = f.deriv(order)(t)
    assert np.allclose(got, want, atol=1e-10 * max(1.0, np.abs(want).max()))


def test_cubic_third_derivative_is_six():
    t = 0.01 * np.arange(9)
    assert np.allclose(derivative_array(t ** 3, 0.01, 3), 6.0, atol=1e-6)


def test_central_third_derivative_stencil():
    # (f(+2) - 2 f(+1) + 2 f(-1) - f(-2)) / (2 dt^3)
    f = np.array([0.0, 1.0, 8.0, 27.0, 64.0])
    assert derivative_array(f, 1.0, 3)[2] == pytest.approx(6.0)


@pytest.mark.parametrize("order", [1, 2, 3])
def test_second_order_convergence(order):
    exact = (np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))[order - 1]
    errs = []
    for dt in (0.02, 0.01):
        t = dt * np.arange(int(round(2.0 / dt)) + 1)
        errs.append(np.abs(derivative_array(np.sin(t), dt, order) - exact(t)).max())
    assert 3.6 <= errs[0] / errs[1] <= 4.4


@pytest.mark.parametrize("order", [1, 2, 3])
def test_too_short(order):
    with pytest.raises(ConfigurationError):
        derivative_array(np.zeros(MIN_LENGTH[order] - 1), 0.1, order)


def test_bad_arguments():
    with pytest.raises(ConfigurationError):
        derivative_array(np.zeros(10), 0.0, 1)
    with pytest.raises(ConfigurationError):
        derivative_array(np.zeros(10), 0.1, 4)
    with pytest.raises(ConfigurationError):
        UniformSeries(-1.0, np.zeros(4))


def test_series_wrapper():
    s = derivative(UniformSeries(0.5, 2.0 * 0.5 * np.arange(6)), 1)
    assert s.dt == 0.5 and np.allclose(s.values, 2.0)


@settings(max_examples=30)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(1e-3, 1.0))
def test_linear_exact_everywhere(a, b, dt):
    t = dt * np.arange(8)
    assert np.allclose(derivative_array(a * t + b, dt, 1), a, atol=1e-8 * (1 + abs(a) + abs(b) / dt))


@pytest.mark.parametrize("n", [5, 6, 7])
def test_third_derivative_short_series(n):
    dt = 0.2
    t = dt * np.arange(n)
    f = 0.3 * t ** 3 - t ** 2 + 4.0
    assert np.allclose(derivative_array(f, dt, 3), 1.8, atol=1e-9)


def test_documented_examples():
    t = 0.1 * np.arange(10)
    assert np.allclose(derivative_array(t ** 2, 0.1, 1)[1:-1], 2 * t[1:-1], atol=1e-12)
    assert np.allclose(derivative_array(t ** 3, 0.1, 1)[1:-1], 3 * t[1:-1] ** 2 + 0.01, atol=1e-12)
    dt = 0.001
    t = dt * np.arange(3001)
    got = derivative_array(np.sin(np.pi * t / 10), dt, 2)
    assert np.allclose(got, -(np.pi / 10) ** 2 * np.sin(np.pi * t / 10), atol=1e-6)
