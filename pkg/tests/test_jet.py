import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from invsim import jet
from invsim.errors import DomainError
from invsim.jet import Jet2


def _fd(f, x, h=1e-4):
    return ((f(x + h) - f(x - h)) / (2 * h), (f(x + h) - 2 * f(x) + f(x - h)) / h ** 2)


@pytest.mark.parametrize("name, f, fj", [
    ("poly", lambda x: x ** 3 - 2 * x, lambda u: u ** 3 - 2 * u),
    ("trig", lambda x: math.sin(x) * math.cos(2 * x), lambda u: jet.sin(u) * jet.cos(2 * u)),
    ("ratio", lambda x: (1 + x * x) / (2 + math.exp(x)), lambda u: (1 + u * u) / (2 + jet.exp(u))),
    ("sqrtlog", lambda x: math.sqrt(x) * math.log(x), lambda u: jet.sqrt(u) * jet.log(u)),
    ("atan2", lambda x: math.atan2(x, 2 - x * x), lambda u: jet.atan2(u, 2 - u * u)),
    ("tan", lambda x: math.tan(x), lambda u: jet.tan(u)),
])
def test_jet_vs_finite_difference(name, f, fj):
    x = 0.7
    d1, d2 = _fd(f, x)
    j = fj(Jet2.variable(x))
    assert j.value == pytest.approx(f(x), rel=1e-14)
    assert j.d1 == pytest.approx(d1, rel=1e-4)
    assert j.d2 == pytest.approx(d2, rel=1e-4)


def test_chain_rule_through_time_jet():
    # u(t) = t^2 at t = 1.5 has u' = 3, u'' = 2; d^2/dt^2 sin(u) = -sin(u) u'^2 + cos(u) u''
    u = Jet2(2.25, 3.0, 2.0)
    s = jet.sin(u)
    assert s.d1 == pytest.approx(math.cos(2.25) * 3.0)
    assert s.d2 == pytest.approx(-math.sin(2.25) * 9.0 + math.cos(2.25) * 2.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        Jet2(1.0, 0.0) / Jet2(0.0, 1.0)
    with pytest.raises(DomainError):
        jet.sqrt(Jet2(-1.0, 1.0))
    with pytest.raises(DomainError):
        jet.log(Jet2(0.0, 1.0))


def test_arrays_pass_through():
    x = np.linspace(0.1, 1.0, 5)
    assert np.allclose(jet.sin(x), np.sin(x))
    j = jet.sin(Jet2(x, np.ones_like(x), np.zeros_like(x)))
    assert np.allclose(j.d1, np.cos(x)) and np.allclose(j.d2, -np.sin(x))


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
def test_product_rule(a, b, c, d):
    p = Jet2(a, b, 0.5) * Jet2(c, d, -0.25)
    assert p.d1 == pytest.approx(a * d + b * c, abs=1e-12)
    assert p.d2 == pytest.approx(a * -0.25 + 2 * b * d + 0.5 * c, abs=1e-12)
