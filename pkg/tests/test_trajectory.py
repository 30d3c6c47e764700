import math

import numpy as np
import pytest

from invsim.errors import ConfigurationError, DomainError, SingularityError
from invsim.trajectory import (ExpressionManeuver, ManeuverInput, MirageDoubleRoll,
                               SampledManeuver, export_sampled, load_sampled,
                               named_maneuver, path_point, preprocess, station_count)


def test_station_count():
    assert station_count(30.0, 0.001) == 30001
    with pytest.raises(ConfigurationError):
        station_count(30.0, 0.007)


def test_roll_profile():
    m = MirageDoubleRoll()
    assert math.degrees(m.evaluate(30.0).phi[0]) == pytest.approx(720.0, abs=1e-12)
    assert m.evaluate(0.0).phi == (0.0, 0.0, 0.0)
    t = np.linspace(0.0, 30.0, 300001)
    s = m.evaluate(t)
    i = int(np.argmax(s.phi[1]))
    assert math.degrees(s.phi[1][i]) == pytest.approx(56.549, abs=1e-3) and t[i] == pytest.approx(15.0)
    assert math.degrees(s.phi[2].max()) == pytest.approx(6.838, abs=1e-3)
    assert t[np.argmax(s.phi[2])] == pytest.approx(9.123, abs=0.005)
    assert t[np.argmin(s.phi[2])] == pytest.approx(20.877, abs=0.005)


def test_scalar_and_vector_paths_agree():
    m = MirageDoubleRoll()
    v = m.evaluate(np.array([3.3, 17.1]))
    for k, t in enumerate((3.3, 17.1)):
        s = m.evaluate(t)
        assert all(np.isclose(a[k], b, atol=1e-13) for a, b in zip(v.phi, s.phi))


def test_domain():
    with pytest.raises(DomainError):
        MirageDoubleRoll().evaluate(30.5)
    with pytest.raises(ConfigurationError):
        named_maneuver("barrel-roll")


def test_expression_maneuver_matches_builtin():
    e = ExpressionManeuver("150*t", "0", "-5000",
                           "pi/4*(8 + cos(pi*t/10) - 9*cos(pi*t/30))", 30.0)
    m = MirageDoubleRoll()
    for t in (0.0, 7.5, 21.2):
        a, b = e.evaluate(t), m.evaluate(t)
        assert np.allclose(a.phi, b.phi, atol=1e-12) and np.allclose(a.x, b.x)
    with pytest.raises(ConfigurationError):
        ExpressionManeuver("150*t + k", "0", "0", "0", 1.0)


def _sampled(dt=0.01, duration=30.0):
    m = ManeuverInput(MirageDoubleRoll(), dt)
    t = m.times
    s = m.source.evaluate(t)
    return ManeuverInput(SampledManeuver(t, s.x[0], s.y[0], s.z[0], s.phi[0]), dt)


def test_sampled_tables_match_analytic(mirage):
    exact = preprocess(ManeuverInput(MirageDoubleRoll(), 0.01), mirage)
    fdm = preprocess(_sampled(), mirage)
    for name in ("V", "qbar", "theta_w", "psi_w"):
        assert np.allclose(getattr(fdm, name), getattr(exact, name), rtol=1e-4, atol=1e-4)
    assert np.allclose(fdm.column("x_g_dot"), exact.column("x_g_dot"), rtol=1e-9)
    assert np.allclose(fdm.phi, exact.phi, atol=1e-4 * np.abs(exact.phi).max(axis=1, keepdims=True))


def test_preprocess_air_data(mirage):
    tb = preprocess(ManeuverInput(MirageDoubleRoll(), 0.01), mirage)
    assert tb.t.size == 3001
    assert tb.rho[0] == pytest.approx(0.735872, rel=1e-6)
    assert tb.mach[0] == pytest.approx(0.4680, abs=5e-5)
    assert math.degrees(tb.alpha_equb) == pytest.approx(6.3322, abs=1e-4)


def test_sampled_validation():
    t = np.arange(6) * 0.1
    z = np.zeros(6)
    with pytest.raises(ConfigurationError, match="index 3"):
        SampledManeuver(np.array([0, 0.1, 0.2, 0.2, 0.4, 0.5]), t, z, z, z)
    with pytest.raises(ConfigurationError, match="non-finite"):
        SampledManeuver(t, np.array([0, 1, np.nan, 3, 4, 5.0]), z, z, z)
    with pytest.raises(ConfigurationError, match="uniformly"):
        SampledManeuver(np.array([0, 0.1, 0.25, 0.3, 0.4, 0.5]), t, z, z, z)


def test_csv_round_trip(tmp_path):
    src = _sampled(dt=0.1)
    path = tmp_path / "traj.csv"
    export_sampled(src, path)
    back = load_sampled(path)
    assert back.dt == pytest.approx(0.1)
    assert np.array_equal(back.source.phi, src.source.phi)


def test_csv_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x,y,z,phi\n0,0,0,0,0\n")
    with pytest.raises(ConfigurationError, match="header"):
        load_sampled(bad)
    with pytest.raises(ConfigurationError):
        load_sampled(tmp_path / "missing.csv")


def test_vertical_flight_is_singular(mirage):
    m = ExpressionManeuver("0", "0", "-150*t", "0", 1.0)
    with pytest.raises(SingularityError):
        preprocess(ManeuverInput(m, 0.1), mirage)
    with pytest.raises(SingularityError):
        path_point(0.0, m.evaluate(0.0), 0.0)


def test_path_point_jets_match_tables(mirage):
    m = ManeuverInput(MirageDoubleRoll(), 0.01)
    tb = preprocess(m, mirage)
    pp = path_point(12.0, m.source.evaluate(12.0), mirage.h_ini)
    assert pp.qbar.value == pytest.approx(tb.qbar[1200])
    assert pp.phi.d2 == pytest.approx(tb.phi[2, 1200])
