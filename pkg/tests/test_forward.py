import math

import numpy as np
import pytest

from invsim import ManeuverInput, MirageDoubleRoll
from invsim.airframe import equilibrium_alpha
from invsim.atmosphere import density
from invsim.errors import ConfigurationError, IntegrationError
from invsim.forward import ControlSchedule, ForwardState, round_trip, simulate

from conftest import run_quiet


def _constant_schedule(T, dl=0.0, dm=0.0, dn=0.0, duration=1.0):
    t = np.array([0.0, duration])
    c = lambda v: np.full(2, float(v))
    return ControlSchedule(t, c(T), c(dl), c(dm), c(dn))


def _level(mirage):
    qbar = 0.5 * density(5000.0) * 150.0 ** 2
    aeq = equilibrium_alpha(mirage, qbar)
    CL = mirage.CL0 + mirage.CLa * aeq
    drag = qbar * mirage.S * (mirage.CD0 + mirage.KCD * CL ** 2)
    state = ForwardState(150.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -5000.0)
    return state, aeq, drag


def test_equilibrium_is_stationary(mirage):
    state, aeq, drag = _level(mirage)
    t, X = simulate(mirage, state, _constant_schedule(drag), aeq, dt=0.01)
    moving = np.array(X[-1]) - np.array(state)
    moving[9] -= 150.0 * t[-1]
    assert np.abs(moving).max() < 1e-9


def test_free_fall(mirage):
    bare = mirage.replace(S=1e-12)
    state = ForwardState(150.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -5000.0)
    t, X = simulate(bare, state, _constant_schedule(0.0, duration=2.0), 0.0, dt=0.01)
    from invsim.dynamics import inertial_velocity

    zdot = inertial_velocity(*X[-1, :6])[2]
    assert zdot == pytest.approx(9.81 * 2.0, rel=1e-9)
    assert X[-1, 11] - X[0, 11] == pytest.approx(0.5 * 9.81 * 4.0, rel=1e-9)
    assert X[-1, 0] == pytest.approx(math.hypot(150.0, 9.81 * 2.0), rel=1e-9)


def test_forward_rk4_self_convergence(mirage):
    state, aeq, drag = _level(mirage)
    sched = _constant_schedule(1.3 * drag, dl=0.02, dm=-0.03, dn=0.01, duration=2.0)
    # steps of 0.1 s are still pre-asymptotic for the fast roll mode (ratio about 10)
    final = {dt: simulate(mirage, state, sched, aeq, dt=dt)[1][-1] for dt in (0.025, 0.0125, 0.003125)}
    e1 = np.abs(final[0.025] - final[0.003125])
    e2 = np.abs(final[0.0125] - final[0.003125])
    ratio = e1[[0, 1, 2, 3, 4, 5]].max() / e2[[0, 1, 2, 3, 4, 5]].max()
    assert 12 <= ratio <= 20


def test_pitch_guard(mirage):
    state = ForwardState(150.0, 0.0, 0.0, 0.0, math.radians(86.0), 0.0, 0, 0, 0, 0, 0, -5000.0)
    with pytest.raises(IntegrationError, match="pitch"):
        simulate(mirage, state, _constant_schedule(0.0), 0.0, dt=0.01)


def test_schedule_interpolation_and_hold():
    s = ControlSchedule(np.array([0.0, 1.0, 2.0]), np.array([0.0, 10.0, 20.0]),
                        np.zeros(3), np.zeros(3), np.zeros(3))
    assert s.at(0.25)[0] == pytest.approx(2.5)
    held = ControlSchedule(s.t, s.thrust, s.delta_l, s.delta_m, s.delta_n, hold=True)
    assert held.at(1.75)[0] == 10.0
    with pytest.raises(ConfigurationError):
        s.at(2.5)


def test_truncated_controls(mirage):
    m = ManeuverInput(MirageDoubleRoll(), 0.05)
    s = run_quiet(m, mirage)
    half = s.t.size // 2
    from invsim.inverse import ControlSeries

    cut = ControlSeries(**{k: (v[:half] if isinstance(v, np.ndarray) and v.shape == s.t.shape else v)
                           for k, v in vars(s).items() if k != "extras"})
    with pytest.raises(ConfigurationError, match="cover"):
        round_trip(m, cut, mirage)


def test_thrust_perturbation_grows_deviation(mirage):
    m = ManeuverInput(MirageDoubleRoll(), 0.01)
    s = run_quiet(m, mirage)
    base = round_trip(m, s, mirage)
    s.thrust = 1.05 * s.thrust
    rep, t, X = round_trip(m, s, mirage, return_states=True)
    assert rep.max_pos_dev_m > 100 * base.max_pos_dev_m
    from invsim.trajectory import preprocess

    tb = preprocess(m, mirage)
    dev = np.sqrt((X[:, 9] - tb.x[0]) ** 2 + (X[:, 10] - tb.y[0]) ** 2 + (X[:, 11] - tb.z[0]) ** 2)
    per_second = dev[::100]
    assert np.all(np.diff(per_second[1:]) > 0)


def test_round_trip_converges_with_step(mirage, mirage_round_trip):
    devs = []
    for dt in (0.01, 0.002):
        m = ManeuverInput(MirageDoubleRoll(), dt)
        devs.append(round_trip(m, run_quiet(m, mirage), mirage).max_pos_dev_m)
    devs.append(mirage_round_trip[0].max_pos_dev_m)
    assert devs[0] > devs[1] > devs[2]


def test_speed_stays_near_target(mirage_round_trip):
    _, _, X = mirage_round_trip
    assert np.abs(X[:, 0] - 150.0).max() < 0.5


def test_report_fields(mirage_round_trip):
    d = mirage_round_trip[0].to_dict()
    for key in ("max_pos_dev_m", "rms_pos_dev_m", "max_roll_dev_deg", "pass"):
        assert key in d
    assert d["pass"] is True
    assert d["max_pos_dev_m"] >= d["rms_pos_dev_m"] >= 0
