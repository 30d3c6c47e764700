import math
import warnings

import numpy as np
import pytest

from invsim import ManeuverInput, MirageDoubleRoll
from invsim.atmosphere import density
from invsim.errors import ConfigurationError, IntegrationError
from invsim.inverse import InverseSimulator, SimState, orbit_detachment, rk4_step, run
from invsim.trajectory import ExpressionManeuver, SampledManeuver

from conftest import run_quiet


def test_rk4_exponential():
    f = lambda t, y: -y
    y = np.array([1.0])
    for n in range(10):
        y = rk4_step(f, 0.1 * n, y, 0.1)
    assert y[0] == pytest.approx(math.exp(-1.0), rel=1e-6)


def test_rk4_fourth_order_on_ode():
    errs = []
    for dt in (0.2, 0.1):
        y = np.array([1.0])
        for n in range(int(round(2 / dt))):
            y = rk4_step(lambda t, y: -y * math.cos(t), n * dt, y, dt)
        errs.append(abs(y[0] - math.exp(-math.sin(2.0))))
    assert 12 <= errs[0] / errs[1] <= 20


def test_rk4_self_convergence_on_inverse_run(mirage):
    ref = run_quiet(ManeuverInput(MirageDoubleRoll(), 0.1 / 8), mirage)
    errs = []
    for dt in (0.1, 0.05):
        s = run_quiet(ManeuverInput(MirageDoubleRoll(), dt), mirage)
        stride = int(round(dt / ref.dt))
        Y, R = s.extras["state"], ref.extras["state"][::stride]
        errs.append(np.abs(Y - R).max(axis=0))
    ratio = errs[0][0] / errs[1][0]   # thrust channel
    assert 12 <= ratio <= 20


def test_fast_kernel_matches_jet_route(mirage):
    m = ManeuverInput(MirageDoubleRoll(), 0.02)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        fast = InverseSimulator(m, mirage).run(fast=True)
        slow = InverseSimulator(m, mirage).run(fast=False)
    Yf, Ys = fast.extras["state"], slow.extras["state"]
    assert np.allclose(Yf, Ys, rtol=1e-9, atol=1e-9)
    assert np.allclose(fast.delta_n, slow.delta_n, atol=1e-10)


def test_equilibrium_fixed_point(mirage):
    m = ManeuverInput(ExpressionManeuver("150*t", "0", "-5000", "0", 5.0, "level"), 0.01)
    s = run(m, mirage)
    for ch in (s.alpha, s.beta, s.theta, s.psi, s.delta_l, s.delta_n, s.p, s.q, s.r):
        assert np.abs(ch).max() < 1e-9
    assert np.abs(s.thrust - s.thrust[0]).max() < 1e-9 * s.thrust[0]
    assert np.abs(s.delta_m - s.delta_m[0]).max() < 1e-9
    assert np.abs(s.extras["rates"]).max() < 1e-9


def test_equilibrium_thrust_equals_drag(mirage):
    m = ManeuverInput(ExpressionManeuver("150*t", "0", "-5000", "0", 1.0, "level"), 0.01)
    s = run(m, mirage)
    qbar = 0.5 * density(5000.0) * 150.0 ** 2
    CL = mirage.m * 9.81 / (qbar * mirage.S)
    assert s.thrust[0] == pytest.approx(qbar * mirage.S * (mirage.CD0 + mirage.KCD * CL ** 2), rel=1e-12)


def test_consistent_start_in_a_turn(mirage):
    # steady coordinated turn at 150 m/s and 3 g
    w = 3 * 9.81 / 150.0
    R = 150.0 / w
    phi = math.atan(math.sqrt(3 ** 2 - 1))
    m = ManeuverInput(ExpressionManeuver(f"{R}*sin({w}*t)", f"{R}*(1-cos({w}*t))", "-5000",
                                         f"{phi}", 4.0, "turn"), 0.01)
    with pytest.warns(RuntimeWarning, match="force balance"):
        InverseSimulator(m, mirage).initialize()
    s = InverseSimulator(m, mirage, init="consistent").run()
    assert np.ptp(s.thrust) < 1e-6 * s.thrust.mean()
    assert np.ptp(s.alpha) < 1e-9


def test_thrust_follows_speed_demand(mirage):
    base = run(ManeuverInput(ExpressionManeuver("150*t", "0", "-5000", "0", 2.0), 0.01), mirage)
    acc = run(ManeuverInput(ExpressionManeuver("150*t + 0.25*t**2", "0", "-5000", "0", 2.0), 0.01),
              mirage, init="consistent")
    assert acc.thrust[0] - base.thrust[0] == pytest.approx(mirage.m * 0.5, rel=1e-3)


def test_sampled_source_matches_analytic(mirage):
    dt = 0.01
    a = run_quiet(ManeuverInput(MirageDoubleRoll(), dt), mirage)
    t = a.t
    src = MirageDoubleRoll().evaluate(t)
    b = run_quiet(ManeuverInput(SampledManeuver(t, src.x[0], src.y[0], src.z[0], src.phi[0]), dt), mirage)
    assert np.abs(b.thrust - a.thrust).max() < 1e-2 * np.abs(a.thrust).max()
    assert np.abs(b.delta_n - a.delta_n).max() < 1e-2 * np.abs(a.delta_n).max()


def test_large_step_warns(mirage):
    with pytest.warns(RuntimeWarning, match="time step"):
        run(ManeuverInput(MirageDoubleRoll(), 0.05), mirage)


def test_guard_failure_is_reported(mirage):
    # a vertical pull-up drives theta_w to 90 deg
    m = ManeuverInput(ExpressionManeuver("300*sin(t/2)", "0", "-5000 - 300*(1-cos(t/2))", "0",
                                         3.5, "pull-up"), 0.01)
    with pytest.raises(Exception) as info:
        run(m, mirage)
    assert isinstance(info.value, (IntegrationError, ArithmeticError))


def test_summary_and_orbit(mirage):
    s = run_quiet(ManeuverInput(MirageDoubleRoll(), 0.05), mirage)
    summ = s.summary()
    assert len(summ.thrust_peaks) == 3
    assert not summ.thrust_reversal and not summ.actuator_limit_exceeded
    assert orbit_detachment(s) < 1e-5
    assert any("thrust" in line for line in summ.lines())


def test_bad_init(mirage):
    with pytest.raises(ConfigurationError):
        InverseSimulator(ManeuverInput(MirageDoubleRoll(), 0.1), mirage, init="zero")


def test_state_layout():
    assert SimState._fields[:5] == ("T", "alpha", "beta", "psi", "theta")
