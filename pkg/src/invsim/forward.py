"""Forward six-degree-of-freedom simulation under a control history.

The forward model integrates airspeed, aerodynamic angles, Euler angles,
body rates and inertial position from the momentum and rotational equations,
driven by thrust and deflection histories.  Replaying the controls computed
by the inverse simulation and comparing with the target path closes the
loop on the whole inverse computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import atmosphere
from . import dynamics as dyn
from .airframe import AirframeParams, force_coefficients, moment_coefficients
from .errors import ConfigurationError, IntegrationError
from .guards import DEFAULT_GUARDS, Guards
from .inverse import ControlSeries, InverseSimulator, rk4_step
from .trajectory import ManeuverInput

__all__ = [
    "ForwardState", "ControlSchedule", "forward_derivatives", "forward_step",
    "simulate", "RoundTripReport", "round_trip", "POSITION_TOLERANCE_FRACTION",
    "ROLL_TOLERANCE_DEG",
]

#: Position deviation allowed, as a fraction of the distance flown.
POSITION_TOLERANCE_FRACTION = 0.0015
#: Roll deviation allowed, degrees.
ROLL_TOLERANCE_DEG = 1.0


class ForwardState(NamedTuple):
    V: float
    alpha: float
    beta: float
    phi: float
    theta: float
    psi: float
    p: float
    q: float
    r: float
    x_g: float
    y_g: float
    z_g: float


@dataclass(frozen=True)
class ControlSchedule:
    """Thrust and deflections sampled at uniform times.

    Values between samples are interpolated linearly, or held from the
    previous sample when ``hold`` is true.
    """

    t: np.ndarray
    thrust: np.ndarray
    delta_l: np.ndarray
    delta_m: np.ndarray
    delta_n: np.ndarray
    hold: bool = False

    @classmethod
    def from_series(cls, series: ControlSeries, hold: bool = False) -> "ControlSchedule":
        return cls(series.t, series.thrust, series.delta_l, series.delta_m, series.delta_n, hold)

    def __post_init__(self):
        if self.t.size < 2:
            raise ConfigurationError("a control schedule needs at least two samples")
        object.__setattr__(self, "_table", np.vstack(
            [self.thrust, self.delta_l, self.delta_m, self.delta_n]).T.copy())

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    def at(self, t: float):
        """``(thrust, dl, dm, dn)`` at time ``t``."""
        tab = self._table
        u = (t - self.t[0]) / self.dt
        i = int(math.floor(u + 1e-9))
        last = tab.shape[0] - 1
        if i < 0 or u > last + 1e-6:
            raise ConfigurationError(f"time {t:g} s outside the control schedule")
        if i >= last:
            return tuple(tab[last])
        if self.hold:
            return tuple(tab[i])
        w = u - i
        lo, hi = tab[i], tab[i + 1]
        return tuple(lo + w * (hi - lo))


def forward_derivatives(params: AirframeParams, state, controls, alpha_equb: float,
                        guards: Guards = DEFAULT_GUARDS) -> tuple:
    """Time derivative of a :class:`ForwardState`-ordered sequence."""
    V, al, be, phi, th, psi, p, q, r, x, y, z = state
    T, dl, dm, dn = controls
    if abs(th) > math.radians(guards.forward_pitch_deg):
        raise ArithmeticError(
            f"pitch {math.degrees(th):.2f} deg beyond the forward-model limit "
            f"{guards.forward_pitch_deg:g} deg")
    if V <= guards.v_min:
        raise ArithmeticError("airspeed below guard")
    rho = atmosphere.density(params.h_ini - z)
    qbar = 0.5 * rho * V * V
    co = force_coefficients(params, al, be, alpha_equb, guards.angle)
    V_dot = dyn.speed_rate(params, V, al, be, th, phi, co, qbar, T)
    a_dot = dyn.alpha_rate(params, V, al, be, th, phi, co, qbar, T, p, q, r)
    b_dot = dyn.beta_rate(params, V, al, be, th, phi, co, qbar, T, p, r)
    Cl, Cm, Cn = moment_coefficients(params, al, be, p, q, r, V, dl, dm, dn, guards.v_min)
    qS = qbar * params.S
    p_dot, q_dot, r_dot = dyn.rotational_accels(params, p, q, r, qS * params.b * Cl,
                                                qS * params.c * Cm, qS * params.b * Cn)
    f_dot, t_dot, s_dot = dyn.euler_rates_from_body(phi, th, p, q, r)
    x_dot, y_dot, z_dot = dyn.inertial_velocity(V, al, be, phi, th, psi)
    return (V_dot, a_dot, b_dot, f_dot, t_dot, s_dot, p_dot, q_dot, r_dot, x_dot, y_dot, z_dot)


def forward_step(params: AirframeParams, state, t: float, dt: float,
                 schedule: ControlSchedule, alpha_equb: float,
                 guards: Guards = DEFAULT_GUARDS) -> np.ndarray:
    """Advance the forward state by one Runge-Kutta step."""

    def f(tt, yy):
        return np.array(forward_derivatives(params, yy, schedule.at(tt), alpha_equb, guards))

    return rk4_step(f, t, np.asarray(state, dtype=float), dt)


def simulate(params: AirframeParams, initial, schedule: ControlSchedule, alpha_equb: float,
             dt: float | None = None, duration: float | None = None,
             guards: Guards = DEFAULT_GUARDS) -> tuple[np.ndarray, np.ndarray]:
    """Integrate from ``initial`` and return ``(t, states)``, states shaped ``(n, 12)``."""
    dt = schedule.dt if dt is None else dt
    duration = float(schedule.t[-1] - schedule.t[0]) if duration is None else duration
    n = int(round(duration / dt)) + 1
    if (n - 1) * dt > float(schedule.t[-1] - schedule.t[0]) + 1e-9:
        raise ConfigurationError("control schedule does not cover the requested duration")
    out = np.empty((n, 12))
    y = np.asarray(initial, dtype=float)
    out[0] = y
    t0 = float(schedule.t[0])
    for i in range(n - 1):
        t = t0 + i * dt
        try:
            y = forward_step(params, y, t, dt, schedule, alpha_equb, guards)
        except (ArithmeticError, ValueError) as exc:
            raise IntegrationError(f"forward integration failed at t = {t:g} s: {exc}",
                                   t, None, type(exc).__name__) from exc
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f"non-finite forward state at t = {t + dt:g} s",
                                   t + dt, None, "state")
        out[i + 1] = y
    return t0 + dt * np.arange(n), out


@dataclass(frozen=True)
class RoundTripReport:
    """Deviation of a forward replay from the target path.

    The tolerances are self-consistency targets chosen for this package and
    are not published benchmarks.
    """

    max_pos_dev_m: float
    rms_pos_dev_m: float
    max_roll_dev_deg: float
    rms_roll_dev_deg: float
    max_axis_dev_m: tuple
    distance_m: float
    pos_tolerance_m: float
    roll_tolerance_deg: float
    max_speed_dev_m_s: float

    @property
    def passed(self) -> bool:
        return (self.max_pos_dev_m < self.pos_tolerance_m
                and self.max_roll_dev_deg < self.roll_tolerance_deg)

    def to_dict(self) -> dict:
        return {
            "max_pos_dev_m": self.max_pos_dev_m,
            "rms_pos_dev_m": self.rms_pos_dev_m,
            "max_roll_dev_deg": self.max_roll_dev_deg,
            "pass": self.passed,
            "rms_roll_dev_deg": self.rms_roll_dev_deg,
            "max_axis_dev_m": list(self.max_axis_dev_m),
            "distance_m": self.distance_m,
            "pos_tolerance_m": self.pos_tolerance_m,
            "roll_tolerance_deg": self.roll_tolerance_deg,
            "max_speed_dev_m_s": self.max_speed_dev_m_s,
            "tolerance_basis": "self-consistency target of this package, not a published value",
        }


def round_trip(maneuver: ManeuverInput, controls: ControlSeries, params: AirframeParams, *,
               hold: bool = False, guards: Guards = DEFAULT_GUARDS,
               pos_fraction: float = POSITION_TOLERANCE_FRACTION,
               roll_tol_deg: float = ROLL_TOLERANCE_DEG,
               return_states: bool = False):
    """Replay ``controls`` with the forward model and compare with the target path.

    The forward run starts from the inverse simulation's initial state.
    """
    t_need = maneuver.duration
    if controls.t.size < 2 or controls.t[-1] < t_need - 1e-9:
        raise ConfigurationError(
            f"controls cover {controls.t[-1]:g} s but the maneuver lasts {t_need:g} s")
    sim = InverseSimulator(maneuver, params, guards=guards)
    tb = sim.tables
    s0 = sim.initialize()
    initial = ForwardState(tb.V[0], s0.alpha, s0.beta, tb.phi[0, 0], s0.theta, s0.psi,
                           s0.p, s0.q, s0.r, tb.x[0, 0], tb.y[0, 0], tb.z[0, 0])
    schedule = ControlSchedule.from_series(controls, hold=hold)
    t, states = simulate(params, initial, schedule, controls.alpha_equb, dt=maneuver.dt,
                         duration=t_need, guards=guards)
    dx = states[:, 9] - tb.x[0]
    dy = states[:, 10] - tb.y[0]
    dz = states[:, 11] - tb.z[0]
    dpos = np.sqrt(dx * dx + dy * dy + dz * dz)
    droll = np.degrees(np.abs(states[:, 3] - tb.phi[0]))
    seg = np.sqrt(np.diff(tb.x[0]) ** 2 + np.diff(tb.y[0]) ** 2 + np.diff(tb.z[0]) ** 2)
    distance = float(seg.sum())
    report = RoundTripReport(
        max_pos_dev_m=float(dpos.max()),
        rms_pos_dev_m=float(np.sqrt(np.mean(dpos ** 2))),
        max_roll_dev_deg=float(droll.max()),
        rms_roll_dev_deg=float(np.sqrt(np.mean(droll ** 2))),
        max_axis_dev_m=(float(np.abs(dx).max()), float(np.abs(dy).max()), float(np.abs(dz).max())),
        distance_m=distance,
        pos_tolerance_m=pos_fraction * distance,
        roll_tolerance_deg=roll_tol_deg,
        max_speed_dev_m_s=float(np.abs(states[:, 0] - tb.V).max()),
    )
    if return_states:
        return report, t, states
    return report
