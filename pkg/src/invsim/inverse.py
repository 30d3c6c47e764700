"""Inverse simulation: controls that make an airframe fly a prescribed path.

Given the path of the centre of gravity and the roll angle, the attitude
angles ``theta`` and ``psi``, the aerodynamic angles ``alpha`` and ``beta``
and the thrust are marched in time with the classical fourth-order
Runge-Kutta scheme.  The attitude and aerodynamic angles are carried together
with their first derivatives; their second derivatives come from twice
differentiating the two flight-path relations and the lateral and normal
body-axis force balance, which form a linear system at every stage.  The
thrust follows the along-track momentum balance, whose time derivative is
obtained with jets.

After each step the body angular accelerations give the moments required by
the rotational equations, and the moment coefficients are inverted for the
aileron, elevator and rudder deflections.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import _kernel
from . import dynamics as dyn
from .airframe import AirframeParams, force_coefficients
from .errors import ConfigurationError, IntegrationError, SingularityError
from .guards import DEFAULT_GUARDS, Guards
from .jet import Jet2
from .trajectory import (KinematicTables, ManeuverInput, PathPoint, path_point,
                         preprocess)

__all__ = [
    "SimState", "ControlSeries", "RunSummary", "InverseSimulator", "rk4_step",
    "deflections_from_coefficients", "extract_controls", "run",
    "orbit_detachment", "LARGE_STEP_WARNING",
]

#: Steps above this value (s) trigger a warning about spurious oscillations.
LARGE_STEP_WARNING = 0.01

_STATE_FIELDS = ("T", "alpha", "beta", "psi", "theta", "p", "q", "r",
                 "alpha_dot", "beta_dot", "psi_dot", "theta_dot")


class SimState(NamedTuple):
    """Integrated variables of the inverse simulation at one station."""

    T: float
    alpha: float
    beta: float
    psi: float
    theta: float
    p: float
    q: float
    r: float
    alpha_dot: float
    beta_dot: float
    psi_dot: float
    theta_dot: float


def rk4_step(f: Callable, t: float, y: np.ndarray, dt: float, k1=None):
    """One classical Runge-Kutta step of ``y' = f(t, y)``.

    ``k1`` may carry ``f(t, y)`` when the caller already has it.
    """
    if k1 is None:
        k1 = f(t, y)
    h2 = 0.5 * dt
    k2 = f(t + h2, y + h2 * k1)
    k3 = f(t + h2, y + h2 * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


# --- control inversion ------------------------------------------------------------

def deflections_from_coefficients(params: AirframeParams, Cl, Cm, Cn, alpha, beta,
                                  p, q, r, V, det_guard: float = DEFAULT_GUARDS.det):
    """Aileron, elevator and rudder deflections ``(dl, dm, dn)`` producing the
    given moment coefficients.  Inverts :func:`~invsim.airframe.moment_coefficients`.
    """
    det = params.Cldl * params.Cndn - params.Cldn * params.Cndl
    if abs(det) < det_guard:
        raise SingularityError(
            f"uncontrollable configuration: aileron/rudder determinant {det:.3e}")
    if abs(params.Cmdm) < det_guard:
        raise SingularityError("uncontrollable configuration: elevator effectiveness is zero")
    kb = params.b / V
    kc = params.c / V
    dm = (Cm - params.Cm0 - params.Cma * alpha - params.Cmq * q * kc) / params.Cmdm
    rl = Cl - params.Clb * beta - params.Clp * p * kb - params.Clr * r * kb
    rn = Cn - params.Cnb * beta - params.Cnp * p * kb - params.Cnr * r * kb
    dl = (params.Cndn * rl - params.Cldn * rn) / det
    dn = (params.Cldl * rn - params.Cndl * rl) / det
    return dl, dm, dn


class Controls(NamedTuple):
    dl: object
    dm: object
    dn: object
    L: object
    M: object
    N: object
    Cl: object
    Cm: object
    Cn: object


def extract_controls(params: AirframeParams, state, accels, V, qbar,
                     guards: Guards = DEFAULT_GUARDS) -> Controls:
    """Moments and control deflections at a station.

    ``state`` supplies ``alpha, beta, p, q, r`` (a :class:`SimState` or any
    object with those attributes, scalar or array valued) and ``accels`` the
    body angular accelerations ``(p_dot, q_dot, r_dot)``.
    """
    p, q, r = state.p, state.q, state.r
    if np.any(np.asarray(V) <= guards.v_min):
        raise SingularityError("airspeed below guard during control extraction")
    T1, T2, T3 = dyn.auxiliary_moments_from_accels(params, *accels)
    L, M, N = dyn.moments_from_auxiliary(params, p, q, r, T1, T2, T3)
    qS = qbar * params.S
    Cl, Cm, Cn = L / (qS * params.b), M / (qS * params.c), N / (qS * params.b)
    dl, dm, dn = deflections_from_coefficients(params, Cl, Cm, Cn, state.alpha, state.beta,
                                               p, q, r, V, guards.det)
    return Controls(dl, dm, dn, L, M, N, Cl, Cm, Cn)


# --- results --------------------------------------------------------------------

@dataclass(frozen=True)
class RunSummary:
    """Extrema and means of a control history.  Angles are in degrees."""

    thrust_initial: float
    thrust_final: float
    thrust_max: float
    thrust_min: float
    thrust_peaks: tuple
    thrust_troughs: tuple
    max_abs_deg: dict
    mean_deg: dict
    alpha_conventional_deg: tuple
    thrust_reversal: bool
    actuator_limit_exceeded: bool
    max_constraint_residual: float

    def lines(self) -> list[str]:
        out = [
            f"thrust initial / final      : {self.thrust_initial:.1f} N / {self.thrust_final:.1f} N",
            f"thrust max / min            : {self.thrust_max:.1f} N / {self.thrust_min:.1f} N",
        ]
        out += [f"thrust local max            : {v:.1f} N at {t:.3f} s" for t, v in self.thrust_peaks]
        out += [f"thrust local min            : {v:.1f} N at {t:.3f} s" for t, v in self.thrust_troughs]
        for key in ("delta_l", "delta_m", "delta_n"):
            out.append(f"{key:<8} max |.| / mean      : {self.max_abs_deg[key]:.3f} deg / "
                       f"{self.mean_deg[key]:+.3f} deg")
        lo, hi = self.alpha_conventional_deg
        out.append(f"conventional AoA range      : [{lo:.4f}, {hi:.4f}] deg")
        for key in ("beta", "theta", "psi"):
            out.append(f"{key:<8} max |.|             : {self.max_abs_deg[key]:.3f} deg")
        out.append(f"max flight-path residual    : {self.max_constraint_residual:.2e}")
        out.append(f"thrust reversal             : {'yes' if self.thrust_reversal else 'no'}")
        out.append(f"deflection beyond 60 deg    : {'yes' if self.actuator_limit_exceeded else 'no'}")
        return out


def _local_extrema(t, v, sign):
    from scipy.signal import find_peaks

    span = float(np.ptp(v))
    if span == 0.0:
        return ()
    idx, _ = find_peaks(sign * v, prominence=0.01 * span)
    return tuple((float(t[i]), float(v[i])) for i in idx)


@dataclass
class ControlSeries:
    """Per-station controls and diagnostics of an inverse simulation."""

    t: np.ndarray
    thrust: np.ndarray
    delta_l: np.ndarray
    delta_m: np.ndarray
    delta_n: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    res_eq33: np.ndarray
    res_eq34: np.ndarray
    alpha_equb: float = 0.0
    Cl: np.ndarray | None = None
    Cm: np.ndarray | None = None
    Cn: np.ndarray | None = None
    p: np.ndarray | None = None
    q: np.ndarray | None = None
    r: np.ndarray | None = None
    phi: np.ndarray | None = None
    phi_dot: np.ndarray | None = None
    phi_ddot: np.ndarray | None = None
    extras: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.t.size == 0:
            raise ConfigurationError("a control series needs at least one station")

    def __len__(self):
        return self.t.size

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0]) if self.t.size > 1 else 0.0

    @property
    def alpha_conventional(self) -> np.ndarray:
        return self.alpha + self.alpha_equb

    def summary(self) -> RunSummary:
        deg = np.degrees
        T = self.thrust
        chans = {"delta_l": self.delta_l, "delta_m": self.delta_m, "delta_n": self.delta_n,
                 "alpha": self.alpha, "beta": self.beta, "theta": self.theta, "psi": self.psi}
        aconv = deg(self.alpha_conventional)
        defl = np.concatenate([self.delta_l, self.delta_m, self.delta_n])
        return RunSummary(
            thrust_initial=float(T[0]), thrust_final=float(T[-1]),
            thrust_max=float(T.max()), thrust_min=float(T.min()),
            thrust_peaks=_local_extrema(self.t, T, 1.0),
            thrust_troughs=_local_extrema(self.t, T, -1.0),
            max_abs_deg={k: float(np.max(np.abs(deg(v)))) for k, v in chans.items()},
            mean_deg={k: float(np.mean(deg(v))) for k, v in chans.items()},
            alpha_conventional_deg=(float(aconv.min()), float(aconv.max())),
            thrust_reversal=bool(np.any(T < 0)),
            actuator_limit_exceeded=bool(np.any(np.abs(defl) > math.radians(60.0))),
            max_constraint_residual=float(max(np.max(np.abs(self.res_eq33)),
                                              np.max(np.abs(self.res_eq34)))),
        )


def orbit_detachment(series: ControlSeries) -> float:
    """Largest gap between the two halves of the (psi, theta) orbit.

    The history is split at mid-duration.  Each point of the first half is
    paired with the point of the second half whose roll angle is larger by
    the roll covered in the first half, found by cubic-spline interpolation
    in roll angle.  For a double roll the two halves trace the same loop, so
    the gap measures the numerical detachment of the two revolutions.
    """
    from scipy.interpolate import CubicSpline

    if series.phi is None:
        raise ConfigurationError("orbit detachment needs the roll-angle channel")
    n = series.t.size
    mid = (n - 1) // 2
    phi = series.phi
    shift = phi[mid] - phi[0]

    def monotone(idx):
        keep = [idx[0]]
        for i in idx[1:]:
            if phi[i] - phi[keep[-1]] > 1e-9:
                keep.append(i)
        return np.array(keep)

    second = monotone(np.arange(mid, n))
    first = monotone(np.arange(0, mid + 1))
    target = phi[first] + shift
    lo, hi = phi[second[0]], phi[second[-1]]
    inside = (target >= lo) & (target <= hi)
    first, target = first[inside], target[inside]
    psi2 = CubicSpline(phi[second], series.psi[second])(target)
    th2 = CubicSpline(phi[second], series.theta[second])(target)
    gap = np.hypot(psi2 - series.psi[first], th2 - series.theta[first])
    return float(gap.max())


# --- simulator ---------------------------------------------------------------------

class InverseSimulator:
    """Time-marching inverse simulation of one maneuver for one airframe.

    Parameters
    ----------
    maneuver : ManeuverInput
        Path, roll profile and time step.
    params : AirframeParams
        Airframe data.
    guards : Guards, optional
        Singularity thresholds.
    init : {"equilibrium", "consistent"}
        ``"equilibrium"`` starts from zero aerodynamic angles with the attitude
        aligned to the flight path, which is exact when the maneuver starts
        in steady level or straight flight.  ``"consistent"`` solves the
        force-balance and flight-path relations for the initial angles and
        their rates, for maneuvers that start in a curved or accelerated state.
    """

    def __init__(self, maneuver: ManeuverInput, params: AirframeParams, *,
                 guards: Guards = DEFAULT_GUARDS, init: str = "equilibrium",
                 tables: KinematicTables | None = None):
        if init not in ("equilibrium", "consistent"):
            raise ConfigurationError("init must be 'equilibrium' or 'consistent'")
        self.maneuver = maneuver
        self.params = params
        self.guards = guards
        self.init = init
        self.tables = tables if tables is not None else preprocess(maneuver, params, guards=guards)
        self.alpha_equb = self.tables.alpha_equb
        self.dt = maneuver.dt
        self._analytic = maneuver.is_analytic

    # path data at any time ------------------------------------------------------
    def path(self, t: float, station: int | None = None) -> PathPoint:
        if self._analytic:
            s = self.maneuver.source.evaluate(t)
        elif station is not None:
            s = self.tables.sample(station)
        else:
            s = self.tables.interpolate(t)
        return path_point(t, s, self.params.h_ini, self.guards)

    # right-hand side -------------------------------------------------------------
    def derivatives(self, y, pp: PathPoint, stage: int | None = None) -> np.ndarray:
        """Time derivative of the state vector ``y`` along the path point ``pp``."""
        P = self.params
        aeq = self.alpha_equb
        T, al, be, ps, th, p, q, r, ald, bed, psd, thd = y
        g = self.guards
        lim = 0.5 * math.pi - g.angle
        for name, v in (("alpha", al), ("beta", be), ("theta", th)):
            if not abs(v) < lim:
                raise IntegrationError(f"{name} = {v:.6g} rad reached the +-pi/2 guard",
                                       pp.t, stage, name)
        A = Jet2(al, ald, 0.0)
        B = Jet2(be, bed, 0.0)
        TH = Jet2(th, thd, 0.0)
        PS = Jet2(ps, psd, 0.0)
        ph = pp.phi
        co = force_coefficients(P, A, B, aeq)
        T_dot = dyn.thrust_explicit(P, A, B, TH, ph, co, pp.V_dot, pp.qbar).d1
        ry, rz = dyn.force_balance_residuals(P, A, B, ph, TH, PS, pp.accel, pp.qbar, aeq, co)
        raz, rel = dyn.flight_path_residuals(A, B, ph, TH, PS, pp.theta_w, pp.psi_w)

        phi0 = ph.value
        acc = (pp.accel[0].value, pp.accel[1].value, pp.accel[2].value)
        fb = dyn.force_balance_partials(P, al, be, phi0, th, ps, acc, pp.qbar.value, aeq)
        fp = dyn.flight_path_partials(al, be, phi0, th, ps, pp.theta_w.value, pp.psi_w.value)
        if abs(fp.el_theta) < g.det or abs(fp.az_psi) < g.det:
            raise IntegrationError("flight-path relations are singular in theta or psi",
                                   pp.t, stage, "flight-path determinant")
        # theta'' = th0 + th_a alpha'' + th_b beta'', likewise psi''
        th0, th_a, th_b = -rel.d2 / fp.el_theta, -fp.el_alpha / fp.el_theta, -fp.el_beta / fp.el_theta
        ps0, ps_a, ps_b = -raz.d2 / fp.az_psi, -fp.az_alpha / fp.az_psi, -fp.az_beta / fp.az_psi
        m11 = fb.y_alpha + fb.y_theta * th_a + fb.y_psi * ps_a
        m12 = fb.y_beta + fb.y_theta * th_b + fb.y_psi * ps_b
        m21 = fb.z_alpha + fb.z_theta * th_a + fb.z_psi * ps_a
        m22 = fb.z_beta + fb.z_theta * th_b + fb.z_psi * ps_b
        b1 = -(ry.d2 + fb.y_theta * th0 + fb.y_psi * ps0)
        b2 = -(rz.d2 + fb.z_theta * th0 + fb.z_psi * ps0)
        det = m11 * m22 - m12 * m21
        if abs(det) < g.det:
            raise IntegrationError(f"force-balance system is singular (det = {det:.3e})",
                                   pp.t, stage, "force-balance determinant")
        a_dd = (b1 * m22 - m12 * b2) / det
        b_dd = (m11 * b2 - m21 * b1) / det
        t_dd = th0 + th_a * a_dd + th_b * b_dd
        p_dd = ps0 + ps_a * a_dd + ps_b * b_dd
        p_dot, q_dot, r_dot = dyn.body_accels_from_euler(
            phi0, th, ph.d1, thd, psd, ph.d2, t_dd, p_dd)
        return np.array([T_dot, ald, bed, psd, thd, p_dot, q_dot, r_dot,
                         a_dd, b_dd, p_dd, t_dd])

    # initialization -----------------------------------------------------------------
    def initialize(self) -> SimState:
        """State at the first station."""
        pp = self.path(0.0, 0)
        P = self.params
        if self.init == "equilibrium":
            al = be = 0.0
            th, ps = pp.theta_w.value, pp.psi_w.value
            ald = bed = 0.0
            thd, psd = dyn.euler_rates_from_flight_path(
                al, be, pp.phi.value, th, ps, pp.theta_w.value, pp.psi_w.value,
                ald, bed, pp.phi.d1, pp.theta_w.d1, pp.psi_w.d1, self.guards.det)
        else:
            al, be, th, ps, ald, bed, thd, psd = self._consistent_start(pp)
        co = force_coefficients(P, al, be, self.alpha_equb, self.guards.angle)
        T = dyn.thrust_explicit(P, al, be, th, pp.phi.value, co, pp.V_dot.value, pp.qbar.value)
        p, q, r = dyn.body_rates_from_euler(pp.phi.value, th, pp.phi.d1, thd, psd)
        state = SimState(T, al, be, ps, th, p, q, r, ald, bed, psd, thd)
        res = self._constraint_norm(state, pp)
        if res > 1e-6:
            warnings.warn(
                f"initial state violates the force balance by {res:.3e} m/s^2; "
                "the maneuver does not start in equilibrium, consider init='consistent'",
                RuntimeWarning, stacklevel=2)
        return state

    def _constraint_norm(self, s: SimState, pp: PathPoint) -> float:
        ry, rz = dyn.force_balance_residuals(
            self.params, s.alpha, s.beta, pp.phi.value, s.theta, s.psi,
            tuple(a.value for a in pp.accel), pp.qbar.value, self.alpha_equb)
        return math.hypot(ry, rz)

    def _consistent_start(self, pp: PathPoint):
        P, aeq = self.params, self.alpha_equb
        acc = tuple(a.value for a in pp.accel)
        phi, tw, pw = pp.phi.value, pp.theta_w.value, pp.psi_w.value
        u = np.array([0.0, 0.0, tw, pw])
        for _ in range(50):
            ry, rz = dyn.force_balance_residuals(P, u[0], u[1], phi, u[2], u[3], acc, pp.qbar.value, aeq)
            raz, rel = dyn.flight_path_residuals(u[0], u[1], phi, u[2], u[3], tw, pw)
            J = self._jacobian(u, pp, acc)
            step = np.linalg.solve(J, -np.array([ry, rz, raz, rel]))
            u = u + step
            if np.max(np.abs(step)) < 1e-14:
                break
        else:
            raise SingularityError("consistent initialization did not converge")
        al, be, th, ps = (float(v) for v in u)
        A, B, TH, PS = (Jet2(v, 0.0, 0.0) for v in (al, be, th, ps))
        ry, rz = dyn.force_balance_residuals(P, A, B, pp.phi, TH, PS, pp.accel, pp.qbar, aeq)
        raz, rel = dyn.flight_path_residuals(A, B, pp.phi, TH, PS, pp.theta_w, pp.psi_w)
        rates = np.linalg.solve(self._jacobian(u, pp, acc), -np.array([ry.d1, rz.d1, raz.d1, rel.d1]))
        ald, bed, thd, psd = (float(v) for v in rates)
        return al, be, th, ps, ald, bed, thd, psd

    def _jacobian(self, u, pp, acc):
        al, be, th, ps = u
        fb = dyn.force_balance_partials(self.params, al, be, pp.phi.value, th, ps, acc,
                                        pp.qbar.value, self.alpha_equb)
        fp = dyn.flight_path_partials(al, be, pp.phi.value, th, ps, pp.theta_w.value, pp.psi_w.value)
        return np.array([
            [fb.y_alpha, fb.y_beta, fb.y_theta, fb.y_psi],
            [fb.z_alpha, fb.z_beta, fb.z_theta, fb.z_psi],
            [fp.az_alpha, fp.az_beta, 0.0, fp.az_psi],
            [fp.el_alpha, fp.el_beta, fp.el_theta, 0.0],
        ])

    # time loop --------------------------------------------------------------------
    def step(self, n: int, y: np.ndarray, k1: np.ndarray | None = None,
             pp_next: PathPoint | None = None) -> np.ndarray:
        """Advance the state vector from station ``n`` to ``n + 1``."""
        dt = self.dt
        t = n * dt
        pp_half = self.path(t + 0.5 * dt)
        if pp_next is None:
            pp_next = self.path((n + 1) * dt, n + 1)
        if k1 is None:
            k1 = self.derivatives(y, self.path(t, n), 1)
        stages = iter(((2, pp_half), (3, pp_half), (4, pp_next)))

        def f(_, yy):
            stage, pp = next(stages)
            return self.derivatives(yy, pp, stage)

        return rk4_step(f, t, y, dt, k1)

    # flat fast path -------------------------------------------------------------
    def _path_flat(self, t: float, station: int | None = None):
        if self._analytic:
            s = self.maneuver.source.evaluate(t)
        elif station is not None:
            s = self.tables.sample(station)
        else:
            s = self.tables.interpolate(t)
        g = self.guards
        try:
            return _kernel.path_tuple(s.x, s.y, s.z, s.phi, self.params.h_ini, g.v_min, g.angle)
        except ArithmeticError as exc:
            raise IntegrationError(f"{exc} at t = {t:g} s", t, None, "path") from exc

    def _check_state(self, y, t, stage):
        lim = 0.5 * math.pi - self.guards.angle
        for name, i in (("alpha", 1), ("beta", 2), ("theta", 4)):
            if not abs(y[i]) < lim:
                raise IntegrationError(f"{name} = {y[i]:.6g} rad reached the +-pi/2 guard",
                                       t, stage, name)

    def _run_flat(self, Y: np.ndarray, K: np.ndarray, y0) -> None:
        air = _kernel.airframe_tuple(self.params)
        aeq, det_guard = self.alpha_equb, self.guards.det
        dt = self.dt
        h2, h6 = 0.5 * dt, dt / 6.0
        f = _kernel.stage_derivatives
        y = tuple(float(v) for v in y0)
        path = self._path_flat(0.0, 0)
        k1 = f(y, path, air, aeq, det_guard)
        Y[0], K[0] = y, k1
        for n in range(Y.shape[0] - 1):
            t = n * dt
            half = self._path_flat(t + h2)
            nxt = self._path_flat((n + 1) * dt, n + 1)
            stage = 2
            try:
                ys = [a + h2 * b for a, b in zip(y, k1)]
                self._check_state(ys, t + h2, 2)
                k2 = f(ys, half, air, aeq, det_guard)
                stage = 3
                ys = [a + h2 * b for a, b in zip(y, k2)]
                self._check_state(ys, t + h2, 3)
                k3 = f(ys, half, air, aeq, det_guard)
                stage = 4
                ys = [a + dt * b for a, b in zip(y, k3)]
                self._check_state(ys, t + dt, 4)
                k4 = f(ys, nxt, air, aeq, det_guard)
                y = tuple(a + h6 * (b1 + 2.0 * (b2 + b3) + b4)
                          for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))
                stage = 1
                self._check_state(y, t + dt, 1)
                k1 = f(y, nxt, air, aeq, det_guard)
            except (ArithmeticError, ValueError) as exc:
                raise IntegrationError(f"integration failed at t = {t:g} s, stage {stage}: {exc}",
                                       t, stage, type(exc).__name__) from exc
            if not all(map(math.isfinite, y)):
                raise IntegrationError(f"non-finite state at t = {(n + 1) * dt:g} s",
                                       (n + 1) * dt, None, "state")
            Y[n + 1], K[n + 1] = y, k1

    def run(self, fast: bool = True) -> ControlSeries:
        """Integrate over the whole maneuver and extract the controls.

        ``fast=False`` integrates with the jet-class right-hand side, which
        is slower but written directly in terms of the model relations.
        """
        if self.dt > LARGE_STEP_WARNING:
            warnings.warn(
                f"time step {self.dt:g} s exceeds {LARGE_STEP_WARNING:g} s; coarse steps are "
                "known to produce spurious oscillations in the controls",
                RuntimeWarning, stacklevel=2)
        n_st = self.maneuver.n_stations
        Y = np.empty((n_st, 12))
        K = np.empty((n_st, 12))
        y = np.array(self.initialize(), dtype=float)
        if fast:
            self._run_flat(Y, K, y)
            return self._series(Y, K)
        pp = self.path(0.0, 0)
        k = self.derivatives(y, pp, 1)
        Y[0], K[0] = y, k
        for n in range(n_st - 1):
            pp_next = self.path((n + 1) * self.dt, n + 1)
            try:
                y = self.step(n, y, k, pp_next)
                k = self.derivatives(y, pp_next, 1)
            except IntegrationError:
                raise
            except (SingularityError, ArithmeticError, ValueError) as exc:
                raise IntegrationError(f"integration failed near t = {(n + 1) * self.dt:g} s: {exc}",
                                       (n + 1) * self.dt, None, type(exc).__name__) from exc
            if not np.all(np.isfinite(y)):
                raise IntegrationError(f"non-finite state at t = {(n + 1) * self.dt:g} s",
                                       (n + 1) * self.dt, None, "state")
            Y[n + 1], K[n + 1] = y, k
        return self._series(Y, K)

    def _series(self, Y: np.ndarray, K: np.ndarray) -> ControlSeries:
        tb = self.tables
        st = SimState(*Y.T)
        ctl = extract_controls(self.params, st, (K[:, 5], K[:, 6], K[:, 7]), tb.V, tb.qbar, self.guards)
        res33, res34 = dyn.flight_path_residuals(st.alpha, st.beta, tb.phi[0], st.theta, st.psi,
                                                 tb.theta_w, tb.psi_w)
        return ControlSeries(
            t=tb.t.copy(), thrust=st.T, delta_l=ctl.dl, delta_m=ctl.dm, delta_n=ctl.dn,
            alpha=st.alpha, beta=st.beta, theta=st.theta, psi=st.psi,
            L=ctl.L, M=ctl.M, N=ctl.N, res_eq33=res33, res_eq34=res34,
            alpha_equb=self.alpha_equb, Cl=ctl.Cl, Cm=ctl.Cm, Cn=ctl.Cn,
            p=st.p, q=st.q, r=st.r,
            phi=tb.phi[0].copy(), phi_dot=tb.phi[1].copy(), phi_ddot=tb.phi[2].copy(),
            extras={"state": Y, "rates": K},
        )


def run(maneuver: ManeuverInput, params: AirframeParams, *,
        guards: Guards = DEFAULT_GUARDS, init: str = "equilibrium",
        fast: bool = True) -> ControlSeries:
    """Inverse-simulate ``maneuver`` for ``params`` and return the controls."""
    return InverseSimulator(maneuver, params, guards=guards, init=init).run(fast=fast)
