"""Maneuver definitions and kinematic pre-processing.

A maneuver prescribes the inertial position ``(x_g, y_g, z_g)`` of the
centre of gravity (north-east-down, metres) and the roll angle ``phi``
(radians) as functions of time.  Sources are either analytic, exposing exact
time derivatives, or sampled at a uniform step.

:func:`preprocess` turns a maneuver into per-station :class:`KinematicTables`
and :func:`path_point` builds the jets of path quantities needed at any
intermediate Runge-Kutta stage time.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import atmosphere, jet
from .airframe import AirframeParams, equilibrium_alpha
from .dynamics import flight_path_angles, flight_path_rates
from .errors import ConfigurationError, DomainError, SingularityError
from .guards import DEFAULT_GUARDS, Guards
from .jet import Jet2
from .numdiff import derivative_array

__all__ = [
    "TrajectorySample", "PathPoint", "AnalyticManeuver", "MirageDoubleRoll",
    "ExpressionManeuver", "SampledManeuver", "ManeuverInput", "KinematicTables",
    "load_sampled", "export_sampled", "preprocess", "path_point", "station_count",
    "named_maneuver", "MANEUVERS",
]

_STEP_TOL = 1e-9


class TrajectorySample(NamedTuple):
    """Position derivatives of order 0-4 per axis and roll derivatives of order 0-2."""

    x: tuple
    y: tuple
    z: tuple
    phi: tuple


def station_count(duration: float, dt: float) -> int:
    """Number of stations ``duration/dt + 1``; the ratio must be an integer."""
    if not dt > 0 or not duration > 0:
        raise ConfigurationError("duration and time step must be positive")
    ratio = duration / dt
    steps = round(ratio)
    if steps < 1 or abs(ratio - steps) > 1e-9 * max(1.0, ratio):
        raise ConfigurationError(
            f"duration {duration:g} s is not an integer multiple of dt = {dt:g} s")
    return steps + 1


# --- analytic sources ---------------------------------------------------------

class AnalyticManeuver:
    """Base class for maneuvers given by closed-form time functions.

    Subclasses implement :meth:`evaluate`, which must accept a float or a
    numpy array of times.
    """

    name = "analytic"
    duration: float

    def evaluate(self, t) -> TrajectorySample:
        raise NotImplementedError


@dataclass(frozen=True)
class MirageDoubleRoll(AnalyticManeuver):
    """Level northbound flight with two full rolls over 30 s.

    ``phi(t) = pi/4 [8 + cos(pi t/10) - 9 cos(pi t/30)]`` starts and ends with
    zero roll rate and acceleration.
    """

    speed: float = 150.0
    z_g: float = -5000.0
    duration: float = 30.0
    name = "mirage-double-roll"

    def evaluate(self, t) -> TrajectorySample:
        if isinstance(t, float):
            bad = not -1e-12 <= t <= self.duration + 1e-9
        else:
            bad = np.any(np.asarray(t) < -1e-12) or np.any(np.asarray(t) > self.duration + 1e-9)
        if bad:
            raise DomainError(f"time outside the maneuver interval [0, {self.duration:g}] s")
        w1, w3 = math.pi / 10.0, math.pi / 30.0
        if isinstance(t, float):
            s1, c1 = math.sin(w1 * t), math.cos(w1 * t)
            s3, c3 = math.sin(w3 * t), math.cos(w3 * t)
            zero = 0.0
        else:
            t = np.asarray(t, dtype=float)
            s1, c1 = np.sin(w1 * t), np.cos(w1 * t)
            s3, c3 = np.sin(w3 * t), np.cos(w3 * t)
            zero = np.zeros_like(t)
        phi = 0.25 * math.pi * (8.0 + c1 - 9.0 * c3)
        phi_dot = math.pi ** 2 / 40.0 * (3.0 * s3 - s1)
        phi_ddot = math.pi ** 3 / 400.0 * (c3 - c1)
        return TrajectorySample(
            x=(self.speed * t, self.speed + zero, zero, zero, zero),
            y=(zero, zero, zero, zero, zero),
            z=(self.z_g + zero, zero, zero, zero, zero),
            phi=(phi, phi_dot, phi_ddot),
        )


class ExpressionManeuver(AnalyticManeuver):
    """Maneuver built from symbolic expressions in ``t``.

    Derivatives are obtained symbolically with sympy and compiled once for
    scalar (``math``) and vector (``numpy``) evaluation.
    """

    name = "expression"

    def __init__(self, x, y, z, phi, duration: float, name: str = "expression"):
        import sympy as sp

        t = sp.Symbol("t", real=True)
        self.duration = float(duration)
        self.name = name
        self.expressions = {}
        self._scalar = {}
        self._vector = {}
        for key, expr, orders in (("x", x, 5), ("y", y, 5), ("z", z, 5), ("phi", phi, 3)):
            try:
                e = sp.sympify(expr, locals={"t": t})
            except (sp.SympifyError, TypeError) as exc:
                raise ConfigurationError(f"cannot parse expression for {key}: {expr!r}") from exc
            extra = e.free_symbols - {t}
            if extra:
                raise ConfigurationError(f"expression for {key} has unknown symbols {sorted(map(str, extra))}")
            derivs = [e]
            for _ in range(orders - 1):
                derivs.append(sp.diff(derivs[-1], t))
            self.expressions[key] = derivs
            self._scalar[key] = [sp.lambdify(t, d, modules="math") for d in derivs]
            self._vector[key] = [sp.lambdify(t, d, modules="numpy") for d in derivs]

    def evaluate(self, t) -> TrajectorySample:
        if np.ndim(t) == 0:
            t = float(t)
            out = {k: tuple(float(f(t)) for f in fs) for k, fs in self._scalar.items()}
        else:
            t = np.asarray(t, dtype=float)
            out = {k: tuple(np.broadcast_to(np.asarray(f(t), dtype=float), t.shape).copy()
                            for f in fs) for k, fs in self._vector.items()}
        return TrajectorySample(out["x"], out["y"], out["z"], out["phi"])


# --- sampled sources -------------------------------------------------------------

@dataclass(frozen=True)
class SampledManeuver:
    """Maneuver recorded at uniformly spaced times."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    phi: np.ndarray
    name: str = "sampled"

    def __post_init__(self):
        arrays = {}
        for key in ("t", "x", "y", "z", "phi"):
            a = np.asarray(getattr(self, key), dtype=float)
            if a.ndim != 1:
                raise ConfigurationError(f"sampled column {key} must be one-dimensional")
            bad = np.flatnonzero(~np.isfinite(a))
            if bad.size:
                raise ConfigurationError(f"sampled column {key} has a non-finite value at index {bad[0]}")
            arrays[key] = a
            object.__setattr__(self, key, a)
        n = arrays["t"].size
        if any(a.size != n for a in arrays.values()):
            raise ConfigurationError("sampled columns have different lengths")
        if n < 5:
            raise ConfigurationError("a sampled maneuver needs at least 5 stations")
        steps = np.diff(arrays["t"])
        if np.any(steps <= 0):
            i = int(np.flatnonzero(steps <= 0)[0]) + 1
            raise ConfigurationError(f"time column is not strictly increasing at index {i}")
        dt = (arrays["t"][-1] - arrays["t"][0]) / (n - 1)
        expected = arrays["t"][0] + dt * np.arange(n)
        off = np.flatnonzero(np.abs(arrays["t"] - expected) > _STEP_TOL)
        if off.size:
            raise ConfigurationError(
                f"time column is not uniformly spaced (first deviation at index {off[0]})")

    @property
    def dt(self) -> float:
        return float((self.t[-1] - self.t[0]) / (self.t.size - 1))

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0])


@dataclass(frozen=True)
class ManeuverInput:
    """A maneuver together with the integration step."""

    source: object
    dt: float

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError("time step must be positive")
        n = station_count(self.duration, self.dt)
        if isinstance(self.source, SampledManeuver):
            if abs(self.source.dt - self.dt) > _STEP_TOL:
                raise ConfigurationError(
                    f"sampled step {self.source.dt:g} s differs from requested dt {self.dt:g} s")
            if self.source.t.size != n:
                raise ConfigurationError("sampled series length does not match duration/dt + 1")
            if abs(self.source.t[0]) > _STEP_TOL:
                raise ConfigurationError("sampled time column must start at t = 0")

    @property
    def duration(self) -> float:
        return float(self.source.duration)

    @property
    def n_stations(self) -> int:
        return station_count(self.duration, self.dt)

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_stations)

    @property
    def is_analytic(self) -> bool:
        return isinstance(self.source, AnalyticManeuver)


MANEUVERS = {"mirage-double-roll": MirageDoubleRoll}


def named_maneuver(name: str) -> AnalyticManeuver:
    try:
        return MANEUVERS[name]()
    except KeyError:
        raise ConfigurationError(
            f"unknown maneuver {name!r}; available: {', '.join(sorted(MANEUVERS))}") from None


_CSV_COLUMNS = ("t", "x_g", "y_g", "z_g", "phi_rad")


def load_sampled(path, dt_expected: float | None = None) -> ManeuverInput:
    """Read a trajectory CSV with columns ``t, x_g, y_g, z_g, phi_rad``."""
    p = Path(path)
    try:
        with p.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != _CSV_COLUMNS:
                raise ConfigurationError(
                    f"{p}: header must be {','.join(_CSV_COLUMNS)}, got {header}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(_CSV_COLUMNS):
                    raise ConfigurationError(f"{p}:{lineno}: expected 5 fields, got {len(row)}")
                try:
                    rows.append([float(c) for c in row])
                except ValueError as exc:
                    raise ConfigurationError(f"{p}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise ConfigurationError(f"cannot read trajectory file {p}: {exc}") from exc
    if len(rows) < 5:
        raise ConfigurationError(f"{p}: at least 5 data rows are required")
    data = np.array(rows)
    src = SampledManeuver(*data.T, name=p.stem)
    dt = src.dt if dt_expected is None else dt_expected
    return ManeuverInput(src, dt)


def export_sampled(maneuver: ManeuverInput, path) -> None:
    """Write the maneuver positions and roll at every station as CSV."""
    t = maneuver.times
    if maneuver.is_analytic:
        s = maneuver.source.evaluate(t)
        cols = (t, s.x[0], s.y[0], s.z[0], s.phi[0])
    else:
        src = maneuver.source
        cols = (t, src.x, src.y, src.z, src.phi)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_CSV_COLUMNS)
        for row in zip(*cols):
            w.writerow([repr(float(v)) for v in row])


# --- pre-processing -------------------------------------------------------------

@dataclass
class KinematicTables:
    """Per-station kinematic and air-data vectors.

    ``x``, ``y`` and ``z`` have shape ``(5, n)`` holding derivatives of order
    0 to 4; ``phi`` has shape ``(3, n)``.  The fourth position derivatives
    are not part of the classical input set but are needed to advance the
    attitude through the second-order force balance.
    """

    t: np.ndarray
    dt: float
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    phi: np.ndarray
    V: np.ndarray
    V_dot: np.ndarray
    V_ddot: np.ndarray
    h: np.ndarray
    rho: np.ndarray
    qbar: np.ndarray
    theta_w: np.ndarray
    theta_w_dot: np.ndarray
    theta_w_ddot: np.ndarray
    psi_w: np.ndarray
    psi_w_dot: np.ndarray
    psi_w_ddot: np.ndarray
    temperature: np.ndarray
    speed_of_sound: np.ndarray
    mach: np.ndarray
    alpha_equb: float
    h_ini: float
    theta_w_ddot_fdm: np.ndarray = field(repr=False, default=None)
    psi_w_ddot_fdm: np.ndarray = field(repr=False, default=None)

    @property
    def n_stations(self) -> int:
        return self.t.size

    def sample(self, n: int) -> TrajectorySample:
        """Path data stored at station index ``n``."""
        return TrajectorySample(tuple(self.x[:, n]), tuple(self.y[:, n]),
                                tuple(self.z[:, n]), tuple(self.phi[:, n]))

    def interpolate(self, t: float) -> TrajectorySample:
        """Linear interpolation of the stored path data at time ``t``."""
        u = t / self.dt
        i = min(max(int(math.floor(u)), 0), self.t.size - 2)
        w = u - i
        if w < -1e-9 or w > 1.0 + 1e-9:
            raise DomainError(f"time {t:g} s outside the tabulated interval")

        def lerp(a):
            lo = a[:, i]
            return tuple(lo + w * (a[:, i + 1] - lo))

        return TrajectorySample(lerp(self.x), lerp(self.y), lerp(self.z), lerp(self.phi))

    def column(self, name: str) -> np.ndarray:
        """Named access to the derivative vectors, e.g. ``"x_g_dot"``."""
        base, _, suffix = name.partition("_g")
        orders = {"": 0, "_dot": 1, "_ddot": 2, "_dddot": 3, "_d4": 4}
        if base in ("x", "y", "z") and suffix in orders:
            return getattr(self, base)[orders[suffix]]
        raise KeyError(name)


def _path_derivatives_fdm(values: np.ndarray, dt: float) -> np.ndarray:
    d1 = derivative_array(values, dt, 1)
    d2 = derivative_array(values, dt, 2)
    d3 = derivative_array(values, dt, 3)
    d4 = derivative_array(d3, dt, 1)
    return np.vstack([values, d1, d2, d3, d4])


def preprocess(maneuver: ManeuverInput, params: AirframeParams, *,
               velocity_rates: str | None = None,
               guards: Guards = DEFAULT_GUARDS) -> KinematicTables:
    """Build the per-station kinematic tables of a maneuver.

    Parameters
    ----------
    velocity_rates : {"exact", "fdm"}, optional
        How the airspeed derivatives are obtained.  ``"exact"`` differentiates
        the speed formula with jets, ``"fdm"`` differentiates the tabulated
        speed with finite differences.  Defaults to ``"exact"`` for analytic
        sources and ``"fdm"`` for sampled ones.
    """
    t = maneuver.times
    dt = maneuver.dt
    if maneuver.is_analytic:
        s = maneuver.source.evaluate(t)
        X = np.vstack([np.broadcast_to(np.asarray(v, dtype=float), t.shape) for v in s.x])
        Y = np.vstack([np.broadcast_to(np.asarray(v, dtype=float), t.shape) for v in s.y])
        Z = np.vstack([np.broadcast_to(np.asarray(v, dtype=float), t.shape) for v in s.z])
        PHI = np.vstack([np.broadcast_to(np.asarray(v, dtype=float), t.shape) for v in s.phi])
        mode = velocity_rates or "exact"
    else:
        src = maneuver.source
        X = _path_derivatives_fdm(src.x, dt)
        Y = _path_derivatives_fdm(src.y, dt)
        Z = _path_derivatives_fdm(src.z, dt)
        PHI = np.vstack([src.phi, derivative_array(src.phi, dt, 1), derivative_array(src.phi, dt, 2)])
        mode = velocity_rates or "fdm"
    if mode not in ("exact", "fdm"):
        raise ConfigurationError("velocity_rates must be 'exact' or 'fdm'")

    vx = Jet2(X[1], X[2], X[3])
    vy = Jet2(Y[1], Y[2], Y[3])
    vz = Jet2(Z[1], Z[2], Z[3])
    V = np.sqrt(X[1] ** 2 + Y[1] ** 2 + Z[1] ** 2)
    if np.any(V <= guards.v_min):
        i = int(np.flatnonzero(V <= guards.v_min)[0])
        raise SingularityError(f"airspeed below guard at t = {t[i]:g} s")
    horiz = np.hypot(X[1], Y[1])
    cos_lim = math.sin(guards.angle)
    if np.any(horiz <= cos_lim * V):
        i = int(np.flatnonzero(horiz <= cos_lim * V)[0])
        raise SingularityError(f"vertical flight at t = {t[i]:g} s: flight-path azimuth is undefined")

    h = params.h_ini - Z[0]
    rho = np.asarray(atmosphere.density(h), dtype=float)
    qbar = 0.5 * rho * V * V

    Vj, psi_j, theta_j = flight_path_angles(vx, vy, vz)
    V_dot, psi_w_dot, theta_w_dot = flight_path_rates(X[1], Y[1], Z[1], X[2], Y[2], Z[2])
    if mode == "exact":
        V_ddot = Vj.d2
    else:
        V_dot = derivative_array(V, dt, 1)
        V_ddot = derivative_array(V, dt, 2)
    psi_w = np.unwrap(psi_j.value)

    temp = np.asarray(atmosphere.temperature(h), dtype=float)
    sound = np.sqrt(atmosphere.GAMMA * atmosphere.R_AIR * temp)
    return KinematicTables(
        t=t, dt=dt, x=X, y=Y, z=Z, phi=PHI,
        V=V, V_dot=np.asarray(V_dot, dtype=float), V_ddot=np.asarray(V_ddot, dtype=float),
        h=h, rho=rho, qbar=qbar,
        theta_w=theta_j.value, theta_w_dot=theta_w_dot, theta_w_ddot=theta_j.d2,
        psi_w=psi_w, psi_w_dot=psi_w_dot, psi_w_ddot=psi_j.d2,
        temperature=temp, speed_of_sound=sound, mach=V / sound,
        alpha_equb=equilibrium_alpha(params, float(qbar[0])),
        h_ini=params.h_ini,
        theta_w_ddot_fdm=derivative_array(theta_w_dot, dt, 1),
        psi_w_ddot_fdm=derivative_array(psi_w_dot, dt, 1),
    )


# --- stage-time path data ---------------------------------------------------------

class PathPoint(NamedTuple):
    """Jets of path quantities at one instant.

    Attributes hold ``Jet2`` values carrying first and second time
    derivatives: roll angle, inertial acceleration components, airspeed and
    its rate, flight-path angles and dynamic pressure.
    """

    t: float
    phi: Jet2
    accel: tuple
    V: Jet2
    V_dot: Jet2
    theta_w: Jet2
    psi_w: Jet2
    qbar: Jet2


def path_point(t: float, s: TrajectorySample, h_ini: float,
               guards: Guards = DEFAULT_GUARDS) -> PathPoint:
    """Assemble path jets from position derivatives up to fourth order."""
    x, y, z = s.x, s.y, s.z
    vx, vy, vz = Jet2(x[1], x[2], x[3]), Jet2(y[1], y[2], y[3]), Jet2(z[1], z[2], z[3])
    ax, ay, az = Jet2(x[2], x[3], x[4]), Jet2(y[2], y[3], y[4]), Jet2(z[2], z[3], z[4])
    V2 = vx * vx + vy * vy + vz * vz
    if not V2.value > guards.v_min ** 2:
        raise SingularityError(f"airspeed below guard at t = {t:g} s")
    V = jet.sqrt(V2)
    V_dot = (vx * ax + vy * ay + vz * az) / V
    H2 = vx * vx + vy * vy
    if not H2.value > (math.sin(guards.angle) ** 2) * V2.value:
        raise SingularityError(f"vertical flight at t = {t:g} s")
    psi_w = jet.atan2(vy, vx)
    theta_w = jet.atan2(-vz, jet.sqrt(H2))
    rho = atmosphere.density(Jet2(h_ini - z[0], -z[1], -z[2]))
    qbar = 0.5 * rho * V2
    return PathPoint(t, Jet2(*s.phi), (ax, ay, az), V, V_dot, theta_w, psi_w, qbar)
