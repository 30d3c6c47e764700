"""Rigid-airframe parameters and the aerodynamic model.

Forces use a parabolic drag polar around a lift law whose incidence is
shifted by the equilibrium angle of attack of the reference flight
condition.  Moments are linear in sideslip, incidence, body rates (scaled by
span or chord over airspeed) and control deflections.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import jet
from .atmosphere import G
from .errors import ConfigurationError, DomainError
from .guards import check_angle, check_speed

__all__ = [
    "AirframeParams", "InertiaDerived", "ForceCoefficients", "WingGeometry",
    "RectangularWing", "DeltaWing", "SampledWing",
    "load_airframe", "mirage3", "equilibrium_alpha", "force_coefficients",
    "moment_coefficients", "wing_geometry", "JSON_KEYS",
]

# attribute name -> JSON key
JSON_KEYS = {
    "m": "m", "S": "s", "c": "c", "b": "b",
    "A": "a_xx", "B": "b_yy", "C": "c_zz", "D": "d_yz", "E": "e_xz", "F": "f_xy",
    "CL0": "cl0", "CLa": "cla", "CD0": "cd0", "KCD": "kcd", "CCb": "ccb",
    "Cm0": "cm0", "Cma": "cma", "Cmq": "cmq", "Cmdm": "cmdm",
    "Clb": "clb", "Clp": "clp", "Clr": "clr", "Cldl": "cldl", "Cldn": "cldn",
    "Cnb": "cnb", "Cnp": "cnp", "Cnr": "cnr", "Cndl": "cndl", "Cndn": "cndn",
    "h_ini": "h_ini",
}


class InertiaDerived(NamedTuple):
    """Inertia determinant and the cofactor combinations used by the
    rotational equations."""

    T0: float
    BC_D2: float
    FC_ED: float
    FD_EB: float
    AC_E2: float
    AD_EF: float
    AB_F2: float


@dataclass(frozen=True)
class AirframeParams:
    """Mass, geometry, inertia and aerodynamic derivatives of an airframe.

    Inertia products follow the sign convention of the tensor
    ``[[A, -F, -E], [-F, B, -D], [-E, -D, C]]``.  ``h_ini`` is the altitude of
    the inertial origin, so the altitude is ``h_ini - z``.
    """

    m: float
    S: float
    c: float
    b: float
    A: float
    B: float
    C: float
    D: float
    E: float
    F: float
    CL0: float
    CLa: float
    CD0: float
    KCD: float
    CCb: float
    Cm0: float
    Cma: float
    Cmq: float
    Cmdm: float
    Clb: float
    Clp: float
    Clr: float
    Cldl: float
    Cldn: float
    Cnb: float
    Cnp: float
    Cnr: float
    Cndl: float
    Cndn: float
    h_ini: float = 0.0
    name: str = ""

    def __post_init__(self):
        for f in fields(self):
            if f.name == "name":
                continue
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigurationError(f"airframe field {f.name!r} must be a finite number")
            object.__setattr__(self, f.name, float(v))
        for key in ("m", "S", "c", "b"):
            if getattr(self, key) <= 0:
                raise ConfigurationError(f"airframe field {key!r} must be positive")
        if self.inertia.T0 <= 0 or min(self.A, self.B, self.C) <= 0:
            raise ConfigurationError("inertia tensor is not positive definite")
        if np.any(np.linalg.eigvalsh(self.inertia_tensor) <= 0):
            raise ConfigurationError("inertia tensor is not positive definite")
        if self.CLa == 0:
            raise ConfigurationError("lift-curve slope CLa must be non-zero")
        if self.Cmdm == 0:
            raise ConfigurationError("elevator effectiveness Cmdm must be non-zero")
        if self.Cldl * self.Cndn - self.Cldn * self.Cndl == 0:
            raise ConfigurationError("aileron/rudder effectiveness matrix is singular")
        if not 0.0 <= self.h_ini <= 20000.0:
            raise ConfigurationError("h_ini must lie in [0, 20000] m")

    @cached_property
    def inertia(self) -> InertiaDerived:
        A, B, C, D, E, F = self.A, self.B, self.C, self.D, self.E, self.F
        T0 = A * B * C - A * D * D - B * E * E - C * F * F - 2.0 * D * E * F
        return InertiaDerived(T0, B * C - D * D, F * C + E * D, F * D + E * B,
                              A * C - E * E, A * D + E * F, A * B - F * F)

    @cached_property
    def inertia_tensor(self) -> np.ndarray:
        A, B, C, D, E, F = self.A, self.B, self.C, self.D, self.E, self.F
        return np.array([[A, -F, -E], [-F, B, -D], [-E, -D, C]])

    @property
    def is_symmetric(self) -> bool:
        """True when the x-z plane is a plane of symmetry (D = F = 0)."""
        return self.D == 0.0 and self.F == 0.0

    def to_json_dict(self) -> dict:
        d = {JSON_KEYS[k]: v for k, v in asdict(self).items() if k != "name"}
        if self.name:
            d = {"name": self.name, **d}
        return d

    def replace(self, **changes) -> "AirframeParams":
        data = {k: v for k, v in asdict(self).items()}
        data.update(changes)
        return AirframeParams(**data)


def _from_json_dict(data: dict, source: str) -> AirframeParams:
    if not isinstance(data, dict):
        raise ConfigurationError(f"{source}: airframe JSON must be an object")
    known = set(JSON_KEYS.values()) | {"name"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigurationError(f"{source}: unknown airframe keys {unknown}")
    missing = sorted(v for k, v in JSON_KEYS.items() if v not in data and k != "h_ini")
    if missing:
        raise ConfigurationError(f"{source}: missing airframe keys {missing}")
    kwargs = {attr: data[key] for attr, key in JSON_KEYS.items() if key in data}
    return AirframeParams(name=str(data.get("name", "")), **kwargs)


def load_airframe(path) -> AirframeParams:
    """Read an airframe JSON file keyed by lowercase parameter names."""
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read airframe file {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{p}: invalid JSON: {exc}") from exc
    return _from_json_dict(data, str(p))


def mirage3() -> AirframeParams:
    """The bundled Mirage III data set."""
    text = resources.files("invsim").joinpath("data/mirage3.json").read_text()
    return _from_json_dict(json.loads(text), "mirage3.json")


def equilibrium_alpha(params: AirframeParams, qbar: float) -> float:
    """Incidence giving lift equal to weight at dynamic pressure ``qbar``."""
    if not qbar > 0:
        raise DomainError("dynamic pressure must be positive")
    return (params.m * G / (qbar * params.S) - params.CL0) / params.CLa


class ForceCoefficients(NamedTuple):
    CL: object
    CD: object
    CC: object
    Cx: object
    Cy: object
    Cz: object


def force_coefficients(params: AirframeParams, alpha, beta, alpha_equb,
                       angle_guard: float | None = None) -> ForceCoefficients:
    """Wind-axis and body-axis force coefficients.

    ``alpha`` and ``beta`` may be floats, arrays or jets.  When
    ``angle_guard`` is given, scalar angles within that distance of +-pi/2
    raise :class:`~invsim.errors.SingularityError`.
    """
    if angle_guard is not None:
        check_angle(alpha, "alpha", angle_guard)
        check_angle(beta, "beta", angle_guard)
    CL = params.CL0 + params.CLa * (alpha + alpha_equb)
    CD = params.CD0 + params.KCD * CL * CL
    CC = params.CCb * beta
    sa, ca = jet.sincos(alpha)
    sb, cb = jet.sincos(beta)
    Cx = -CD * ca * cb - CC * ca * sb + CL * sa
    Cy = -CD * sb + CC * cb
    Cz = -CD * sa * cb - CC * sa * sb - CL * ca
    return ForceCoefficients(CL, CD, CC, Cx, Cy, Cz)


def moment_coefficients(params: AirframeParams, alpha, beta, p, q, r, V, dl, dm, dn,
                        v_min: float = 1.0):
    """Rolling, pitching and yawing moment coefficients ``(Cl, Cm, Cn)``."""
    if np.ndim(jet.value_of(V)) == 0:
        check_speed(V, v_min)
    kb = params.b / V
    kc = params.c / V
    Cl = params.Clb * beta + params.Clp * p * kb + params.Clr * r * kb + params.Cldl * dl + params.Cldn * dn
    Cm = params.Cm0 + params.Cma * alpha + params.Cmq * q * kc + params.Cmdm * dm
    Cn = params.Cnb * beta + params.Cnp * p * kb + params.Cnr * r * kb + params.Cndl * dl + params.Cndn * dn
    return Cl, Cm, Cn


# --- wing planform ---------------------------------------------------------

class WingGeometry(NamedTuple):
    mean_aerodynamic_chord: float
    standard_mean_chord: float
    aspect_ratio: float
    area: float


@dataclass(frozen=True)
class RectangularWing:
    chord: float
    span: float


@dataclass(frozen=True)
class DeltaWing:
    root_chord: float
    span: float


@dataclass(frozen=True)
class SampledWing:
    """Chord ``chord[i]`` at half-span station ``zeta[i]`` from root (0) to tip (b/2)."""

    zeta: np.ndarray
    chord: np.ndarray


def wing_geometry(planform) -> WingGeometry:
    """Mean aerodynamic chord, standard mean chord and aspect ratio."""
    if isinstance(planform, RectangularWing):
        c, b = planform.chord, planform.span
        if c <= 0 or b <= 0:
            raise ConfigurationError("chord and span must be positive")
        return WingGeometry(c, c, b / c, b * c)
    if isinstance(planform, DeltaWing):
        c, b = planform.root_chord, planform.span
        if c <= 0 or b <= 0:
            raise ConfigurationError("chord and span must be positive")
        S = 0.5 * c * b
        return WingGeometry(2.0 * c / 3.0, S / b, b * b / S, S)
    if isinstance(planform, SampledWing):
        from scipy.integrate import simpson

        z = np.asarray(planform.zeta, dtype=float)
        ch = np.asarray(planform.chord, dtype=float)
        if z.ndim != 1 or z.shape != ch.shape or z.size < 3:
            raise ConfigurationError("sampled wing needs matching 1-D arrays of >= 3 points")
        if np.any(np.diff(z) <= 0) or z[0] != 0 or np.any(ch < 0):
            raise ConfigurationError("sampled wing stations must start at 0 and increase")
        b = 2.0 * z[-1]
        S = 2.0 * simpson(ch, x=z)
        mac = 2.0 / S * simpson(ch * ch, x=z)
        return WingGeometry(mac, S / b, b * b / S, S)
    raise ConfigurationError(f"unsupported planform {type(planform).__name__}")
