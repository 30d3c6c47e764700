"""International Standard Atmosphere up to 20 km.

Two layers are modelled: a troposphere with a constant lapse rate below
11 km and an isothermal layer from 11 km to 20 km.  The 11 km point belongs
to the isothermal branch.  Density functions accept floats, numpy arrays and
:class:`~invsim.jet.Jet2` altitudes, so altitude derivatives propagate.
"""

from __future__ import annotations

import numpy as np

from . import jet
from .errors import DomainError

__all__ = [
    "G", "R_AIR", "GAMMA", "LAPSE_RATE", "T_SEA_LEVEL", "RHO_SEA_LEVEL",
    "T_TROPOPAUSE", "H_TROPOPAUSE", "H_MAX", "RHO_TROPOPAUSE", "EARTH_RADIUS",
    "density", "density_troposphere", "density_tropopause", "temperature",
    "speed_of_sound", "mach", "pressure", "geopotential_altitude",
    "geometric_altitude", "altitude_deviation_percent",
]

G = 9.81
R_AIR = 287.0
GAMMA = 1.4
LAPSE_RATE = 0.0065
T_SEA_LEVEL = 288.15
RHO_SEA_LEVEL = 1.225
T_TROPOPAUSE = 216.65
H_TROPOPAUSE = 11000.0
H_MAX = 20000.0
RHO_TROPOPAUSE = 0.3636309
EARTH_RADIUS = 6_371_000.0

_TROPO_EXPONENT = G / (R_AIR * LAPSE_RATE) - 1.0
_ISOTHERMAL_DECAY = G / (T_TROPOPAUSE * R_AIR)


def _check_altitude(h):
    v = np.asarray(jet.value_of(h), dtype=float)
    if np.any(~np.isfinite(v)) or np.any(v < 0.0) or np.any(v > H_MAX):
        raise DomainError(f"altitude outside the modelled range [0, {H_MAX:g}] m: {v}")
    return v


def density_troposphere(h):
    """Troposphere density law, evaluated without a domain check."""
    return RHO_SEA_LEVEL * (1.0 - LAPSE_RATE * h / T_SEA_LEVEL) ** _TROPO_EXPONENT


def density_tropopause(h):
    """Isothermal-layer density law, evaluated without a domain check."""
    return RHO_TROPOPAUSE * jet.exp(-_ISOTHERMAL_DECAY * (h - H_TROPOPAUSE))


def density(h):
    """Air density in kg/m^3 at geometric altitude ``h`` in metres."""
    v = _check_altitude(h)
    if v.ndim == 0:
        return density_troposphere(h) if v < H_TROPOPAUSE else density_tropopause(h)
    if isinstance(h, jet.Jet2):
        raise DomainError("array-valued jets are not supported by density()")
    with np.errstate(invalid="ignore"):
        return np.where(v < H_TROPOPAUSE, density_troposphere(np.minimum(v, H_TROPOPAUSE)),
                        density_tropopause(v))


def temperature(h):
    """Static temperature in kelvin."""
    v = _check_altitude(h)
    out = np.where(v < H_TROPOPAUSE, T_SEA_LEVEL - LAPSE_RATE * v, T_TROPOPAUSE)
    return float(out) if out.ndim == 0 else out


def speed_of_sound(h):
    return np.sqrt(GAMMA * R_AIR * temperature(h))


def mach(speed, h):
    return speed / speed_of_sound(h)


def pressure(h):
    """Static pressure from the ideal-gas law, rho * R * T."""
    return density(h) * R_AIR * temperature(h)


def geopotential_altitude(h):
    """Geopotential altitude H = R_E h / (R_E + h)."""
    h = np.asarray(h, dtype=float)
    if np.any(h < 0):
        raise DomainError("geometric altitude must be non-negative")
    out = EARTH_RADIUS * h / (EARTH_RADIUS + h)
    return float(out) if out.ndim == 0 else out


def geometric_altitude(H):
    """Inverse of :func:`geopotential_altitude`."""
    H = np.asarray(H, dtype=float)
    if np.any(H < 0) or np.any(H >= EARTH_RADIUS):
        raise DomainError("geopotential altitude out of range")
    out = EARTH_RADIUS * H / (EARTH_RADIUS - H)
    return float(out) if out.ndim == 0 else out


def altitude_deviation_percent(h):
    """Percentage gap between geometric and geopotential altitude."""
    h = np.asarray(h, dtype=float)
    H = geopotential_altitude(h)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(h + H > 0, 2.0 * np.abs(h - H) / np.where(h + H > 0, h + H, 1.0) * 100.0, 0.0)
    return float(out) if out.ndim == 0 else out
