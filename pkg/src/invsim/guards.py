"""Numerical guard thresholds and the checks that enforce them."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError, SingularityError
from .jet import value_of

__all__ = ["Guards", "DEFAULT_GUARDS", "check_angle", "check_speed"]


@dataclass(frozen=True)
class Guards:
    """Thresholds protecting the singular configurations of the model.

    Attributes
    ----------
    v_min : float
        Smallest admissible airspeed in m/s.
    angle : float
        Minimum distance in radians between alpha, beta or theta_w and +-pi/2.
    det : float
        Smallest admissible magnitude of a 2x2 linear-system determinant.
    forward_pitch_deg : float
        Largest pitch magnitude the forward simulator accepts.
    """

    v_min: float = 1.0
    angle: float = 1e-3
    det: float = 1e-8
    forward_pitch_deg: float = 85.0

    def __post_init__(self):
        if self.v_min < 0.1:
            raise ConfigurationError("V_min guard must be at least 0.1 m/s")
        if not 0.0 < self.angle < 0.5:
            raise ConfigurationError("angle guard must lie in (0, 0.5) rad")
        if not self.det > 0:
            raise ConfigurationError("determinant guard must be positive")
        if not 0.0 < self.forward_pitch_deg < 90.0:
            raise ConfigurationError("forward pitch guard must lie in (0, 90) deg")


DEFAULT_GUARDS = Guards()


def check_angle(value, name: str, guard: float = DEFAULT_GUARDS.angle) -> None:
    """Reject an angle within ``guard`` of +-pi/2."""
    v = value_of(value)
    if not abs(v) < 0.5 * math.pi - guard:
        raise SingularityError(f"{name} = {v:.6g} rad is within {guard:g} rad of +-pi/2")


def check_speed(value, guard: float = DEFAULT_GUARDS.v_min) -> None:
    v = value_of(value)
    if not v > guard:
        raise SingularityError(f"airspeed {v:.6g} m/s is below the guard {guard:g} m/s")
