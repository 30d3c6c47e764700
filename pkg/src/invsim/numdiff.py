"""Finite-difference derivatives of uniformly sampled series.

Interior stations use central stencils.  The first and last stations (the
first two and last two for the third derivative) switch to one-sided forward
and backward stencils, so every output has the same length as its input and
every stencil is second-order accurate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError

__all__ = ["UniformSeries", "derivative", "derivative_array", "MIN_LENGTH"]

#: Minimum series length required by each derivative order.
MIN_LENGTH = {1: 3, 2: 4, 3: 5}


@dataclass(frozen=True)
class UniformSeries:
    """Samples ``values[n] = f(t0 + n*dt)``."""

    dt: float
    values: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"sample spacing must be positive, got {self.dt}")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


def derivative_array(values, dt: float, order: int) -> np.ndarray:
    """Return the ``order``-th derivative of ``values`` sampled at ``dt``."""
    if order not in MIN_LENGTH:
        raise ConfigurationError(f"derivative order must be 1, 2 or 3, got {order}")
    if not dt > 0:
        raise ConfigurationError(f"sample spacing must be positive, got {dt}")
    f = np.asarray(values, dtype=float)
    if f.ndim != 1:
        raise ConfigurationError("finite differences expect a 1-D series")
    n = f.size
    if n < MIN_LENGTH[order]:
        raise ConfigurationError(
            f"order-{order} derivative needs at least {MIN_LENGTH[order]} samples, got {n}"
        )
    out = np.empty(n)
    if order == 1:
        out[1:-1] = (f[2:] - f[:-2]) / (2.0 * dt)
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt)
        out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dt)
    elif order == 2:
        h2 = dt * dt
        out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h2
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
        out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / h2
    else:
        h3 = 2.0 * dt ** 3
        out[2:-2] = (f[4:] - 2.0 * f[3:-1] + 2.0 * f[1:-3] - f[:-4]) / h3
        for i in (0, 1):
            if i + 5 <= n:
                w = f[i:i + 5]
                out[i] = (-5.0 * w[0] + 18.0 * w[1] - 24.0 * w[2] + 14.0 * w[3] - 3.0 * w[4]) / h3
            else:
                # five-sample series: second node of the only available window
                w = f[:5]
                out[i] = (-3.0 * w[0] + 10.0 * w[1] - 12.0 * w[2] + 6.0 * w[3] - w[4]) / h3
        for i in (n - 2, n - 1):
            if i >= 4:
                w = f[i - 4:i + 1]
                out[i] = (5.0 * w[4] - 18.0 * w[3] + 24.0 * w[2] - 14.0 * w[1] + 3.0 * w[0]) / h3
            else:
                w = f[-5:]
                out[i] = (w[0] - 6.0 * w[1] + 12.0 * w[2] - 10.0 * w[3] + 3.0 * w[4]) / h3
    return out


def derivative(series: UniformSeries, order: int) -> UniformSeries:
    """Differentiate a :class:`UniformSeries` ``order`` times (1, 2 or 3)."""
    return UniformSeries(series.dt, derivative_array(series.values, series.dt, order))
