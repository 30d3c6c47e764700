"""SVG line plots of an inverse-simulation result."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .inverse import ControlSeries

__all__ = ["emit_plots", "PLOT_FILES"]

PLOT_FILES = ("roll_angle.svg", "roll_rates.svg", "thrust.svg", "rudder.svg",
              "elevator_aileron.svg", "aoa_sideslip.svg", "pitch_yaw.svg", "orbit.svg")


def _figure(nrows=1):
    from matplotlib.figure import Figure

    fig = Figure(figsize=(7.0, 3.2 * nrows), layout="constrained")
    axes = fig.subplots(nrows, 1, squeeze=False)[:, 0]
    for ax in axes:
        ax.grid(True, alpha=0.3)
    return fig, axes


def emit_plots(series: ControlSeries, directory) -> list[Path]:
    """Write the standard figure set for ``series`` into ``directory``."""
    if series.t.size < 2:
        raise ConfigurationError("cannot plot an empty control series")
    if series.phi is None:
        raise ConfigurationError("plots need the roll-angle channels")
    out = Path(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigurationError(f"cannot create plot directory {out}: {exc}") from exc
    t = series.t
    deg = np.degrees
    files = []

    def save(fig, name):
        path = out / name
        try:
            fig.savefig(path, format="svg")
        except OSError as exc:
            raise ConfigurationError(f"cannot write {path}: {exc}") from exc
        files.append(path)

    fig, (ax,) = _figure()
    ax.plot(t, deg(series.phi))
    ax.set(xlabel="time (s)", ylabel="roll angle (deg)")
    save(fig, "roll_angle.svg")

    fig, (a1, a2) = _figure(2)
    a1.plot(t, deg(series.phi_dot))
    a1.set(ylabel="roll rate (deg/s)")
    a2.plot(t, deg(series.phi_ddot))
    a2.set(xlabel="time (s)", ylabel="roll acceleration (deg/s$^2$)")
    save(fig, "roll_rates.svg")

    fig, (ax,) = _figure()
    ax.plot(t, series.thrust)
    ax.set(xlabel="time (s)", ylabel="thrust (N)")
    save(fig, "thrust.svg")

    fig, (ax,) = _figure()
    ax.plot(t, deg(series.delta_n))
    ax.set(xlabel="time (s)", ylabel="rudder deflection (deg)")
    save(fig, "rudder.svg")

    fig, (ax,) = _figure()
    ax.plot(t, deg(series.delta_m), label="elevator")
    ax.plot(t, deg(series.delta_l), label="aileron")
    ax.set(xlabel="time (s)", ylabel="deflection (deg)")
    ax.legend()
    save(fig, "elevator_aileron.svg")

    fig, (ax,) = _figure()
    ax.plot(t, deg(series.alpha_conventional), label="angle of attack")
    ax.plot(t, deg(series.beta), label="sideslip")
    ax.set(xlabel="time (s)", ylabel="angle (deg)")
    ax.legend()
    save(fig, "aoa_sideslip.svg")

    fig, (ax,) = _figure()
    ax.plot(t, deg(series.theta), label="pitch")
    ax.plot(t, deg(series.psi), label="yaw")
    ax.set(xlabel="time (s)", ylabel="angle (deg)")
    ax.legend()
    save(fig, "pitch_yaw.svg")

    fig, (ax,) = _figure()
    mid = (t.size - 1) // 2
    ax.plot(deg(series.psi[:mid + 1]), deg(series.theta[:mid + 1]), label="first half")
    ax.plot(deg(series.psi[mid:]), deg(series.theta[mid:]), "--", label="second half")
    ax.set(xlabel="yaw angle (deg)", ylabel="pitch angle (deg)")
    ax.legend()
    save(fig, "orbit.svg")
    return files
