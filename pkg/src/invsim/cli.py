"""Command-line entry point: ``invsim run | verify | atmosphere | plot``."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__, atmosphere
from .airframe import AirframeParams, load_airframe, mirage3
from .errors import ConfigurationError, DomainError, IntegrationError, SingularityError
from .guards import Guards
from .inverse import InverseSimulator
from .io import read_controls_csv, write_controls_csv
from .trajectory import MANEUVERS, ManeuverInput, load_sampled, named_maneuver

EXIT_OK = 0
EXIT_NUMERICAL = 2
EXIT_CONFIG = 3
EXIT_USAGE = 4

DEFAULT_DT = 0.001
BUILTIN_AIRFRAMES = {"mirage3": mirage3}


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits with the usage code instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_dt() -> float | None:
    raw = os.environ.get("INVSIM_DT")
    if raw is None or not raw.strip():
        return None
    try:
        dt = float(raw)
    except ValueError:
        raise ConfigurationError(f"INVSIM_DT={raw!r} is not a number") from None
    if not dt > 0 or not math.isfinite(dt):
        raise ConfigurationError(f"INVSIM_DT must be positive, got {raw!r}")
    return dt


def _airframe(value: str | None) -> AirframeParams:
    if value is None:
        return mirage3()
    path = Path(value)
    if not path.exists() and value in BUILTIN_AIRFRAMES:
        return BUILTIN_AIRFRAMES[value]()
    return load_airframe(path)


def _maneuver(args, dt: float | None) -> ManeuverInput:
    if args.trajectory:
        return load_sampled(args.trajectory, dt_expected=dt)
    name = args.maneuver or "mirage-double-roll"
    return ManeuverInput(named_maneuver(name), dt if dt is not None else _default_dt() or DEFAULT_DT)


def _guards(args) -> Guards:
    kw = {}
    if args.v_min is not None:
        kw["v_min"] = args.v_min
    if args.angle_guard is not None:
        kw["angle"] = args.angle_guard
    return Guards(**kw)


def _add_source_args(p):
    p.add_argument("--airframe", metavar="PATH",
                   help="airframe JSON file, or 'mirage3' for the bundled data (default)")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--maneuver", choices=sorted(MANEUVERS), help="built-in maneuver")
    src.add_argument("--trajectory", metavar="CSV", help="sampled trajectory t,x_g,y_g,z_g,phi_rad")
    p.add_argument("--dt", type=float, help="time step in s (default $INVSIM_DT or 0.001)")
    p.add_argument("--v-min", type=float, dest="v_min", help="airspeed guard, m/s")
    p.add_argument("--angle-guard", type=float, dest="angle_guard", help="angle guard, rad")


def _characteristics(sim: InverseSimulator) -> list[str]:
    tb = sim.tables
    h = tb.h[0]
    return [
        f"airframe                 {sim.params.name or 'unnamed'}",
        f"stations                 {tb.t.size}",
        f"time step (s)            {sim.dt:g}",
        f"duration (s)             {tb.t[-1]:g}",
        f"initial altitude (m)     {h:.1f}",
        f"airspeed (m/s)           {tb.V[0]:.3f}",
        f"density (kg/m^3)         {tb.rho[0]:.6f}",
        f"temperature (K)          {tb.temperature[0]:.2f}",
        f"speed of sound (m/s)     {tb.speed_of_sound[0]:.2f}",
        f"Mach number              {tb.mach[0]:.5f}",
        f"dynamic pressure (Pa)    {tb.qbar[0]:.2f}",
        f"trim angle of attack (deg) {math.degrees(tb.alpha_equb):.6f}",
    ]


def cmd_run(args) -> int:
    dt = args.dt
    if dt is not None and not dt > 0:
        raise ConfigurationError("--dt must be positive")
    params = _airframe(args.airframe)
    maneuver = _maneuver(args, dt)
    sim = InverseSimulator(maneuver, params, guards=_guards(args), init=args.init)
    t0 = time.perf_counter()
    series = sim.run()
    elapsed = time.perf_counter() - t0
    out = write_controls_csv(series, args.out)
    print("\n".join(_characteristics(sim)))
    print("\n".join(series.summary().lines()))
    print(f"wrote {out} ({series.t.size} rows, {elapsed:.2f} s)")
    if args.plots:
        from .plotting import emit_plots

        files = emit_plots(series, args.plots)
        print(f"wrote {len(files)} plots to {args.plots}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .forward import round_trip

    params = _airframe(args.airframe)
    controls = read_controls_csv(args.controls)
    dt = args.dt if args.dt is not None else controls.dt
    maneuver = _maneuver(args, dt)
    sim = InverseSimulator(maneuver, params, guards=_guards(args))
    controls.alpha_equb = sim.alpha_equb
    report = round_trip(maneuver, controls, params, hold=args.hold, guards=sim.guards)
    data = report.to_dict()
    text = json.dumps(data, indent=2)
    if args.report:
        try:
            Path(args.report).write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            raise ConfigurationError(f"cannot write report {args.report}: {exc}") from exc
    print(text)
    return EXIT_OK if report.passed else EXIT_NUMERICAL


def cmd_atmosphere(args) -> int:
    if args.table:
        h0, h1, step = args.table
        if not step > 0 or h1 < h0:
            raise ConfigurationError("--table needs h0 <= h1 and a positive step")
        heights = np.arange(h0, h1 + 0.5 * step, step)
    elif args.altitude is not None:
        heights = np.array([args.altitude])
    else:
        raise ConfigurationError("give --altitude or --table")
    rows = [f"{h:g},{atmosphere.density(h):.6f},{atmosphere.temperature(h):.2f},"
            f"{atmosphere.speed_of_sound(h):.2f}" for h in map(float, heights)]
    print("altitude_m,density_kg_m3,temperature_K,speed_of_sound_m_s")
    print("\n".join(rows))
    return EXIT_OK


def cmd_plot(args) -> int:
    from .plotting import emit_plots

    series = read_controls_csv(args.controls)
    maneuver = _maneuver(args, series.dt)
    sim = InverseSimulator(maneuver, _airframe(args.airframe))
    tb = sim.tables
    if tb.t.size != series.t.size:
        raise ConfigurationError("controls and maneuver have different station counts")
    series.alpha_equb = sim.alpha_equb
    series.phi, series.phi_dot, series.phi_ddot = tb.phi[0], tb.phi[1], tb.phi[2]
    files = emit_plots(series, args.dir)
    print(f"wrote {len(files)} plots to {args.dir}")
    return EXIT_OK


def _version_text() -> str:
    import platform

    import scipy

    return (f"invsim {__version__} (python {platform.python_version()}, numpy {np.__version__}, "
            f"scipy {scipy.__version__})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="invsim", description="Inverse simulation of aircraft maneuvers.")
    parser.add_argument("--version", action="version", version=_version_text())
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="compute the controls that fly a maneuver")
    _add_source_args(p)
    p.add_argument("--out", default="controls.csv", help="controls CSV (default controls.csv)")
    p.add_argument("--plots", metavar="DIR", help="also write SVG plots into DIR")
    p.add_argument("--init", choices=("equilibrium", "consistent"), default="equilibrium")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="replay controls with the forward model")
    _add_source_args(p)
    p.add_argument("--controls", required=True, metavar="CSV")
    p.add_argument("--report", metavar="JSON")
    p.add_argument("--hold", action="store_true", help="zero-order hold instead of linear")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("atmosphere", help="print atmosphere properties as CSV")
    p.add_argument("--altitude", type=float, metavar="M")
    p.add_argument("--table", type=float, nargs=3, metavar=("H0", "H1", "STEP"))
    p.set_defaults(func=cmd_atmosphere)

    p = sub.add_parser("plot", help="draw SVG plots from a controls CSV")
    _add_source_args(p)
    p.add_argument("--controls", required=True, metavar="CSV")
    p.add_argument("--dir", default="plots")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except (SingularityError, IntegrationError, DomainError, ArithmeticError) as exc:
        print(f"invsim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigurationError, OSError, ValueError) as exc:
        print(f"invsim: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
