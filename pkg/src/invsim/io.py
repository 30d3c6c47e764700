"""Reading and writing control histories as CSV."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .inverse import ControlSeries

__all__ = ["CSV_HEADER", "write_controls_csv", "read_controls_csv", "format_value"]

CSV_HEADER = ("t_s", "thrust_N", "delta_l_rad", "delta_m_rad", "delta_n_rad",
              "alpha_rad", "beta_rad", "theta_rad", "psi_rad", "L_Nm", "M_Nm", "N_Nm",
              "res_eq33", "res_eq34")

_FIELDS = ("t", "thrust", "delta_l", "delta_m", "delta_n", "alpha", "beta", "theta", "psi",
           "L", "M", "N", "res_eq33", "res_eq34")


def format_value(v: float) -> str:
    """Canonical 9-significant-digit text for a float."""
    return f"{float(v):.9g}"


def write_controls_csv(series: ControlSeries, path) -> Path:
    p = Path(path)
    cols = [np.asarray(getattr(series, f), dtype=float) for f in _FIELDS]
    try:
        with p.open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for row in zip(*cols):
                w.writerow([format_value(v) for v in row])
    except OSError as exc:
        raise ConfigurationError(f"cannot write {p}: {exc}") from exc
    return p


def read_controls_csv(path, alpha_equb: float = 0.0) -> ControlSeries:
    """Load a control history written by :func:`write_controls_csv`."""
    p = Path(path)
    try:
        with p.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
                raise ConfigurationError(f"{p}: unexpected header {header}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(CSV_HEADER):
                    raise ConfigurationError(f"{p}:{lineno}: expected {len(CSV_HEADER)} fields")
                try:
                    rows.append([float(c) for c in row])
                except ValueError as exc:
                    raise ConfigurationError(f"{p}:{lineno}: {exc}") from exc
    except OSError as exc:
        raise ConfigurationError(f"cannot read controls file {p}: {exc}") from exc
    if len(rows) < 2:
        raise ConfigurationError(f"{p}: at least two stations are required")
    data = np.array(rows)
    if not np.all(np.isfinite(data)):
        raise ConfigurationError(f"{p}: non-finite values present")
    return ControlSeries(**{f: data[:, i].copy() for i, f in enumerate(_FIELDS)},
                         alpha_equb=alpha_equb)
