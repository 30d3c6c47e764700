import numpy as np
import pytest

from invsim import ManeuverInput, MirageDoubleRoll
from invsim.errors import ConfigurationError
from invsim.io import CSV_HEADER, format_value, read_controls_csv, write_controls_csv
from invsim.plotting import PLOT_FILES, emit_plots

from conftest import run_quiet


@pytest.fixture(scope="module")
def coarse(mirage):
    return run_quiet(ManeuverInput(MirageDoubleRoll(), 0.05), mirage)


def test_csv_round_trip_is_canonical(tmp_path, coarse):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_controls_csv(coarse, p1)
    back = read_controls_csv(p1)
    write_controls_csv(back, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert p1.read_text().splitlines()[0] == ",".join(CSV_HEADER)
    assert np.allclose(back.thrust, coarse.thrust, rtol=1e-8)


def test_format_value():
    assert format_value(11543.429991869622) == "11543.43"
    assert format_value(1.0 / 3.0) == "0.333333333"


def test_summary_recomputed_from_csv(tmp_path, coarse):
    path = tmp_path / "c.csv"
    write_controls_csv(coarse, path)
    back = read_controls_csv(path, alpha_equb=coarse.alpha_equb)
    a, b = coarse.summary(), back.summary()
    assert b.thrust_max == pytest.approx(a.thrust_max, rel=1e-8)
    for k in a.mean_deg:
        assert b.mean_deg[k] == pytest.approx(a.mean_deg[k], rel=1e-7, abs=1e-9)
    assert np.allclose([t for t, _ in b.thrust_peaks], [t for t, _ in a.thrust_peaks], atol=1e-9)


def test_read_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t_s,thrust_N\n0,1\n")
    with pytest.raises(ConfigurationError, match="header"):
        read_controls_csv(bad)
    with pytest.raises(ConfigurationError):
        read_controls_csv(tmp_path / "none.csv")


def test_plots(tmp_path, coarse):
    files = emit_plots(coarse, tmp_path / "plots")
    assert sorted(f.name for f in files) == sorted(PLOT_FILES)
    assert all(f.read_text().lstrip().startswith("<?xml") for f in files)


def test_plots_need_roll_channel(tmp_path, coarse):
    from dataclasses import replace

    with pytest.raises(ConfigurationError):
        emit_plots(replace(coarse, phi=None), tmp_path)


def test_plots_unwritable_directory(tmp_path, coarse):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ConfigurationError):
        emit_plots(coarse, blocker / "sub")
