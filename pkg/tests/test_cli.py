import json

import pytest

from invsim import __version__
from invsim.cli import main


def test_atmosphere_row(capsys):
    assert main(["atmosphere", "--altitude", "5000"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "altitude_m,density_kg_m3,temperature_K,speed_of_sound_m_s"
    assert out[1] == "5000,0.735872,255.65,320.50"


def test_atmosphere_table(capsys):
    assert main(["atmosphere", "--table", "0", "10000", "5000"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4


def test_atmosphere_out_of_range(capsys):
    assert main(["atmosphere", "--altitude", "30000"]) == 2


def test_usage_errors(capsys):
    assert main([]) == 4
    assert main(["run", "--bogus"]) == 4
    assert main(["run", "--maneuver", "barrel"]) == 4


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_missing_airframe(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert main(["run", "--airframe", str(missing), "--out", str(tmp_path / "c.csv")]) == 3
    assert str(missing) in capsys.readouterr().err


def test_env_step_and_verify(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("INVSIM_DT", "0.01")
    out = tmp_path / "c.csv"
    assert main(["run", "--airframe", "mirage3", "--maneuver", "mirage-double-roll",
                 "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3002
    report = tmp_path / "r.json"
    assert main(["verify", "--controls", str(out), "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["pass"] is True
    assert {"max_pos_dev_m", "rms_pos_dev_m", "max_roll_dev_deg"} <= set(data)
    assert main(["plot", "--controls", str(out), "--dir", str(tmp_path / "p")]) == 0
    assert len(list((tmp_path / "p").glob("*.svg"))) == 8


def test_bad_env_step(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("INVSIM_DT", "fast")
    assert main(["run", "--out", str(tmp_path / "c.csv")]) == 3


def test_unwritable_output(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("INVSIM_DT", "0.01")
    assert main(["run", "--out", str(tmp_path / "missing" / "c.csv")]) == 3


def test_guard_failure_exit_code(tmp_path, capsys):
    traj = tmp_path / "vertical.csv"
    rows = ["t,x_g,y_g,z_g,phi_rad"] + [f"{0.1 * i},0,0,{-15.0 * i},0" for i in range(11)]
    traj.write_text("\n".join(rows) + "\n")
    assert main(["run", "--trajectory", str(traj), "--out", str(tmp_path / "c.csv")]) == 2


def test_full_run(tmp_path, capsys):
    out = tmp_path / "controls.csv"
    code = main(["run", "--airframe", "mirage3", "--maneuver", "mirage-double-roll",
                 "--dt", "0.001", "--out", str(out), "--plots", str(tmp_path / "plots")])
    assert code == 0
    assert len(out.read_text().splitlines()) == 30002
    text = capsys.readouterr().out
    assert "dynamic pressure (Pa)    8278.56" in text
    assert len(list((tmp_path / "plots").glob("*.svg"))) == 8
