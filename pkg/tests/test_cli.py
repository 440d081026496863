import json

import numpy as np
import pytest

from quadmap import cli
from quadmap.suites import CheckResult

SCENARIO = """# capture in a weak trap
params: {hbar: 1.0, mass: 1.0}
initial:
  gaussian: {x0: -1.0, p0: 1.0, sigma0: 1.0}
segments:
  - start_time: 0.0
    potential: {type: free}
  - start_time: 0.5
    potential: {type: harmonic, k: 1.0, center: 0.0}
output:
  grid: {x_min: -12.0, x_max: 12.0, n_points: 1201}
  times: [0.0, 0.5, 1.5]
"""


@pytest.fixture
def scenario_path(tmp_path):
    p = tmp_path / "s.yaml"
    p.write_text(SCENARIO)
    return p


def test_run_writes_csv_and_observables(scenario_path, tmp_path):
    out, obs = tmp_path / "d.csv", tmp_path / "o.json"
    assert cli.main(["run", str(scenario_path), "--out", str(out), "--observables", str(obs)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x,density,re_psi,im_psi" and len(lines) == 1 + 3 * 1201
    data = json.loads(obs.read_text())
    assert [d["time"] for d in data] == [0.0, 0.5, 1.5]
    assert all(abs(d["norm"] - 1) < 1e-8 for d in data)


def test_run_to_stdout(scenario_path, capsys):
    assert cli.main(["run", str(scenario_path)]) == 0
    assert capsys.readouterr().out.startswith("t,x,density,re_psi,im_psi\n")


def test_figure_and_dump(tmp_path):
    out, dump = tmp_path / "f.csv", tmp_path / "f.yaml"
    assert cli.main(["figure", "fig2", "--out", str(out), "--dump-scenario", str(dump)]) == 0
    assert cli.main(["run", str(dump), "--out", str(tmp_path / "g.csv")]) == 0
    assert out.read_bytes() == (tmp_path / "g.csv").read_bytes()


def test_validation_exit_codes(tmp_path, capsys):
    assert cli.main(["figure", "fig9"]) == 1
    assert cli.main(["run", str(tmp_path / "missing.yaml")]) == 1
    bad = tmp_path / "bad.yaml"
    bad.write_text(SCENARIO.replace("type: free", "type: quartic"))
    assert cli.main(["run", str(bad)]) == 1
    assert "segments[0].potential.type" in capsys.readouterr().err


def test_oracle_command_close_to_mapped(scenario_path, tmp_path):
    a, b = tmp_path / "o.csv", tmp_path / "r.csv"
    assert cli.main(["oracle", str(scenario_path), "--out", str(a), "--dt", "1e-3"]) == 0
    assert cli.main(["run", str(scenario_path), "--out", str(b)]) == 0
    da = np.loadtxt(a, delimiter=",", skiprows=1)
    db = np.loadtxt(b, delimiter=",", skiprows=1)
    np.testing.assert_array_equal(da[:, :2], db[:, :2])
    assert np.max(np.abs(da[:, 2] - db[:, 2])) < 1e-3


def test_verify_continuity_passes(capsys):
    assert cli.main(["verify", "--suite", "continuity"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["passed"] and not summary["failures"]


def test_verify_failure_exit_code(monkeypatch, capsys):
    fake = [CheckResult("residual", "broken", 1.0, 1e-4, False, 0.0)]
    monkeypatch.setattr(cli, "run_suites", lambda which: fake)
    assert cli.main(["verify"]) == 2
    assert json.loads(capsys.readouterr().out)["failures"] == ["broken"]
