import json
import math

import numpy as np
import pytest

from heatkern.cli import main, _parse_grid, ConfigError


def _read_csv(path):
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, rows


def test_parse_grid():
    grid = _parse_grid("-3:3:7")
    assert grid[0] == -3.0 and grid[-1] == 3.0 and len(grid) == 7
    for bad in ("1:2", "a:b:c", "3:1:5", "0:1:1"):
        with pytest.raises(ConfigError):
            _parse_grid(bad)


def test_kernel_command(tmp_path):
    out = tmp_path / "kernel.csv"
    rc = main(["kernel", "--profile", "fokker-planck", "--t", "1",
               "--grid=-1:1:3", "--out", str(out)])
    assert rc == 0
    header, rows = _read_csv(out)
    assert header == ["x", "y", "t", "K"]
    assert rows.shape == (9, 4)
    center = rows[(rows[:, 0] == 0.0) & (rows[:, 1] == 0.0)][0, 3]
    want = 1.0 / math.sqrt(2.0 * math.pi * (1.0 - math.exp(-2.0)))
    assert center == pytest.approx(want, rel=1e-9)


def test_kernel_command_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["kernel", "--profile", "ou-drift", "--param", "k=1", "--param",
            "g=0.5", "--t", "0.5", "--grid=-2:2:9"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_solve_command_matches_analytic(tmp_path):
    out = tmp_path / "solve.csv"
    rc = main(["solve", "--profile", "constant-heat", "--param", "a=1",
               "--phi", "gaussian", "--t", "0.25", "--grid=-1:1:5",
               "--out", str(out)])
    assert rc == 0
    header, rows = _read_csv(out)
    assert header == ["t", "x", "u"]
    for _, x, u in rows:
        want = math.exp(-x * x / 2.0) / math.sqrt(2.0)
        assert u == pytest.approx(want, rel=1e-6)


def test_riccati_command(tmp_path):
    out = tmp_path / "riccati.csv"
    rc = main(["riccati", "--profile", "fokker-planck", "--points", "5",
               "--tmax", "1.5", "--out", str(out)])
    assert rc == 0
    header, rows = _read_csv(out)
    assert header == ["t", "alpha0", "beta0", "gamma0", "delta0", "eps0",
                      "kappa0"]
    assert rows.shape == (5, 7)


def test_riccati_characteristic_dump(tmp_path):
    out = tmp_path / "chs.csv"
    rc = main(["riccati", "--profile", "cable", "--param", "lam=1",
               "--param", "tau=2", "--characteristic", "--points", "4",
               "--out", str(out)])
    assert rc == 0
    header, rows = _read_csv(out)
    assert header == ["t", "mu0", "dmu0", "mu1", "dmu1", "h"]
    # mu0 = t e^{-t} for this profile
    for row in rows:
        assert row[1] == pytest.approx(row[0] * math.exp(-row[0]), rel=1e-8)


def test_burgers_command(tmp_path):
    out = tmp_path / "burgers.csv"
    rc = main(["burgers", "--profile", "constant-heat", "--v0", "bateman",
               "--A", "1.0", "--V", "0.3", "--sign", "-", "--t", "0.5",
               "--grid=-4:4:81", "--out", str(out)])
    assert rc == 0
    header, rows = _read_csv(out)
    assert header == ["t", "x", "v"]
    assert rows.shape == (81, 3)
    # far left of the kink the state is A - V
    assert rows[0, 2] == pytest.approx(0.7, abs=5e-2)


def test_wave_command(tmp_path):
    out = tmp_path / "wave.csv"
    rc = main(["wave", "--c0", "1", "--F0=-0.5", "--t", "0.5",
               "--grid=-2:2:41", "--window=-3:5", "--out", str(out)])
    assert rc == 0
    header, rows = _read_csv(out)
    assert header == ["t", "x", "v"]


def test_validate_filtered():
    assert main(["validate", "--only", "sigma"]) == 0
    assert main(["validate", "--only", "separable"]) == 0


def test_validate_no_match():
    assert main(["validate", "--only", "zzz-no-such-check"]) == 2


def test_config_error_exit_code():
    assert main(["kernel", "--profile", "not-a-profile", "--t", "1.0"]) == 2
    assert main(["kernel", "--profile", "constant-heat", "--param", "nope",
                 "--t", "1.0"]) == 2
    assert main(["solve", "--profile", "constant-heat", "--phi", "bogus",
                 "--t", "0.5"]) == 2


def test_numerical_error_exit_code(tmp_path):
    config = tmp_path / "osc.json"
    config.write_text(json.dumps({
        "coefficients": {"profile": "custom",
                         "poly": {"a": [1.0], "b": [-1.0]}, "T": 2.0}}))
    # t = 1.8 is past the first zero of mu0 at pi/2
    rc = main(["kernel", "--config", str(config), "--t", "1.8",
               "--grid=-1:1:3", "--out", str(tmp_path / "x.csv")])
    assert rc == 3


def test_config_file_listing_coefficients(tmp_path):
    config = tmp_path / "fp.json"
    config.write_text(json.dumps(
        {"coefficients": {"profile": "fokker-planck", "T": 2.0}}))
    out = tmp_path / "k.csv"
    rc = main(["kernel", "--config", str(config), "--t", "1.0",
               "--grid=-1:1:3", "--out", str(out)])
    assert rc == 0
    _, rows = _read_csv(out)
    want = 1.0 / math.sqrt(2.0 * math.pi * (1.0 - math.exp(-2.0)))
    center = rows[(rows[:, 0] == 0.0) & (rows[:, 1] == 0.0)][0, 3]
    assert center == pytest.approx(want, rel=1e-9)


def test_missing_config_file_exit_code():
    assert main(["kernel", "--config", "/nonexistent.json", "--t", "1.0"]) == 2


def test_gnuplot_script_emitted(tmp_path):
    out = tmp_path / "field.csv"
    rc = main(["solve", "--profile", "constant-heat", "--t", "0.25",
               "--grid=-1:1:5", "--out", str(out), "--gnuplot"])
    assert rc == 0
    script = tmp_path / "field.csv.gp"
    assert script.exists()
    assert str(out) in script.read_text()
