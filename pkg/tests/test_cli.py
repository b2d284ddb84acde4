import json
import os

import numpy as np
import pytest

from rhmsp import cli
from rhmsp.cli import CliError, load_config, parse_floats, parse_grid, run


# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

def test_parse_grid():
    g = parse_grid("0:1:4")
    assert np.allclose(g, [0.0, 0.25, 0.5, 0.75, 1.0])
    for bad in ("0:1", "0:1:4:2", "a:1:4", "1:0:4", "0:1:0"):
        with pytest.raises(CliError):
            parse_grid(bad)


def test_parse_floats():
    assert parse_floats("1,2.5,-3", "x") == [1.0, 2.5, -3.0]
    with pytest.raises(CliError):
        parse_floats("1,zap", "x")


def test_load_config(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("alpha = 1.8   # stability\n\n# comment only\nhurst=const:0.6\n")
    assert load_config(str(p)) == {"alpha": "1.8", "hurst": "const:0.6"}
    p.write_text("alpha 1.8\n")
    with pytest.raises(CliError) as err:
        load_config(str(p))
    assert ":1:" in str(err.value)        # line number in the message
    with pytest.raises(CliError):
        load_config(str(tmp_path / "missing.cfg"))


def test_seed_precedence(tmp_path, monkeypatch):
    cfgfile = tmp_path / "c.cfg"
    cfgfile.write_text("seed=7\n")

    class A:
        spec = str(cfgfile)
        set = None
        seed = None

    monkeypatch.setenv("RHMSP_SEED", "13")
    assert cli.resolve_seed(A(), cli.resolve_config(A())) == 7   # config wins env
    a = A()
    a.seed = 3
    assert cli.resolve_seed(a, cli.resolve_config(a)) == 3       # flag wins all
    b = A()
    b.spec = None
    assert cli.resolve_seed(b, cli.resolve_config(b)) == 13      # env fallback
    monkeypatch.delenv("RHMSP_SEED")
    assert cli.resolve_seed(b, cli.resolve_config(b)) == 42      # default


def test_set_overrides(tmp_path):
    cfgfile = tmp_path / "c.cfg"
    cfgfile.write_text("alpha=1.8\n")

    class A:
        spec = str(cfgfile)
        set = ["alpha=1.2", "hurst=const:0.4"]

    cfg = cli.resolve_config(A())
    assert cfg["alpha"] == "1.2" and cfg["hurst"] == "const:0.4"
    A.set = ["nonsense"]
    with pytest.raises(CliError):
        cli.resolve_config(A())


# ---------------------------------------------------------------------------
# exit codes and artifact contracts
# ---------------------------------------------------------------------------

def test_unknown_command_exits_2(capsys):
    assert run(["frobnicate"]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_command_exits_2(capsys):
    assert run([]) == 2


def test_simulate_csv_and_sidecar(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert run(["simulate", "--grid", "0:1:8", "--paths", "3",
                "--terms", "120", "--seed", "5", "--out", str(out)]) == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "t,path_0,path_1,path_2"
    assert len(lines) == 10
    meta = json.loads((tmp_path / "p.json").read_text())
    assert meta["config"]["alpha"] == "1.5"
    assert meta["config"]["seed"] == "5"
    assert meta["per_path_seeds"] == [[5, 0], [5, 1], [5, 2]]


def test_simulate_is_deterministic(tmp_path):
    args = ["simulate", "--grid", "0:1:8", "--paths", "2", "--terms", "120",
            "--seed", "9"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_out_overwrite_guard(tmp_path, capsys):
    out = tmp_path / "p.csv"
    out.write_text("precious\n")
    args = ["simulate", "--grid", "0:1:8", "--paths", "1", "--terms", "120",
            "--out", str(out)]
    assert run(args) == 2
    assert out.read_text() == "precious\n"         # no partial artifacts
    assert run(args + ["--force"]) == 0


def test_out_dir_guard(tmp_path):
    out = tmp_path / "results"
    out.mkdir()
    (out / "old.txt").write_text("x")
    args = ["ft-check", "--h", "1.5", "--t", "1", "--u", "0.25",
            "--out", str(out)]
    assert run(args) == 2
    assert run(args + ["--force"]) == 0


def test_ft_check_report(tmp_path, capsys):
    out = tmp_path / "r"
    assert run(["ft-check", "--h", "1.5", "--t", "1", "--out", str(out)]) == 0
    assert "PASS" in capsys.readouterr().out
    rep = json.loads((out / "ft_check.json").read_text())
    assert rep["pass"] is True
    assert rep["metric"] <= 1e-4
    assert rep["parameters"]["config"]["alpha"] == "1.5"


def test_norm_command(capsys):
    assert run(["norm", "--times", "1", "--coeffs", "1"]) == 0
    out = capsys.readouterr().out
    assert "scale_norm" in out
    val = float(out.split("scale_norm=")[1].split()[0])
    assert val == pytest.approx(3.74985, rel=1e-4)


def test_lnd_n2_command(tmp_path, capsys):
    out = tmp_path / "lnd"
    assert run(["lnd", "--n", "2", "--spacings", "0.0625", "--floor", "0.999",
                "--set", "rel_tol=1e-5", "--out", str(out)]) == 0
    rep = json.loads((out / "lnd_study.json").read_text())
    assert rep["metric"] == 1.0


def test_check_failure_exits_1(tmp_path, capsys):
    # an impossible floor makes the n=2 LND check fail cleanly
    out = tmp_path / "lnd"
    assert run(["lnd", "--n", "2", "--spacings", "0.0625", "--floor", "1.5",
                "--set", "rel_tol=1e-5", "--out", str(out)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_bad_config_value_exits_2(tmp_path, capsys):
    assert run(["norm", "--times", "1", "--coeffs", "1",
                "--set", "alpha=3.0"]) == 2
