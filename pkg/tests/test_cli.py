"""CLI subcommands and exit codes."""

import numpy as np
import pytest

import gnls.cli as cli
from gnls.cli import (EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION, EXIT_VIOLATION,
                      main)
from gnls.errors import SimulationAbort
from gnls.grid import Field, FourierGrid
from gnls.harness import RunRecord
from gnls.storage import write_field


def test_bookkeeper_defaults_exit_ok(capsys):
    code = main(["bookkeeper", "--A0", "1.0", "--c0", "1.0", "--C", "1.0",
                 "--eps", "0.0", "--T", "1.0", "--sigma0", "1.0"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "delta = 0.0625" in out
    assert "sigma = 0.001953125" in out


def test_missing_config_is_validation_error(tmp_path, capsys):
    code = main(["simulate", "--config", str(tmp_path / "nope.cfg")])
    assert code == EXIT_VALIDATION
    assert "validation error" in capsys.readouterr().err


def test_bad_config_is_validation_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[data]\nkind = soliton\n")
    code = main(["simulate", "--config", str(cfg)])
    assert code == EXIT_VALIDATION
    assert "kind" in capsys.readouterr().err


def test_simulate_subcommand_writes_outputs(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[grid]\nd = 1\nN = 64\nL = 10.0\n"
                   "[solver]\ndt = 0.05\nt_end = 0.1\nsnapshot_stride = 1\n")
    out = tmp_path / "out"
    code = main(["simulate", "--config", str(cfg), "--out", str(out)])
    assert code == EXIT_OK
    assert (out / "norms.csv").exists()


def test_radius_svg_flag(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[grid]\nd = 1\nN = 256\nL = 40.0\n"
                   "[data]\nkind = periodized_sech\nA = 1.0\na = 1.0\n"
                   "[solver]\ndt = 0.05\nt_end = 0.1\nsnapshot_stride = 1\n"
                   "[fit]\nsigma0 = 0.5\nC = 1.0\n")
    out = tmp_path / "out"
    code = main(["radius", "--config", str(cfg), "--out", str(out), "--svg"])
    assert code == EXIT_OK
    assert (out / "radius.svg").exists()


def test_norms_subcommand(tmp_path, capsys):
    g = FourierGrid(d=1, N=64, L=2 * np.pi)
    A, k = 0.5, 3
    u = Field(g, A * np.exp(1j * k * g.x))
    snap = tmp_path / "u.gnls"
    write_field(snap, u)
    code = main(["norms", str(snap), "--sigma", "0.1"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    parsed = dict(line.split(" = ") for line in out.strip().splitlines())
    assert float(parsed["mass"]) == pytest.approx(A ** 2 * g.L, rel=1e-12)
    assert float(parsed["sigma"]) == 0.1


def test_violation_exit_code(monkeypatch, capsys):
    def fake_runner(cfg):
        return RunRecord(config={}, rows=[], fits={}, violations=3)

    monkeypatch.setattr(cli, "run_bookkeeper", fake_runner)
    code = main(["bookkeeper"])
    assert code == EXIT_VIOLATION
    assert "hard violations" in capsys.readouterr().err


def test_runtime_abort_exit_code(monkeypatch, capsys):
    def fake_runner(cfg):
        raise SimulationAbort("non-finite state at step 5", step=5)

    monkeypatch.setattr(cli, "run_simulate", fake_runner)
    code = main(["simulate"])
    assert code == EXIT_RUNTIME
    assert "runtime abort" in capsys.readouterr().err


def test_seed_flag_overrides_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[data]\nkind = random_bandlimited\nseed = 1\n")
    parsed = cli._config_from_args(
        cli.build_parser().parse_args(
            ["simulate", "--config", str(cfg), "--seed", "42"]), "simulate")
    assert parsed.seed == 42
