import io
import os
import subprocess
import sys

import numpy as np
import pytest

from swecst import cli
from swecst.cli import main
from swecst.errors import ConfigurationError, InvariantViolation, SolverBlowup, StalledRun
from swecst.output import read_snapshot, snapshot_name, write_snapshot
from swecst.weno import thread_cap_from_env


def call(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_list():
    code, text = call("list")
    assert code == 0
    assert "ex4.2" in text and "ex4.12-hump" in text


def test_run_writes_snapshots_and_log(tmp_path):
    code, _ = call("run", "--case", "ex4.2", "--nx", "50", "--tfinal", "0.01", "--out", str(tmp_path))
    assert code == 0
    snap = read_snapshot(tmp_path / snapshot_name(0.01))
    assert list(snap) == ["x", "b", "h", "hu", "H"]
    assert snap["x"].size == 50
    assert np.array_equal(snap["H"], snap["b"] + snap["h"]) or np.allclose(snap["H"], snap["b"] + snap["h"],
                                                                          rtol=0, atol=1e-14)
    log = (tmp_path / "run_log.csv").read_text().splitlines()
    assert log[0] == "step,t,dt,min_h,total_mass"
    assert float(log[-1].split(",")[1]) == 0.01


def test_snapshot_round_trip(tmp_path, rng):
    fields = {"x": rng.random(7), "y": rng.random(7) * 1e-300, "h": rng.normal(size=7) * 1e20}
    write_snapshot(tmp_path / "s.csv", fields)
    back = read_snapshot(tmp_path / "s.csv")
    for k in fields:
        assert np.array_equal(back[k], fields[k])


def test_snapshot_times(tmp_path):
    code, _ = call("run", "--case", "ex4.5", "--nx", "60", "--snapshots", "0,15,60", "--out", str(tmp_path))
    assert code == 0
    names = sorted(p.name for p in tmp_path.glob("solution_t*.csv"))
    assert names == sorted(snapshot_name(t) for t in (0.0, 15.0, 60.0))


def test_run_2d_columns(tmp_path):
    code, _ = call("run", "--case", "ex4.9", "--nx", "20", "--ny", "20", "--tfinal", "0.002",
                   "--out", str(tmp_path))
    assert code == 0
    snap = read_snapshot(tmp_path / snapshot_name(0.002))
    assert list(snap) == ["x", "y", "b", "h", "hu", "hv", "H"]
    assert snap["x"].size == 400


@pytest.mark.parametrize("argv", [
    ["run", "--case", "ex4.2", "--nx", "0"],
    ["run", "--case", "ex4.2", "--cfl", "1.5"],
    ["run", "--case", "ex4.2", "--tfinal", "-1"],
    ["run", "--case", "nope"],
    ["run", "--case", "ex4.2", "--ny", "20"],
    ["run", "--case", "ex4.2", "--snapshots", "a,b"],
    ["convergence", "--case", "ex4.2", "--levels", "9"],
    ["cproperty", "--dims", "3"],
    ["frobnicate"],
])
def test_config_errors_exit_2(argv, tmp_path):
    code, _ = call(*argv, *(["--out", str(tmp_path)] if argv[0] == "run" else []))
    assert code == 2


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("SWE_THREADS", "zero")
    assert call("list")[0] == 2
    monkeypatch.setenv("SWE_THREADS", "-3")
    assert call("list")[0] == 2


def test_thread_cap_parse():
    assert thread_cap_from_env("") == 0
    assert thread_cap_from_env("3") == 3
    with pytest.raises(ValueError):
        thread_cap_from_env("0")


def test_config_file(tmp_path):
    cfg = tmp_path / "cases.ini"
    cfg.write_text("[small]\nfamily = lake_1d\ndomain = 0, 10\nn = 40\nt_final = 0.05\n"
                   "bc_x = transmissive, transmissive\nparams = H0=10, amp=5\nreference = exact\n")
    code, text = call("run", "--config", str(cfg), "--case", "small", "--out", str(tmp_path))
    assert code == 0
    snap = read_snapshot(tmp_path / snapshot_name(0.05))
    assert np.max(np.abs(snap["H"] - 10.0)) <= 1e-12
    assert call("run", "--config", str(cfg), "--case", "other", "--out", str(tmp_path))[0] == 2
    assert call("run", "--config", str(tmp_path / "missing.ini"), "--case", "x")[0] == 2


def test_cproperty_pass_and_negative_control(tmp_path):
    code, text = call("cproperty", "--dims", "1", "--out", str(tmp_path / "cp.csv"))
    assert code == 0 and "C-property: pass" in text
    assert (tmp_path / "cp.csv").read_text().startswith("case,variable,L1,Linf,pass")
    code, _ = call("cproperty", "--dims", "1", "--no-hydrostatic")
    assert code == 5


def test_convergence_command(tmp_path):
    code, text = call("convergence", "--case", "ex4.2", "--levels", "2", "--tfinal", "0.01",
                      "--ref-n", "400", "--out", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "convergence_ex4.2.csv").read_text().splitlines()
    assert len(lines) == 3 and lines[0].startswith("N,cfl,L1_h")


@pytest.mark.parametrize("exc,code", [(SolverBlowup, 3), (StalledRun, 4), (InvariantViolation, 5),
                                      (ConfigurationError, 2)])
def test_error_exit_codes(monkeypatch, tmp_path, exc, code):
    def boom(case):
        raise exc("forced")
    monkeypatch.setattr(cli, "run", boom)
    assert call("run", "--case", "ex4.2", "--out", str(tmp_path))[0] == code


def test_stall_on_step_limit(tmp_path):
    # an all-dry domain has no wave speed to size the step with
    cfg = tmp_path / "dry.ini"
    cfg.write_text("[dry]\nfamily = lake_1d\ndomain = 0, 10\nn = 20\nt_final = 1\n"
                   "bc_x = transmissive, transmissive\nparams = H0=0, amp=5\n")
    assert call("run", "--config", str(cfg), "--case", "dry", "--out", str(tmp_path))[0] == 4


def _subprocess_run(tmp_path, threads):
    env = dict(os.environ, SWE_THREADS=str(threads), NUMBA_NUM_THREADS="4")
    out = tmp_path / f"t{threads}"
    subprocess.run([sys.executable, "-m", "swecst.cli", "run", "--case", "ex4.9", "--nx", "24",
                    "--ny", "24", "--tfinal", "0.005", "--out", str(out)],
                   env=env, check=True, capture_output=True)
    return (out / snapshot_name(0.005)).read_bytes()


def test_thread_count_does_not_change_results(tmp_path):
    assert _subprocess_run(tmp_path, 1) == _subprocess_run(tmp_path, 4)
