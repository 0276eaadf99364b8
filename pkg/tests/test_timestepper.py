import numpy as np
import pytest

from swecst.cases import get_case
from swecst.errors import ConfigurationError, SolverBlowup, StalledRun
from swecst.runner import run, setup
from swecst.timestepper import PP_CFL, RunLog, StepControl, compute_dt, run_to, ssp_rk3_step


def test_dt_examples():
    assert compute_dt(9.90556, 0.05, StepControl(0.6, t_final=10.0)) == pytest.approx(0.0030286, rel=1e-4)
    strict = compute_dt(9.90556, 0.05, StepControl(0.6, strict_pp=True, t_final=10.0))
    assert strict == pytest.approx(PP_CFL * 0.05 / 9.90556, rel=1e-15)


def test_dt_2d_sums_rates():
    dt = compute_dt((2.0, 3.0), (0.1, 0.2), StepControl(0.5, t_final=10.0))
    assert dt == pytest.approx(0.5 / (20.0 + 15.0), rel=1e-15)


def test_dt_lands_on_final_time():
    assert compute_dt(1.0, 1.0, StepControl(0.6, t_final=1.0), t=0.999) == pytest.approx(0.001, rel=1e-12)


def test_dt_zero_speed():
    with pytest.raises(StalledRun):
        compute_dt(0.0, 0.1, StepControl(0.6, t_final=1.0))
    assert compute_dt(0.0, 0.1, StepControl(0.6, t_final=1.0), t=1.0) == 0.0


@pytest.mark.parametrize("kw", [dict(cfl=0.0), dict(cfl=1.5), dict(t_final=-1.0)])
def test_control_validation(kw):
    with pytest.raises(ConfigurationError):
        StepControl(**kw)


def test_rk3_linear_scalar():
    U = ssp_rk3_step(np.array([1.0]), lambda V, t, s: V, 0.1)
    assert U[0] == pytest.approx(1 + 0.1 + 0.005 + 0.1 ** 3 / 6, rel=1e-15)


def test_rk3_third_order():
    errs = []
    for dt in (0.1, 0.05):
        U, t = np.array([1.0]), 0.0
        for _ in range(int(round(1.0 / dt))):
            U = ssp_rk3_step(U, lambda V, t, s: -V * np.cos(t), dt, t)
            t += dt
        errs.append(abs(U[0] - np.exp(-np.sin(1.0))))
    assert np.log2(errs[0] / errs[1]) > 2.8


def test_rk3_zero_operator_bitwise(rng):
    U = rng.random((2, 17))
    assert np.array_equal(ssp_rk3_step(U, lambda V, t, s: np.zeros_like(V), 0.3), U)


def test_rk3_tags_stage_on_blowup():
    def rhs(V, t, s):
        if s == 2:
            raise SolverBlowup("boom")
        return V
    with pytest.raises(SolverBlowup) as err:
        ssp_rk3_step(np.ones(3), rhs, 0.1)
    assert err.value.stage == 2


def test_zero_final_time_is_identity():
    case = get_case("ex4.2")
    res = run(case, n=(50,), t_final=0.0)
    assert np.array_equal(res.U, res.problem.U0)
    assert len(res.log.rows) == 1


def test_run_to_hits_stop_times():
    seen = []
    U, log = run_to(np.array([1.0]), lambda V, t, s: -V, lambda V: 1.0, 0.1,
                    StepControl(0.6, t_final=1.0), lambda V: V, 1.0,
                    stop_times=(0.0, 0.25, 0.5), on_stop=lambda t, V: seen.append(t))
    assert seen == [0.0, 0.25, 0.5]
    assert log.rows[-1][1] == 1.0
    assert U[0] == pytest.approx(np.exp(-1.0), rel=1e-4)


def test_max_steps_stall():
    with pytest.raises(StalledRun):
        run(get_case("ex4.2"), n=(50,), max_steps=3)


def test_lake_at_rest_long_run():
    case = get_case("ex4.1-smooth")
    prob = setup(case, n=(100,))
    control = StepControl(0.6, t_final=1e9, max_steps=1000)
    U = prob.U0
    rhs = prob.rhs
    dt = compute_dt(prob.wave_speed(U), prob.spacing, control)
    for _ in range(1000):
        U = ssp_rk3_step(U, rhs, dt)
    assert np.max(np.abs(U - prob.U0)) <= 1e-11


def test_deterministic():
    a = run(get_case("ex4.4-big"), n=(100,), t_final=0.05)
    b = run(get_case("ex4.4-big"), n=(100,), t_final=0.05)
    assert np.array_equal(a.U, b.U)


def test_log_csv(tmp_path):
    log = RunLog()
    log.record(0, 0.0, 0.0, 1.0, 2.0)
    log.record(1, 0.1, 0.1, 0.9, 2.0)
    log.write_csv(tmp_path / "log.csv")
    lines = (tmp_path / "log.csv").read_text().splitlines()
    assert lines[0] == "step,t,dt,min_h,total_mass"
    assert lines[2] == "1,0.10000000000000001,0.10000000000000001,0.90000000000000002,2"
    assert log.min_h == 0.9
