import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from swecst.analysis import (convergence_order, convergence_table, error_norms, froude, restrict,
                             steadiness_residual, write_table_csv)
from swecst.errors import ConfigurationError


def test_norm_example():
    rep = error_norms({"h": np.array([1.0, 1.5])}, {"h": np.array([1.0, 1.0])}, 1.0)
    assert rep.l1["h"] == 0.5 and rep.linf["h"] == 0.5


def test_order_examples():
    assert convergence_order(1e-2, 3.125e-4) == pytest.approx(5.0, rel=1e-12)
    assert math.isnan(convergence_order(0.0, 1e-3))
    assert math.isnan(convergence_order(1e-3, 0.0))
    assert convergence_order(4.0, 1.0, ratio=4.0) == pytest.approx(1.0)


@given(arrays(float, 12, elements=st.floats(-1e3, 1e3)), st.floats(1e-3, 1e3))
def test_norm_homogeneity(e, c):
    z = {"h": np.zeros(12)}
    r1 = error_norms({"h": e}, z, 0.1)
    r2 = error_norms({"h": c * e}, z, 0.1)
    assert r2.l1["h"] == pytest.approx(c * r1.l1["h"], rel=1e-12, abs=1e-300)
    assert r2.linf["h"] == pytest.approx(c * r1.linf["h"], rel=1e-12, abs=1e-300)


def test_grid_mismatch():
    with pytest.raises(ConfigurationError):
        error_norms({"h": np.zeros(3)}, {"h": np.zeros(4)}, 1.0)


@given(arrays(float, (8, 12), elements=st.floats(-10, 10)))
def test_restrict_preserves_mean(a):
    assert restrict(a, 4).mean() == pytest.approx(a.mean(), abs=1e-12)
    assert restrict(a, (2, 3)).shape == (4, 4)


def test_restrict_values():
    assert np.array_equal(restrict(np.array([1.0, 3.0, 5.0, 7.0]), 2), [2.0, 6.0])
    with pytest.raises(ConfigurationError):
        restrict(np.zeros(5), 2)


def test_froude():
    assert froude(1.0, math.sqrt(9.812)) == pytest.approx(1.0)
    assert math.isnan(froude(0.0, 1.0))
    assert np.allclose(froude(np.array([4.0, 1.0]), np.array([0.0, -2.0]), 1.0), [0.0, 2.0])


def test_residual():
    assert steadiness_residual(np.zeros(3), np.array([0.0, -2e-3, 1e-3]), 0.5) == 4e-3
    with pytest.raises(ConfigurationError):
        steadiness_residual(np.zeros(3), np.zeros(3), 0.0)


def test_table(tmp_path):
    reps = [error_norms({"h": np.full(n, 1.0 / n ** 4)}, {"h": np.zeros(n)}, 1.0 / n) for n in (10, 20)]
    rows = convergence_table([10, 20], [0.6, 0.4], reps, ["h"])
    assert math.isnan(rows[0].orders_l1["h"])
    assert rows[1].orders_l1["h"] == pytest.approx(4.0)
    write_table_csv(tmp_path / "t.csv", rows, ["h"])
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "N,cfl,L1_h,order_L1_h,Linf_h,order_Linf_h"
    assert lines[1].startswith("10,0.59999999999999998,0.0001,nan")
