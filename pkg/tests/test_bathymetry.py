import math

import numpy as np
import pytest

from swecst.bathymetry import (cell_average_2d, cell_average_scalar, extend_bottom, extend_bottom_2d,
                               precompute_bathymetry_1d, precompute_bathymetry_2d)
from swecst.grid import BoundaryCondition, build_grid_1d, build_grid_2d

TRANS = BoundaryCondition.transmissive_pair()
PER = BoundaryCondition.periodic_pair()


def bathy_1d(f, n, lo=0.0, hi=10.0, bc=TRANS, breaks=()):
    g = build_grid_1d(lo, hi, n)
    b = cell_average_scalar(f, g, breaks)
    return g, b, precompute_bathymetry_1d(extend_bottom(b, bc), g)


def test_piecewise_constant_average():
    g = build_grid_1d(0.0, 10.0, 200)
    step = lambda x: np.where((x >= 4) & (x <= 8), 4.0, 0.0)
    b = cell_average_scalar(step, g, (4.0, 8.0))
    inside = (g.faces[:-1] >= 4) & (g.faces[1:] <= 8)
    assert np.all(b[inside] == 4.0)
    assert np.all(b[g.faces[1:] <= 4] == 0.0)


def test_linear_average():
    g = build_grid_1d(0.0, 10.0, 10)
    assert cell_average_scalar(lambda x: x, g)[0] == pytest.approx(0.5, abs=1e-15)


def test_closed_form_average():
    g = build_grid_1d(0.0, 1.0, 50)
    F = lambda x: x / 2 - math.sin(2 * math.pi * x) / (4 * math.pi)
    got = cell_average_scalar(lambda x: np.sin(np.pi * x) ** 2, g)[0]
    assert got == pytest.approx((F(0.02) - F(0.0)) / 0.02, rel=1e-13)


def test_split_cell_is_exact():
    # jump at 0.013 inside the first cell of width 0.02
    g = build_grid_1d(0.0, 1.0, 50)
    b = cell_average_scalar(lambda x: np.where(x < 0.013, 1.0, 3.0), g, (0.013,))
    assert b[0] == pytest.approx((0.013 * 1 + 0.007 * 3) / 0.02, rel=1e-14)


def test_flat_bottom_null():
    g, b, bat = bathy_1d(lambda x: np.zeros_like(x), 50)
    assert np.all(bat.b_left == 0) and np.all(bat.b_right == 0) and np.all(bat.bx_lobatto == 0)
    g, b, bat = bathy_1d(lambda x: np.full_like(x, 2.5), 50)
    assert np.all(bat.b_left == 2.5) and np.all(bat.b_right == 2.5) and np.all(bat.bx_lobatto == 0)


def test_linear_bottom_traces_continuous():
    g, b, bat = bathy_1d(lambda x: 0.3 * x + 1.0, 40, bc=TRANS)
    inner = slice(3, -3)      # away from the copied ghost layers
    assert np.allclose(bat.b_face_minus[inner], bat.b_face_plus[inner], atol=1e-13)
    assert np.allclose(bat.bx_lobatto[2:-2], 0.3, atol=1e-12)


def test_smooth_bottom_convergence():
    f = lambda x: 5 * np.exp(-0.4 * (x - 5) ** 2)
    fx = lambda x: -0.8 * (x - 5) * f(x)
    et, ed = [], []
    for n in (50, 100, 200, 400):
        g, b, bat = bathy_1d(f, n)
        # interior faces only: copied ghost cells put a kink next to the boundary
        faces = g.faces[6:-6]
        et.append(np.max(np.abs(bat.b_face_minus[6:-6] - f(faces))))
        nodes = g.centers[:, None] + g.dx * np.array([-0.5, -math.sqrt(5) / 10, math.sqrt(5) / 10, 0.5])
        ed.append(np.max(np.abs(bat.bx_lobatto - fx(nodes))[10:-10]))
    ot = np.log2(et[-2] / et[-1])
    od = np.log2(ed[-2] / ed[-1])
    assert ot >= 4.5, et
    assert od >= 3.5, ed


def test_precompute_is_deterministic():
    f = lambda x: 5 * np.exp(-0.4 * (x - 5) ** 2)
    _, _, a = bathy_1d(f, 80)
    _, _, b = bathy_1d(f, 80)
    for u, v in zip((a.b_left, a.b_right, a.bx_lobatto), (b.b_left, b.b_right, b.bx_lobatto)):
        assert np.array_equal(u, v)


def test_ghost_layers_required():
    g = build_grid_1d(0.0, 1.0, 20)
    with pytest.raises(ValueError):
        precompute_bathymetry_1d(np.zeros(20), g)


def bathy_2d(f, n, bc=TRANS):
    g = build_grid_2d(0, 1, 0, 1, n, n)
    b = cell_average_2d(f, g)
    return g, b, precompute_bathymetry_2d(extend_bottom_2d(b, bc, bc), g)


def test_flat_bottom_null_2d():
    g, b, bat = bathy_2d(lambda x, y: 0.0 * x * y, 20)
    for arr in (bat.bx_left, bat.bx_right, bat.by_low, bat.by_high, bat.bx_nodes, bat.by_nodes):
        assert np.all(arr == 0.0)


def test_gaussian_mound_traces_converge():
    f = lambda x, y: 0.8 * np.exp(-50 * ((x - 0.5) ** 2 + (y - 0.5) ** 2))
    gy = np.array([-math.sqrt(15) / 10, 0.0, math.sqrt(15) / 10])
    errs = []
    for n in (25, 50, 100):
        g, b, bat = bathy_2d(f, n)
        xf = g.x.faces[1:-1][:, None, None]
        yk = g.y.centers[None, :, None] + g.dy * gy[None, None, :]
        exact = f(xf, yk)
        errs.append(np.max(np.abs(bat.bx_right[1:-2] - exact)))
    assert np.log2(errs[-2] / errs[-1]) >= 4.0, errs


def test_separable_bottom_derivatives():
    fx = lambda x: np.sin(2 * np.pi * x)
    fy = lambda y: np.cos(2 * np.pi * y)
    n = 100
    g, b, bat = bathy_2d(lambda x, y: fx(x) + fy(y), n, bc=PER)
    # b_x depends on x only: constant across the Gauss y-nodes and along y
    assert np.max(np.abs(bat.bx_nodes - bat.bx_nodes[:, :1, :1, :])) <= 1e-10
    lob = np.array([-0.5, -math.sqrt(5) / 10, math.sqrt(5) / 10, 0.5])
    xl = g.x.centers[:, None] + g.dx * lob[None, :]
    exact = 2 * np.pi * np.cos(2 * np.pi * xl)
    assert np.max(np.abs(bat.bx_nodes[:, 0, 0, :] - exact)) <= 1e-5
