import numpy as np
import pytest
from hypothesis import given, strategies as st

from swecst.bathymetry import (cell_average_2d, cell_average_scalar, extend_bottom, extend_bottom_2d,
                               precompute_bathymetry_1d, precompute_bathymetry_2d)
from swecst.cases import get_case
from swecst.grid import BoundaryCondition, build_grid_1d, build_grid_2d
from swecst.runner import setup
from swecst.swe1d import GRAVITY, SchemeOptions, max_wave_speed, pp_limit_1d, rhs_1d
from swecst.swe2d import (EdgeSides, edge_flux_integrals, edge_flux_integrals_reference,
                          max_wave_speeds, pp_limit_2d, rhs_2d, source_integral_2d)
from swecst.timestepper import ssp_rk3_step

g = GRAVITY
TRANS = BoundaryCondition.transmissive_pair()
PER = BoundaryCondition.periodic_pair()


def _sides(r, shape, dry=0.0):
    H_m, H_p = r.uniform(0, 3, shape), r.uniform(0, 3, shape)
    b_m, b_p = r.uniform(-1, 1, shape), r.uniform(-1, 1, shape)
    h_m, h_p = H_m - b_m, H_p - b_p
    if dry:
        h_m[r.random(shape) < dry] = 0.0
        h_p[r.random(shape) < dry] = 0.0
    q = [r.normal(0, 2, shape) for _ in range(4)]
    return EdgeSides(H_m, H_p, h_m, h_p, b_m, b_p, *q)


@pytest.mark.parametrize("pp", [False, True])
def test_kernel_matches_array_version(rng, pp):
    xs = _sides(rng, (9, 7, 3), dry=0.2)
    ys = _sides(rng, (8, 8, 3), dry=0.2)
    opts = SchemeOptions(pp=pp)
    phi, psi = edge_flux_integrals(xs, ys, 1.3, 4.0, 3.0, opts)
    phi_r, psi_r = edge_flux_integrals_reference(xs, ys, 1.3, 4.0, 3.0, opts)
    assert phi.shape == (3, 9, 7) and psi.shape == (3, 8, 8)
    assert np.max(np.abs(phi - phi_r)) <= 1e-14 * max(1.0, np.max(np.abs(phi_r)))
    assert np.max(np.abs(psi - psi_r)) <= 1e-14 * max(1.0, np.max(np.abs(psi_r)))


def test_lake_edge_flux():
    shape = (1, 1, 3)
    C = np.full(shape, 1.0)
    b = np.full(shape, 0.2)
    z = np.zeros(shape)
    sd = EdgeSides(C, C, C - b, C - b, b, b, z, z, z, z)
    phi, psi = edge_flux_integrals(sd, sd, 1.0, 5.0, 5.0)
    assert phi[:, 0, 0] == pytest.approx([0.0, 4.906, 0.0], abs=1e-14)
    assert psi[:, 0, 0] == pytest.approx([0.0, 0.0, 4.906], abs=1e-14)


def test_source_constants():
    H = np.full((2, 2, 3, 4), 1.0)
    b = np.full((2, 2, 3, 4), 5.0)
    s1, s2 = source_integral_2d(H, b, H, b, 1.0, g)
    assert np.all(s1 == 0.0) and np.all(s2 == 0.0)
    s1, s2 = source_integral_2d(H + 0.5, b, H, b * 0 - 2.0, 1.0, g)
    assert s1 == pytest.approx(np.full((2, 2), -g * 0.5 * 5.0), rel=1e-14)
    assert np.all(s2 == 0.0)


@pytest.mark.parametrize("name", ["ex4.8-smooth", "ex4.8-dry"])
def test_well_balanced_rhs_2d(name):
    prob = setup(get_case(name), n=(40, 40))
    L = prob.rhs(prob.U0, 0.0, 1)
    assert np.max(np.abs(L)) <= 1e-12


def _state_1d(x):
    return 2.0 + 0.3 * np.sin(2 * np.pi * x), 0.5 * np.cos(2 * np.pi * x)


@pytest.mark.parametrize("pp", [False, True])
def test_reduces_to_1d(pp):
    nx, ny = 40, 12
    bottom = lambda x: 0.4 * np.exp(-20 * (x - 0.5) ** 2)
    g1 = build_grid_1d(0.0, 1.0, nx)
    b1 = cell_average_scalar(bottom, g1)
    bat1 = precompute_bathymetry_1d(extend_bottom(b1, PER), g1)
    H, q = _state_1d(g1.centers)
    U1 = np.array([H + b1, q])
    opts = SchemeOptions(pp=pp)
    a = max_wave_speed(U1[0], U1[1], b1)
    L1 = rhs_1d(U1, bat1, g1, PER, 0.0, opts, alpha=a)

    g2 = build_grid_2d(0.0, 1.0, 0.0, 0.3, nx, ny)
    b2 = np.repeat(b1[:, None], ny, axis=1)
    bat2 = precompute_bathymetry_2d(extend_bottom_2d(b2, PER, PER), g2)
    U2 = np.stack([np.repeat(c[:, None], ny, axis=1) for c in (U1[0], U1[1], np.zeros(nx))])
    L2 = rhs_2d(U2, bat2, g2, PER, PER, 0.0, opts, alpha=(a, a))
    assert np.max(np.abs(L2[0] - L1[0][:, None])) <= 1e-12
    assert np.max(np.abs(L2[1] - L1[1][:, None])) <= 1e-12
    assert np.max(np.abs(L2[2])) <= 1e-12


def test_transpose_symmetry(rng):
    n = 24
    grid = build_grid_2d(0.0, 1.0, 0.0, 1.0, n, n)
    b = rng.uniform(0, 0.5, (n, n))
    H = 1.5 + 0.1 * rng.random((n, n))
    hu, hv = rng.normal(0, 0.3, (n, n)), rng.normal(0, 0.3, (n, n))
    U = np.array([H, hu, hv])
    Ut = np.array([H.T, hv.T, hu.T])
    bat = precompute_bathymetry_2d(extend_bottom_2d(b, PER, PER), grid)
    batt = precompute_bathymetry_2d(extend_bottom_2d(b.T.copy(), PER, PER), grid)
    L = rhs_2d(U, bat, grid, PER, PER, alpha=(6.0, 6.0))
    Lt = rhs_2d(Ut, batt, grid, PER, PER, alpha=(6.0, 6.0))
    assert np.max(np.abs(Lt[0] - L[0].T)) <= 1e-12
    assert np.max(np.abs(Lt[1] - L[2].T)) <= 1e-12
    assert np.max(np.abs(Lt[2] - L[1].T)) <= 1e-12


def test_mass_conservation_doubly_periodic():
    n = 24
    grid = build_grid_2d(0.0, 1.0, 0.0, 1.0, n, n)
    b = cell_average_2d(lambda x, y: 0.8 * np.sin(np.pi * x) ** 2 * np.sin(np.pi * y) ** 2, grid)
    bat = precompute_bathymetry_2d(extend_bottom_2d(b, PER, PER), grid)
    X, Y = grid.mesh()
    U = np.array([1.5 + 0.2 * np.sin(2 * np.pi * (X + Y)), 0.3 * np.sin(2 * np.pi * Y),
                  0.3 * np.cos(2 * np.pi * X)])
    m0 = U[0].sum()
    rhs = lambda V, t, s: rhs_2d(V, bat, grid, PER, PER, t)
    for _ in range(10):
        U = ssp_rk3_step(U, rhs, 0.002)
        assert abs(U[0].sum() - m0) <= 1e-12 * abs(m0)


@given(st.floats(0.0, 2.0), st.lists(st.floats(-1, 2), min_size=6, max_size=6))
def test_limiter_matches_1d_for_constant_edges(h_bar, traces):
    # edge traces that do not vary along the edge: the 2D factor is the 1D one
    lo, hi = traces[0], traces[1]
    one = np.ones(3)
    eta = min(1e-13, h_bar)
    lim = pp_limit_2d(np.array([h_bar]), np.array([lo * one]), np.array([hi * one]),
                      np.array([lo * one + 1.0]), np.array([hi * one + 1.0]), eta)
    ref = pp_limit_1d(np.array([h_bar]), np.array([lo]), np.array([hi]),
                      np.array([lo + 1.0]), np.array([hi + 1.0]), eta=eta)
    assert lim.theta[0] == pytest.approx(ref.theta[0], rel=1e-13, abs=1e-15)
    assert lim.xi[0] == pytest.approx(ref.xi[0], rel=1e-13, abs=1e-15)


def test_pp_forward_euler_positivity_2d(rng):
    opts = SchemeOptions(pp=True)
    n = 12
    grid = build_grid_2d(0.0, 1.0, 0.0, 1.0, n, n)
    for _ in range(60):
        b = rng.normal(0, 0.3, (n, n))
        bat = precompute_bathymetry_2d(extend_bottom_2d(b, PER, PER), grid)
        h = rng.uniform(0, 1.5, (n, n))
        h[rng.random((n, n)) < 0.3] = 0.0
        U = np.array([h + b, h * rng.normal(0, 1, (n, n)), h * rng.normal(0, 1, (n, n))])
        a1, a2 = max_wave_speeds(U, b, g, opts.eps_dry, opts.shallow_ratio)
        L = rhs_2d(U, bat, grid, PER, PER, 0.0, opts, alpha=(a1, a2))
        dt = (1.0 / 12.0) / (a1 / grid.dx + a2 / grid.dy)
        assert (U[0] + dt * L[0] - b).min() >= 0.0
