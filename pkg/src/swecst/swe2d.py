"""Two-dimensional well-balanced scheme built dimension by dimension.

State arrays have shape (3, nx, ny): surface level ``H``, ``hu``, ``hv``,
first spatial axis x. Edge fluxes are integrated with 3-point Gauss rules
along each edge; the bottom source uses the tensor rule of Lobatto nodes
across and Gauss nodes along the differentiation direction.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numba
import numpy as np

from . import weno
from .bathymetry import Bathymetry2D
from .errors import InvariantViolation
from .grid import (GAUSS3_WEIGHTS, LOBATTO_WEIGHTS, N_GHOST, BoundaryCondition, Grid2D,
                   apply_boundary, pad_ghosts)
from .swe1d import (ETA_CAP, NEGATIVE_DEPTH_TOL, W_END, SchemeOptions, _check_finite,
                    global_surface_average, hydrostatic_fix, velocity_from_trace,
                    wave_speed_velocity)


class EdgeTrace2D(NamedTuple):
    """States on both sides of a family of edges at the Gauss nodes.

    ``un``/``ut`` are the normal/tangential velocities.
    """

    H_m: np.ndarray
    H_p: np.ndarray
    h_m: np.ndarray
    h_p: np.ndarray
    hstar_m: np.ndarray
    hstar_p: np.ndarray
    un_m: np.ndarray
    un_p: np.ndarray
    ut_m: np.ndarray
    ut_p: np.ndarray
    b_m: np.ndarray
    b_p: np.ndarray


class EdgeSides(NamedTuple):
    """Raw reconstructed values on both sides of a family of edges.

    ``qn``/``qt`` are the normal/tangential discharges; the depth is the
    (possibly limited) reconstructed depth.
    """

    H_m: np.ndarray
    H_p: np.ndarray
    h_m: np.ndarray
    h_p: np.ndarray
    b_m: np.ndarray
    b_p: np.ndarray
    qn_m: np.ndarray
    qn_p: np.ndarray
    qt_m: np.ndarray
    qt_p: np.ndarray


class Limited2D(NamedTuple):
    h_lo: np.ndarray
    h_hi: np.ndarray
    b_lo: np.ndarray
    b_hi: np.ndarray
    xi: np.ndarray
    theta: np.ndarray


def extended_state_2d(U: np.ndarray, bc_x: BoundaryCondition, bc_y: BoundaryCondition,
                      t: float) -> np.ndarray:
    ext = pad_ghosts(pad_ghosts(np.asarray(U, dtype=float), axis=1), axis=2)
    apply_boundary(ext, bc_x, t, axis=1, normal=1)
    apply_boundary(ext, bc_y, t, axis=2, normal=2)
    return ext


def max_wave_speeds(U: np.ndarray, b_bar: np.ndarray, g: float, eps_dry: float,
                    depth_ratio: float = 0.0):
    h = U[0] - b_bar
    u = wave_speed_velocity(h, U[1], eps_dry, depth_ratio)
    v = wave_speed_velocity(h, U[2], eps_dry, depth_ratio)
    c = np.sqrt(g * np.where(h >= eps_dry, h, 0.0))
    return float(np.max(np.abs(u) + c)), float(np.max(np.abs(v) + c))


def pp_limit_2d(h_bar, h_lo, h_hi, H_lo, H_hi, eta: float) -> Limited2D:
    """Limit the Gauss-node depth traces on the two opposite edges of each cell.

    ``h_lo``/``h_hi`` have a trailing axis of 3 Gauss nodes; ``h_bar`` the
    matching cell means. One scaling factor per cell and direction.
    """
    gw = GAUSS3_WEIGHTS
    xi = (h_bar - W_END * (h_lo @ gw) - W_END * (h_hi @ gw)) / (1.0 - 2.0 * W_END)
    m = np.minimum(np.minimum(h_lo.min(axis=-1), h_hi.min(axis=-1)), xi)
    limit = m < eta
    # h_bar >= m always; equality means a flat cell, which is left flat
    denom = np.where(limit & (h_bar > m), h_bar - m, 1.0)
    theta = np.where(limit, np.clip((h_bar - eta) / denom, 0.0, 1.0), 1.0)
    hb = h_bar[..., None]
    lo = theta[..., None] * (h_lo - hb) + hb
    hi = theta[..., None] * (h_hi - hb) + hb
    return Limited2D(lo, hi, H_lo - lo, H_hi - hi, xi, theta)


def pair_sides(H_lo, H_hi, h_lo, h_hi, b_lo, b_hi, qn_lo, qn_hi, qt_lo, qt_hi, axis) -> EdgeSides:
    """Pair the high side of cell c with the low side of cell c+1 along ``axis``."""
    left = (slice(None),) * axis + (slice(None, -1),)
    right = (slice(None),) * axis + (slice(1, None),)
    return EdgeSides(H_hi[left], H_lo[right], h_hi[left], h_lo[right], b_hi[left], b_lo[right],
                     qn_hi[left], qn_lo[right], qt_hi[left], qt_lo[right])


def edge_trace(sd: EdgeSides, options: SchemeOptions = SchemeOptions(),
               speed_cap: float = np.inf) -> EdgeTrace2D:
    if options.hydrostatic:
        hs_m, hs_p = hydrostatic_fix(sd.H_m, sd.H_p, sd.b_m, sd.b_p)
    else:
        hs_m, hs_p = sd.h_m, sd.h_p
    return EdgeTrace2D(sd.H_m, sd.H_p, sd.h_m, sd.h_p, hs_m, hs_p,
                       np.clip(velocity_from_trace(sd.h_m, sd.qn_m, options.eps_dry), -speed_cap, speed_cap),
                       np.clip(velocity_from_trace(sd.h_p, sd.qn_p, options.eps_dry), -speed_cap, speed_cap),
                       velocity_from_trace(sd.h_m, sd.qt_m, options.eps_dry),
                       velocity_from_trace(sd.h_p, sd.qt_p, options.eps_dry),
                       sd.b_m, sd.b_p)


def edge_flux(tr: EdgeTrace2D, H_global: float, alpha: float, g: float):
    """Point-wise LF flux (mass, normal momentum, tangential momentum) at the nodes."""
    qm = tr.hstar_m * tr.un_m
    qp = tr.hstar_p * tr.un_p
    mm = qm * tr.un_m + g * (H_global - tr.H_m) * tr.b_m + 0.5 * g * tr.H_m ** 2
    mp = qp * tr.un_p + g * (H_global - tr.H_p) * tr.b_p + 0.5 * g * tr.H_p ** 2
    tm = qm * tr.ut_m
    tp = qp * tr.ut_p
    f_mass = 0.5 * (qm + qp) - 0.5 * alpha * (tr.hstar_p - tr.hstar_m)
    f_norm = 0.5 * (mm + mp) - 0.5 * alpha * (qp - qm)
    f_tang = 0.5 * (tm + tp) - 0.5 * alpha * (tr.hstar_p * tr.ut_p - tr.hstar_m * tr.ut_m)
    return f_mass, f_norm, f_tang


@numba.njit(parallel=True, cache=True, error_model="numpy")
def _edge_flux_kernel(H_m, H_p, h_m, h_p, b_m, b_p, qn_m, qn_p, qt_m, qt_p, H_global, alpha, g, eps_dry,
                      hydrostatic, cap, out):
    # Same arithmetic as edge_trace + edge_flux, fused and Gauss-averaged.
    # Arrays are (faces, cells, 3 nodes); out is (3 components, faces, cells).
    n_f, n_c = H_m.shape[0], H_m.shape[1]
    for f in numba.prange(n_f):
        for c in range(n_c):
            acc0 = 0.0
            acc1 = 0.0
            acc2 = 0.0
            for k in range(3):
                Hm = H_m[f, c, k]
                Hp = H_p[f, c, k]
                bm = b_m[f, c, k]
                bp = b_p[f, c, k]
                hm = h_m[f, c, k]
                hp = h_p[f, c, k]
                if hydrostatic:
                    bmax = max(bm, bp)
                    hsm = max(0.0, Hm - bmax)
                    hsp = max(0.0, Hp - bmax)
                else:
                    hsm = hm
                    hsp = hp
                um = qn_m[f, c, k] / hm if hm >= eps_dry else 0.0
                up = qn_p[f, c, k] / hp if hp >= eps_dry else 0.0
                um = min(max(um, -cap), cap)
                up = min(max(up, -cap), cap)
                vm = qt_m[f, c, k] / hm if hm >= eps_dry else 0.0
                vp = qt_p[f, c, k] / hp if hp >= eps_dry else 0.0
                qm = hsm * um
                qp = hsp * up
                mm = qm * um + g * (H_global - Hm) * bm + 0.5 * g * Hm * Hm
                mp = qp * up + g * (H_global - Hp) * bp + 0.5 * g * Hp * Hp
                w = _GW[k]
                acc0 += w * (0.5 * (qm + qp) - 0.5 * alpha * (hsp - hsm))
                acc1 += w * (0.5 * (mm + mp) - 0.5 * alpha * (qp - qm))
                acc2 += w * (0.5 * (qm * vm + qp * vp) - 0.5 * alpha * (hsp * vp - hsm * vm))
            out[0, f, c] = acc0
            out[1, f, c] = acc1
            out[2, f, c] = acc2


_GW = GAUSS3_WEIGHTS.copy()


def edge_flux_integrals(x_sides: EdgeSides, y_sides: EdgeSides, H_global: float,
                        alpha1: float, alpha2: float, options: SchemeOptions = SchemeOptions()):
    """Gauss-averaged edge fluxes.

    Returns ``Phi`` with shape (3, nx+1, ny) and ``Psi`` with shape
    (3, nx, ny+1), components ordered (H, hu, hv). With the limiter on, the
    normal face velocity is clipped to the viscosity of its direction.
    """
    out = []
    for sd, alpha in ((x_sides, alpha1), (y_sides, alpha2)):
        f = np.empty((3,) + sd.H_m.shape[:2])
        _edge_flux_kernel(*sd, float(H_global), float(alpha), float(options.g),
                          float(options.eps_dry), bool(options.hydrostatic),
                          float(alpha) if options.pp else np.inf, f)
        out.append(f)
    phi, psi = out
    return phi, psi[[0, 2, 1]]


def edge_flux_integrals_reference(x_sides: EdgeSides, y_sides: EdgeSides, H_global: float,
                                  alpha1: float, alpha2: float,
                                  options: SchemeOptions = SchemeOptions()):
    """Plain array version of :func:`edge_flux_integrals`."""
    cap1, cap2 = (alpha1, alpha2) if options.pp else (np.inf, np.inf)
    fm, fn, ft = edge_flux(edge_trace(x_sides, options, cap1), H_global, alpha1, options.g)
    phi = np.stack([fm @ GAUSS3_WEIGHTS, fn @ GAUSS3_WEIGHTS, ft @ GAUSS3_WEIGHTS])
    gm, gn, gt = edge_flux(edge_trace(y_sides, options, cap2), H_global, alpha2, options.g)
    psi = np.stack([gm @ GAUSS3_WEIGHTS, gt @ GAUSS3_WEIGHTS, gn @ GAUSS3_WEIGHTS])
    return phi, psi


def source_integral_2d(H_sx, bx_nodes, H_sy, by_nodes, H_global: float, g: float):
    """Tensor-rule source averages; node arrays are (..., 3 Gauss, 4 Lobatto)."""
    wt = np.outer(GAUSS3_WEIGHTS, LOBATTO_WEIGHTS)
    s1 = np.einsum("...kl,kl->...", g * (H_global - H_sx) * bx_nodes, wt)
    s2 = np.einsum("...kl,kl->...", g * (H_global - H_sy) * by_nodes, wt)
    return s1, s2


def reconstruct_2d(U: np.ndarray, bathy: Bathymetry2D, bc_x: BoundaryCondition,
                   bc_y: BoundaryCondition, t: float = 0.0,
                   options: SchemeOptions = SchemeOptions()):
    """Edge sides in both directions, the surface at the source nodes and
    the limiter factors (``None`` without limiting)."""
    ext = extended_state_2d(U, bc_x, bc_y, t)
    cfg = options.weno
    rH = weno.tensor_reconstruct_2d(ext[0], config=cfg, source_values=True)
    rq = weno.tensor_reconstruct_2d(ext[1], config=cfg)
    rr = weno.tensor_reconstruct_2d(ext[2], config=cfg)

    bxl, bxr, byl, byh = bathy.bx_left, bathy.bx_right, bathy.by_low, bathy.by_high
    hxl, hxr = rH["xl"] - bxl, rH["xr"] - bxr
    hyl, hyh = rH["yl"] - byl, rH["yh"] - byh
    theta = None
    if options.pp:
        ng = N_GHOST
        hbar = ext[0] - bathy.b_bar_ext
        hx_bar = hbar[ng - 1:-ng + 1, ng:-ng]      # x-cells -1..nx, interior y
        hy_bar = hbar[ng:-ng, ng - 1:-ng + 1]
        lowest = min(float(hx_bar.min()), float(hy_bar.min()))
        if lowest < -NEGATIVE_DEPTH_TOL:
            idx = np.unravel_index(np.argmin(hbar[ng:-ng, ng:-ng]), hbar[ng:-ng, ng:-ng].shape)
            raise InvariantViolation(f"negative mean depth {lowest:.3e} near cell {tuple(map(int, idx))}")
        eta = min(ETA_CAP, lowest)
        lx = pp_limit_2d(hx_bar, hxl, hxr, rH["xl"], rH["xr"], eta)
        ly = pp_limit_2d(hy_bar, hyl, hyh, rH["yl"], rH["yh"], eta)
        hxl, hxr, bxl, bxr = lx.h_lo, lx.h_hi, lx.b_lo, lx.b_hi
        hyl, hyh, byl, byh = ly.h_lo, ly.h_hi, ly.b_lo, ly.b_hi
        theta = (lx.theta, ly.theta)

    x_sides = pair_sides(rH["xl"], rH["xr"], hxl, hxr, bxl, bxr,
                         rq["xl"], rq["xr"], rr["xl"], rr["xr"], 0)
    y_sides = pair_sides(rH["yl"], rH["yh"], hyl, hyh, byl, byh,
                         rr["yl"], rr["yh"], rq["yl"], rq["yh"], 1)
    return x_sides, y_sides, rH["sx"], rH["sy"], theta


def rhs_2d(U: np.ndarray, bathy: Bathymetry2D, grid: Grid2D, bc_x: BoundaryCondition,
           bc_y: BoundaryCondition, t: float = 0.0, options: SchemeOptions = SchemeOptions(),
           stage: Optional[int] = None, alpha=None) -> np.ndarray:
    """Semi-discrete operator; ``alpha`` = (alpha_x, alpha_y) overrides the viscosities."""
    U = np.asarray(U, dtype=float)
    x_sides, y_sides, H_sx, H_sy, _ = reconstruct_2d(U, bathy, bc_x, bc_y, t, options)
    H_global = global_surface_average(U[0])
    if alpha is None:
        alpha = max_wave_speeds(U, bathy.b_bar, options.g, options.eps_dry,
                                options.shallow_ratio)
    a1, a2 = alpha
    phi, psi = edge_flux_integrals(x_sides, y_sides, H_global, a1, a2, options)
    _check_finite(phi, "x-edge flux", stage)
    _check_finite(psi, "y-edge flux", stage)
    s1, s2 = source_integral_2d(H_sx, bathy.bx_nodes, H_sy, bathy.by_nodes, H_global, options.g)
    L = -(phi[:, 1:] - phi[:, :-1]) / grid.dx - (psi[:, :, 1:] - psi[:, :, :-1]) / grid.dy
    L[1] += s1
    L[2] += s2
    return L
