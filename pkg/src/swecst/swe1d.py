"""One-dimensional well-balanced scheme in surface/discharge variables.

The evolved state is an array ``U`` of shape (2, n) holding the cell
averages of the surface level ``H = h + b`` and the discharge ``hu``. The
momentum flux carries the constant-subtraction term ``g (Hbar - H) b`` with
``Hbar`` the domain average of ``H``, so both the flux gradient and the
source vanish identically at a lake at rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from . import weno
from .bathymetry import Bathymetry1D
from .errors import InvariantViolation, SolverBlowup
from .grid import (LOBATTO_NODES, LOBATTO_WEIGHTS, N_GHOST, BoundaryCondition, Grid1D,
                   apply_boundary, pad_ghosts)

GRAVITY = 9.812
EPS_DRY = 1e-10
# Cells shallower than this fraction of the deepest cell get a damped
# velocity, both in the wave speed and in the stored discharge.
SHALLOW_DEPTH_RATIO = 1e-4
ETA_CAP = 1e-13
# Round-off tolerance on negative mean depths entering the limiter.
NEGATIVE_DEPTH_TOL = 1e-12

W_END = LOBATTO_WEIGHTS[0]


@dataclass(frozen=True)
class SchemeOptions:
    g: float = GRAVITY
    pp: bool = False
    eps_dry: float = EPS_DRY
    hydrostatic: bool = True          # False only as a debugging negative control
    shallow_ratio: float = SHALLOW_DEPTH_RATIO
    weno: weno.WenoAoConfig = field(default_factory=weno.WenoAoConfig)


class FaceTrace1D(NamedTuple):
    H_m: np.ndarray
    H_p: np.ndarray
    hu_m: np.ndarray
    hu_p: np.ndarray
    h_m: np.ndarray
    h_p: np.ndarray
    hstar_m: np.ndarray
    hstar_p: np.ndarray
    u_m: np.ndarray
    u_p: np.ndarray
    b_m: np.ndarray
    b_p: np.ndarray


class PpLimiterState(NamedTuple):
    h_left: np.ndarray     # limited trace at xi = -1/2
    h_right: np.ndarray    # limited trace at xi = +1/2
    b_left: np.ndarray
    b_right: np.ndarray
    xi: np.ndarray
    theta: np.ndarray
    eta: float


def global_surface_average(H: np.ndarray) -> float:
    """Mean of the interior surface averages (uniform cells)."""
    H = np.asarray(H, dtype=float)
    return float(np.sum(H) / H.size)


def velocity_from_trace(h, hu, eps_dry: float = EPS_DRY):
    h = np.asarray(h, dtype=float)
    hu = np.asarray(hu, dtype=float)
    wet = h >= eps_dry
    return np.where(wet, hu / np.where(wet, h, 1.0), 0.0)


def hydrostatic_fix(H_m, H_p, b_m, b_p):
    b_max = np.maximum(b_m, b_p)
    return np.maximum(0.0, H_m - b_max), np.maximum(0.0, H_p - b_max)


def wave_speed_velocity(h, hu, eps_dry: float = EPS_DRY, depth_ratio: float = 0.0):
    """Cell velocity as seen by the wave speed bound.

    Below ``delta = depth_ratio * max(h)`` the velocity is damped to
    ``sqrt(2) h^2 u / sqrt(h^4 + delta^4)`` so residual momentum in a nearly
    dry cell cannot dictate the global speed; deeper cells get ``hu/h``.
    """
    h = np.asarray(h, dtype=float)
    u = velocity_from_trace(h, hu, eps_dry)
    delta = depth_ratio * float(np.max(h)) if h.size else 0.0
    if delta <= 0.0:
        return u
    shallow = h < delta
    if not np.any(shallow):
        return u
    hs = h[shallow]
    damped = np.sqrt(2.0) * hs ** 2 * u[shallow] / np.sqrt(hs ** 4 + delta ** 4)
    u = u.copy()
    u[shallow] = damped
    return u


def damp_shallow_discharge(h, hu, eps_dry: float = EPS_DRY, depth_ratio: float = 0.0):
    """Discharge rebuilt as ``h * u`` with the damped velocity of
    :func:`wave_speed_velocity`; unchanged wherever the depth exceeds the
    threshold."""
    hu = np.asarray(hu, dtype=float)
    h = np.asarray(h, dtype=float)
    delta = depth_ratio * float(np.max(h)) if h.size else 0.0
    shallow = h < delta
    if delta <= 0.0 or not np.any(shallow):
        return hu
    out = hu.copy()
    out[shallow] = h[shallow] * wave_speed_velocity(h, hu, eps_dry, depth_ratio)[shallow]
    return out


def max_wave_speed(H, hu, b, g: float = GRAVITY, eps_dry: float = EPS_DRY,
                   depth_ratio: float = 0.0) -> float:
    h = np.asarray(H, dtype=float) - np.asarray(b, dtype=float)
    u = wave_speed_velocity(h, hu, eps_dry, depth_ratio)
    c = np.sqrt(g * np.where(h >= eps_dry, h, 0.0))
    return float(np.max(np.abs(u) + c))


def lf_flux_cst(trace: FaceTrace1D, H_global: float, alpha: float, g: float = GRAVITY):
    """Lax-Friedrichs flux in constant-subtraction form with hydrostatic depths."""
    qm = trace.hstar_m * trace.u_m
    qp = trace.hstar_p * trace.u_p
    mm = qm * trace.u_m + g * (H_global - trace.H_m) * trace.b_m + 0.5 * g * trace.H_m ** 2
    mp = qp * trace.u_p + g * (H_global - trace.H_p) * trace.b_p + 0.5 * g * trace.H_p ** 2
    f_H = 0.5 * (qm + qp) - 0.5 * alpha * (trace.hstar_p - trace.hstar_m)
    f_hu = 0.5 * (mm + mp) - 0.5 * alpha * (qp - qm)
    return f_H, f_hu


def source_integral(H_nodes, bx_nodes, H_global: float, g: float = GRAVITY,
                    weights=LOBATTO_WEIGHTS):
    """Cell-averaged momentum source from node values (last axis = nodes)."""
    return (g * (H_global - np.asarray(H_nodes)) * np.asarray(bx_nodes)) @ np.asarray(weights)


def pp_limit_1d(h_bar, h_left, h_right, H_left, H_right, eta: Optional[float] = None) -> PpLimiterState:
    """Scale cell traces of the depth toward the mean so none drops below ``eta``.

    All arrays are per cell. The bottom traces are redefined as ``H - h``
    so the surface traces are untouched.
    """
    h_bar = np.asarray(h_bar, dtype=float)
    if np.any(h_bar < -NEGATIVE_DEPTH_TOL):
        i = int(np.argmin(h_bar))
        raise InvariantViolation(f"negative mean depth {h_bar[i]:.3e} in cell {i} entering the limiter")
    if eta is None:
        eta = min(ETA_CAP, float(np.min(h_bar)))
    xi = (h_bar - W_END * h_left - W_END * h_right) / (1.0 - 2.0 * W_END)
    m = np.minimum(np.minimum(h_left, h_right), xi)
    limit = m < eta
    # h_bar >= m always; equality means a flat cell, which is left flat
    denom = np.where(limit & (h_bar > m), h_bar - m, 1.0)
    theta = np.where(limit, np.clip((h_bar - eta) / denom, 0.0, 1.0), 1.0)
    hl = theta * (h_left - h_bar) + h_bar
    hr = theta * (h_right - h_bar) + h_bar
    return PpLimiterState(hl, hr, H_left - hl, H_right - hr, xi, theta, eta)


def _check_finite(arr, what, stage):
    bad = ~np.isfinite(arr)
    if np.any(bad):
        idx = np.argwhere(bad)[0]
        raise SolverBlowup(f"non-finite {what} at index {tuple(int(i) for i in idx)}",
                           cell=tuple(int(i) for i in idx), stage=stage)


def extended_state(U: np.ndarray, bc: BoundaryCondition, t: float) -> np.ndarray:
    ext = pad_ghosts(np.asarray(U, dtype=float), axis=1)
    return apply_boundary(ext, bc, t, axis=1, normal=1)


def face_traces(U: np.ndarray, bathy: Bathymetry1D, bc: BoundaryCondition, t: float,
                options: SchemeOptions = SchemeOptions(), speed_cap: float = np.inf):
    """Reconstruct, optionally limit, and assemble the per-face states.

    Face velocities are clipped to ``[-speed_cap, speed_cap]``; with the
    limiter on, the caller passes the flux viscosity so that nearly dry
    traces cannot outrun it.

    Returns the face trace tuple, the surface at the Lobatto nodes of the
    interior cells and, when limiting, the limiter state.
    """
    ext = extended_state(U, bc, t)
    cH = weno.cell_polynomials(ext[0], config=options.weno)
    chu = weno.cell_polynomials(ext[1], config=options.weno)
    H_nodes = weno.evaluate(cH, LOBATTO_NODES)            # cells -1..n
    hu_faces = weno.evaluate(chu, np.array([-0.5, 0.5]))
    H_left, H_right = H_nodes[:, 0], H_nodes[:, 3]
    b_left, b_right = bathy.b_left, bathy.b_right
    h_left, h_right = H_left - b_left, H_right - b_right

    limiter = None
    if options.pp:
        h_bar = ext[0, N_GHOST - 1:-N_GHOST + 1] - bathy.b_bar_ext[N_GHOST - 1:-N_GHOST + 1]
        limiter = pp_limit_1d(h_bar, h_left, h_right, H_left, H_right)
        h_left, h_right = limiter.h_left, limiter.h_right
        b_left, b_right = limiter.b_left, limiter.b_right

    H_m, H_p = H_right[:-1], H_left[1:]
    b_m, b_p = b_right[:-1], b_left[1:]
    h_m, h_p = h_right[:-1], h_left[1:]
    hu_m, hu_p = hu_faces[:-1, 1], hu_faces[1:, 0]
    if options.hydrostatic:
        hs_m, hs_p = hydrostatic_fix(H_m, H_p, b_m, b_p)
    else:
        hs_m, hs_p = h_m, h_p
    u_m = np.clip(velocity_from_trace(h_m, hu_m, options.eps_dry), -speed_cap, speed_cap)
    u_p = np.clip(velocity_from_trace(h_p, hu_p, options.eps_dry), -speed_cap, speed_cap)
    trace = FaceTrace1D(H_m, H_p, hu_m, hu_p, h_m, h_p, hs_m, hs_p, u_m, u_p, b_m, b_p)
    return trace, H_nodes[1:-1], limiter


def rhs_1d(U: np.ndarray, bathy: Bathymetry1D, grid: Grid1D, bc: BoundaryCondition,
           t: float = 0.0, options: SchemeOptions = SchemeOptions(), stage: Optional[int] = None,
           alpha: Optional[float] = None) -> np.ndarray:
    """Semi-discrete operator: flux differences plus the Lobatto source term.

    ``alpha`` overrides the viscosity computed from ``U`` (the stepper
    freezes it over the stages of a limited step).
    """
    U = np.asarray(U, dtype=float)
    if alpha is None:
        alpha = max_wave_speed(U[0], U[1], bathy.b_bar, options.g, options.eps_dry,
                               options.shallow_ratio)
    trace, H_nodes, _ = face_traces(U, bathy, bc, t, options, alpha if options.pp else np.inf)
    H_global = global_surface_average(U[0])
    f_H, f_hu = lf_flux_cst(trace, H_global, alpha, options.g)
    _check_finite(f_H, "mass flux", stage)
    _check_finite(f_hu, "momentum flux", stage)
    src = source_integral(H_nodes, bathy.bx_lobatto, H_global, options.g)
    L = np.empty_like(U)
    L[0] = -(f_H[1:] - f_H[:-1]) / grid.dx
    L[1] = -(f_hu[1:] - f_hu[:-1]) / grid.dx + src
    return L


def lf_first_order_step(h, u, b, lam: float, g: float = GRAVITY) -> np.ndarray:
    """First-order Lax-Friedrichs update of the depth with hydrostatic face depths.

    Periodic indexing. Raises ``ValueError`` when ``lam * alpha > 1``.
    """
    h = np.asarray(h, dtype=float)
    u = np.asarray(u, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(h < 0):
        raise ValueError("depths must be non-negative")
    alpha = float(np.max(np.abs(u) + np.sqrt(g * h)))
    if lam * alpha > 1.0 + 1e-14:
        raise ValueError(f"CFL violated: lambda*alpha = {lam * alpha:.6g} > 1")
    b_next = np.roll(b, -1)
    b_prev = np.roll(b, 1)
    h_plus = np.maximum(0.0, h + b - np.maximum(b, b_next))    # at i+1/2 from cell i
    h_minus = np.maximum(0.0, h + b - np.maximum(b_prev, b))   # at i-1/2 from cell i

    def flux(hl, ul, hr, ur):
        return 0.5 * (hl * ul + hr * ur) - 0.5 * alpha * (hr - hl)

    f_right = flux(h_plus, u, np.roll(h_minus, -1), np.roll(u, -1))
    f_left = np.roll(f_right, 1)
    return h - lam * (f_right - f_left)
