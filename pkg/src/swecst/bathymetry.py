"""Bottom topography: cell averages and the traces/derivatives the scheme needs.

Everything here is computed once at the initial time and reused by every
right-hand-side evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import weno
from .grid import (GAUSS5_NODES, GAUSS5_WEIGHTS, LOBATTO_NODES, N_GHOST,
                   BoundaryCondition, Grid1D, Grid2D, extrapolate_scalar)

FACE_NODES = np.array([-0.5, 0.5])


def _pieces(lo, hi, breakpoints):
    inner = [b for b in breakpoints if lo < b < hi]
    edges = [lo] + sorted(inner) + [hi]
    return list(zip(edges[:-1], edges[1:]))


def cell_average_scalar(f: Callable, grid: Grid1D, breakpoints: Sequence[float] = (),
                        ghosts: bool = False) -> np.ndarray:
    """Cell averages of ``f`` by 5-point Gauss-Legendre quadrature.

    Cells containing any of ``breakpoints`` are split there first, so
    piecewise polynomials of degree <= 9 (in particular piecewise constants)
    are averaged exactly. With ``ghosts`` the averages cover the ghost cells too.
    """
    dx = grid.dx
    i = np.arange(-grid.n_ghost, grid.n_cells + grid.n_ghost) if ghosts else np.arange(grid.n_cells)
    lo = grid.x_lo + i * dx
    centres = lo + 0.5 * dx
    x = centres[:, None] + dx * GAUSS5_NODES[None, :]
    vals = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    avg = _exact_if_flat(vals @ GAUSS5_WEIGHTS, vals.reshape(len(i), -1))
    if len(breakpoints):
        for c in range(len(i)):
            a, b = lo[c], lo[c] + dx
            if not any(a < p < b for p in breakpoints):
                continue
            total = 0.0
            seen = []
            for pa, pb in _pieces(a, b, breakpoints):
                xm, hw = 0.5 * (pa + pb), pb - pa
                fv = np.broadcast_to(np.asarray(f(xm + hw * GAUSS5_NODES), dtype=float), (5,))
                total += hw * (fv @ GAUSS5_WEIGHTS)
                seen.append(fv)
            seen = np.concatenate(seen)
            avg[c] = seen[0] if np.all(seen == seen[0]) else total / dx
    return avg


def _exact_if_flat(avg, node_vals):
    # A function constant on a cell gets that constant back bitwise; Gauss
    # weights summing to 1 only up to rounding would otherwise perturb it.
    flat = np.all(node_vals == node_vals[:, :1], axis=1)
    avg = np.array(avg, dtype=float)
    avg.reshape(-1)[flat] = node_vals[flat, 0]
    return avg


def cell_average_2d(f: Callable, grid: Grid2D, x_breaks: Sequence[float] = (),
                    y_breaks: Sequence[float] = (), subcells: int = 1,
                    ghosts: bool = False) -> np.ndarray:
    """Tensor-product Gauss averages of ``f(x, y)``.

    ``subcells > 1`` splits every cell into ``subcells**2`` pieces, which is
    how non-axis-aligned jumps (circular dams) are averaged.
    """
    gx, gy = grid.x, grid.y
    ng = gx.n_ghost if ghosts else 0
    ix = np.arange(-ng, gx.n_cells + ng)
    iy = np.arange(-ng, gy.n_cells + ng)
    m = max(1, int(subcells))
    sub = (np.arange(m) + 0.5) / m - 0.5
    offs = (sub[:, None] + GAUSS5_NODES[None, :] / m).ravel()
    wts = np.tile(GAUSS5_WEIGHTS / m, m)
    xc = gx.x_lo + (ix + 0.5) * gx.dx
    yc = gy.x_lo + (iy + 0.5) * gy.dx
    X = xc[:, None] + gx.dx * offs[None, :]
    Y = yc[:, None] + gy.dx * offs[None, :]
    vals = np.asarray(f(X[:, None, :, None], Y[None, :, None, :]), dtype=float)
    vals = np.broadcast_to(vals, (len(ix), len(iy), len(offs), len(offs)))
    avg = _exact_if_flat(np.einsum("ijab,a,b->ij", vals, wts, wts),
                         vals.reshape(len(ix) * len(iy), -1))
    if x_breaks or y_breaks:
        for a in range(len(ix)):
            xa = gx.x_lo + ix[a] * gx.dx
            xs = _pieces(xa, xa + gx.dx, x_breaks)
            for b in range(len(iy)):
                ya = gy.x_lo + iy[b] * gy.dx
                ys = _pieces(ya, ya + gy.dx, y_breaks)
                if len(xs) == 1 and len(ys) == 1:
                    continue
                total = 0.0
                seen = []
                for x0, x1 in xs:
                    px = 0.5 * (x0 + x1) + (x1 - x0) * GAUSS5_NODES
                    for y0, y1 in ys:
                        py = 0.5 * (y0 + y1) + (y1 - y0) * GAUSS5_NODES
                        fv = np.broadcast_to(np.asarray(f(px[:, None], py[None, :]), dtype=float), (5, 5))
                        total += (x1 - x0) * (y1 - y0) * (GAUSS5_WEIGHTS @ fv @ GAUSS5_WEIGHTS)
                        seen.append(fv.ravel())
                seen = np.concatenate(seen)
                avg[a, b] = seen[0] if np.all(seen == seen[0]) else total / (gx.dx * gy.dx)
    return avg


@dataclass(frozen=True)
class Bathymetry1D:
    """Precomputed bottom data on a 1D grid.

    ``b_bar`` includes the ghost layers. ``b_left``/``b_right`` are the traces
    at xi = -1/2 / +1/2 for cells -1..n (index 0 is the first ghost cell next
    to the domain), so the left and right states at face ``f`` (between cells
    f-1 and f) are ``b_right[f]`` and ``b_left[f + 1]``. ``bx_lobatto`` holds
    b_x at the four Lobatto offsets of every interior cell.
    """

    b_bar_ext: np.ndarray
    b_left: np.ndarray
    b_right: np.ndarray
    bx_lobatto: np.ndarray

    @property
    def b_bar(self) -> np.ndarray:
        return self.b_bar_ext[N_GHOST:-N_GHOST]

    @property
    def b_face_minus(self) -> np.ndarray:
        return self.b_right[:-1]

    @property
    def b_face_plus(self) -> np.ndarray:
        return self.b_left[1:]


def extend_bottom(b_bar: np.ndarray, bc: BoundaryCondition) -> np.ndarray:
    ext = np.zeros(b_bar.shape[0] + 2 * N_GHOST)
    ext[N_GHOST:-N_GHOST] = b_bar
    return extrapolate_scalar(ext, bc)


def precompute_bathymetry_1d(b_bar_ext: np.ndarray, grid: Grid1D,
                             config: weno.WenoAoConfig = weno.DEFAULT_CONFIG) -> Bathymetry1D:
    """Traces and Lobatto-node derivatives from ghost-extended bottom averages."""
    b_bar_ext = np.array(b_bar_ext, dtype=float)
    if b_bar_ext.shape != (grid.n_cells + 2 * N_GHOST,):
        raise ValueError("bottom averages must include the ghost layers")
    coeffs = weno.cell_polynomials(b_bar_ext, config=config)
    faces = weno.evaluate(coeffs, FACE_NODES)
    bx = weno.evaluate(coeffs[1:-1], LOBATTO_NODES, derivative=True, dx=grid.dx)
    return Bathymetry1D(b_bar_ext, faces[:, 0].copy(), faces[:, 1].copy(), bx)


@dataclass(frozen=True)
class Bathymetry2D:
    """Precomputed bottom data on a 2D grid (first array axis is x).

    x-face traces at the 3 Gauss y-nodes: ``bx_left``/``bx_right`` with shape
    (nx+2, ny, 3) covering x-cells -1..nx. y-face traces ``by_low``/``by_high``
    with shape (nx, ny+2, 3). ``bx_nodes`` is b_x at (x^l, y^k) with shape
    (nx, ny, 3, 4) [k, l]; ``by_nodes`` is b_y at (x^k, y^l), same layout.
    """

    b_bar_ext: np.ndarray
    bx_left: np.ndarray
    bx_right: np.ndarray
    by_low: np.ndarray
    by_high: np.ndarray
    bx_nodes: np.ndarray
    by_nodes: np.ndarray

    @property
    def b_bar(self) -> np.ndarray:
        return self.b_bar_ext[N_GHOST:-N_GHOST, N_GHOST:-N_GHOST]


def extend_bottom_2d(b_bar: np.ndarray, bc_x: BoundaryCondition, bc_y: BoundaryCondition) -> np.ndarray:
    ext = np.zeros((b_bar.shape[0] + 2 * N_GHOST, b_bar.shape[1] + 2 * N_GHOST))
    ext[N_GHOST:-N_GHOST, N_GHOST:-N_GHOST] = b_bar
    extrapolate_scalar(ext, bc_x, axis=0)
    extrapolate_scalar(ext, bc_y, axis=1)
    return ext


def precompute_bathymetry_2d(b_bar_ext: np.ndarray, grid: Grid2D,
                             config: weno.WenoAoConfig = weno.DEFAULT_CONFIG) -> Bathymetry2D:
    """Edge traces at Gauss nodes and source-node derivatives of the bottom."""
    b_bar_ext = np.array(b_bar_ext, dtype=float)
    nx, ny = grid.shape
    if b_bar_ext.shape != (nx + 2 * N_GHOST, ny + 2 * N_GHOST):
        raise ValueError("bottom averages must include the ghost layers")
    r = weno.tensor_reconstruct_2d(b_bar_ext, grid.dx, grid.dy, config=config,
                                   source_values=False, source_derivatives=True)
    return Bathymetry2D(b_bar_ext, r["xl"], r["xr"], r["yl"], r["yh"], r["dsx"], r["dsy"])
