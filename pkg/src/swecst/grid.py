"""Uniform structured meshes, quadrature node tables and ghost-cell filling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import ConfigurationError

N_GHOST = 3

# Nodes are offsets in the cell-normalized coordinate xi = (x - x_i) / dx.
LOBATTO_NODES = np.array([-0.5, -math.sqrt(5.0) / 10.0, math.sqrt(5.0) / 10.0, 0.5])
LOBATTO_WEIGHTS = np.array([1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0])
GAUSS3_NODES = np.array([-math.sqrt(15.0) / 10.0, 0.0, math.sqrt(15.0) / 10.0])
GAUSS3_WEIGHTS = np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])

_gl5_x, _gl5_w = np.polynomial.legendre.leggauss(5)
GAUSS5_NODES = 0.5 * _gl5_x
GAUSS5_WEIGHTS = 0.5 * _gl5_w


@dataclass(frozen=True)
class Grid1D:
    x_lo: float
    x_hi: float
    n_cells: int
    n_ghost: int = N_GHOST

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n_cells

    @property
    def length(self) -> float:
        return self.x_hi - self.x_lo

    @property
    def centers(self) -> np.ndarray:
        return self.x_lo + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def faces(self) -> np.ndarray:
        return self.x_lo + np.arange(self.n_cells + 1) * self.dx

    def extended_centers(self) -> np.ndarray:
        """Cell centers including the ghost layers on both sides."""
        i = np.arange(-self.n_ghost, self.n_cells + self.n_ghost)
        return self.x_lo + (i + 0.5) * self.dx


@dataclass(frozen=True)
class Grid2D:
    x: Grid1D
    y: Grid1D

    @property
    def dx(self) -> float:
        return self.x.dx

    @property
    def dy(self) -> float:
        return self.y.dx

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x.n_cells, self.y.n_cells)

    @property
    def area(self) -> float:
        return self.x.length * self.y.length

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x.centers, self.y.centers, indexing="ij")


def build_grid_1d(x_lo: float, x_hi: float, n_cells: int) -> Grid1D:
    if not (np.isfinite(x_lo) and np.isfinite(x_hi)) or x_hi <= x_lo:
        raise ConfigurationError(f"degenerate domain [{x_lo}, {x_hi}]")
    if int(n_cells) != n_cells or n_cells < 10:
        raise ConfigurationError(f"need at least 10 cells, got {n_cells}")
    return Grid1D(float(x_lo), float(x_hi), int(n_cells))


def build_grid_2d(x_lo, x_hi, y_lo, y_hi, n_x: int, n_y: int) -> Grid2D:
    return Grid2D(build_grid_1d(x_lo, x_hi, n_x), build_grid_1d(y_lo, y_hi, n_y))


# --------------------------------------------------------------------------
# boundary conditions

PERIODIC = "periodic"
TRANSMISSIVE = "transmissive"
FIXED_SURFACE = "fixed_surface"
FIXED_DISCHARGE = "fixed_discharge"
STEADY_INFLOW = "steady_inflow"
STEADY_OUTFLOW = "steady_outflow"
REFLECTIVE = "reflective"

BC_KINDS = (PERIODIC, TRANSMISSIVE, FIXED_SURFACE, FIXED_DISCHARGE,
            STEADY_INFLOW, STEADY_OUTFLOW, REFLECTIVE)

Value = Union[float, Callable[[float], float]]


@dataclass(frozen=True)
class SideBC:
    """Boundary treatment on one side of the domain.

    ``value`` is either a constant or a function of time. It is the imposed
    surface level for ``fixed_surface``/``steady_outflow`` and the imposed
    normal discharge for ``fixed_discharge``/``steady_inflow``.
    """

    kind: str
    value: Optional[Value] = None

    def __post_init__(self):
        if self.kind not in BC_KINDS:
            raise ConfigurationError(f"unknown boundary kind {self.kind!r}")
        needs_value = self.kind in (FIXED_SURFACE, FIXED_DISCHARGE,
                                    STEADY_INFLOW, STEADY_OUTFLOW)
        if needs_value and self.value is None:
            raise ConfigurationError(f"boundary kind {self.kind!r} needs a value")

    def at(self, t: float) -> float:
        v = self.value
        return float(v(t)) if callable(v) else float(v)


@dataclass(frozen=True)
class BoundaryCondition:
    """Pair of side conditions along one axis."""

    lo: SideBC
    hi: SideBC

    def __post_init__(self):
        if (self.lo.kind == PERIODIC) != (self.hi.kind == PERIODIC):
            raise ConfigurationError("periodic must be set on both opposing sides")

    @property
    def periodic(self) -> bool:
        return self.lo.kind == PERIODIC

    @classmethod
    def periodic_pair(cls) -> "BoundaryCondition":
        return cls(SideBC(PERIODIC), SideBC(PERIODIC))

    @classmethod
    def transmissive_pair(cls) -> "BoundaryCondition":
        return cls(SideBC(TRANSMISSIVE), SideBC(TRANSMISSIVE))


def pad_ghosts(u: np.ndarray, axis: int, ng: int = N_GHOST) -> np.ndarray:
    """Return a copy of ``u`` with ``ng`` zero ghost layers on both ends of ``axis``."""
    widths = [(0, 0)] * u.ndim
    widths[axis] = (ng, ng)
    return np.pad(u, widths)


def _fill_side(ext, side: SideBC, at_lo: bool, axis: int, normal: int, t: float, ng: int):
    n_ext = ext.shape[axis]
    sl = [slice(None)] * ext.ndim
    src = [slice(None)] * ext.ndim
    if at_lo:
        sl[axis] = slice(0, ng)
        src[axis] = slice(ng, ng + 1)
        mirror = slice(2 * ng - 1, ng - 1, -1)
    else:
        sl[axis] = slice(n_ext - ng, n_ext)
        src[axis] = slice(n_ext - ng - 1, n_ext - ng)
        mirror = slice(n_ext - ng - 1, n_ext - 2 * ng - 1, -1)
    sl_t, src_t = tuple(sl), tuple(src)
    kind = side.kind

    if kind == REFLECTIVE:
        msl = list(sl)
        msl[axis] = mirror
        # variable axis is 0; assignments below index it explicitly
        ext[sl_t] = ext[tuple(msl)]
        nsl = (normal,) + sl_t[1:]
        ext[nsl] = -ext[nsl]
        return

    ext[sl_t] = ext[src_t]
    if kind in (FIXED_SURFACE, STEADY_OUTFLOW):
        ext[(0,) + sl_t[1:]] = side.at(t)
    elif kind in (FIXED_DISCHARGE, STEADY_INFLOW):
        ext[(normal,) + sl_t[1:]] = side.at(t)


def apply_boundary(ext: np.ndarray, bc: BoundaryCondition, t: float = 0.0,
                   axis: int = 1, normal: int = 1, ng: int = N_GHOST) -> np.ndarray:
    """Fill the ghost layers of ``ext`` in place along ``axis`` and return it.

    ``ext`` has the conserved variables on axis 0 (H first), interior cells
    already populated, and ``ng`` ghost layers on each side of ``axis``.
    ``normal`` indexes the discharge component normal to the boundary.
    """
    n = ext.shape[axis] - 2 * ng
    if bc.periodic:
        dst_lo = [slice(None)] * ext.ndim
        src_lo = [slice(None)] * ext.ndim
        dst_lo[axis] = slice(0, ng)
        src_lo[axis] = slice(n, n + ng)
        ext[tuple(dst_lo)] = ext[tuple(src_lo)]
        dst_hi = [slice(None)] * ext.ndim
        src_hi = [slice(None)] * ext.ndim
        dst_hi[axis] = slice(n + ng, n + 2 * ng)
        src_hi[axis] = slice(ng, 2 * ng)
        ext[tuple(dst_hi)] = ext[tuple(src_hi)]
        return ext
    _fill_side(ext, bc.lo, True, axis, normal, t, ng)
    _fill_side(ext, bc.hi, False, axis, normal, t, ng)
    return ext


def extrapolate_scalar(ext: np.ndarray, bc: BoundaryCondition, axis: int = 0,
                       ng: int = N_GHOST) -> np.ndarray:
    """Ghost fill for a passive scalar (bottom averages): wrap or copy."""
    n = ext.shape[axis] - 2 * ng
    idx = np.arange(-ng, n + ng)
    if bc.periodic:
        idx = np.mod(idx, n)
    else:
        idx = np.clip(idx, 0, n - 1)
    interior = np.take(ext, np.arange(ng, n + ng), axis=axis)
    out = np.take(interior, idx, axis=axis)
    ext[...] = out
    return ext
