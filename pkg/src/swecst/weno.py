"""Fifth-order WENO-AO reconstruction from five cell averages.

All polynomial algebra is done in the cell-normalized coordinate
``xi = (x - x_i) / dx`` with the central cell spanning ``[-1/2, 1/2]``.
Polynomials are stored as monomial coefficients ``(a0, a1, a2, a3, a4)``.

Three quadratics (left, central, right three-cell stencils) and one quartic
(full stencil) are blended with the adaptive-order weights; since every
candidate is a polynomial, the blended reconstruction is itself a quartic and
is returned as a coefficient vector per cell. Point values and derivatives at
any in-cell offsets then follow from one small matrix product.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numba
import numpy as np

if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"

LINEAR_WEIGHTS = (0.01125, 0.1275, 0.01125, 0.85)
EPS = 1e-12
OFFSETS = np.arange(-2, 3)


@dataclass(frozen=True)
class WenoAoConfig:
    linear_weights: tuple = LINEAR_WEIGHTS
    eps: float = EPS

    def __post_init__(self):
        g = np.asarray(self.linear_weights, dtype=float)
        if g.shape != (4,) or np.any(g <= 0) or abs(g.sum() - 1.0) > 1e-14:
            raise ValueError("linear weights must be four positive numbers summing to one")


DEFAULT_CONFIG = WenoAoConfig()


def _cell_moments(offsets, degree):
    """Average of xi**p over the unit cells centred at ``offsets``."""
    j = np.asarray(offsets, dtype=float)[:, None]
    p = np.arange(degree + 1)[None, :]
    return ((j + 0.5) ** (p + 1) - (j - 0.5) ** (p + 1)) / (p + 1)


def _fit_matrix(cells, degree):
    """Map the 5 stencil averages to ``degree + 1`` monomial coefficients, padded to 5."""
    inv = np.linalg.inv(_cell_moments(cells, degree))
    full = np.zeros((5, 5))
    cols = np.asarray(cells) + 2
    full[: degree + 1, cols] = inv
    return full


# FIT[k] @ v gives the coefficients of candidate k (k = 0..3 -> p1..p4)
FIT = np.stack([
    _fit_matrix([-2, -1, 0], 2),
    _fit_matrix([-1, 0, 1], 2),
    _fit_matrix([0, 1, 2], 2),
    _fit_matrix([-2, -1, 0, 1, 2], 4),
])


def _smoothness_matrix(kappa, size=5):
    """Quadratic form Q with beta = a @ Q @ a for the monomial coefficients a."""

    def moment(m):
        return 0.0 if m % 2 else 2.0 * 0.5 ** (m + 1) / (m + 1)

    q = np.zeros((size, size))
    for alpha in range(1, kappa + 1):
        for p in range(alpha, size):
            cp = math.factorial(p) / math.factorial(p - alpha)
            for r in range(alpha, size):
                cr = math.factorial(r) / math.factorial(r - alpha)
                q[p, r] += cp * cr * moment(p + r - 2 * alpha)
    return q


SMOOTH_QUADRATIC = _smoothness_matrix(2)
SMOOTH_QUARTIC = _smoothness_matrix(4)


class CandidatePolys(NamedTuple):
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    p4: np.ndarray


def fit_candidates(stencil: Sequence[float]) -> CandidatePolys:
    """Candidate polynomials matching the stencil averages in the cell-average sense."""
    v = np.asarray(stencil, dtype=float)
    if v.shape[-1] != 5:
        raise ValueError("stencil must hold 5 cell averages")
    c = np.einsum("kpj,...j->k...p", FIT, v)
    return CandidatePolys(c[0][..., :3], c[1][..., :3], c[2][..., :3], c[3])


def smoothness(poly: Sequence[float], kappa: int) -> float:
    """Smoothness indicator of ``poly`` (monomial coefficients in xi)."""
    a = np.zeros(5)
    a[: len(poly)] = poly
    q = _smoothness_matrix(kappa)
    return float(a @ q @ a)


def nonlinear_weights(beta: Sequence[float], config: WenoAoConfig = DEFAULT_CONFIG) -> np.ndarray:
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(config.linear_weights)
    tau = np.abs(beta[..., 3:4] - beta[..., :3]).sum(axis=-1, keepdims=True) / 3.0
    alpha = gamma * (1.0 + (tau / (beta + config.eps)) ** 2)
    return alpha / alpha.sum(axis=-1, keepdims=True)


def blend(stencil, config: WenoAoConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Quartic coefficients of the blended reconstruction, straight from the formulas.

    Vectorised over leading axes of ``stencil``; this is the readable path,
    :func:`cell_polynomials` is the fast one.
    """
    p1, p2, p3, p4 = fit_candidates(stencil)
    beta = np.stack([
        smoothness_batch(p1, 2), smoothness_batch(p2, 2), smoothness_batch(p3, 2),
        smoothness_batch(p4, 4)], axis=-1)
    w = nonlinear_weights(beta, config)
    g = np.asarray(config.linear_weights)
    pad = lambda p: np.concatenate([p, np.zeros(p.shape[:-1] + (2,))], axis=-1)
    low = [pad(p1), pad(p2), pad(p3)]
    hi = p4 - sum(g[k] * low[k] for k in range(3))
    out = (w[..., 3:4] / g[3]) * hi
    for k in range(3):
        out = out + w[..., k : k + 1] * low[k]
    return out


def smoothness_batch(poly: np.ndarray, kappa: int) -> np.ndarray:
    a = np.zeros(poly.shape[:-1] + (5,))
    a[..., : poly.shape[-1]] = poly
    q = SMOOTH_QUARTIC if kappa == 4 else SMOOTH_QUADRATIC
    return np.einsum("...p,pr,...r->...", a, q, a)


def eval_matrix(xi: Sequence[float], derivative: bool = False) -> np.ndarray:
    """Matrix E with ``coeffs @ E`` giving values (or d/dxi) at the offsets ``xi``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(np.abs(xi) > 0.5 + 1e-14):
        raise ValueError("targets must lie in [-1/2, 1/2]")
    p = np.arange(5)[:, None]
    if not derivative:
        return xi[None, :] ** p
    return np.where(p > 0, p * xi[None, :] ** np.maximum(p - 1, 0), 0.0)


def reconstruct(stencil, xi, config: WenoAoConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Point values of the reconstruction at offsets ``xi`` within the central cell."""
    return blend(stencil, config) @ eval_matrix(xi)


def reconstruct_derivative(stencil, dx: float, xi, config: WenoAoConfig = DEFAULT_CONFIG) -> np.ndarray:
    """First x-derivative of the reconstruction at offsets ``xi``."""
    return blend(stencil, config) @ eval_matrix(xi, derivative=True) / dx


# --------------------------------------------------------------------------
# fused array kernel

_A1 = FIT[0][:3, :3].copy()
_A2 = FIT[1][:3, 1:4].copy()
_A3 = FIT[2][:3, 2:5].copy()
_A4 = FIT[3].copy()
_Q2 = SMOOTH_QUADRATIC[:3, :3].copy()
_Q4 = SMOOTH_QUARTIC.copy()


@numba.njit(parallel=True, cache=True, error_model="numpy")
def _blend_planar(u, gamma, eps, out):
    # Candidates are fitted to deviations from the central average, which is
    # added back last so constant data is reproduced bitwise. The output is
    # planar, out[p, row, cell], which lets the cell loop vectorise.
    n_rows, n = u.shape
    g1, g2, g3, g4 = gamma[0], gamma[1], gamma[2], gamma[3]
    for r in numba.prange(n_rows):
        for i in range(n - 4):
            c = u[r, i + 2]
            dm2 = u[r, i] - c
            dm1 = u[r, i + 1] - c
            dp1 = u[r, i + 3] - c
            dp2 = u[r, i + 4] - c
            a10 = _A1[0, 0] * dm2 + _A1[0, 1] * dm1
            a11 = _A1[1, 0] * dm2 + _A1[1, 1] * dm1
            a12 = _A1[2, 0] * dm2 + _A1[2, 1] * dm1
            a20 = _A2[0, 0] * dm1 + _A2[0, 2] * dp1
            a21 = _A2[1, 0] * dm1 + _A2[1, 2] * dp1
            a22 = _A2[2, 0] * dm1 + _A2[2, 2] * dp1
            a30 = _A3[0, 1] * dp1 + _A3[0, 2] * dp2
            a31 = _A3[1, 1] * dp1 + _A3[1, 2] * dp2
            a32 = _A3[2, 1] * dp1 + _A3[2, 2] * dp2
            a40 = _A4[0, 0] * dm2 + _A4[0, 1] * dm1 + _A4[0, 3] * dp1 + _A4[0, 4] * dp2
            a41 = _A4[1, 0] * dm2 + _A4[1, 1] * dm1 + _A4[1, 3] * dp1 + _A4[1, 4] * dp2
            a42 = _A4[2, 0] * dm2 + _A4[2, 1] * dm1 + _A4[2, 3] * dp1 + _A4[2, 4] * dp2
            a43 = _A4[3, 0] * dm2 + _A4[3, 1] * dm1 + _A4[3, 3] * dp1 + _A4[3, 4] * dp2
            a44 = _A4[4, 0] * dm2 + _A4[4, 1] * dm1 + _A4[4, 3] * dp1 + _A4[4, 4] * dp2
            b1 = _Q2[1, 1] * a11 * a11 + 2.0 * _Q2[1, 2] * a11 * a12 + _Q2[2, 2] * a12 * a12
            b2 = _Q2[1, 1] * a21 * a21 + 2.0 * _Q2[1, 2] * a21 * a22 + _Q2[2, 2] * a22 * a22
            b3 = _Q2[1, 1] * a31 * a31 + 2.0 * _Q2[1, 2] * a31 * a32 + _Q2[2, 2] * a32 * a32
            b4 = (_Q4[1, 1] * a41 * a41 + _Q4[2, 2] * a42 * a42 + _Q4[3, 3] * a43 * a43
                  + _Q4[4, 4] * a44 * a44
                  + 2.0 * (_Q4[1, 2] * a41 * a42 + _Q4[1, 3] * a41 * a43 + _Q4[1, 4] * a41 * a44
                           + _Q4[2, 3] * a42 * a43 + _Q4[2, 4] * a42 * a44 + _Q4[3, 4] * a43 * a44))
            tau = (abs(b4 - b1) + abs(b4 - b2) + abs(b4 - b3)) / 3.0
            r1 = tau / (b1 + eps)
            r2 = tau / (b2 + eps)
            r3 = tau / (b3 + eps)
            r4 = tau / (b4 + eps)
            al1 = g1 * (1.0 + r1 * r1)
            al2 = g2 * (1.0 + r2 * r2)
            al3 = g3 * (1.0 + r3 * r3)
            al4 = g4 * (1.0 + r4 * r4)
            tot = al1 + al2 + al3 + al4
            s4 = al4 / tot / g4
            w1 = al1 / tot - s4 * g1
            w2 = al2 / tot - s4 * g2
            w3 = al3 / tot - s4 * g3
            out[0, r, i] = (s4 * a40 + w1 * a10 + w2 * a20 + w3 * a30) + c
            out[1, r, i] = s4 * a41 + w1 * a11 + w2 * a21 + w3 * a31
            out[2, r, i] = s4 * a42 + w1 * a12 + w2 * a22 + w3 * a32
            out[3, r, i] = s4 * a43
            out[4, r, i] = s4 * a44


@numba.njit(parallel=True, cache=True)
def _eval_planar(coef, E, out):
    n_rows, m = coef.shape[1], coef.shape[2]
    for q in range(E.shape[1]):
        e0, e1, e2, e3, e4 = E[0, q], E[1, q], E[2, q], E[3, q], E[4, q]
        for r in numba.prange(n_rows):
            for i in range(m):
                out[q, r, i] = coef[0, r, i] * e0 + (coef[1, r, i] * e1 + coef[2, r, i] * e2
                                                     + coef[3, r, i] * e3 + coef[4, r, i] * e4)


def _planar_blend(u, axis, config):
    """Rows along ``axis`` -> planar coefficients (5, rows, m) and the lead shape."""
    u = np.asarray(u, dtype=float)
    moved = np.moveaxis(u, axis, -1)
    lead = moved.shape[:-1]
    rows = np.ascontiguousarray(moved.reshape(-1, moved.shape[-1]))
    coef = np.empty((5, rows.shape[0], rows.shape[1] - 4))
    _blend_planar(rows, np.asarray(config.linear_weights, dtype=float), float(config.eps), coef)
    return coef, lead


def thread_cap_from_env(value=None) -> int:
    """Worker count requested by ``SWE_THREADS`` (0 when unset)."""
    value = os.environ.get("SWE_THREADS", "") if value is None else value
    if not str(value).strip():
        return 0
    try:
        cap = int(value)
    except ValueError:
        cap = -1
    if cap < 1:
        raise ValueError(f"SWE_THREADS must be a positive integer, got {value!r}")
    return cap


def set_thread_cap(cap: int):
    """Limit the numba worker pool; results do not depend on the count."""
    if cap:
        numba.set_num_threads(max(1, min(int(cap), numba.config.NUMBA_NUM_THREADS)))


try:
    set_thread_cap(thread_cap_from_env())
except ValueError:
    pass  # reported by the command line front end


def cell_polynomials(u: np.ndarray, axis: int = -1, config: WenoAoConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Blended quartic coefficients for every cell with a full 5-point stencil.

    ``u`` holds cell averages; along ``axis`` the output is 4 shorter (the two
    outermost cells on each side only serve as stencil members). The five
    coefficients are appended as a new trailing axis.
    """
    u = np.asarray(u, dtype=float)
    axis = axis % u.ndim
    coef, lead = _planar_blend(u, axis, config)
    out = np.moveaxis(coef, 0, -1).reshape(lead + (coef.shape[2], 5))
    return np.moveaxis(out, -2, axis)


def point_values(u: np.ndarray, xi, axis: int = -1, derivative: bool = False, dx: float = 1.0,
                 config: WenoAoConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Reconstruct along ``axis`` and evaluate at the offsets ``xi`` in one pass.

    Same layout as :func:`cell_polynomials` with the trailing axis holding
    one entry per offset instead of the coefficients.
    """
    u = np.asarray(u, dtype=float)
    axis = axis % u.ndim
    E = np.ascontiguousarray(eval_matrix(xi, derivative))
    coef, lead = _planar_blend(u, axis, config)
    vals = np.empty((E.shape[1],) + coef.shape[1:])
    _eval_planar(coef, E, vals)
    out = np.moveaxis(vals, 0, -1).reshape(lead + (coef.shape[2], E.shape[1]))
    out = np.moveaxis(out, -2, axis)
    return out / dx if derivative else out


def evaluate(coeffs: np.ndarray, xi, derivative: bool = False, dx: float = 1.0) -> np.ndarray:
    """Evaluate per-cell quartics (trailing axis 5) at offsets ``xi``; new trailing axis."""
    out = coeffs @ eval_matrix(xi, derivative)
    return out / dx if derivative else out


FACE_NODES = np.array([-0.5, 0.5])
_LOBATTO = np.array([-0.5, -math.sqrt(5.0) / 10.0, math.sqrt(5.0) / 10.0, 0.5])
_GAUSS3 = np.array([-math.sqrt(15.0) / 10.0, 0.0, math.sqrt(15.0) / 10.0])


def tensor_reconstruct_2d(u_ext: np.ndarray, dx: float = 1.0, dy: float = 1.0,
                          config: WenoAoConfig = DEFAULT_CONFIG, faces: bool = True,
                          source_values: bool = False, source_derivatives: bool = False) -> dict:
    """Dimension-by-dimension reconstruction of a ghost-extended 2D field.

    ``u_ext`` has shape (nx + 6, ny + 6), first axis x. Each target is reached
    by a first pass along one axis (to line averages at the wanted offsets)
    and a second pass along the other axis (to point values):

    * ``xl``/``xr``: x-face traces at the 3 Gauss y-nodes, x-pass first,
      shape (nx + 2, ny, 3) for x-cells -1..nx.
    * ``yl``/``yh``: y-face traces at the Gauss x-nodes, y-pass first,
      shape (nx, ny + 2, 3).
    * ``sx``/``dsx``: value / x-derivative at (x^l, y^k), y-pass first,
      shape (nx, ny, 3, 4) indexed [k, l].
    * ``sy``/``dsy``: value / y-derivative at (x^k, y^l), x-pass first,
      shape (nx, ny, 3, 4) indexed [k, l].
    """
    pv = lambda v, xi, axis, **kw: point_values(v, xi, axis=axis, config=config, **kw)
    out = {}
    if faces:
        fx = pv(u_ext[:, 1:-1], FACE_NODES, 0)                 # (nx+2, ny+4, 2)
        vals = pv(fx, _GAUSS3, 1)                              # (nx+2, ny, 2, 3)
        out["xl"], out["xr"] = vals[:, :, 0], vals[:, :, 1]
        fy = pv(u_ext[1:-1], FACE_NODES, 1)                    # (nx+4, ny+2, 2)
        vals = pv(fy, _GAUSS3, 0)                              # (nx, ny+2, 2, 3)
        out["yl"], out["yh"] = vals[:, :, 0], vals[:, :, 1]
    if source_values or source_derivatives:
        inner = u_ext[1:-1, 1:-1]
        gy = pv(inner, _GAUSS3, 1)                             # (nx+4, ny, 3)
        gx = pv(inner, _GAUSS3, 0)                             # (nx, ny+4, 3)
        if source_values:
            out["sx"] = pv(gy, _LOBATTO, 0)                    # (nx, ny, 3, 4)
            out["sy"] = pv(gx, _LOBATTO, 1)
        if source_derivatives:
            out["dsx"] = pv(gy, _LOBATTO, 0, derivative=True, dx=dx)
            out["dsy"] = pv(gx, _LOBATTO, 1, derivative=True, dx=dy)
    return out
