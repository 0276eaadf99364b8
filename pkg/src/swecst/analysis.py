"""Error norms, convergence orders, restriction and run diagnostics."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .errors import ConfigurationError

VARIABLES_1D = ("h", "hu")
VARIABLES_2D = ("h", "hu", "hv")


@dataclass(frozen=True)
class ErrorReport:
    """L1 and max-norm errors per variable."""

    l1: Dict[str, float]
    linf: Dict[str, float]

    def row(self, variables: Sequence[str]) -> List[float]:
        out = []
        for v in variables:
            out += [self.l1[v], self.linf[v]]
        return out


def error_norms(numeric: Dict[str, np.ndarray], reference: Dict[str, np.ndarray],
                cell_volume: float, variables: Optional[Sequence[str]] = None) -> ErrorReport:
    """Norms of ``numeric - reference`` on the same grid.

    ``cell_volume`` is dx in 1D and dx*dy in 2D, so the L1 norm is the
    integral of the absolute error over the domain.
    """
    variables = tuple(variables or [k for k in numeric if k in reference])
    l1, linf = {}, {}
    for v in variables:
        a = np.asarray(numeric[v], dtype=float)
        b = np.asarray(reference[v], dtype=float)
        if a.shape != b.shape:
            raise ConfigurationError(f"grid mismatch for {v}: {a.shape} vs {b.shape}")
        e = np.abs(a - b)
        l1[v] = float(cell_volume * np.sum(e))
        linf[v] = float(np.max(e)) if e.size else 0.0
    return ErrorReport(l1, linf)


def convergence_order(e_coarse: float, e_fine: float, ratio: float = 2.0) -> float:
    """Observed order log(e_coarse/e_fine)/log(ratio); NaN when either error is zero."""
    if not (e_coarse > 0.0 and e_fine > 0.0):
        return math.nan
    return math.log(e_coarse / e_fine) / math.log(ratio)


def order_defined(order: float) -> bool:
    return not math.isnan(order)


def restrict(fine: np.ndarray, factor, axes: Optional[Sequence[int]] = None) -> np.ndarray:
    """Average ``factor``-sized blocks of a fine-grid field onto the coarse grid.

    ``factor`` is an int or one int per averaged axis; by default the last
    one or two axes are averaged, matching the field's dimension.
    """
    fine = np.asarray(fine, dtype=float)
    factors = (factor,) if np.isscalar(factor) else tuple(factor)
    if axes is None:
        axes = tuple(range(fine.ndim - len(factors), fine.ndim))
    if len(axes) != len(factors):
        raise ConfigurationError("one refinement factor per axis is required")
    shape = []
    mean_axes = []
    for ax in range(fine.ndim):
        if ax in axes:
            f = int(factors[axes.index(ax)])
            if fine.shape[ax] % f:
                raise ConfigurationError(f"axis {ax} of length {fine.shape[ax]} is not divisible by {f}")
            shape += [fine.shape[ax] // f, f]
            mean_axes.append(len(shape) - 1)
        else:
            shape.append(fine.shape[ax])
    return fine.reshape(shape).mean(axis=tuple(mean_axes))


def steadiness_residual(U_old: np.ndarray, U_new: np.ndarray, dt: float) -> float:
    """Max-norm of the time derivative over one step."""
    if dt <= 0.0:
        raise ConfigurationError("dt must be positive")
    return float(np.max(np.abs(np.asarray(U_new) - np.asarray(U_old)))) / dt


def froude(h, u, g: float = 9.812):
    """|u|/sqrt(g h); NaN where the depth is not positive."""
    h = np.asarray(h, dtype=float)
    u = np.asarray(u, dtype=float)
    wet = h > 0.0
    fr = np.full(np.broadcast(h, u).shape, np.nan)
    np.divide(np.abs(u), np.sqrt(g * np.where(wet, h, 1.0)), out=fr, where=wet)
    return fr if fr.ndim else float(fr)


@dataclass
class LadderRow:
    n: int
    cfl: float
    report: ErrorReport
    orders_l1: Dict[str, float]
    orders_linf: Dict[str, float]


def convergence_table(ns: Sequence[int], cfls: Sequence[float], reports: Sequence[ErrorReport],
                      variables: Sequence[str]) -> List[LadderRow]:
    """Attach orders between consecutive rows (first row gets NaN)."""
    rows = []
    for k, (n, cfl, rep) in enumerate(zip(ns, cfls, reports)):
        o1, oi = {}, {}
        for v in variables:
            if k == 0:
                o1[v] = oi[v] = math.nan
            else:
                r = n / ns[k - 1]
                o1[v] = convergence_order(reports[k - 1].l1[v], rep.l1[v], r)
                oi[v] = convergence_order(reports[k - 1].linf[v], rep.linf[v], r)
        rows.append(LadderRow(n, cfl, rep, o1, oi))
    return rows


def table_header(variables: Sequence[str]) -> List[str]:
    head = ["N", "cfl"]
    for v in variables:
        head += [f"L1_{v}", f"order_L1_{v}", f"Linf_{v}", f"order_Linf_{v}"]
    return head


def write_table_csv(path, rows: Iterable[LadderRow], variables: Sequence[str]):
    """CSV laid out like the usual error tables: N, cfl, then error/order pairs."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(table_header(variables))
        for r in rows:
            line = [r.n, "%.17g" % r.cfl]
            for v in variables:
                line += ["%.17g" % r.report.l1[v], "%.17g" % r.orders_l1[v],
                         "%.17g" % r.report.linf[v], "%.17g" % r.orders_linf[v]]
            w.writerow(line)
