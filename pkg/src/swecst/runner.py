"""Glue between a :class:`CaseSpec` and the solvers: setup, time loop, output fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import swe1d, swe2d
from .bathymetry import (Bathymetry1D, Bathymetry2D, cell_average_2d, cell_average_scalar,
                         extend_bottom, extend_bottom_2d, precompute_bathymetry_1d,
                         precompute_bathymetry_2d)
from .cases import CaseSpec
from .swe1d import SchemeOptions
from .timestepper import RunLog, StepControl, run_to


@dataclass
class Problem:
    case: CaseSpec
    grid: object
    bcs: tuple
    bathy: object
    U0: np.ndarray
    options: SchemeOptions
    _alpha: object = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.case.dim

    @property
    def b_bar(self) -> np.ndarray:
        return self.bathy.b_bar

    @property
    def spacing(self):
        return self.grid.dx if self.dim == 1 else (self.grid.dx, self.grid.dy)

    @property
    def cell_volume(self) -> float:
        return self.grid.dx if self.dim == 1 else self.grid.dx * self.grid.dy

    def rhs(self, U, t, stage=None):
        # With the limiter on, the viscosity of the first stage is reused by
        # the later ones so it matches the step size chosen from it.
        alpha = None
        if self.options.pp:
            if stage is None or stage == 1 or self._alpha is None:
                self._alpha = self.wave_speed(U)
            alpha = self._alpha
        if self.dim == 1:
            return swe1d.rhs_1d(U, self.bathy, self.grid, self.bcs[0], t, self.options, stage, alpha)
        return swe2d.rhs_2d(U, self.bathy, self.grid, self.bcs[0], self.bcs[1], t,
                            self.options, stage, alpha)

    def wave_speed(self, U):
        o = self.options
        if self.dim == 1:
            return swe1d.max_wave_speed(U[0], U[1], self.b_bar, o.g, o.eps_dry,
                                         o.shallow_ratio)
        return swe2d.max_wave_speeds(U, self.b_bar, o.g, o.eps_dry, o.shallow_ratio)

    def project(self, U):
        """Damp the discharge in nearly dry cells (see ``SchemeOptions.shallow_ratio``)."""
        o = self.options
        if o.shallow_ratio <= 0.0:
            return U
        h = U[0] - self.b_bar
        out = None
        for k in range(1, U.shape[0]):
            q = swe1d.damp_shallow_discharge(h, U[k], o.eps_dry, o.shallow_ratio)
            if q is not U[k]:
                if out is None:
                    out = U.copy()
                out[k] = q
        return U if out is None else out

    def depth(self, U) -> np.ndarray:
        return U[0] - self.b_bar

    def fields(self, U) -> Dict[str, np.ndarray]:
        """Cell-centre coordinates and cell averages, ready for CSV output."""
        if self.dim == 1:
            out = {"x": self.grid.centers}
        else:
            X, Y = self.grid.mesh()
            out = {"x": X, "y": Y}
        out["b"] = self.b_bar
        out["h"] = U[0] - self.b_bar
        out["hu"] = U[1]
        if self.dim == 2:
            out["hv"] = U[2]
        out["H"] = U[0]
        return out


def cell_averages(case: CaseSpec, f: Callable, grid) -> np.ndarray:
    fam = case.fam
    p = case.p
    if case.dim == 1:
        return cell_average_scalar(f, grid, fam.x_breaks(p))
    return cell_average_2d(f, grid, fam.x_breaks(p), fam.y_breaks(p), fam.subcells)


def setup(case: CaseSpec, n: Optional[Sequence[int]] = None, options: Optional[SchemeOptions] = None) -> Problem:
    """Grid, bottom data and initial cell averages for ``case``."""
    grid = case.grid(n)
    bcs = case.boundary()
    options = options or SchemeOptions(g=case.g, pp=case.pp)
    b_bar = cell_averages(case, case.bottom, grid)
    if case.dim == 1:
        bathy = precompute_bathymetry_1d(extend_bottom(b_bar, bcs[0]), grid, options.weno)
    else:
        bathy = precompute_bathymetry_2d(extend_bottom_2d(b_bar, bcs[0], bcs[1]), grid, options.weno)
    comps = [cell_averages(case, case.surface, grid)]
    for q in case.fam.discharge:
        comps.append(cell_averages(case, lambda *xy, q=q: q(case.p, *xy), grid))
    U0 = np.stack(comps)
    # rounding in the averages must not create negative depths on dry cells
    U0[0] = np.maximum(U0[0], b_bar)
    return Problem(case, grid, bcs, bathy, U0, options)


@dataclass
class RunResult:
    problem: Problem
    U: np.ndarray
    log: RunLog
    snapshots: List[Tuple[float, np.ndarray]] = field(default_factory=list)
    residual: float = float("nan")


def run(case: CaseSpec, n: Optional[Sequence[int]] = None, options: Optional[SchemeOptions] = None,
        cfl: Optional[float] = None, t_final: Optional[float] = None,
        strict_pp: Optional[bool] = None, snapshots: Optional[Sequence[float]] = None,
        on_step: Optional[Callable] = None, max_steps: int = 10_000_000) -> RunResult:
    """Integrate ``case`` and collect the requested snapshots.

    ``residual`` is the max-norm of (U^{n+1} - U^n)/dt over the last step.
    """
    prob = setup(case, n, options)
    control = StepControl(cfl if cfl is not None else case.cfl,
                          case.strict_pp if strict_pp is None else strict_pp,
                          case.t_final if t_final is None else t_final, max_steps)
    stops = case.snapshots if snapshots is None else snapshots
    stops = sorted(s for s in stops if s <= control.t_final)
    shots: List[Tuple[float, np.ndarray]] = []
    last = {"residual": float("nan")}

    def stepped(U_old, U_new, dt):
        last["residual"] = float(np.max(np.abs(U_new - U_old))) / dt
        if on_step is not None:
            on_step(U_old, U_new, dt)

    U, log = run_to(prob.U0, prob.rhs, prob.wave_speed, prob.spacing, control, prob.depth,
                    prob.cell_volume, stop_times=stops,
                    on_stop=lambda t, V: shots.append((t, V.copy())), on_step=stepped,
                    project=prob.project)
    return RunResult(prob, U, log, shots, last["residual"])
