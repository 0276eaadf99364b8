"""Third-order SSP Runge-Kutta stepping with CFL control and a run log."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, SolverBlowup, StalledRun

PP_CFL = 1.0 / 12.0


@dataclass(frozen=True)
class StepControl:
    cfl: float = 0.6
    strict_pp: bool = False
    t_final: float = 1.0
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not (0.0 < self.cfl <= 1.0):
            raise ConfigurationError(f"cfl must be in (0, 1], got {self.cfl}")
        if not self.t_final >= 0.0:
            raise ConfigurationError(f"t_final must be non-negative, got {self.t_final}")

    @property
    def effective_cfl(self) -> float:
        return min(self.cfl, PP_CFL) if self.strict_pp else self.cfl


def compute_dt(alpha, spacing, control: StepControl, t: float = 0.0) -> float:
    """Step size from the wave speed(s) and cell size(s).

    ``alpha``/``spacing`` are scalars in 1D or matching sequences
    (alpha_x, alpha_y), (dx, dy) in 2D. The step is clipped so the run lands
    exactly on ``control.t_final``.
    """
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    d = np.atleast_1d(np.asarray(spacing, dtype=float))
    rate = float(np.sum(a / d))
    remaining = control.t_final - t
    if rate <= 0.0:
        if remaining > 0.0:
            raise StalledRun("zero wave speed: the time step cannot be determined (all-dry domain?)")
        return 0.0
    dt = control.effective_cfl / rate
    return min(dt, remaining)


def ssp_rk3_step(U: np.ndarray, rhs: Callable, dt: float, t: float = 0.0,
                 project: Optional[Callable] = None) -> np.ndarray:
    """One Shu-Osher SSP-RK3 step; ``rhs(U, t, stage)`` returns dU/dt.

    ``project``, when given, is applied to every stage result.
    """
    P = project if project is not None else (lambda V: V)

    def L(V, tt, stage):
        try:
            return rhs(V, tt, stage)
        except SolverBlowup as exc:
            if exc.stage is None:
                exc.stage = stage
            raise

    # increment form of the Shu-Osher stages: a zero operator returns U bitwise
    U1 = P(U + dt * L(U, t, 1))
    U2 = P(U + 0.25 * ((U1 - U) + dt * L(U1, t + dt, 2)))
    return P(U + 2.0 / 3.0 * ((U2 - U) + dt * L(U2, t + 0.5 * dt, 3)))


@dataclass
class RunLog:
    rows: List[tuple] = field(default_factory=list)

    columns = ("step", "t", "dt", "min_h", "total_mass")

    def record(self, step, t, dt, min_h, total_mass):
        self.rows.append((int(step), float(t), float(dt), float(min_h), float(total_mass)))

    @property
    def min_h(self) -> float:
        return min(r[3] for r in self.rows) if self.rows else math.inf

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.columns)
            for r in self.rows:
                w.writerow([r[0]] + ["%.17g" % v for v in r[1:]])


def run_to(U0: np.ndarray, rhs: Callable, wave_speed: Callable, spacing, control: StepControl,
           depth: Callable, cell_volume: float, t0: float = 0.0,
           stop_times: Sequence[float] = (), on_stop: Optional[Callable] = None,
           on_step: Optional[Callable] = None, project: Optional[Callable] = None):
    """Integrate from ``t0`` to ``control.t_final``.

    ``wave_speed(U)`` gives alpha (scalar or per-axis tuple), ``depth(U)`` the
    mean depths used for the log. ``stop_times`` are hit exactly and passed
    to ``on_stop(t, U)``; ``on_step(U_old, U_new, dt)`` sees every step.
    ``project`` is handed to :func:`ssp_rk3_step`.
    Returns the final state and the :class:`RunLog`.
    """
    U = np.array(U0, dtype=float)
    t = t0
    log = RunLog()
    h = depth(U)
    log.record(0, t, 0.0, np.min(h), np.sum(U[0]) * cell_volume)
    pending = sorted(s for s in stop_times if s >= t0)
    while pending and pending[0] <= t:
        if on_stop is not None:
            on_stop(t, U)
        pending.pop(0)
    step = 0
    while t < control.t_final:
        if step >= control.max_steps:
            raise StalledRun(f"max_steps={control.max_steps} reached at t={t:.6g}")
        target = min([control.t_final] + pending)
        dt = compute_dt(wave_speed(U), spacing, StepControl(control.cfl, control.strict_pp, target,
                                                            control.max_steps), t)
        if dt <= 0.0 or t + dt == t:
            raise StalledRun(f"time step underflow at t={t:.6g}")
        U_new = ssp_rk3_step(U, rhs, dt, t, project)
        if not np.all(np.isfinite(U_new)):
            idx = tuple(int(i) for i in np.argwhere(~np.isfinite(U_new))[0])
            raise SolverBlowup(f"non-finite state at {idx}, t={t:.6g}", cell=idx)
        step += 1
        t = target if target - (t + dt) <= 1e-12 * max(1.0, abs(target)) else t + dt
        if on_step is not None:
            on_step(U, U_new, dt)
        U = U_new
        h = depth(U)
        log.record(step, t, dt, np.min(h), np.sum(U[0]) * cell_volume)
        while pending and pending[0] <= t:
            if on_stop is not None:
                on_stop(t, U)
            pending.pop(0)
    return U, log
