"""Drivers shared by the command line and the acceptance tests: refinement
ladders against a fine self-run and the lake-at-rest suite."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .analysis import (VARIABLES_1D, VARIABLES_2D, ErrorReport, LadderRow, convergence_table,
                       error_norms, restrict)
from .cases import CaseSpec, get_case, reference_solution
from .errors import ConfigurationError
from .runner import RunResult, cell_averages, run
from .swe1d import SchemeOptions

# Grid sizes and CFL numbers of the refinement tables.
LADDER_1D = ((50, 0.6), (100, 0.4), (200, 0.3), (400, 0.2), (800, 0.1))
LADDER_2D = ((25, 0.6), (50, 0.6), (100, 0.4), (200, 0.3), (400, 0.2), (800, 0.1))
REFERENCE_1D = (3200, 0.1)
REFERENCE_2D = (400, 0.2)

CPROPERTY_1D = ("ex4.1-smooth", "ex4.1-step", "ex4.1-dry")
CPROPERTY_2D = ("ex4.8-smooth", "ex4.8-dry")
CPROPERTY_TOL = 1e-11


def default_ladder(case: CaseSpec, levels: int) -> Tuple[Tuple[int, float], ...]:
    table = LADDER_1D if case.dim == 1 else LADDER_2D
    if not 1 <= levels <= len(table):
        raise ConfigurationError(f"levels must be between 1 and {len(table)}")
    return table[:levels]


def _cells(case: CaseSpec, n: int) -> Tuple[int, ...]:
    return (n,) * case.dim


def depth_fields(case: CaseSpec, result: RunResult) -> Dict[str, np.ndarray]:
    """Cell averages of h and the discharges of a finished run."""
    f = result.problem.fields(result.U)
    names = VARIABLES_1D if case.dim == 1 else VARIABLES_2D
    return {v: f[v] for v in names}


def fine_reference(case: CaseSpec, n: int, cfl: float,
                   options: Optional[SchemeOptions] = None) -> Dict[str, np.ndarray]:
    return depth_fields(case, run(case, _cells(case, n), options, cfl=cfl, snapshots=()))


def convergence_study(case: CaseSpec, ladder: Sequence[Tuple[int, float]],
                      reference: Tuple[int, float], options: Optional[SchemeOptions] = None,
                      ref_fields: Optional[Dict[str, np.ndarray]] = None) -> List[LadderRow]:
    """Errors of each ladder level against the block-averaged fine run."""
    n_ref, cfl_ref = reference
    variables = VARIABLES_1D if case.dim == 1 else VARIABLES_2D
    for n, _ in ladder:
        if n_ref % n:
            raise ConfigurationError(f"reference size {n_ref} is not a multiple of {n}")
    if ref_fields is None:
        ref_fields = fine_reference(case, n_ref, cfl_ref, options)
    reports = []
    for n, cfl in ladder:
        res = run(case, _cells(case, n), options, cfl=cfl, snapshots=())
        num = depth_fields(case, res)
        ref = {v: restrict(ref_fields[v], (n_ref // n,) * case.dim) for v in variables}
        reports.append(error_norms(num, ref, res.problem.cell_volume, variables))
    return convergence_table([n for n, _ in ladder], [c for _, c in ladder], reports, variables)


@dataclass
class CPropertyRow:
    case: str
    report: ErrorReport
    passed: bool

    def failures(self, tol: float = CPROPERTY_TOL) -> List[str]:
        out = []
        for norm, values in (("L1", self.report.l1), ("Linf", self.report.linf)):
            for v, e in values.items():
                if not e <= tol:
                    out.append(f"{self.case} {norm}({v}) = {e:.3e}")
        return out


def cproperty_suite(names: Sequence[str], hydrostatic: bool = True,
                    tol: float = CPROPERTY_TOL) -> List[CPropertyRow]:
    """Run each lake-at-rest case and compare with the exact steady state.

    ``hydrostatic=False`` switches the face-depth fix off; it exists only as
    a negative control and is expected to fail on non-flat bottoms.
    """
    rows = []
    for name in names:
        case = get_case(name)
        options = SchemeOptions(g=case.g, pp=case.pp, hydrostatic=hydrostatic)
        res = run(case, options=options, snapshots=())
        grid = res.problem.grid
        variables = VARIABLES_1D if case.dim == 1 else VARIABLES_2D
        exact = {}
        for v in variables:
            exact[v] = cell_averages(case, lambda *xy, v=v: reference_solution(
                case, xy[0], case.t_final, *xy[1:])[v], grid)
        rep = error_norms(depth_fields(case, res), exact, res.problem.cell_volume, variables)
        ok = all(e <= tol for d in (rep.l1, rep.linf) for e in d.values())
        rows.append(CPropertyRow(name, rep, ok))
    return rows


def with_grid(case: CaseSpec, nx: Optional[int], ny: Optional[int]) -> CaseSpec:
    """Apply --nx/--ny overrides to a case."""
    if nx is None and ny is None:
        return case
    n = list(case.n)
    if nx is not None:
        n[0] = nx
    if ny is not None:
        if case.dim == 1:
            raise ConfigurationError(f"case {case.name} is one-dimensional; --ny does not apply")
        n[1] = ny
    if any(k < 10 for k in n):
        raise ConfigurationError(f"need at least 10 cells per axis, got {tuple(n)}")
    return replace(case, n=tuple(n))
