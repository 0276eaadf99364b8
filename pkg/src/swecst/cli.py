"""Command line front end.

    swecst list
    swecst run --case ex4.5 --snapshots 0,15,60 --out runs/dam
    swecst convergence --case ex4.2 --levels 5 --out runs/acc
    swecst cproperty --dims 1,2

Exit codes: 0 success, 2 configuration error, 3 blowup, 4 stall,
5 invariant violation (including a failed lake-at-rest check).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .analysis import VARIABLES_1D, VARIABLES_2D, table_header, write_table_csv
from .cases import CaseSpec, catalogue, get_case, read_config
from .errors import ConfigurationError, InvariantViolation, SweError
from .output import snapshot_name, write_snapshot
from .runner import run
from .studies import (CPROPERTY_1D, CPROPERTY_2D, REFERENCE_1D, REFERENCE_2D,
                      convergence_study, cproperty_suite, default_ladder, with_grid)
from .weno import set_thread_cap, thread_cap_from_env

EXIT_OK = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigurationError(message)


def _times(text: str) -> List[float]:
    try:
        out = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated times, got {text!r}")
    if any(not math.isfinite(v) or v < 0.0 for v in out):
        raise argparse.ArgumentTypeError("snapshot times must be finite and non-negative")
    return out


def _case_options(p: argparse.ArgumentParser, grid: bool = True):
    p.add_argument("--case", required=True, help="case name (see 'list') or config section")
    p.add_argument("--config", type=Path, help="INI file with case sections")
    if grid:
        p.add_argument("--nx", type=int, help="cells along x")
        p.add_argument("--ny", type=int, help="cells along y (2D cases)")
        p.add_argument("--cfl", type=float)
        p.add_argument("--tfinal", type=float)
    p.add_argument("--pp", action="store_true", default=None, help="switch the positivity limiter on")
    p.add_argument("--strict-pp", action="store_true", default=None,
                   help="cap the step by the limiter's sufficient condition")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="swecst", description="Well-balanced WENO-AO solver for shallow water flows")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="list the built-in cases")

    r = sub.add_parser("run", help="run one case and write CSV snapshots")
    _case_options(r)
    r.add_argument("--snapshots", type=_times, help="comma-separated output times")

    c = sub.add_parser("convergence", help="refinement ladder against a fine self-run")
    _case_options(c, grid=False)
    c.add_argument("--levels", type=int, default=5)
    c.add_argument("--tfinal", type=float)
    c.add_argument("--ref-n", type=int, help="cells per axis of the reference run")
    c.add_argument("--ref-cfl", type=float)

    k = sub.add_parser("cproperty", help="lake-at-rest suite")
    k.add_argument("--dims", default="1,2", help="1, 2 or 1,2")
    k.add_argument("--out", type=Path, help="write the error table here")
    k.add_argument("--no-hydrostatic", action="store_true",
                   help="debug: disable the face-depth fix (negative control, expected to fail)")
    return p


def resolve_case(args) -> CaseSpec:
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigurationError(f"cannot read {args.config}: {exc}") from exc
        cases = {c.name: c for c in read_config(text)}
        if args.case not in cases:
            raise ConfigurationError(f"no section [{args.case}] in {args.config}")
        case = cases[args.case]
    else:
        case = get_case(args.case)
    over = {}
    if getattr(args, "tfinal", None) is not None:
        if not args.tfinal >= 0.0:
            raise ConfigurationError("--tfinal must be non-negative")
        over["t_final"] = args.tfinal
    if getattr(args, "cfl", None) is not None:
        if not 0.0 < args.cfl <= 1.0:
            raise ConfigurationError("--cfl must lie in (0, 1]")
        over["cfl"] = args.cfl
    if args.pp:
        over["pp"] = True
    if args.strict_pp:
        over["strict_pp"] = True
    if getattr(args, "snapshots", None) is not None:
        over["snapshots"] = args.snapshots
    case = case.with_overrides(**over)
    if hasattr(args, "nx"):
        case = with_grid(case, args.nx, args.ny)
    return case


def cmd_list(args, out) -> int:
    for c in catalogue():
        n = "x".join(str(k) for k in c.n)
        pp = " pp" if c.pp else ""
        print(f"{c.name:16s} {c.dim}D  n={n:9s} T={c.t_final:<9g}{pp}  {c.description}", file=out)
    return EXIT_OK


def _outdir(path: Path) -> Path:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigurationError(f"cannot create {path}: {exc}") from exc
    return path


def cmd_run(args, out) -> int:
    case = resolve_case(args)
    outdir = _outdir(args.out)
    res = run(case)
    shots = list(res.snapshots)
    if not shots or shots[-1][0] < case.t_final:
        shots.append((case.t_final, res.U))
    for t, U in shots:
        write_snapshot(outdir / snapshot_name(t), res.problem.fields(U))
    res.log.write_csv(outdir / "run_log.csv")
    print(f"{case.name}: {len(res.log.rows) - 1} steps to t={case.t_final:g}, "
          f"min h={res.log.min_h:.3e}, {len(shots)} snapshot(s) in {outdir}", file=out)
    return EXIT_OK


def cmd_convergence(args, out) -> int:
    case = resolve_case(args)
    ladder = default_ladder(case, args.levels)
    ref_n, ref_cfl = REFERENCE_1D if case.dim == 1 else REFERENCE_2D
    reference = (args.ref_n or ref_n, args.ref_cfl or ref_cfl)
    rows = convergence_study(case, ladder, reference)
    variables = VARIABLES_1D if case.dim == 1 else VARIABLES_2D
    outdir = _outdir(args.out)
    write_table_csv(outdir / f"convergence_{case.name}.csv", rows, variables)
    print(" ".join(table_header(variables)), file=out)
    for r in rows:
        parts = [str(r.n), f"{r.cfl:g}"]
        for v in variables:
            parts += [f"{r.report.l1[v]:.3e}", _order(r.orders_l1[v]),
                      f"{r.report.linf[v]:.3e}", _order(r.orders_linf[v])]
        print(" ".join(parts), file=out)
    return EXIT_OK


def _order(v: float) -> str:
    return "-" if math.isnan(v) else f"{v:.2f}"


def cmd_cproperty(args, out) -> int:
    names: List[str] = []
    for d in (s.strip() for s in args.dims.split(",")):
        if d == "1":
            names += CPROPERTY_1D
        elif d == "2":
            names += CPROPERTY_2D
        else:
            raise ConfigurationError(f"--dims takes 1, 2 or 1,2; got {args.dims!r}")
    rows = cproperty_suite(names, hydrostatic=not args.no_hydrostatic)
    lines = ["case,variable,L1,Linf,pass"]
    failures = []
    for r in rows:
        for v in r.report.l1:
            lines.append("%s,%s,%.17g,%.17g,%s" % (r.case, v, r.report.l1[v], r.report.linf[v],
                                                   "yes" if r.passed else "no"))
        failures += r.failures()
    print("\n".join(lines), file=out)
    if args.out is not None:
        _outdir(args.out.parent if args.out.suffix else args.out)
        target = args.out if args.out.suffix else args.out / "cproperty.csv"
        target.write_text("\n".join(lines) + "\n")
    if failures:
        raise InvariantViolation("lake at rest not preserved: " + "; ".join(failures))
    print("C-property: pass", file=out)
    return EXIT_OK


COMMANDS = {"list": cmd_list, "run": cmd_run, "convergence": cmd_convergence,
            "cproperty": cmd_cproperty}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        set_thread_cap(thread_cap_from_env())
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except SweError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ConfigurationError.exit_code


if __name__ == "__main__":
    sys.exit(main())
