"""Benchmark catalogue: bottoms, initial data, boundaries and references.

A :class:`CaseSpec` is plain data (numbers, strings, tuples). The analytic
bottom and initial-data functions are looked up from its ``family`` and
``params``, which keeps specs hashable, comparable and easy to write to and
read back from an INI-style config file.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, fields, replace
from typing import Callable, Dict, NamedTuple, Optional, Tuple

import numpy as np

from .errors import ConfigurationError
from .grid import (FIXED_DISCHARGE, FIXED_SURFACE, PERIODIC, STEADY_INFLOW, STEADY_OUTFLOW,
                   TRANSMISSIVE, BoundaryCondition, SideBC, build_grid_1d, build_grid_2d)

GRAVITY = 9.812
TIDAL_LENGTH = 14000.0
TIDAL_PERIOD = 86400.0

REFERENCE_KINDS = ("none", "exact", "asymptotic", "fine_grid")


# --------------------------------------------------------------------------
# analytic building blocks

def tidal_surface(t):
    return 64.5 - 4.0 * np.sin(4.0 * np.pi * t / TIDAL_PERIOD + np.pi / 2.0)


def tidal_discharge(x, t, length=TIDAL_LENGTH):
    return np.pi * (x - length) / 5400.0 * np.cos(4.0 * np.pi * t / TIDAL_PERIOD + np.pi / 2.0)


TIME_FUNCTIONS: Dict[str, Callable[[float], float]] = {"tidal": tidal_surface}


def _box(x, lo, hi):
    return (x >= lo) & (x <= hi)


def ritter(x, t, h_left, g=GRAVITY, x0=0.0):
    """Dam break onto a dry bed: depth and discharge at ``x`` and ``t > 0``."""
    x = np.asarray(x, dtype=float)
    c = math.sqrt(g * h_left)
    if t <= 0.0:
        h = np.where(x <= x0, h_left, 0.0)
        return h, np.zeros_like(h)
    s = (x - x0) / t
    fan = (s > -c) & (s < 2.0 * c)
    h = np.where(s <= -c, h_left, 0.0)
    h = np.where(fan, (2.0 * c - s) ** 2 / (9.0 * g), h)
    u = np.where(fan, 2.0 / 3.0 * (s + c), 0.0)
    return h, h * u


def double_rarefaction_dry(x, t, h_l, u_l, h_r, u_r, g=GRAVITY, x0=0.0):
    """Two rarefactions leaving a dry middle state (requires 2(c_l + c_r) <= u_r - u_l)."""
    x = np.asarray(x, dtype=float)
    cl, cr = math.sqrt(g * h_l), math.sqrt(g * h_r)
    if 2.0 * (cl + cr) > u_r - u_l:
        raise ConfigurationError("initial states do not produce a dry middle region")
    if t <= 0.0:
        left = x <= x0
        return np.where(left, h_l, h_r), np.where(left, h_l * u_l, h_r * u_r)
    s = (x - x0) / t
    h = np.zeros_like(s)
    u = np.zeros_like(s)
    m = s <= u_l - cl
    h[m], u[m] = h_l, u_l
    m = (s > u_l - cl) & (s < u_l + 2.0 * cl)
    c = (u_l + 2.0 * cl - s[m]) / 3.0
    h[m], u[m] = c * c / g, (u_l + 2.0 * cl + 2.0 * s[m]) / 3.0
    m = (s > u_r - 2.0 * cr) & (s < u_r + cr)
    c = (s[m] - u_r + 2.0 * cr) / 3.0
    h[m], u[m] = c * c / g, (u_r - 2.0 * cr + 2.0 * s[m]) / 3.0
    m = s >= u_r + cr
    h[m], u[m] = h_r, u_r
    return h, h * u


# --------------------------------------------------------------------------
# families: params -> bottom / surface / discharges

class Family(NamedTuple):
    bottom: Callable
    surface: Callable
    discharge: Tuple[Callable, ...]
    x_breaks: Callable = lambda p: ()
    y_breaks: Callable = lambda p: ()
    subcells: int = 1


def _zero(*xy):
    return np.zeros(np.broadcast(*xy).shape)


def _gauss_bump(p, x):
    return p["amp"] * np.exp(-0.4 * (x - 5.0) ** 2)


def _hump(x):
    return np.where(_box(x, 8.0, 12.0), 0.2 - 0.05 * (x - 10.0) ** 2, 0.0)


def _tidal_bottom(x, L=TIDAL_LENGTH):
    return 10.0 + 40.0 * x / L + 10.0 * np.sin(4.0 * np.pi * x / L - np.pi / 2.0)


def _pert_bottom(x):
    return np.where(_box(x, 1.4, 1.6), 0.25 * (np.cos(10.0 * np.pi * (x - 1.5)) + 1.0), 0.0)


def _rect_or_sine(p, x):
    inside = _box(x, 25.0 / 3.0, 12.5)
    if p.get("shape", 0.0) == 0.0:
        return np.where(inside, 1.0, 0.0)
    return np.where(inside, np.sin(6.0 * np.pi * (x / 25.0 - 1.0 / 3.0)), 0.0)


def _acc1_bottom(x):
    return np.sin(np.pi * x) ** 2


def _acc2_bottom(x, y):
    return np.sin(2.0 * np.pi * x) + np.cos(2.0 * np.pi * y)


def _circle_bottom(x, y):
    r = np.sqrt((x - 1.5) ** 2 + (y - 1.0) ** 2)
    b = 0.125 * (np.cos(2.0 * np.pi * (x - 0.5)) + 1.0) * (np.cos(2.0 * np.pi * y) + 1.0)
    return np.where(r <= 0.5, b, 0.0)


FAMILIES: Dict[str, Family] = {
    "lake_1d": Family(
        bottom=lambda p, x: (np.where(_box(x, 4.0, 8.0), 4.0, 0.0) if p.get("step", 0.0)
                             else _gauss_bump(p, x)),
        surface=lambda p, x: np.full(np.shape(x), p["H0"]),
        discharge=(lambda p, x: _zero(x),),
        x_breaks=lambda p: (4.0, 8.0) if p.get("step", 0.0) else ()),
    "accuracy_1d": Family(
        bottom=lambda p, x: _acc1_bottom(x),
        surface=lambda p, x: 5.0 + np.exp(np.cos(2.0 * np.pi * x)) + _acc1_bottom(x),
        discharge=(lambda p, x: np.sin(np.cos(2.0 * np.pi * x)),)),
    "tidal": Family(
        bottom=lambda p, x: _tidal_bottom(x),
        surface=lambda p, x: np.full(np.shape(x), 60.5),
        discharge=(lambda p, x: _zero(x),)),
    "perturbation_1d": Family(
        bottom=lambda p, x: _pert_bottom(x),
        surface=lambda p, x: 1.0 + np.where(_box(x, 1.1, 1.2), p["eps"], 0.0),
        discharge=(lambda p, x: _zero(x),),
        x_breaks=lambda p: (1.1, 1.2, 1.4, 1.6)),
    "dam_bump": Family(
        bottom=lambda p, x: np.where(np.abs(x - 750.0) <= 187.5, 8.0, 0.0),
        surface=lambda p, x: np.where(x <= 750.0, 20.0, 15.0),
        discharge=(lambda p, x: _zero(x),),
        x_breaks=lambda p: (562.5, 750.0, 937.5)),
    "steady_hump": Family(
        bottom=lambda p, x: _hump(x),
        surface=lambda p, x: np.full(np.shape(x), p["H0"]),
        discharge=(lambda p, x: _zero(x),),
        x_breaks=lambda p: (8.0, 12.0)),
    "dry_dam": Family(
        bottom=lambda p, x: _zero(x),
        surface=lambda p, x: np.where(x <= 0.0, p["h_left"], 0.0),
        discharge=(lambda p, x: _zero(x),),
        x_breaks=lambda p: (0.0,)),
    "vacuum": Family(
        bottom=lambda p, x: _zero(x),
        surface=lambda p, x: np.where(x <= 0.0, p["h_left"], p["h_right"]),
        discharge=(lambda p, x: np.where(x <= 0.0, p["q_left"], p["q_right"]),),
        x_breaks=lambda p: (0.0,)),
    "drain_1d": Family(
        bottom=lambda p, x: _rect_or_sine(p, x),
        surface=lambda p, x: np.full(np.shape(x), 10.0),
        discharge=(lambda p, x: np.where(x <= 50.0 / 3.0, -350.0, 350.0),),
        x_breaks=lambda p: (25.0 / 3.0, 12.5, 50.0 / 3.0)),
    "lake_2d": Family(
        bottom=lambda p, x, y: p["amp"] * np.exp(-50.0 * ((x - 0.5) ** 2 + (y - 0.5) ** 2)),
        surface=lambda p, x, y: np.full(np.broadcast(x, y).shape, 1.0),
        discharge=(lambda p, x, y: _zero(x, y), lambda p, x, y: _zero(x, y))),
    "accuracy_2d": Family(
        bottom=lambda p, x, y: _acc2_bottom(x, y),
        surface=lambda p, x, y: (10.0 + np.exp(np.sin(2.0 * np.pi * x)) * np.cos(2.0 * np.pi * y)
                                 + _acc2_bottom(x, y)),
        discharge=(lambda p, x, y: np.sin(np.cos(2.0 * np.pi * x)) * np.sin(2.0 * np.pi * y),
                   lambda p, x, y: np.cos(2.0 * np.pi * x) * np.cos(np.sin(2.0 * np.pi * y)))),
    "perturbation_2d": Family(
        bottom=lambda p, x, y: 0.8 * np.exp(-5.0 * (x - 0.9) ** 2 - 50.0 * (y - 0.5) ** 2),
        surface=lambda p, x, y: 1.0 + np.where(_box(x, 0.05, 0.15), 0.01, 0.0) + 0.0 * y,
        discharge=(lambda p, x, y: _zero(x, y), lambda p, x, y: _zero(x, y)),
        x_breaks=lambda p: (0.05, 0.15)),
    "circular_dam": Family(
        bottom=lambda p, x, y: _circle_bottom(x, y),
        surface=lambda p, x, y: np.where((x - 1.25) ** 2 + (y - 1.0) ** 2 <= 0.01, 1.1, 0.6),
        discharge=(lambda p, x, y: _zero(x, y), lambda p, x, y: _zero(x, y)),
        subcells=8),
    "oblique_dam": Family(
        bottom=lambda p, x, y: _zero(x, y),
        surface=lambda p, x, y: np.where(x + y <= 0.0, 1.0, 0.0),
        discharge=(lambda p, x, y: _zero(x, y), lambda p, x, y: _zero(x, y)),
        subcells=8),
    "drain_2d": Family(
        bottom=lambda p, x, y: _rect_or_sine(p, x) + 0.0 * y,
        surface=lambda p, x, y: np.full(np.broadcast(x, y).shape, 10.0),
        discharge=(lambda p, x, y: np.where(x <= 50.0 / 3.0, -350.0, 350.0) + 0.0 * y,
                   lambda p, x, y: _zero(x, y)),
        x_breaks=lambda p: (25.0 / 3.0, 12.5, 50.0 / 3.0)),
}


# --------------------------------------------------------------------------
# case records

Side = Tuple[str, object]


@dataclass(frozen=True)
class CaseSpec:
    """One benchmark problem.

    ``bc`` holds one ``(lo, hi)`` pair of ``(kind, value)`` sides per axis;
    a string value names an entry of :data:`TIME_FUNCTIONS`. ``params`` is a
    sorted tuple of ``(key, float)`` pairs read by the family functions.
    """

    name: str
    family: str
    domain: Tuple[float, ...]
    n: Tuple[int, ...]
    t_final: float
    bc: Tuple[Tuple[Side, Side], ...]
    params: Tuple[Tuple[str, float], ...] = ()
    cfl: float = 0.6
    pp: bool = False
    strict_pp: bool = False
    snapshots: Tuple[float, ...] = ()
    reference: str = "none"
    refine: int = 8
    g: float = GRAVITY
    description: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown case family {self.family!r}")
        if len(self.domain) != 2 * len(self.n) or len(self.bc) != len(self.n):
            raise ConfigurationError("domain, n and bc must agree on the dimension")
        if any(int(k) < 10 for k in self.n):
            raise ConfigurationError(f"need at least 10 cells per axis, got {self.n}")
        if self.reference not in REFERENCE_KINDS:
            raise ConfigurationError(f"unknown reference kind {self.reference!r}")
        if not self.t_final >= 0.0:
            raise ConfigurationError("t_final must be non-negative")
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigurationError("cfl must lie in (0, 1]")

    @property
    def dim(self) -> int:
        return len(self.n)

    @property
    def p(self) -> Dict[str, float]:
        return dict(self.params)

    @property
    def fam(self) -> Family:
        return FAMILIES[self.family]

    def bottom(self, *xy):
        return self.fam.bottom(self.p, *xy)

    def surface(self, *xy):
        return self.fam.surface(self.p, *xy)

    def discharges(self, *xy):
        return tuple(q(self.p, *xy) for q in self.fam.discharge)

    def grid(self, n: Optional[Tuple[int, ...]] = None):
        n = tuple(n or self.n)
        if self.dim == 1:
            return build_grid_1d(self.domain[0], self.domain[1], n[0])
        return build_grid_2d(*self.domain, n[0], n[1])

    def boundary(self):
        """One :class:`BoundaryCondition` per axis."""
        out = []
        for lo, hi in self.bc:
            out.append(BoundaryCondition(_side(lo), _side(hi)))
        return tuple(out)

    def with_overrides(self, **kw) -> "CaseSpec":
        kw = {k: v for k, v in kw.items() if v is not None}
        if "n" in kw:
            kw["n"] = tuple(int(v) for v in kw["n"])
        if "snapshots" in kw:
            kw["snapshots"] = tuple(sorted(float(v) for v in kw["snapshots"]))
        return replace(self, **kw)


def _side(s: Side) -> SideBC:
    kind, value = s
    if isinstance(value, str):
        if value not in TIME_FUNCTIONS:
            raise ConfigurationError(f"unknown boundary function {value!r}")
        value = TIME_FUNCTIONS[value]
    return SideBC(kind, value)


def _pair(kind, value=None, hi=None):
    lo = (kind, value)
    return (lo, hi if hi is not None else lo)


_T = _pair(TRANSMISSIVE)
_P = _pair(PERIODIC)


def catalogue() -> Tuple[CaseSpec, ...]:
    c = []
    for tag, params, pp, desc in (
            ("smooth", (("H0", 10.0), ("amp", 5.0)), False, "lake at rest over a smooth bump"),
            ("step", (("H0", 10.0), ("step", 1.0)), False, "lake at rest over a step"),
            ("dry", (("H0", 10.0), ("amp", 10.0)), True, "lake at rest touching a dry point")):
        c.append(CaseSpec(f"ex4.1-{tag}", "lake_1d", (0.0, 10.0), (200,), 0.5, (_T,),
                          params, pp=pp, reference="exact", description=desc))
    c.append(CaseSpec("ex4.2", "accuracy_1d", (0.0, 1.0), (200,), 0.1, (_P,),
                      reference="fine_grid", refine=16,
                      description="smooth periodic flow for order studies"))
    c.append(CaseSpec("ex4.3", "tidal", (0.0, TIDAL_LENGTH), (200,), 7552.13,
                      (((FIXED_SURFACE, "tidal"), (FIXED_DISCHARGE, 0.0)),),
                      reference="asymptotic", description="tidal wave over a varying bottom"))
    for tag, eps in (("big", 0.2), ("small", 0.001)):
        c.append(CaseSpec(f"ex4.4-{tag}", "perturbation_1d", (0.0, 2.0), (200,), 0.2, (_T,),
                          (("eps", eps),), reference="fine_grid",
                          description=f"pulse of height {eps} over a lake at rest"))
    c.append(CaseSpec("ex4.5", "dam_bump", (0.0, 1500.0), (400,), 60.0, (_T,),
                      snapshots=(0.0, 15.0, 60.0), reference="fine_grid",
                      description="dam break over a rectangular bump"))
    for k, (q, H) in enumerate(((4.42, 2.0), (1.53, 0.41), (0.18, 0.33)), start=1):
        c.append(CaseSpec(f"ex4.6-case{k}", "steady_hump", (0.0, 25.0), (400,), 200.0,
                          (((STEADY_INFLOW, q), (STEADY_OUTFLOW, H)),), (("H0", 0.5),),
                          description=f"flow over a hump, inflow {q}, outflow level {H}"))
    c.append(CaseSpec("ex4.7-dry", "dry_dam", (-300.0, 300.0), (250,), 12.0, (_T,),
                      (("h_left", 10.0),), pp=True, strict_pp=True, snapshots=(4.0, 8.0, 12.0),
                      reference="exact", description="dam break onto a dry bed"))
    c.append(CaseSpec("ex4.7-vacuum", "vacuum", (-200.0, 400.0), (250,), 6.0, (_T,),
                      (("h_left", 5.0), ("h_right", 10.0), ("q_left", 0.0), ("q_right", 400.0)),
                      pp=True, strict_pp=True, snapshots=(2.0, 4.0, 6.0), reference="exact",
                      description="diverging flow opening a dry gap"))
    c.append(CaseSpec("ex4.7-step", "drain_1d", (0.0, 25.0), (250,), 0.65, (_T,),
                      (("shape", 0.0),), pp=True, strict_pp=True, snapshots=(0.25, 0.65),
                      reference="fine_grid",
                      description="outflow draining a step into a dry region"))
    for tag, amp, pp in (("smooth", 0.8, False), ("dry", 1.0, True)):
        c.append(CaseSpec(f"ex4.8-{tag}", "lake_2d", (0.0, 1.0, 0.0, 1.0), (100, 100), 0.1,
                          (_T, _T), (("amp", amp),), pp=pp, reference="exact",
                          description="2D lake at rest over a Gaussian mound"))
    c.append(CaseSpec("ex4.9", "accuracy_2d", (0.0, 1.0, 0.0, 1.0), (100, 100), 0.05, (_P, _P),
                      reference="fine_grid", refine=4,
                      description="smooth periodic 2D flow for order studies"))
    c.append(CaseSpec("ex4.10", "perturbation_2d", (0.0, 2.0, 0.0, 1.0), (200, 100), 0.6,
                      (_T, _T), snapshots=(0.12, 0.24, 0.36, 0.48, 0.6),
                      description="2D pulse crossing an elongated hump"))
    c.append(CaseSpec("ex4.11", "circular_dam", (0.0, 2.0, 0.0, 2.0), (200, 200), 0.15,
                      (_T, _T), description="circular dam break next to a submerged mound"))
    c.append(CaseSpec("ex4.12-oblique", "oblique_dam", (-0.5, 0.5, -0.5, 0.5), (100, 100), 0.1,
                      (_T, _T), pp=True, snapshots=(0.02, 0.06, 0.1), reference="exact",
                      description="oblique dam break onto a dry bed"))
    for tag, shape in (("rect", 0.0), ("hump", 1.0)):
        c.append(CaseSpec(f"ex4.12-{tag}", "drain_2d", (0.0, 25.0, 0.0, 25.0), (250, 250), 0.65,
                          (_T, _T), (("shape", shape),), pp=True,
                          snapshots=(0.05, 0.25, 0.65), reference="fine_grid",
                          description="2D outflow draining over a bottom feature"))
    return tuple(c)


def get_case(name: str) -> CaseSpec:
    for case in catalogue():
        if case.name == name:
            return case
    raise ConfigurationError(f"unknown case {name!r}; see the 'list' command")


# --------------------------------------------------------------------------
# references

def reference_solution(case: CaseSpec, x, t: float, y=None) -> Dict[str, np.ndarray]:
    """Point values ``h``, ``H`` and discharges of the exact/asymptotic solution."""
    x = np.asarray(x, dtype=float)
    p = case.p
    g = case.g
    if case.reference not in ("exact", "asymptotic"):
        raise ConfigurationError(f"case {case.name} has no closed-form reference")
    if case.family in ("lake_1d", "lake_2d"):
        xy = (x,) if case.dim == 1 else (x, y)
        b = case.bottom(*xy)
        H = case.surface(*xy)
        out = {"H": H, "h": np.maximum(H - b, 0.0), "hu": np.zeros_like(H)}
        if case.dim == 2:
            out["hv"] = np.zeros_like(H)
        return out
    if case.family == "tidal":
        H = np.full(x.shape, tidal_surface(t))
        return {"H": H, "h": H - case.bottom(x), "hu": tidal_discharge(x, t)}
    if case.family == "dry_dam":
        h, hu = ritter(x, t, p["h_left"], g)
        return {"H": h, "h": h, "hu": hu}
    if case.family == "vacuum":
        h, hu = double_rarefaction_dry(x, t, p["h_left"], p["q_left"] / p["h_left"],
                                       p["h_right"], p["q_right"] / p["h_right"], g)
        return {"H": h, "h": h, "hu": hu}
    if case.family == "oblique_dam":
        s = (x + np.asarray(y, dtype=float)) / math.sqrt(2.0)
        h, qn = ritter(s, t, 1.0, g)
        return {"H": h, "h": h, "hu": qn / math.sqrt(2.0), "hv": qn / math.sqrt(2.0)}
    raise ConfigurationError(f"no closed-form reference for family {case.family!r}")


def reference_breakpoints(case: CaseSpec, t: float) -> Tuple[float, ...]:
    """Kinks of the 1D closed-form references, for exact cell averaging."""
    p, g = case.p, case.g
    if case.family == "dry_dam":
        c = math.sqrt(g * p["h_left"])
        return (-c * t, 2.0 * c * t)
    if case.family == "vacuum":
        cl, cr = math.sqrt(g * p["h_left"]), math.sqrt(g * p["h_right"])
        ul, ur = p["q_left"] / p["h_left"], p["q_right"] / p["h_right"]
        return tuple(v * t for v in (ul - cl, ul + 2 * cl, ur - 2 * cr, ur + cr))
    return case.fam.x_breaks(p)


# --------------------------------------------------------------------------
# config round trip

_SCALARS = {"family": str, "t_final": float, "cfl": float, "refine": int, "g": float,
            "reference": str, "description": str}


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def _fmt_side(side: Side) -> str:
    kind, value = side
    return kind if value is None else f"{kind}:{_fmt(value)}"


def _parse_side(text: str) -> Side:
    kind, _, value = text.strip().partition(":")
    if not value:
        return (kind, None)
    try:
        return (kind, float(value))
    except ValueError:
        return (kind, value)


def case_to_config(cases, parser: Optional[configparser.ConfigParser] = None) -> configparser.ConfigParser:
    """Write specs into a config parser, one section per case."""
    parser = parser or configparser.ConfigParser(interpolation=None)
    for case in ([cases] if isinstance(cases, CaseSpec) else cases):
        sec = {
            "family": case.family,
            "domain": ", ".join(_fmt(float(v)) for v in case.domain),
            "n": ", ".join(str(int(v)) for v in case.n),
            "t_final": _fmt(float(case.t_final)),
            "cfl": _fmt(float(case.cfl)),
            "pp": str(bool(case.pp)).lower(),
            "strict_pp": str(bool(case.strict_pp)).lower(),
            "snapshots": ", ".join(_fmt(float(v)) for v in case.snapshots),
            "reference": case.reference,
            "refine": str(case.refine),
            "g": _fmt(float(case.g)),
            "description": case.description,
            "params": ", ".join(f"{k}={_fmt(float(v))}" for k, v in case.params),
        }
        for axis, (lo, hi) in zip("xy", case.bc):
            sec[f"bc_{axis}"] = f"{_fmt_side(lo)}, {_fmt_side(hi)}"
        parser[case.name] = sec
    return parser


def _floats(text):
    return tuple(float(v) for v in text.split(",") if v.strip())


def case_from_section(name: str, sec, base: Optional[CaseSpec] = None) -> CaseSpec:
    """Build a spec from a config section; missing keys fall back to ``base``
    (by default the catalogue entry of the same name)."""
    if base is None:
        try:
            base = get_case(name)
        except ConfigurationError:
            base = None
    kw = {} if base is None else {f.name: getattr(base, f.name) for f in fields(CaseSpec)}
    kw["name"] = name
    try:
        for key, conv in _SCALARS.items():
            if key in sec:
                kw[key] = conv(sec[key])
        if "domain" in sec:
            kw["domain"] = _floats(sec["domain"])
        if "n" in sec:
            kw["n"] = tuple(int(v) for v in sec["n"].split(","))
        for key in ("pp", "strict_pp"):
            if key in sec:
                kw[key] = sec.getboolean(key) if hasattr(sec, "getboolean") else sec[key] == "true"
        if "snapshots" in sec:
            kw["snapshots"] = _floats(sec["snapshots"])
        if "params" in sec:
            pairs = [item.split("=") for item in sec["params"].split(",") if item.strip()]
            kw["params"] = tuple((k.strip(), float(v)) for k, v in pairs)
        bcs = []
        for axis in "xy":
            if f"bc_{axis}" in sec:
                lo, hi = sec[f"bc_{axis}"].split(",")
                bcs.append((_parse_side(lo), _parse_side(hi)))
        if bcs:
            kw["bc"] = tuple(bcs)
        return CaseSpec(**kw)
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"bad config section [{name}]: {exc}") from exc


def read_config(text: str) -> Tuple[CaseSpec, ...]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"unreadable config: {exc}") from exc
    return tuple(case_from_section(name, parser[name]) for name in parser.sections())


def write_config(cases) -> str:
    buf = io.StringIO()
    case_to_config(cases).write(buf)
    return buf.getvalue()
