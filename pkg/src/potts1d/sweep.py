"""Deterministic parameter-grid evaluation, peak detection, and the
free-energy ordering check in the spin-state count.

Grids are linear with inclusive endpoints.  Evaluation order is grid-index
order, so a table built twice from the same inputs is identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import ModelParams, ThermoState
from .thermo import ThermoPoint, thermo_point

GRID_AXES = ("beta", "T", "h", "J", "q")
OBSERVABLES = ("f", "S", "m", "chi", "C")


@dataclass(frozen=True)
class GridSpec:
    """A linear grid over one parameter axis, endpoints included."""

    axis: str
    min: float
    max: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.axis not in GRID_AXES:
            raise ValueError(f"axis must be one of {GRID_AXES}, got {self.axis!r}")
        if self.scale != "linear":
            raise ValueError("only linear grids are supported")
        if not self.steps >= 2:
            raise ValueError("steps must be at least 2")
        if not self.min < self.max:
            raise ValueError("min must be strictly less than max")
        if self.axis == "q":
            for p in self.points():
                if not float(p).is_integer() or p < 2:
                    raise ValueError(f"q grid point {p!r} is not an integer >= 2")

    def points(self) -> np.ndarray:
        # linspace keeps both endpoints exact.
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class SweepRow:
    """One evaluated grid point with its full effective parameter context."""

    coords: tuple[float, ...]
    q: int
    J: float
    h: float
    beta: float
    point: ThermoPoint


@dataclass(frozen=True)
class SweepTable:
    """Rows in grid-index order plus the base context they were built from."""

    axes: tuple[GridSpec, ...]
    rows: tuple[SweepRow, ...]
    base_params: ModelParams
    base_state: ThermoState | None


def _apply_axis(params: ModelParams, state: ThermoState | None, axis: str, value: float):
    try:
        if axis == "beta":
            return params, ThermoState(value)
        if axis == "T":
            return params, ThermoState.from_temperature(value)
        if axis == "q":
            return replace(params, q=int(round(value))), state
        return replace(params, **{axis: value}), state
    except ValueError as err:
        raise ValueError(f"invalid grid point {axis}={value!r}: {err}") from err


def _require_state(state: ThermoState | None, axes: tuple[GridSpec, ...]) -> None:
    if state is None and not any(g.axis in ("beta", "T") for g in axes):
        raise ValueError("a base ThermoState is required unless beta or T is swept")


def sweep_1d(base_params: ModelParams, base_state: ThermoState | None, grid: GridSpec) -> SweepTable:
    """Evaluate all five thermodynamic functions along one grid axis."""
    _require_state(base_state, (grid,))
    rows = []
    for v in grid.points():
        v = float(v)
        p, s = _apply_axis(base_params, base_state, grid.axis, v)
        rows.append(SweepRow((v,), p.q, p.J, p.h, s.beta, thermo_point(p, s)))
    return SweepTable((grid,), tuple(rows), base_params, base_state)


def sweep_2d(
    base_params: ModelParams,
    base_state: ThermoState | None,
    grid_x: GridSpec,
    grid_y: GridSpec,
) -> SweepTable:
    """Evaluate a 2D grid in row-major order, the x coordinate varying slowest."""
    if grid_x.axis == grid_y.axis:
        raise ValueError("the two grids must use distinct axes")
    _require_state(base_state, (grid_x, grid_y))
    rows = []
    for vx in grid_x.points():
        vx = float(vx)
        px, sx = _apply_axis(base_params, base_state, grid_x.axis, vx)
        for vy in grid_y.points():
            vy = float(vy)
            p, s = _apply_axis(px, sx, grid_y.axis, vy)
            rows.append(SweepRow((vx, vy), p.q, p.J, p.h, s.beta, thermo_point(p, s)))
    return SweepTable((grid_x, grid_y), tuple(rows), base_params, base_state)


def find_peak(table: SweepTable, observable: str) -> tuple[float, float]:
    """Grid point maximizing one observable of a 1D table.

    Ties are broken toward the smallest grid index.
    """
    if observable not in OBSERVABLES:
        raise ValueError(f"observable must be one of {OBSERVABLES}, got {observable!r}")
    if len(table.axes) != 1:
        raise ValueError("find_peak needs a 1D table")
    if not table.rows:
        raise ValueError("empty table")
    best_coord = table.rows[0].coords[0]
    best_value = getattr(table.rows[0].point, observable)
    for row in table.rows[1:]:
        value = getattr(row.point, observable)
        if value > best_value:
            best_value = value
            best_coord = row.coords[0]
    return best_coord, best_value


def refine_peak(fn, lo: float, hi: float, iters: int = 90) -> tuple[float, float]:
    """Golden-section maximizer of a unimodal callable on [lo, hi]."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = fn(d)
    x = 0.5 * (lo + hi)
    return x, fn(x)


def q_ordering_check(beta_grid: GridSpec, h: float, J: float, q_list) -> bool:
    """True iff the free energy strictly decreases along q_list at every beta.

    The pairwise difference of log dominant eigenvalues is evaluated in the
    cancellation-free form log1p((q' - q) / (e^{-x} + (q - 1))) with
    x = 2(h + J*beta), so strictness is decided on the exact increment
    rather than on subtractions of nearly equal free energies.  Increments
    below double underflow (x < -745) report as not strictly decreasing.
    """
    if beta_grid.axis != "beta":
        raise ValueError("q_ordering_check needs a beta grid")
    qs = [int(q) for q in q_list]
    if any(b <= a for a, b in zip(qs, qs[1:])):
        raise ValueError("q_list must be strictly increasing")
    if any(q < 2 for q in qs):
        raise ValueError("q values must be at least 2")
    for beta in beta_grid.points():
        x = 2.0 * (h + J * float(beta))
        for qa, qb in zip(qs, qs[1:]):
            # s = e^x / (1 + (qa-1) e^x), bounded in (0, 1/(qa-1)] either way.
            if x > 0.0:
                s = 1.0 / (math.exp(-x) + (qa - 1))
            else:
                ex = math.exp(x)
                s = ex / (1.0 + (qa - 1) * ex)
            increment = math.log1p((qb - qa) * s)
            if not increment > 0.0:
                return False
    return True
