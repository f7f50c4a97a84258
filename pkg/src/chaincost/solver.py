"""Numeric location of cost-equality points, critical curves, and surfaces.

Three routes to the same critical effectiveness are provided and
cross-checked against each other in the test suite:

* ``direct_Nn``: root-find the cost equality at the description's own
  clustering level (no approximation, slowest);
* ``N1_rescale``: re-express both strategy sides at N = 1 exactly, apply
  the single-stage closed form, and map the answer back through the
  conserved survival products (fast, exact up to rounding);
* ``closed_form``: the level-N closed form where one exists.

The root finder is a bracketed secant/bisection hybrid: a secant step is
taken when it lands inside the bracket, otherwise the bracket is bisected,
so convergence is guaranteed while staying superlinear on smooth
objectives.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .chain import Strategy
from .critical import (
    CriticalQuery,
    StrategyPair,
    _em_crit_vs_inspection_N1_expr,
    _em_crit_vs_inspection_Nn_value,
    _em_crit_vs_zero_N1_expr,
    _em_crit_vs_zero_value,
)
from .errors import DegenerateBracket, DegenerateChain, NoConvergence, NoRoot
from .homogenize import HomogenizedChain, masked_h, uniform_unit_cost

__all__ = [
    "Method",
    "SolveSettings",
    "CurvePoint",
    "CriticalCurve",
    "Dominance",
    "SurfaceCell",
    "SuperioritySurface",
    "find_cost_equality",
    "trace_critical_curve",
    "superiority_surface",
    "default_d_grid",
    "default_ei_grid",
    "scan_roots",
]

log = logging.getLogger(__name__)

_SCAN_SAMPLES = 64


class Method(enum.Enum):
    """How a critical value is computed."""

    DIRECT_NN = "direct_Nn"
    N1_RESCALE = "N1_rescale"
    CLOSED_FORM = "closed_form"

    @property
    def csv_name(self) -> str:
        return _METHOD_CSV[self]

    @classmethod
    def from_name(cls, name: str) -> "Method":
        for method, csv in _METHOD_CSV.items():
            if name in (method.value, csv):
                return method
        options = ", ".join(sorted({m.value for m in cls} | set(_METHOD_CSV.values())))
        raise ValueError(f"unknown method {name!r}, expected one of: {options}")


_METHOD_CSV = {
    Method.DIRECT_NN: "numeric",
    Method.N1_RESCALE: "closed_N1_rescaled",
    Method.CLOSED_FORM: "closed_Nn",
}


@dataclass(frozen=True)
class SolveSettings:
    """Tolerances and iteration budget for root finding.

    ``tolerance`` bounds both the bracket width on the solved parameter and
    the residual cost gap relative to the larger side's unit cost.
    ``bracket`` optionally overrides the default search interval of
    :func:`find_cost_equality`.
    """

    tolerance: float = 1e-10
    max_iterations: int = 200
    bracket: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tolerance) and self.tolerance > 0.0):
            raise ValueError(f"tolerance must be > 0, got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations!r}")
        if self.bracket is not None:
            lo, hi = self.bracket
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValueError(f"bracket must satisfy lo < hi, got {self.bracket!r}")


# === Root finding ==========================================================


def _hybrid_root(
    f: Callable[[float], float],
    a: float,
    b: float,
    fa: float,
    fb: float,
    settings: SolveSettings,
    fscale: Callable[[float], float] | None = None,
) -> float:
    """Find the root of f in a sign-changing bracket [a, b].

    Secant steps are used while they land strictly inside the bracket;
    otherwise the midpoint is taken, so the bracket provably shrinks.
    Converges when the bracket is narrower than the tolerance and, when
    ``fscale`` is given, the residual satisfies |f| <= tol * scale.
    """
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise NoRoot(f"no sign change on [{a!r}, {b!r}]")
    x, fx = b, fb
    for iteration in range(settings.max_iterations):
        mid = 0.5 * (a + b)
        if fb != fa:
            x = b - fb * (b - a) / (fb - fa)
            if not min(a, b) < x < max(a, b):
                x = mid
        else:
            x = mid
        # Force a bisection step every third iteration so a stalling secant
        # endpoint cannot pin the bracket width.
        if iteration % 3 == 2:
            x = mid
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx > 0.0) == (fa > 0.0):
            a, fa = x, fx
        else:
            b, fb = x, fx
        if abs(b - a) <= settings.tolerance:
            if fscale is None or abs(fx) <= settings.tolerance * max(1.0, fscale(x)):
                return x
    raise NoConvergence(
        f"no convergence after {settings.max_iterations} iterations; "
        f"bracket [{a!r}, {b!r}], residual {fx!r}"
    )


def scan_roots(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    settings: SolveSettings,
    log_spaced: bool = False,
    fscale: Callable[[float], float] | None = None,
) -> list[float]:
    """All roots of f on [lo, hi] found by coarse scan plus refinement.

    The interval is sampled at 64 points (log-spaced for scale-free
    parameters such as damage probabilities), every sign change is refined
    with the hybrid root finder, and exact zeros are kept as-is. Sample
    points where f is undefined (degenerate economics) are skipped.

    Raises:
        DegenerateBracket: if f is identically zero at every sample, in
            which case "the" root is meaningless.
    """
    if log_spaced:
        if lo <= 0.0:
            raise ValueError(f"log-spaced scan needs lo > 0, got {lo!r}")
        grid = np.geomspace(lo, hi, _SCAN_SAMPLES)
    else:
        grid = np.linspace(lo, hi, _SCAN_SAMPLES)

    xs: list[float] = []
    fs: list[float] = []
    for x in grid:
        try:
            y = f(float(x))
        except DegenerateChain:
            continue
        if math.isnan(y):
            continue
        xs.append(float(x))
        fs.append(y)
    if not xs:
        return []
    if all(y == 0.0 for y in fs):
        raise DegenerateBracket(f"objective is identically zero on [{lo!r}, {hi!r}]")

    roots: list[float] = []
    for k in range(len(xs) - 1):
        if fs[k] == 0.0:
            roots.append(xs[k])
            continue
        if fs[k + 1] != 0.0 and (fs[k] > 0.0) != (fs[k + 1] > 0.0):
            roots.append(_hybrid_root(f, xs[k], xs[k + 1], fs[k], fs[k + 1], settings, fscale))
    if fs[-1] == 0.0:
        roots.append(xs[-1])
    return sorted(roots)


# === Cost equality =========================================================


_PAIR_SIDES = {
    StrategyPair.MONITORING_VS_ZERO: (Strategy.MONITORING, Strategy.ZERO),
    StrategyPair.MONITORING_VS_INSPECTION: (Strategy.MONITORING, Strategy.INSPECTION),
    StrategyPair.INSPECTION_VS_ZERO: (Strategy.INSPECTION, Strategy.ZERO),
}


def _side_cost_fn(
    q: CriticalQuery, side: Strategy, vary: str
) -> Callable[[float], float]:
    hm = masked_h(q.h, side)
    fixed = hm.C + hm.M + hm.I
    unit = hm.c + hm.m + hm.i

    def cost(x: float) -> float:
        d, em, ei = hm.d, hm.em, hm.ei
        if side is Strategy.INSPECTION:
            ei = q.e_i
        if vary == "d":
            d = x
        elif vary == "em" and side is Strategy.MONITORING:
            em = x
        elif vary == "ei" and side is Strategy.INSPECTION:
            ei = x
        return uniform_unit_cost(hm.N, d, em, ei, fixed, unit, hm.X0, hm.kappa)

    return cost


def find_cost_equality(
    q: CriticalQuery,
    vary: str,
    settings: SolveSettings | None = None,
) -> list[float]:
    """Parameter values at which the pair's unit costs coincide.

    Args:
        q: the comparison; the non-varied parameters come from ``q.h`` (and
            ``q.fixed_e_i`` for the inspection side).
        vary: one of "d", "em", "ei". "em" requires a pair involving the
            monitoring strategy, "ei" one involving inspection. Varying d
            moves both sides; varying an effectiveness moves only the side
            it belongs to.
        settings: tolerances and optional bracket override. The default
            bracket is [1e-6, 1-1e-6] for d (scanned log-spaced) and
            [0, 1] for effectiveness parameters.

    Returns:
        Sorted equality points, each accurate to ``settings.tolerance`` in
        the parameter and in relative cost gap.

    Raises:
        NoRoot: if the costs never cross on the bracket.
        DegenerateBracket: if the costs coincide identically.
        NoConvergence: if refinement stalls within the iteration budget.
    """
    if settings is None:
        settings = SolveSettings()
    side_a, side_b = _PAIR_SIDES[q.pair]
    if vary == "em" and Strategy.MONITORING not in (side_a, side_b):
        raise ValueError(f"pair {q.pair.value} has no monitoring side to vary em on")
    if vary == "ei" and Strategy.INSPECTION not in (side_a, side_b):
        raise ValueError(f"pair {q.pair.value} has no inspection side to vary ei on")
    if vary not in ("d", "em", "ei"):
        raise ValueError(f"vary must be 'd', 'em', or 'ei', got {vary!r}")

    cost_a = _side_cost_fn(q, side_a, vary)
    cost_b = _side_cost_fn(q, side_b, vary)

    def gap(x: float) -> float:
        return cost_a(x) - cost_b(x)

    def scale(x: float) -> float:
        return max(abs(cost_a(x)), abs(cost_b(x)))

    log_spaced = vary == "d"
    if settings.bracket is not None:
        lo, hi = settings.bracket
    elif vary == "d":
        lo, hi = 1e-6, 1.0 - 1e-6
    else:
        lo, hi = 0.0, 1.0
    if vary == "d" and not (0.0 < lo < hi < 1.0):
        raise ValueError(f"d bracket must lie inside (0, 1), got ({lo!r}, {hi!r})")
    if vary in ("em", "ei") and not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"{vary} bracket must lie inside [0, 1], got ({lo!r}, {hi!r})")

    roots = scan_roots(gap, lo, hi, settings, log_spaced=log_spaced, fscale=scale)
    if not roots:
        raise NoRoot(f"{q.pair.value} costs never coincide for {vary} in [{lo!r}, {hi!r}]")
    return roots


# === Critical curves =======================================================


@dataclass(frozen=True)
class CurvePoint:
    """One traced point: damage probability, threshold, physical or not."""

    d: float
    value: float
    in_range: bool


@dataclass(frozen=True)
class CriticalCurve:
    """Critical effectiveness as a function of damage probability.

    Points are strictly increasing in d and carry finite values; grid
    points where the method is undefined are omitted. ``in_range`` marks
    values inside [0, 1]; outside values mean one strategy dominates the
    whole physical effectiveness range at that d.
    """

    pair: StrategyPair
    method: Method
    N: int
    points: tuple[CurvePoint, ...]


def default_d_grid(lo: float = 1e-4, hi: float = 0.5, num: int = 200) -> tuple[float, ...]:
    """Log-spaced damage-probability grid used by curves and surfaces."""
    return tuple(float(x) for x in np.geomspace(lo, hi, num))


def default_ei_grid(num: int = 50) -> tuple[float, ...]:
    """Linear inspection-effectiveness grid used by surfaces."""
    return tuple(float(x) for x in np.linspace(0.0, 1.0, num))


def _validate_d_grid(d_grid: Sequence[float]) -> tuple[float, ...]:
    grid = tuple(float(d) for d in d_grid)
    if not grid:
        raise ValueError("d_grid must not be empty")
    last = 0.0
    for d in grid:
        if not 0.0 < d < 1.0:
            raise ValueError(f"grid d values must lie in (0, 1), got {d!r}")
        if d <= last:
            raise ValueError("d_grid must be strictly increasing")
        last = d
    return grid


def _em_crit_n1_grid(q: CriticalQuery, d, ei) -> np.ndarray:
    """Critical effectiveness via the exact N = 1 re-expression, elementwise.

    ``d`` and ``ei`` broadcast against each other (a curve passes a grid
    and a scalar, a surface passes a column and a row). Each point is
    re-expressed at a single virtual stage, the linear single-stage
    threshold is solved there, and the value is mapped back through the
    conserved monitored-survival product (1-(1-em)d)**N = 1-(1-em1)d1.
    nan marks points where a step is undefined: inspection removing the
    whole volume, or an N = 1 value too low to correspond to any level-N
    effectiveness.

    The monitoring side has no removal, so its per-unit costs scale by
    exactly N (all survival weights are one), as do the fixed totals. The
    inspection side's per-unit costs scale by (1 - theta)/(ei*d), the
    ratio of removal rates between the two levels, and the conserved
    products p0 = (1-d)**N and theta = (1-ei*d)**N pin d1 = 1 - p0 and
    ei1 = (1 - theta)/(1 - p0).
    """
    h = q.h
    N = h.N
    d = np.asarray(d, dtype=float)
    ei = np.asarray(ei, dtype=float)
    shape = np.broadcast_shapes(d.shape, ei.shape)
    if h.kappa <= 0.0 or h.c + h.m <= 0.0:
        return np.full(shape, math.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        d1 = -np.expm1(N * np.log1p(-d))
        if q.pair is StrategyPair.MONITORING_VS_ZERO:
            em1 = _em_crit_vs_zero_N1_expr(d1, h.c * N, h.m * N, h.M * N, h.X0, h.kappa)
        else:
            x1 = ei * d
            one_m_theta = -np.expm1(N * np.log1p(-x1))
            ei1 = np.minimum(1.0, one_m_theta / d1)
            ci_i1 = np.where(
                x1 > 0.0,
                (h.c + h.i) * one_m_theta / np.where(x1 > 0.0, x1, 1.0),
                (h.c + h.i) * N,
            )
            em1 = _em_crit_vs_inspection_N1_expr(
                d=d1, cm_m=(h.c + h.m) * N, CM=(h.C + h.M) * N,
                ci_i=ci_i1, CI=(h.C + h.I) * N, ei=ei1, X0=h.X0, kappa=h.kappa,
            )
            em1 = np.where(1.0 - ei1 * d1 > 0.0, em1, math.nan)
        em1 = np.broadcast_to(em1, shape)
        s1 = (1.0 - em1) * d1
        mappable = s1 < 1.0
        s1 = np.where(mappable, s1, 0.0)
        value = 1.0 - (-np.expm1(np.log1p(-s1) / N)) / d
        return np.where(mappable, value, math.nan)


def _zero_side_cost(h: HomogenizedChain, d: float) -> float:
    return uniform_unit_cost(h.N, d, 0.0, 0.0, h.C, h.c, h.X0, h.kappa)


def _inspection_cost_at(h: HomogenizedChain, d: float, ei: float) -> float:
    return uniform_unit_cost(h.N, d, 0.0, ei, h.C + h.I, h.c + h.i, h.X0, h.kappa)


def _monitoring_cost_at(h: HomogenizedChain, d: float, em: float) -> float:
    return uniform_unit_cost(h.N, d, em, 0.0, h.C + h.M, h.c + h.m, h.X0, h.kappa)


def _em_crit_closed(q: CriticalQuery, d: float, ei: float) -> float | None:
    h = q.h
    if q.pair is StrategyPair.MONITORING_VS_ZERO:
        return _em_crit_vs_zero_value(h.N, d, h.c, h.m, h.M, h.X0, h.kappa)
    cu_i = _inspection_cost_at(h, d, ei)
    return _em_crit_vs_inspection_Nn_value(
        N=h.N, d=d, cm_m=h.c + h.m, CM=h.C + h.M,
        inspection_unit_cost=cu_i, X0=h.X0, kappa=h.kappa,
    )


def _em_crit_direct(
    q: CriticalQuery, d: float, ei: float, settings: SolveSettings, strict: bool = False
) -> float | None:
    """Root-find the level-N threshold, allowing values beyond [0, 1].

    The monitoring cost is strictly decreasing in e_m, so a single root is
    bracketed (if it exists) on [max(-1, 1 - 1/d), 2].
    """
    h = q.h
    if q.pair is StrategyPair.MONITORING_VS_ZERO:
        other = _zero_side_cost(h, d)
    else:
        other = _inspection_cost_at(h, d, ei)
    lo = -1.0 if d <= 0.5 else 1.0 - 1.0 / d + 1e-9
    hi = 2.0

    def gap(em: float) -> float:
        return _monitoring_cost_at(h, d, em) - other

    def scale(em: float) -> float:
        return max(abs(_monitoring_cost_at(h, d, em)), abs(other))

    fa, fb = gap(lo), gap(hi)
    if fa != 0.0 and fb != 0.0 and (fa > 0.0) == (fb > 0.0):
        return None
    try:
        return _hybrid_root(gap, lo, hi, fa, fb, settings, scale)
    except NoConvergence:
        if strict:
            raise
        log.debug("direct threshold did not converge at d=%r", d)
        return None


def _ei_crit_direct(q: CriticalQuery, d: float, settings: SolveSettings) -> float | None:
    """Smallest inspection effectiveness tying zero maintenance at d."""
    h = q.h

    def gap(ei: float) -> float:
        return _inspection_cost_at(h, d, ei) - _zero_side_cost(h, d)

    def scale(ei: float) -> float:
        return max(abs(_inspection_cost_at(h, d, ei)), abs(_zero_side_cost(h, d)))

    try:
        roots = scan_roots(gap, 0.0, 1.0, settings, fscale=scale)
    except DegenerateBracket:
        return None
    return roots[0] if roots else None


def trace_critical_curve(
    q: CriticalQuery,
    d_grid: Sequence[float] | None = None,
    method: Method = Method.DIRECT_NN,
    settings: SolveSettings | None = None,
    strict: bool = False,
) -> CriticalCurve:
    """Critical effectiveness across a damage-probability grid.

    For the monitoring pairs all three methods are available and agree up
    to solver tolerance; the inspection-vs-zero pair has no closed form
    and supports only ``direct_Nn`` (tracing the smallest crossing in
    [0, 1]). Grid points where the method has no finite answer are
    omitted from the curve; out-of-[0, 1] values are kept and flagged via
    ``in_range``. With ``strict`` a non-converging point raises instead of
    being dropped.
    """
    if settings is None:
        settings = SolveSettings()
    grid = default_d_grid() if d_grid is None else _validate_d_grid(d_grid)
    if q.pair is StrategyPair.INSPECTION_VS_ZERO and method is not Method.DIRECT_NN:
        raise ValueError(
            f"pair {q.pair.value} has no closed form; use method {Method.DIRECT_NN.value}"
        )
    ei = q.e_i
    n1_values = None
    if method is Method.N1_RESCALE and q.pair is not StrategyPair.INSPECTION_VS_ZERO:
        n1_values = _em_crit_n1_grid(q, np.asarray(grid), ei)

    points: list[CurvePoint] = []
    for k, d in enumerate(grid):
        if q.pair is StrategyPair.INSPECTION_VS_ZERO:
            value = _ei_crit_direct(q, d, settings)
        elif method is Method.CLOSED_FORM:
            value = _em_crit_closed(q, d, ei)
        elif method is Method.N1_RESCALE:
            value = float(n1_values[k])
        else:
            value = _em_crit_direct(q, d, ei, settings, strict)
        if value is None or not math.isfinite(value):
            log.debug("curve point dropped at d=%r (method %s)", d, method.value)
            continue
        points.append(CurvePoint(d=d, value=value, in_range=0.0 <= value <= 1.0))
    return CriticalCurve(pair=q.pair, method=method, N=q.h.N, points=tuple(points))


# === Superiority surface ===================================================


class Dominance(enum.Enum):
    """Verdict of a surface cell at a sampled critical effectiveness."""

    MONITORING = "monitoring"
    INSPECTION = "inspection"
    EITHER = "either"


@dataclass(frozen=True)
class SurfaceCell:
    """One (d, e_i) cell: the threshold (nan if none) and who wins.

    ``em_crit`` outside [0, 1] still identifies the dominant side; inside,
    either strategy can win depending on the achieved effectiveness.
    """

    d: float
    ei: float
    em_crit: float
    dominant: Dominance


@dataclass(frozen=True)
class SuperioritySurface:
    """Monitoring-vs-inspection verdicts over a rectangular (d, e_i) grid."""

    d_grid: tuple[float, ...]
    ei_grid: tuple[float, ...]
    cells: tuple[tuple[SurfaceCell, ...], ...]  # indexed [d][ei]


def _verdict(value: float) -> Dominance:
    if math.isnan(value) or value < 0.0:
        return Dominance.MONITORING
    if value > 1.0:
        return Dominance.INSPECTION
    return Dominance.EITHER


def superiority_surface(
    q: CriticalQuery,
    d_grid: Sequence[float] | None = None,
    ei_grid: Sequence[float] | None = None,
    settings: SolveSettings | None = None,
    method: Method = Method.N1_RESCALE,
) -> SuperioritySurface:
    """Monitoring-vs-inspection dominance over a (d, e_i) grid.

    Each cell carries the critical monitoring effectiveness at that cell's
    inspection effectiveness, or nan when monitoring is cheaper at every
    e_m (the inspection cost exceeds the monitoring cost ceiling). The
    grid stays rectangular either way.

    The default ``N1_rescale`` method and the ``direct_Nn`` root finder
    produce the same surface up to solver tolerance; the rescaled route is
    roughly an order of magnitude faster and is the default.
    """
    if q.pair is not StrategyPair.MONITORING_VS_INSPECTION:
        raise ValueError(f"surface requires {StrategyPair.MONITORING_VS_INSPECTION.value}")
    if settings is None:
        settings = SolveSettings()
    d_values = default_d_grid() if d_grid is None else _validate_d_grid(d_grid)
    ei_values = default_ei_grid() if ei_grid is None else tuple(float(e) for e in ei_grid)
    for e in ei_values:
        if not 0.0 <= e <= 1.0:
            raise ValueError(f"grid ei values must lie in [0, 1], got {e!r}")

    n1_values = None
    if method is Method.N1_RESCALE:
        n1_values = _em_crit_n1_grid(
            q, np.asarray(d_values)[:, None], np.asarray(ei_values)[None, :]
        )

    rows: list[tuple[SurfaceCell, ...]] = []
    for j, d in enumerate(d_values):
        row: list[SurfaceCell] = []
        for k, e in enumerate(ei_values):
            if method is Method.CLOSED_FORM:
                value = _em_crit_closed(q, d, e)
            elif method is Method.N1_RESCALE:
                value = float(n1_values[j, k])
            else:
                value = _em_crit_direct(q, d, e, settings)
            if value is None:
                value = math.nan
            row.append(SurfaceCell(d=d, ei=e, em_crit=value, dominant=_verdict(value)))
        rows.append(tuple(row))
    return SuperioritySurface(d_grid=d_values, ei_grid=ei_values, cells=tuple(rows))
