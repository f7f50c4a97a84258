"""Closed-form critical monitoring effectiveness and regime boundaries.

For a uniform chain compared under two maintenance strategies there is
typically a critical monitoring effectiveness (e_m)_c above which the
monitoring strategy is the cheaper one. This module derives that threshold
in closed form for the comparisons that admit one:

* monitoring vs zero maintenance, at any clustering level N and at N = 1;
* monitoring vs inspection, at any N (by inverting the monitored-survival
  power) and at N = 1 (fully expanded);
* small-d expansions of the monitoring-vs-inspection threshold, its d -> 0
  limit, the maximum attainable threshold, and the reputation weights at
  which the comparison flips.

Thresholds are returned raw: values outside [0, 1] are meaningful (they
say one strategy dominates for every physical effectiveness) and callers
that need the dominance verdict interpret them. The inspection-vs-zero
comparison has no closed form here and is handled by the numeric solver.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .chain import Chain, Strategy
from .errors import ConditionViolated, DegenerateChain, NoThreshold
from .homogenize import (
    HomogenizedChain,
    homogenize,
    one_minus_pow1m,
    pow1m,
)

if TYPE_CHECKING:
    from .solver import SolveSettings

__all__ = [
    "StrategyPair",
    "CriticalQuery",
    "RegimeField",
    "RegimeClassification",
    "em_crit_vs_zero_Nn",
    "em_crit_vs_zero_N1",
    "d_min_vs_zero",
    "em_crit_vs_inspection_Nn",
    "em_crit_vs_inspection_N1",
    "em_crit_taylor",
    "max_em_crit",
    "em_crit_at_d0",
    "ei_for_em_crit_at_d0",
    "kappa_min",
    "ei_crit",
    "kappa_crit",
    "classify_regime",
    "TAYLOR_D_MAX",
]


# Advisory validity bound for the small-d expansion.
TAYLOR_D_MAX = 1e-2

# Relative tolerance for the cost-balance precondition of the d -> 0 forms.
_BALANCE_RTOL = 1e-12


# === Queries ===============================================================


class StrategyPair(enum.Enum):
    """Which two strategies a critical threshold compares."""

    MONITORING_VS_ZERO = "monitoring-vs-zero"
    MONITORING_VS_INSPECTION = "monitoring-vs-inspection"
    INSPECTION_VS_ZERO = "inspection-vs-zero"

    @classmethod
    def from_name(cls, name: str) -> "StrategyPair":
        try:
            return cls(name)
        except ValueError:
            options = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown pair {name!r}, expected one of: {options}") from None


@dataclass(frozen=True)
class CriticalQuery:
    """A critical-threshold question: which pair, on which uniform description.

    ``fixed_e_i`` pins the inspection effectiveness for pairs that involve
    the inspection strategy; it defaults to the description's own ``ei``.
    """

    pair: StrategyPair
    h: HomogenizedChain
    fixed_e_i: float | None = None

    def __post_init__(self) -> None:
        if self.fixed_e_i is not None and not 0.0 <= self.fixed_e_i <= 1.0:
            raise ValueError(f"fixed_e_i must lie in [0, 1], got {self.fixed_e_i!r}")

    @property
    def e_i(self) -> float:
        return self.h.ei if self.fixed_e_i is None else self.fixed_e_i

    @classmethod
    def from_chain(
        cls,
        chain: Chain,
        pair: StrategyPair,
        fixed_e_i: float | None = None,
        N: int | None = None,
    ) -> "CriticalQuery":
        """Build a query from a physical chain via its uniform description.

        The strategy masks are applied to the virtual parameters during
        evaluation. For uniform chains this equals masking the physical
        chain first; for heterogeneous chains the query deliberately
        analyzes the canonical uniform description, since a single
        effectiveness knob only exists at that level.
        """
        return cls(pair=pair, h=homogenize(chain, Strategy.GENERAL, N), fixed_e_i=fixed_e_i)


# === Monitoring vs zero maintenance ========================================


def _em_crit_vs_zero_value(
    N: float, d: float, c: float, m: float, M: float, X0: float, kappa: float
) -> float | None:
    """Raw threshold where N monitored stages tie N bare ones; None if undefined."""
    if d <= 0.0 or kappa <= 0.0 or c + m <= 0.0:
        return None
    A = M / X0 + m
    G = (A / kappa + m + c * pow1m(d, N)) / (c + m)
    if G <= 0.0:
        return None
    return 1.0 - (-math.expm1(math.log(G) / N)) / d


def em_crit_vs_zero_Nn(h: HomogenizedChain) -> float:
    """Critical monitoring effectiveness against zero maintenance at level h.N.

    Setting the monitoring-strategy unit cost equal to the zero-maintenance
    unit cost and solving for the monitored-survival power gives

        (e_m)_c = 1 - (1 - G**(1/N)) / d,
        G = ((M/X0 + m)/kappa + m + c*(1-d)**N) / (c + m).

    Raises:
        NoThreshold: if monitoring can never pay (kappa*c <= M/X0 + m, so
            even perfect monitoring loses) or the damage probability is at
            or below :func:`d_min_vs_zero`.
    """
    A = h.M / h.X0 + h.m
    if h.c + h.m <= 0.0 or h.kappa * h.c <= A:
        raise NoThreshold(
            "monitoring cannot beat zero maintenance at any effectiveness: "
            f"kappa*c = {h.kappa * h.c!r} <= M/X0 + m = {A!r}"
        )
    dmin = d_min_vs_zero(h)
    if h.d <= dmin:
        raise NoThreshold(f"d = {h.d!r} is at or below the minimum damage probability {dmin!r}")
    value = _em_crit_vs_zero_value(h.N, h.d, h.c, h.m, h.M, h.X0, h.kappa)
    assert value is not None  # guards above exclude the undefined cases
    return value


def d_min_vs_zero(h: HomogenizedChain) -> float:
    """Smallest damage probability at which monitoring can beat zero maintenance.

    Below this even perfect monitoring (e_m = 1) costs more than running
    bare stages: the avoided warranty kappa*c*(1-(1-d)**N) cannot cover the
    monitoring bill N*(M/X0 + m).

    Raises:
        NoThreshold: if kappa*c <= M/X0 + m, in which case no damage
            probability makes monitoring pay.
    """
    A = h.M / h.X0 + h.m
    if h.c <= 0.0 or h.kappa * h.c <= A:
        raise NoThreshold(
            "monitoring cannot beat zero maintenance at any damage probability: "
            f"kappa*c = {h.kappa * h.c!r} <= M/X0 + m = {A!r}"
        )
    return one_minus_pow1m(A / (h.kappa * h.c), 1.0 / h.N)


def _em_crit_vs_zero_N1_expr(d, c, m, M, X0, kappa):
    """Elementwise single-stage threshold against zero maintenance.

    Pure arithmetic, usable with scalars or numpy arrays; callers must
    guard d > 0, kappa > 0, and c + m > 0.
    """
    return m / (c + m) + (M / X0 + m) / (kappa * (c + m) * d)


def _em_crit_vs_zero_N1_value(
    d: float, c: float, m: float, M: float, X0: float, kappa: float
) -> float | None:
    if d <= 0.0 or kappa <= 0.0 or c + m <= 0.0:
        return None
    return _em_crit_vs_zero_N1_expr(d, c, m, M, X0, kappa)


def em_crit_vs_zero_N1(h: HomogenizedChain) -> float:
    """Single-stage critical effectiveness against zero maintenance.

    At N = 1 the survival powers are linear in d and the threshold is

        (e_m)_c = m/(c+m) + (M/X0 + m) / (kappa*(c+m)*d).

    Requires ``h.N == 1`` (rescale first) and ``d > 0``.

    Raises:
        NoThreshold: if the value exceeds 1, i.e. no physical effectiveness
            makes monitoring competitive at this d.
    """
    if h.N != 1:
        raise ValueError(f"h must be at N=1, got N={h.N!r}; rescale first")
    if h.d <= 0.0:
        raise ValueError(f"d must be > 0, got {h.d!r}")
    value = _em_crit_vs_zero_N1_value(h.d, h.c, h.m, h.M, h.X0, h.kappa)
    if value is None:
        raise NoThreshold("degenerate economics: kappa or c+m is zero")
    if value > 1.0:
        raise NoThreshold(f"critical effectiveness {value!r} exceeds 1 at d = {h.d!r}")
    return value


# === Monitoring vs inspection ==============================================


def _inspection_unit_cost_N1(
    d: float, ci_i: float, CI: float, ei: float, X0: float, kappa: float
) -> float:
    """Unit cost of one inspected stage from aggregate scalars."""
    survive = 1.0 - ei * d
    return (CI / X0 + ci_i) / survive + ci_i * kappa * d * (1.0 - ei) / (survive * survive)


def _em_crit_vs_inspection_N1_expr(d, cm_m, CM, ci_i, CI, ei, X0, kappa):
    """Elementwise single-stage threshold against inspection.

    Pure arithmetic, usable with scalars or numpy arrays; callers must
    guard d > 0, kappa > 0, cm_m > 0, and 1 - ei*d > 0.
    """
    survive = 1.0 - ei * d
    return (
        1.0
        + 1.0 / (kappa * d)
        + CM / (X0 * cm_m * kappa * d)
        - (CI / X0 + ci_i) / (cm_m * kappa * d * survive)
        - ci_i * (1.0 - ei) / (cm_m * survive * survive)
    )


def _em_crit_vs_inspection_N1_value(
    d: float,
    cm_m: float,
    CM: float,
    ci_i: float,
    CI: float,
    ei: float,
    X0: float,
    kappa: float,
) -> float | None:
    """Two-sided single-stage threshold from aggregate scalars.

    ``cm_m``/``CM`` are the monitoring side's per-unit and fixed totals
    (c+m, C+M), ``ci_i``/``CI`` the inspection side's (c+i, C+I). The two
    sides are passed separately because re-expressing a masked chain at
    N = 1 scales the two sides' per-unit costs by different factors.
    """
    if d <= 0.0 or kappa <= 0.0 or cm_m <= 0.0:
        return None
    if 1.0 - ei * d <= 0.0:
        return None
    return _em_crit_vs_inspection_N1_expr(d, cm_m, CM, ci_i, CI, ei, X0, kappa)


def em_crit_vs_inspection_N1(q: CriticalQuery) -> float:
    """Single-stage critical effectiveness of monitoring against inspection.

    Equates the monitored unit cost (linear in e_m at N = 1) with the
    inspected unit cost at the query's inspection effectiveness. The value
    may fall outside [0, 1]: below 0 monitoring wins at every
    effectiveness, above 1 inspection does.

    Requires ``q.h.N == 1``.

    Raises:
        NoThreshold: if the inspection cost exceeds the monitoring cost
            ceiling, so the linear solution would imply a nonpositive
            survival factor and no effectiveness ties the two sides.
        DegenerateChain: if e_i * d = 1, where inspection removes the whole
            volume and its unit cost diverges.
    """
    h = q.h
    if h.N != 1:
        raise ValueError(f"q.h must be at N=1, got N={h.N!r}; rescale first")
    if h.d <= 0.0:
        raise ValueError(f"d must be > 0, got {h.d!r}")
    ei = q.e_i
    if ei * h.d == 1.0:
        raise DegenerateChain("e_i * d = 1: inspection removes the entire volume")
    value = _em_crit_vs_inspection_N1_value(
        d=h.d,
        cm_m=h.c + h.m,
        CM=h.C + h.M,
        ci_i=h.c + h.i,
        CI=h.C + h.I,
        ei=ei,
        X0=h.X0,
        kappa=h.kappa,
    )
    if value is None:
        raise NoThreshold("degenerate economics: kappa or c+m is zero")
    if (1.0 - value) * h.d >= 1.0:
        raise NoThreshold(
            "monitoring is cheaper than inspection at every monitoring effectiveness"
        )
    return value


def _em_crit_vs_inspection_Nn_value(
    N: float,
    d: float,
    cm_m: float,
    CM: float,
    inspection_unit_cost: float,
    X0: float,
    kappa: float,
) -> float | None:
    """Raw level-N threshold against a fixed inspection-side unit cost.

    Solves N*CM/X0 + N*cm_m*(1 + kappa*(1 - q**N)) = inspection unit cost
    for q = 1 - (1-e_m)*d. Returns None when the required q**N is
    nonpositive, meaning the inspection cost exceeds the monitoring cost
    ceiling and monitoring wins at every effectiveness.
    """
    if d <= 0.0 or kappa <= 0.0 or cm_m <= 0.0:
        return None
    target = (N * CM / X0 + N * cm_m * (1.0 + kappa) - inspection_unit_cost) / (N * cm_m * kappa)
    if target <= 0.0:
        return None
    return 1.0 - (-math.expm1(math.log(target) / N)) / d


def em_crit_vs_inspection_Nn(q: CriticalQuery) -> float:
    """Critical monitoring effectiveness against inspection at level q.h.N.

    The monitoring-side cost depends on e_m only through the monitored
    survival power q**N, so the equality inverts exactly; the inspection
    side is evaluated once at the query's inspection effectiveness.

    Raises:
        NoThreshold: if monitoring is cheaper at every effectiveness (no
            real solution for the survival power).
        DegenerateChain: if the inspection side ships nothing.
    """
    h = q.h
    if h.d <= 0.0:
        raise ValueError(f"d must be > 0, got {h.d!r}")
    cu_i = _inspection_side_cost(h, q.e_i)
    value = _em_crit_vs_inspection_Nn_value(
        N=h.N,
        d=h.d,
        cm_m=h.c + h.m,
        CM=h.C + h.M,
        inspection_unit_cost=cu_i,
        X0=h.X0,
        kappa=h.kappa,
    )
    if value is None:
        raise NoThreshold(
            "monitoring is cheaper than inspection at every monitoring effectiveness"
        )
    return value


def _inspection_side_cost(h: HomogenizedChain, ei: float) -> float:
    from .homogenize import uniform_unit_cost

    return uniform_unit_cost(
        N=h.N,
        d=h.d,
        em=0.0,
        ei=ei,
        fixed=h.C + h.I,
        unit=h.c + h.i,
        X0=h.X0,
        kappa=h.kappa,
    )


# === Small-d expansion and its d -> 0 family ===============================


def _balance_term(h: HomogenizedChain) -> float:
    """Cost asymmetry (M-I)/X0 + m - i that controls the small-d slope."""
    return (h.M - h.I) / h.X0 + h.m - h.i


def _require_balance(h: HomogenizedChain, what: str) -> None:
    b = _balance_term(h)
    scale = max(1.0, (h.M + h.I) / h.X0 + h.m + h.i)
    if abs(b) > _BALANCE_RTOL * scale:
        raise ConditionViolated(
            f"{what} requires balanced monitoring/inspection overheads: "
            f"(M-I)/X0 + m - i = {b!r}, not 0"
        )


def em_crit_taylor(h: HomogenizedChain, e_i: float) -> float:
    """First-order small-d approximation of the vs-inspection threshold.

    Expanding both unit costs to first order in d at clustering level h.N
    (treating h's per-stage parameters as d-independent) gives

        (e_m)_c ~ 1 - (c+i)(1-e_i)/(c+m)
                  - ((C+I)/X0 + (1+1/N)(c+i)/2) * e_i / (kappa*(c+m))
                  + ((M-I)/X0 + m - i) / (kappa*(c+m)*N*d).

    The last term vanishes under balanced overheads, which is what makes
    the d -> 0 limit finite. The slope in d carries the sign of
    (M-I)/X0 + m - i.

    Raises:
        ConditionViolated: if h.d exceeds :data:`TAYLOR_D_MAX`, outside the
            expansion's advisory validity range.
    """
    if not 0.0 <= e_i <= 1.0:
        raise ValueError(f"e_i must lie in [0, 1], got {e_i!r}")
    if h.kappa <= 0.0 or h.c + h.m <= 0.0:
        raise NoThreshold("degenerate economics: kappa or c+m is zero")
    if h.d > TAYLOR_D_MAX:
        raise ConditionViolated(
            f"small-d expansion requested at d = {h.d!r} > {TAYLOR_D_MAX!r}"
        )
    b = _balance_term(h)
    if h.d == 0.0 and b != 0.0:
        raise ValueError("d must be > 0 when (M-I)/X0 + m - i is nonzero")
    cm_m = h.c + h.m
    ci_i = h.c + h.i
    value = (
        1.0
        - ci_i * (1.0 - e_i) / cm_m
        - ((h.C + h.I) / h.X0 + 0.5 * (1.0 + 1.0 / h.N) * ci_i) * e_i / (h.kappa * cm_m)
    )
    if b != 0.0:
        value += b / (h.kappa * cm_m * h.N * h.d)
    return value


def max_em_crit(h: HomogenizedChain) -> float:
    """Largest vs-inspection threshold over all d and e_i, under balance.

    Attained as d -> 0 with perfect inspection (e_i = 1):

        max (e_m)_c = 1 - ((C+I)/X0 + (1+1/n)(c+i)/2) / (kappa*(c+m)),

    where n is the physical stage count (``h.n_source``); the value is a
    property of the chain, not of the clustering level the parameters are
    expressed at.

    Raises:
        ConditionViolated: if the overheads are not balanced, in which case
            the threshold is unbounded or trivial as d -> 0.
    """
    if h.kappa <= 0.0 or h.c + h.m <= 0.0:
        raise NoThreshold("degenerate economics: kappa or c+m is zero")
    _require_balance(h, "max_em_crit")
    n = h.n_source
    ci_i = h.c + h.i
    return 1.0 - ((h.C + h.I) / h.X0 + 0.5 * (1.0 + 1.0 / n) * ci_i) / (h.kappa * (h.c + h.m))


def em_crit_at_d0(h: HomogenizedChain, e_i: float) -> float:
    """d -> 0 limit of the vs-inspection threshold at a given e_i.

    Linear in e_i:

        (e_m)_c(0, e_i) = 1 - (c+i)(1-e_i)/(c+m)
                          - ((C+I)/X0 + (1+1/n)(c+i)/2) * e_i / (kappa*(c+m)),

    with n = ``h.n_source``. Invariant under re-expressing the d = 0
    parameter set at any clustering level (all terms are ratios of
    uniformly scaled costs).

    Raises:
        ConditionViolated: if the overheads are not balanced (the limit
            does not exist otherwise).
    """
    if not 0.0 <= e_i <= 1.0:
        raise ValueError(f"e_i must lie in [0, 1], got {e_i!r}")
    if h.kappa <= 0.0 or h.c + h.m <= 0.0:
        raise NoThreshold("degenerate economics: kappa or c+m is zero")
    _require_balance(h, "em_crit_at_d0")
    n = h.n_source
    cm_m = h.c + h.m
    ci_i = h.c + h.i
    return (
        1.0
        - ci_i * (1.0 - e_i) / cm_m
        - ((h.C + h.I) / h.X0 + 0.5 * (1.0 + 1.0 / n) * ci_i) * e_i / (h.kappa * cm_m)
    )


def ei_for_em_crit_at_d0(h: HomogenizedChain, target: float) -> float:
    """Inspection effectiveness whose d -> 0 threshold equals ``target``.

    Inverts the linear map of :func:`em_crit_at_d0`.

    Raises:
        ConditionViolated: if the overheads are not balanced.
        NoThreshold: if the map is constant in e_i and never hits target.
    """
    if h.kappa <= 0.0 or h.c + h.m <= 0.0:
        raise NoThreshold("degenerate economics: kappa or c+m is zero")
    _require_balance(h, "ei_for_em_crit_at_d0")
    n = h.n_source
    cm_m = h.c + h.m
    ci_i = h.c + h.i
    a0 = 1.0 - ci_i / cm_m
    slope = ci_i / cm_m - ((h.C + h.I) / h.X0 + 0.5 * (1.0 + 1.0 / n) * ci_i) / (h.kappa * cm_m)
    if slope == 0.0:
        raise NoThreshold(f"threshold is constant at {a0!r} for every e_i")
    return (target - a0) / slope


def kappa_min(h: HomogenizedChain) -> float:
    """Reputation weight above which monitoring can win as d -> 0.

    The d -> 0 threshold at e_i = 1 stays below 1 exactly when

        kappa > ((C+I)/X0 + (1+1/n)(c+i)/2) / (c + m),

    with n = ``h.n_source``. At or below this weight inspection wins the
    small-d regime no matter how good the monitoring is.

    Requires (M-I)/X0 + m - i <= 0. Under exact balance the threshold is
    d-independent and the bound is tight; a strictly negative term only
    lowers the threshold further, so the bound stays valid.

    Raises:
        ConditionViolated: if (M-I)/X0 + m - i > 0 (the threshold is
            unbounded as d -> 0 there and no such weight exists).
    """
    if h.c + h.m <= 0.0:
        raise NoThreshold("degenerate economics: c+m is zero")
    balance = _balance_term(h)
    if balance > 0.0:
        raise ConditionViolated(
            f"kappa_min requires (M-I)/X0 + m - i <= 0, got {balance!r}"
        )
    n = h.n_source
    ci_i = h.c + h.i
    return ((h.C + h.I) / h.X0 + 0.5 * (1.0 + 1.0 / n) * ci_i) / (h.c + h.m)


def ei_crit(h: HomogenizedChain, d: float) -> float:
    """Inspection effectiveness where reputation sensitivity changes sides.

    For a single stage (``h.N == 1``), raising the reputation weight favors
    monitoring when

        e_i < (1/d) * (1 - (C + I + X0*(c+i)) / (C + M + X0*(c+m))),

    and favors inspection above it. Scales inversely with d.

    Requires ``(M-I)/X0 + m - i > 0`` (monitoring carries the larger
    overhead, so the comparison is nontrivial) and ``d > 0``.

    Raises:
        ConditionViolated: if the overhead asymmetry condition fails.
    """
    if h.N != 1:
        raise ValueError(f"h must be at N=1, got N={h.N!r}; rescale first")
    if d <= 0.0:
        raise ValueError(f"d must be > 0, got {d!r}")
    if _balance_term(h) <= 0.0:
        raise ConditionViolated(
            "ei_crit requires (M-I)/X0 + m - i > 0, got "
            f"{_balance_term(h)!r}"
        )
    num = h.C + h.I + h.X0 * (h.c + h.i)
    den = h.C + h.M + h.X0 * (h.c + h.m)
    if den <= 0.0:
        raise NoThreshold("degenerate economics: all monitoring-side costs are zero")
    return (1.0 - num / den) / d


def kappa_crit(h: HomogenizedChain, n: int | None = None) -> float:
    """Reputation weight where inspection sensitivity changes sides.

    In the small-d expansion, raising the inspection effectiveness lowers
    the critical monitoring effectiveness below

        kappa_c = (C+I) / (X0*(c+i)) + (1 + 1/n) / 2

    and raises it above. ``n`` defaults to the physical stage count
    ``h.n_source``. Like :func:`ei_crit`, the flip is a feature of the
    regime where monitoring overheads exceed inspection overheads.

    Raises:
        ConditionViolated: if (M-I)/X0 + m - i <= 0.
    """
    if n is None:
        n = h.n_source
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    if h.c + h.i <= 0.0:
        raise NoThreshold("degenerate economics: c+i is zero")
    balance = _balance_term(h)
    if balance <= 0.0:
        raise ConditionViolated(
            f"kappa_crit requires (M-I)/X0 + m - i > 0, got {balance!r}"
        )
    return (h.C + h.I) / (h.X0 * (h.c + h.i)) + 0.5 * (1.0 + 1.0 / n)


# === Regime classification over damage probability =========================


class RegimeField(enum.Enum):
    """Where a damage probability lands relative to the monitoring window."""

    UNCERTAINTY = "uncertainty"
    MONITORING_SUPERIORITY = "monitoring-superiority"
    AVOIDANCE = "avoidance"


@dataclass(frozen=True)
class RegimeClassification:
    """Monitoring-superiority window [a, b] in damage probability.

    Below ``a`` monitoring is not yet worth its overhead (uncertainty
    field: invest in knowing d better). Above ``b`` damage is so likely
    that another strategy wins again (avoidance field: redesign rather
    than monitor). When no window exists (``window_exists`` false), every
    d is classified as uncertainty and a = b = 1.
    """

    a: float
    b: float
    window_exists: bool = True

    def field_at(self, d: float) -> RegimeField:
        if not 0.0 <= d <= 1.0:
            raise ValueError(f"d must lie in [0, 1], got {d!r}")
        if not self.window_exists or d < self.a:
            return RegimeField.UNCERTAINTY
        if d > self.b:
            return RegimeField.AVOIDANCE
        return RegimeField.MONITORING_SUPERIORITY


def classify_regime(
    h: HomogenizedChain,
    em: float | None = None,
    ei: float | None = None,
    settings: "SolveSettings | None" = None,
) -> RegimeClassification:
    """Locate the damage-probability window where monitoring is cheapest.

    Sweeps d with the other parameters fixed (``em``/``ei`` default to the
    description's own values) and finds where the monitoring unit cost
    crosses min(zero-maintenance cost, inspection cost). ``a`` is the first
    crossing, ``b`` the last.

    Args:
        h: uniform description whose d field is ignored (d is the sweep
            variable).
        em: monitoring effectiveness during the sweep.
        ei: inspection effectiveness during the sweep.
        settings: numeric solver settings (defaults apply when omitted).

    Returns:
        RegimeClassification with the window. A window reaching a sweep
        boundary is reported as a = 0 or b = 1 (monitoring already, or
        still, cheapest there). When monitoring never wins the no-window
        sentinel (a = b = 1, everything uncertain) is returned.
    """
    from .solver import SolveSettings, scan_roots
    from .homogenize import uniform_unit_cost

    if em is None:
        em = h.em
    if ei is None:
        ei = h.ei
    if not 0.0 <= em <= 1.0:
        raise ValueError(f"em must lie in [0, 1], got {em!r}")
    if not 0.0 <= ei <= 1.0:
        raise ValueError(f"ei must lie in [0, 1], got {ei!r}")
    if settings is None:
        settings = SolveSettings()

    def gap(d: float) -> float:
        cu_m = uniform_unit_cost(
            h.N, d, em, 0.0, h.C + h.M, h.c + h.m, h.X0, h.kappa
        )
        cu_z = uniform_unit_cost(h.N, d, 0.0, 0.0, h.C, h.c, h.X0, h.kappa)
        cu_i = uniform_unit_cost(
            h.N, d, 0.0, ei, h.C + h.I, h.c + h.i, h.X0, h.kappa
        )
        return cu_m - min(cu_z, cu_i)

    lo, hi = 1e-6, 1.0 - 1e-6
    roots = scan_roots(gap, lo, hi, settings, log_spaced=True)
    if not roots:
        if gap(lo) < 0.0:
            return RegimeClassification(a=0.0, b=1.0, window_exists=True)
        return RegimeClassification(a=1.0, b=1.0, window_exists=False)
    a = 0.0 if gap(lo) < 0.0 else roots[0]
    b = 1.0 if gap(hi) < 0.0 else roots[-1]
    return RegimeClassification(a=a, b=b, window_exists=True)
