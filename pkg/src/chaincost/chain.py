"""Multi-stage production chain model with per-stage defect economics.

A chain is an ordered sequence of stages. Each stage can damage the units
flowing through it, monitor itself (catching damage as it happens), and
inspect its output (removing damaged units before they move on). The model
tracks three money sinks per stage: per-unit processing cost, per-unit
monitoring cost, per-unit inspection cost, plus fixed counterparts of each,
and a reputation multiplier that prices defective units reaching customers.

The central quantities are the shipped volume, the defective shipped volume,
and the unit cost of a shipped item under a given maintenance strategy.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import DEGENERATE_SURVIVAL, DegenerateChain

__all__ = [
    "StageParams",
    "Reputation",
    "Chain",
    "Strategy",
    "CostBreakdown",
    "masked",
    "sold_volume",
    "defective_sold_volume",
    "cost_breakdown",
]


# === Value types ===========================================================


@dataclass(frozen=True)
class StageParams:
    """Parameters of a single production stage.

    Attributes:
        d: Probability that the stage damages a unit passing through it.
        em: Monitoring effectiveness, the fraction of damage events caught
            and repaired at the stage itself.
        ei: Inspection effectiveness, the fraction of damaged units removed
            by the stage's outgoing inspection.
        c: Per-unit processing cost.
        m: Per-unit monitoring cost.
        i: Per-unit inspection cost.
        C: Fixed processing cost of the stage.
        M: Fixed monitoring cost of the stage.
        I: Fixed inspection cost of the stage.

    Every field defaults to zero, matching the config schema: an omitted
    quantity means the stage does not damage, monitor, inspect, or cost
    anything in that respect.
    """

    d: float = 0.0
    em: float = 0.0
    ei: float = 0.0
    c: float = 0.0
    m: float = 0.0
    i: float = 0.0
    C: float = 0.0
    M: float = 0.0
    I: float = 0.0

    def __post_init__(self) -> None:
        for name in ("d", "em", "ei"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
        for name in ("c", "m", "i", "C", "M", "I"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    @property
    def v(self) -> float:
        """Total per-unit cost of the stage."""
        return self.c + self.m + self.i

    @property
    def damage_passed(self) -> float:
        """Probability a unit leaves the stage newly damaged: (1-em)*d."""
        return (1.0 - self.em) * self.d

    @property
    def removal(self) -> float:
        """Probability a unit is removed at the stage: ei*(1-em)*d."""
        return self.ei * (1.0 - self.em) * self.d


@dataclass(frozen=True)
class Reputation:
    """Warranty pricing: a defective sold unit costs kappa = alpha*(1+beta)
    times the average production cost of a sold unit.

    ``alpha`` is the replacement multiplier (how many attempts it takes to
    make a customer whole) and ``beta`` the goodwill surcharge on top.
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha >= 0.0):
            raise ValueError(f"alpha must be finite and >= 0, got {self.alpha!r}")
        if not (math.isfinite(self.beta) and self.beta >= 0.0):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta!r}")

    @property
    def kappa(self) -> float:
        return self.alpha * (1.0 + self.beta)


@dataclass(frozen=True)
class Chain:
    """A production chain: stages in processing order, input volume, pricing."""

    stages: tuple[StageParams, ...]
    X0: float
    reputation: Reputation

    def __post_init__(self) -> None:
        if len(self.stages) < 1:
            raise ValueError("a chain needs at least one stage")
        if not (math.isfinite(self.X0) and self.X0 > 0.0):
            raise ValueError(f"X0 must be finite and > 0, got {self.X0!r}")

    @property
    def n(self) -> int:
        return len(self.stages)

    @property
    def kappa(self) -> float:
        return self.reputation.kappa

    @classmethod
    def uniform(
        cls,
        n: int,
        stage: StageParams,
        X0: float,
        reputation: Reputation,
    ) -> "Chain":
        """Build a chain of ``n`` identical stages."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n!r}")
        return cls(stages=(stage,) * n, X0=X0, reputation=reputation)


# === Maintenance strategies ================================================


class Strategy(enum.Enum):
    """Which defect countermeasures are deployed on every stage.

    ``ZERO`` runs bare stages, ``INSPECTION`` keeps only outgoing
    inspections, ``MONITORING`` keeps only in-process monitoring, and
    ``GENERAL`` evaluates the stage parameters as given.
    """

    ZERO = "zero"
    INSPECTION = "inspection"
    MONITORING = "monitoring"
    GENERAL = "general"

    @classmethod
    def from_name(cls, name: str) -> "Strategy":
        try:
            return cls(name)
        except ValueError:
            options = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown strategy {name!r}, expected one of: {options}") from None


def _mask_stage(stage: StageParams, strategy: Strategy) -> StageParams:
    if strategy is Strategy.GENERAL:
        return stage
    if strategy is Strategy.ZERO:
        return replace(stage, em=0.0, ei=0.0, m=0.0, i=0.0, M=0.0, I=0.0)
    if strategy is Strategy.INSPECTION:
        return replace(stage, em=0.0, m=0.0, M=0.0)
    if strategy is Strategy.MONITORING:
        return replace(stage, ei=0.0, i=0.0, I=0.0)
    raise AssertionError(strategy)


def masked(chain: Chain, strategy: Strategy) -> Chain:
    """Return the chain with the strategy's parameter mask applied.

    Disabled countermeasures have their effectiveness and their costs
    (per-unit and fixed) zeroed on every stage. Masking is idempotent and
    ``GENERAL`` is the identity.
    """
    if strategy is Strategy.GENERAL:
        return chain
    return replace(chain, stages=tuple(_mask_stage(s, strategy) for s in chain.stages))


# === Volumes and costs =====================================================


def _survival_products(stages: tuple[StageParams, ...]) -> tuple[float, float, float]:
    """Chain-wide survival products (all shipped, not-newly-defective, undamaged).

    Returns:
        ``(theta, pm, p0)`` where ``theta`` multiplies (1 - ei*(1-em)*d) over
        stages (fraction of input that ships), ``pm`` multiplies
        (1 - (1-em)*d) (fraction that ships without ever being damaged past
        monitoring), and ``p0`` multiplies (1 - d).
    """
    theta = 1.0
    pm = 1.0
    p0 = 1.0
    for s in stages:
        theta *= 1.0 - s.removal
        pm *= 1.0 - s.damage_passed
        p0 *= 1.0 - s.d
    return theta, pm, p0


def sold_volume(chain: Chain, strategy: Strategy = Strategy.GENERAL) -> float:
    """Number of units that survive all inspections and ship."""
    theta, _, _ = _survival_products(masked(chain, strategy).stages)
    return chain.X0 * theta


def defective_sold_volume(chain: Chain, strategy: Strategy = Strategy.GENERAL) -> float:
    """Number of shipped units carrying an uncaught defect.

    A unit ships defective when it picks up unrepaired damage at some stage,
    escapes that stage's inspection, and then survives every later
    inspection. Summing over the stage where the damage first happened
    telescopes to X0 * (theta - pm).
    """
    theta, pm, _ = _survival_products(masked(chain, strategy).stages)
    return chain.X0 * (theta - pm)


@dataclass(frozen=True)
class CostBreakdown:
    """Cost decomposition of running a chain under one strategy.

    Attributes:
        fixed_cost: Sum of fixed processing, monitoring, inspection costs.
        variable_cost: Volume-dependent cost, sum over stages of the stage's
            per-unit cost times the volume entering it.
        warranty_cost: kappa times the average unit production cost times the
            defective shipped volume.
        total_cost: Sum of the three components.
        sold_volume: Units shipped.
        defective_sold_volume: Shipped units with an uncaught defect.
        survival: Fraction of input volume that ships.
        unit_cost: total_cost / sold_volume.
    """

    fixed_cost: float
    variable_cost: float
    warranty_cost: float
    total_cost: float
    sold_volume: float
    defective_sold_volume: float
    survival: float
    unit_cost: float


def cost_breakdown(chain: Chain, strategy: Strategy = Strategy.GENERAL) -> CostBreakdown:
    """Evaluate the full cost stack of ``chain`` under ``strategy``.

    The variable cost charges each stage's per-unit cost on the volume that
    reaches it (inspection shrinkage included), the warranty cost prices
    defective shipped units at ``kappa`` times the average production cost of
    a shipped unit, and the unit cost divides everything by the shipped
    volume.

    Raises:
        DegenerateChain: if the survival fraction underflows to the point
            where unit costs are meaningless.
    """
    work = masked(chain, strategy)
    theta, pm, _ = _survival_products(work.stages)
    if theta < DEGENERATE_SURVIVAL:
        raise DegenerateChain(
            f"survival fraction {theta!r} below {DEGENERATE_SURVIVAL!r}; no volume ships"
        )

    fixed = 0.0
    variable = 0.0
    reach = 1.0  # fraction of X0 entering the current stage
    for s in work.stages:
        fixed += s.C + s.M + s.I
        variable += s.v * reach
        reach *= 1.0 - s.removal
    variable *= work.X0

    sold = work.X0 * theta
    defective = work.X0 * (theta - pm)
    warranty = work.kappa * (variable / sold) * defective
    total = fixed + variable + warranty
    return CostBreakdown(
        fixed_cost=fixed,
        variable_cost=variable,
        warranty_cost=warranty,
        total_cost=total,
        sold_volume=sold,
        defective_sold_volume=defective,
        survival=theta,
        unit_cost=total / sold,
    )
