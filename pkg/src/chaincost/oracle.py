"""Stochastic reference model: unit-level simulation and exact recursions.

The closed-form volume and cost expressions elsewhere in the package are
products over stages. This module provides two independent ways to obtain
the same quantities:

* :func:`recursive_volumes` evolves expected volumes stage by stage
  (damaged stock and total stock separately), with no products involved;
* :func:`simulate` tracks every physical unit through every stage with an
  explicitly keyed counter-based RNG, so results are reproducible at the
  (seed, replication, unit, stage) level and independent of execution
  order.

Both follow the same per-stage story: a unit is damaged with probability
(1 - em)*d (monitoring repairs the rest on the spot), a damaged-this-stage
unit is caught and removed by the stage's inspection with probability ei,
and an uncaught damaged unit stays damaged (hitting it again does not
stack).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import Chain, Strategy, masked
from .errors import Overflow

__all__ = [
    "StageTrace",
    "SimResult",
    "recursive_volumes",
    "simulate",
    "DEFAULT_UNIT_BUDGET",
]

# Largest X0 * replications a single simulate() call will attempt.
DEFAULT_UNIT_BUDGET = 100_000_000


def recursive_volumes(chain: Chain, strategy: Strategy = Strategy.GENERAL) -> tuple[float, float]:
    """Expected (sold, defective sold) volumes by stagewise recursion.

    With d_m = (1-em)*d per stage, the total stock loses the caught units,

        X_k = X_{k-1} * (1 - ei_k * d_mk),

    and the damaged stock keeps its unhit part and gains every unit that
    was hit this stage and escaped the inspection (units already damaged
    stay singly damaged):

        Xbad_k = Xbad_{k-1} * (1 - d_mk) + X_{k-1} * d_mk * (1 - ei_k).

    Agrees with the product closed forms of
    :func:`~chaincost.chain.sold_volume` and
    :func:`~chaincost.chain.defective_sold_volume` exactly.
    """
    work = masked(chain, strategy)
    X = work.X0
    Xbad = 0.0
    for s in work.stages:
        dm = s.damage_passed
        Xbad = Xbad * (1.0 - dm) + X * dm * (1.0 - s.ei)
        X = X * (1.0 - s.ei * dm)
    return X, Xbad


@dataclass(frozen=True)
class StageTrace:
    """Replication-averaged state after one stage of the simulation."""

    stage: int
    d_m: float
    X_mean: float
    X_bad_mean: float
    removed_mean: float


@dataclass(frozen=True)
class SimResult:
    """Unit-level simulation outcome across replications.

    The per-replication tuples allow downstream estimates (warranty cost,
    unit cost) to carry their own dispersion instead of only the means.
    """

    strategy: Strategy
    replications: int
    seed: int
    X_n_hat: float
    X_n_bad_hat: float
    stderr_X_n: float
    stderr_X_n_bad: float
    X_n_by_rep: tuple[float, ...]
    X_n_bad_by_rep: tuple[float, ...]
    variable_cost_by_rep: tuple[float, ...]
    stage_trace: tuple[StageTrace, ...]


def _replication_rng(seed: int, replication: int) -> np.random.Generator:
    # One counter-based stream per (seed, replication); streams never overlap
    # and do not depend on how many replications ran before this one.
    key = np.array([seed, replication], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def simulate(
    chain: Chain,
    strategy: Strategy = Strategy.GENERAL,
    replications: int = 30,
    seed: int = 0,
    unit_budget: int = DEFAULT_UNIT_BUDGET,
) -> SimResult:
    """Push every unit through every stage and tally what ships.

    Each replication allocates one RNG slot per input unit. Every stage
    consumes exactly two uniforms per slot (damage, removal) whether or not
    the unit is still in flow, so a given (seed, replication, unit, stage)
    always sees the same randomness regardless of the chain's parameters.

    Args:
        chain: chain to simulate; ``X0`` must be a whole number of units.
        strategy: parameter mask applied before simulating.
        replications: independent repetitions (>= 1).
        seed: base RNG key, >= 0.
        unit_budget: cap on X0 * replications.

    Raises:
        Overflow: if X0 * replications exceeds ``unit_budget``.
    """
    if replications < 1:
        raise ValueError(f"replications must be >= 1, got {replications!r}")
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed!r}")
    X0 = int(chain.X0)
    if X0 != chain.X0:
        raise ValueError(f"X0 must be a whole number of units, got {chain.X0!r}")
    if X0 * replications > unit_budget:
        raise Overflow(
            f"X0 * replications = {X0 * replications} exceeds unit budget {unit_budget}"
        )

    work = masked(chain, strategy)
    n = work.n
    dm = [s.damage_passed for s in work.stages]
    ei = [s.ei for s in work.stages]
    v = [s.v for s in work.stages]

    sold = np.empty(replications)
    defective = np.empty(replications)
    variable = np.empty(replications)
    trace_X = np.zeros(n)
    trace_bad = np.zeros(n)
    trace_removed = np.zeros(n)

    for r in range(replications):
        rng = _replication_rng(seed, r)
        in_flow = np.ones(X0, dtype=bool)
        bad = np.zeros(X0, dtype=bool)
        var_cost = 0.0
        for k in range(n):
            var_cost += v[k] * float(in_flow.sum())
            u_hit = rng.random(X0)
            u_rm = rng.random(X0)
            hit = in_flow & (u_hit < dm[k])
            removed = hit & (u_rm < ei[k])
            bad |= hit
            in_flow &= ~removed
            trace_X[k] += float(in_flow.sum())
            trace_bad[k] += float((in_flow & bad).sum())
            trace_removed[k] += float(removed.sum())
        sold[r] = float(in_flow.sum())
        defective[r] = float((in_flow & bad).sum())
        variable[r] = var_cost

    def _stderr(samples: np.ndarray) -> float:
        if replications < 2:
            return 0.0
        return float(np.std(samples, ddof=1) / math.sqrt(replications))

    trace = tuple(
        StageTrace(
            stage=k + 1,
            d_m=dm[k],
            X_mean=trace_X[k] / replications,
            X_bad_mean=trace_bad[k] / replications,
            removed_mean=trace_removed[k] / replications,
        )
        for k in range(n)
    )
    return SimResult(
        strategy=strategy,
        replications=replications,
        seed=seed,
        X_n_hat=float(sold.mean()),
        X_n_bad_hat=float(defective.mean()),
        stderr_X_n=_stderr(sold),
        stderr_X_n_bad=_stderr(defective),
        X_n_by_rep=tuple(float(x) for x in sold),
        X_n_bad_by_rep=tuple(float(x) for x in defective),
        variable_cost_by_rep=tuple(float(x) for x in variable),
        stage_trace=trace,
    )
