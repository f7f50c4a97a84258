"""Production-chain cost economics: strategy comparison and critical analysis.

The package models multi-stage production chains where stages damage
units, monitoring repairs damage in-process, and inspection removes
damaged units, then answers the planning question: at which monitoring
effectiveness, damage probability, and reputation weight does each
maintenance strategy win?

Layers, from concrete to analytic:

* :mod:`chaincost.chain` - heterogeneous chains, strategy masks, cost
  breakdowns;
* :mod:`chaincost.oracle` - unit-level simulation and stagewise
  recursions (the ground truth the formulas are tested against);
* :mod:`chaincost.homogenize` - equivalent uniform descriptions and
  moving between clustering levels;
* :mod:`chaincost.critical` - closed-form critical thresholds and regime
  classification;
* :mod:`chaincost.solver` - numeric root finding, curves, surfaces;
* :mod:`chaincost.cli` - the ``chaincost`` command.
"""
from __future__ import annotations

from .chain import (
    Chain,
    CostBreakdown,
    Reputation,
    StageParams,
    Strategy,
    cost_breakdown,
    defective_sold_volume,
    masked,
    sold_volume,
)
from .config import load_config, parse_config
from .critical import (
    CriticalQuery,
    RegimeClassification,
    RegimeField,
    StrategyPair,
    classify_regime,
    d_min_vs_zero,
    ei_crit,
    ei_for_em_crit_at_d0,
    em_crit_at_d0,
    em_crit_taylor,
    em_crit_vs_inspection_N1,
    em_crit_vs_inspection_Nn,
    em_crit_vs_zero_N1,
    em_crit_vs_zero_Nn,
    kappa_crit,
    kappa_min,
    max_em_crit,
)
from .errors import (
    ChainCostError,
    ConditionViolated,
    ConfigError,
    DegenerateBracket,
    DegenerateChain,
    NoConvergence,
    NoRoot,
    NoThreshold,
    Overflow,
    SolverError,
)
from .homogenize import (
    HomogenizedChain,
    conserved_products,
    homogenize,
    homogenized_unit_cost,
    masked_h,
    rescale,
    taylor_error,
    taylor_error_limit,
    uniform_unit_cost,
)
from .oracle import SimResult, StageTrace, recursive_volumes, simulate
from .presets import PRESETS, ref50
from .solver import (
    CriticalCurve,
    CurvePoint,
    Dominance,
    Method,
    SolveSettings,
    SuperioritySurface,
    SurfaceCell,
    find_cost_equality,
    superiority_surface,
    trace_critical_curve,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # chain
    "StageParams", "Reputation", "Chain", "Strategy", "CostBreakdown",
    "masked", "sold_volume", "defective_sold_volume", "cost_breakdown",
    # homogenize
    "HomogenizedChain", "homogenize", "masked_h", "homogenized_unit_cost",
    "uniform_unit_cost", "rescale", "conserved_products",
    "taylor_error", "taylor_error_limit",
    # critical
    "StrategyPair", "CriticalQuery", "RegimeField", "RegimeClassification",
    "em_crit_vs_zero_Nn", "em_crit_vs_zero_N1", "d_min_vs_zero",
    "em_crit_vs_inspection_Nn", "em_crit_vs_inspection_N1",
    "em_crit_taylor", "max_em_crit", "em_crit_at_d0", "ei_for_em_crit_at_d0",
    "kappa_min", "ei_crit", "kappa_crit", "classify_regime",
    # solver
    "Method", "SolveSettings", "CurvePoint", "CriticalCurve",
    "Dominance", "SurfaceCell", "SuperioritySurface",
    "find_cost_equality", "trace_critical_curve", "superiority_surface",
    # oracle
    "recursive_volumes", "simulate", "SimResult", "StageTrace",
    # config / presets
    "load_config", "parse_config", "ref50", "PRESETS",
    # errors
    "ChainCostError", "ConfigError", "DegenerateChain", "NoThreshold",
    "ConditionViolated", "SolverError", "NoRoot", "NoConvergence",
    "DegenerateBracket", "Overflow",
]
