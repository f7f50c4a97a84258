"""Exception types shared across the package."""
from __future__ import annotations


class ChainCostError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ChainCostError):
    """A configuration file or parameter record is malformed."""


class DegenerateChain(ChainCostError):
    """The chain ships (numerically) nothing: the survival product underflows.

    Raised when the end-to-end survival fraction falls below
    :data:`DEGENERATE_SURVIVAL`, at which point unit costs stop being
    representable.
    """


class NoThreshold(ChainCostError):
    """No critical effectiveness exists for the requested comparison."""


class ConditionViolated(ChainCostError):
    """A closed form was requested outside the regime where it holds."""


class SolverError(ChainCostError):
    """Base class for numeric root-finding failures."""


class NoRoot(SolverError):
    """The objective has no sign change over the search bracket."""


class NoConvergence(SolverError):
    """The iteration budget was exhausted before reaching tolerance."""


class DegenerateBracket(SolverError):
    """The objective is (numerically) zero across the whole bracket."""


class Overflow(ChainCostError):
    """A simulation request exceeds the configured unit budget."""


# Survival fractions below this are treated as zero shipped volume.
DEGENERATE_SURVIVAL = 1e-300
