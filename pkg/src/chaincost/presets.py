"""Reference parameter sets used across tests, docs, and the CLI."""
from __future__ import annotations

from .chain import Chain, Reputation, StageParams

__all__ = ["ref50", "PRESETS"]


def ref50(d: float = 0.02, em: float = 0.8, ei: float = 0.8) -> Chain:
    """Fifty-stage uniform reference chain.

    A mid-size electronics-like line: one million input units, stages
    costing 10 per unit plus 50k fixed, monitoring and inspection each
    adding 1 per unit and 10k fixed, and a reputation weight kappa = 1
    (alpha = 0.5, beta = 1). The damage probability and the two
    effectiveness values are the knobs studies usually turn, so they are
    arguments.
    """
    stage = StageParams(
        d=d, em=em, ei=ei,
        c=10.0, m=1.0, i=1.0,
        C=50_000.0, M=10_000.0, I=10_000.0,
    )
    return Chain.uniform(
        n=50, stage=stage, X0=1_000_000.0, reputation=Reputation(alpha=0.5, beta=1.0)
    )


PRESETS = {"ref50": ref50}
