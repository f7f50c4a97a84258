"""Shared randomized-chain builders for the test suite.

Draw ranges: per-stage damage probabilities are capped at 0.25. Twenty
stages at the cap still leave a survival fraction of at least 0.75**20,
so products, their logs, and the homogenized parameters stay well away
from underflow and the exactness tolerances below are meaningful. Realistic
chains live at d well under 0.1, so the cap does not hide any regime the
model is used in.
"""

import random

from chaincost import Chain, Reputation, StageParams

# Lines reported by the acceptance suite; echoed after the test run so
# they are visible regardless of output capturing.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_stage(rng: random.Random, d_max: float = 0.25) -> StageParams:
    return StageParams(
        d=rng.uniform(0.0, d_max),
        em=rng.uniform(0.0, 1.0),
        ei=rng.uniform(0.0, 1.0),
        c=rng.uniform(0.1, 20.0),
        m=rng.uniform(0.0, 5.0),
        i=rng.uniform(0.0, 5.0),
        C=rng.uniform(0.0, 1e5),
        M=rng.uniform(0.0, 5e4),
        I=rng.uniform(0.0, 5e4),
    )


def make_chain(
    rng: random.Random,
    n: int | None = None,
    n_max: int = 20,
    d_max: float = 0.25,
) -> Chain:
    if n is None:
        n = rng.randint(1, n_max)
    return Chain(
        stages=tuple(make_stage(rng, d_max) for _ in range(n)),
        X0=rng.uniform(1e3, 1e7),
        reputation=Reputation(alpha=rng.uniform(0.05, 2.0), beta=rng.uniform(0.0, 3.0)),
    )


def relerr(got: float, want: float) -> float:
    scale = max(abs(got), abs(want), 1e-300)
    return abs(got - want) / scale
