"""Reduction of heterogeneous chains to equivalent uniform virtual chains.

Any chain can be replaced by a chain of N identical virtual stages that
ships the same volume, the same defective volume, and carries the same
fixed, variable, and warranty costs. The virtual parameters are chosen so
that three survival products are conserved:

    p0    = prod_k (1 - d_k)                   undamaged fraction
    pm    = prod_k (1 - (1-em_k) d_k)          never-damaged-past-monitoring
    theta = prod_k (1 - ei_k (1-em_k) d_k)     shipped fraction

The same conservation rule moves a uniform description between clustering
levels N (``rescale``), which is what makes closed forms derived for N=1
applicable to arbitrary chains.

All powers of near-one quantities go through ``pow1m``/``one_minus_pow1m``
(expm1/log1p based) so conservation survives in floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .chain import Chain, Reputation, Strategy, masked
from .errors import DEGENERATE_SURVIVAL, DegenerateChain

__all__ = [
    "HomogenizedChain",
    "homogenize",
    "masked_h",
    "homogenized_unit_cost",
    "uniform_unit_cost",
    "rescale",
    "conserved_products",
    "taylor_error",
    "taylor_error_limit",
    "pow1m",
    "one_minus_pow1m",
]


# === Floating-point helpers ================================================


def pow1m(x: float, p: float) -> float:
    """(1 - x)**p without forming 1 - x, accurate for small x.

    Accepts x < 0 (base above one). x = 1 maps to 0 for positive p.
    """
    if x == 1.0:
        return 0.0 if p > 0 else math.inf
    return math.exp(p * math.log1p(-x))


def one_minus_pow1m(x: float, p: float) -> float:
    """1 - (1 - x)**p, accurate when the result is small."""
    if x == 1.0:
        return 1.0 if p > 0 else -math.inf
    return -math.expm1(p * math.log1p(-x))


# === The uniform virtual chain =============================================


@dataclass(frozen=True)
class HomogenizedChain:
    """N identical virtual stages equivalent to some source chain.

    Fields mirror :class:`~chaincost.chain.StageParams` (per virtual stage)
    plus the clustering level ``N``, the chain-level input volume and
    reputation, and ``n_source``, the stage count of the physical chain the
    description came from. ``n_source`` matters because some closed-form
    results depend on the physical stage count no matter which N the
    parameters are currently expressed at.
    """

    N: int
    d: float
    em: float
    ei: float
    c: float
    m: float
    i: float
    C: float
    M: float
    I: float
    X0: float
    reputation: Reputation
    n_source: int

    def __post_init__(self) -> None:
        if not (isinstance(self.N, int) and self.N > 0):
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        for name in ("d", "em", "ei"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
        for name in ("c", "m", "i", "C", "M", "I"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
        if not (math.isfinite(self.X0) and self.X0 > 0.0):
            raise ValueError(f"X0 must be finite and > 0, got {self.X0!r}")
        if self.n_source < 1:
            raise ValueError(f"n_source must be >= 1, got {self.n_source!r}")

    @property
    def kappa(self) -> float:
        return self.reputation.kappa

    @property
    def v(self) -> float:
        return self.c + self.m + self.i


def _clamp01(x: float) -> float:
    # The virtual probabilities are mathematically bounded by [0, 1]; this
    # only strips float noise at the boundaries.
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


def _virtual_probs(p0: float, pm: float, theta: float, N: float) -> tuple[float, float, float]:
    """Solve the conservation equations for (d, em, ei) at level N.

    The products satisfy p0 <= pm <= theta, so the ratios below land in
    [0, 1] up to rounding. Zero-damage chains (p0 = 1) take the continuous
    limits em = ei = 0.
    """
    if p0 == 1.0:
        return 0.0, 0.0, 0.0
    d_N = 1.0 if p0 == 0.0 else -math.expm1(math.log(p0) / N)
    num_m = 1.0 if pm == 0.0 else -math.expm1(math.log(pm) / N)
    em_N = _clamp01(1.0 - num_m / d_N)
    if pm == 1.0:
        ei_N = 0.0
    else:
        num_i = -math.expm1(math.log(theta) / N)
        ei_N = _clamp01(num_i / num_m)
    return d_N, em_N, ei_N


def homogenize(
    chain: Chain,
    strategy: Strategy = Strategy.GENERAL,
    N: int | None = None,
) -> HomogenizedChain:
    """Replace ``chain`` (under ``strategy``'s mask) by N virtual stages.

    Fixed costs split evenly across virtual stages. The per-unit costs are
    scaled so the survival-weighted variable cost is conserved:

        v(N) = S_v * x / (1 - theta),   x = ei(1-em)d at level N,

    where S_v is the source chain's survival-weighted per-unit cost sum.
    When nothing is ever removed (theta = 1) the weights are all one and
    v(N) = S_v / N. Per-unit processing, monitoring, and inspection costs
    all carry the same weights, so each scales by the same factor.

    The mask is applied to the physical chain before aggregating; masking a
    homogenized description of an unmasked chain is NOT equivalent and is
    deliberately not offered for heterogeneous sources.

    Raises:
        DegenerateChain: if the masked chain ships (numerically) nothing.
    """
    if N is None:
        N = chain.n
    if not (isinstance(N, int) and N > 0):
        raise ValueError(f"N must be a positive integer, got {N!r}")

    work = masked(chain, strategy)
    first = work.stages[0]
    if N == work.n and all(s == first for s in work.stages):
        # A uniform chain at its own stage count is already its virtual
        # description; copying keeps the parameters bit-identical.
        theta_exact = pow1m(first.removal, N)
        if theta_exact < DEGENERATE_SURVIVAL:
            raise DegenerateChain(
                f"survival fraction {theta_exact!r} below {DEGENERATE_SURVIVAL!r}; "
                "no volume ships"
            )
        return HomogenizedChain(
            N=N, d=first.d, em=first.em, ei=first.ei,
            c=first.c, m=first.m, i=first.i,
            C=first.C, M=first.M, I=first.I,
            X0=work.X0, reputation=work.reputation, n_source=chain.n,
        )
    theta = 1.0
    pm = 1.0
    p0 = 1.0
    S_c = 0.0
    S_m = 0.0
    S_i = 0.0
    C_tot = 0.0
    M_tot = 0.0
    I_tot = 0.0
    reach = 1.0
    for s in work.stages:
        S_c += s.c * reach
        S_m += s.m * reach
        S_i += s.i * reach
        C_tot += s.C
        M_tot += s.M
        I_tot += s.I
        reach *= 1.0 - s.removal
        theta *= 1.0 - s.removal
        pm *= 1.0 - s.damage_passed
        p0 *= 1.0 - s.d
    if theta < DEGENERATE_SURVIVAL:
        raise DegenerateChain(
            f"survival fraction {theta!r} below {DEGENERATE_SURVIVAL!r}; no volume ships"
        )

    d_N, em_N, ei_N = _virtual_probs(p0, pm, theta, N)
    x_N = ei_N * (1.0 - em_N) * d_N
    if x_N == 0.0 or theta == 1.0:
        scale = 1.0 / N
    else:
        scale = x_N / (1.0 - theta)
    return HomogenizedChain(
        N=N,
        d=d_N,
        em=em_N,
        ei=ei_N,
        c=S_c * scale,
        m=S_m * scale,
        i=S_i * scale,
        C=C_tot / N,
        M=M_tot / N,
        I=I_tot / N,
        X0=work.X0,
        reputation=work.reputation,
        n_source=chain.n,
    )


def masked_h(h: HomogenizedChain, strategy: Strategy) -> HomogenizedChain:
    """Apply a strategy mask to a uniform virtual chain.

    Valid because every virtual stage is identical: masking the uniform
    description and masking a uniform physical chain commute.
    """
    if strategy is Strategy.GENERAL:
        return h
    if strategy is Strategy.ZERO:
        return replace(h, em=0.0, ei=0.0, m=0.0, i=0.0, M=0.0, I=0.0)
    if strategy is Strategy.INSPECTION:
        return replace(h, em=0.0, m=0.0, M=0.0)
    if strategy is Strategy.MONITORING:
        return replace(h, ei=0.0, i=0.0, I=0.0)
    raise AssertionError(strategy)


# === Unit cost of a uniform chain ==========================================


def uniform_unit_cost(
    N: float,
    d: float,
    em: float,
    ei: float,
    fixed: float,
    unit: float,
    X0: float,
    kappa: float,
) -> float:
    """Unit cost of N identical stages, from raw scalars.

    ``fixed`` is the per-stage fixed cost total (C+M+I) and ``unit`` the
    per-stage per-unit cost total (c+m+i). The formula is

        c_u = N*fixed/(X0*theta) + unit*(1-theta)/(x*theta) * w,
        x = ei*(1-em)*d,  theta = (1-x)**N,
        w = 1 + kappa*(theta - (1-(1-em)*d)**N)/theta,

    with (1-theta)/x -> N as x -> 0. ``em`` outside [0, 1] is accepted (the
    expression continues smoothly); root finders rely on that to bracket
    critical effectiveness values beyond the physical range.

    Raises:
        DegenerateChain: if theta underflows.
    """
    x = ei * (1.0 - em) * d
    theta = pow1m(x, N)
    if theta < DEGENERATE_SURVIVAL:
        raise DegenerateChain(f"survival fraction {theta!r} underflows at x={x!r}, N={N!r}")
    pmN = pow1m((1.0 - em) * d, N)
    varmult = one_minus_pow1m(x, N) / x if x != 0.0 else N
    w = 1.0 + kappa * (1.0 - pmN / theta)
    return N * fixed / (X0 * theta) + unit * varmult / theta * w


def homogenized_unit_cost(h: HomogenizedChain, strategy: Strategy = Strategy.GENERAL) -> float:
    """Unit cost of the uniform virtual chain under a strategy mask."""
    hm = masked_h(h, strategy)
    return uniform_unit_cost(
        N=hm.N,
        d=hm.d,
        em=hm.em,
        ei=hm.ei,
        fixed=hm.C + hm.M + hm.I,
        unit=hm.c + hm.m + hm.i,
        X0=hm.X0,
        kappa=hm.kappa,
    )


# === Moving between clustering levels ======================================


def conserved_products(h: HomogenizedChain) -> tuple[float, float, float]:
    """The three invariant survival products (p0, pm, theta) of ``h``."""
    p0 = pow1m(h.d, h.N)
    pm = pow1m((1.0 - h.em) * h.d, h.N)
    theta = pow1m(h.ei * (1.0 - h.em) * h.d, h.N)
    return p0, pm, theta


def rescale(h: HomogenizedChain, N: int) -> HomogenizedChain:
    """Re-express ``h`` at clustering level ``N``.

    Conserves the three survival products, the fixed cost totals, and the
    survival-weighted variable cost. ``rescale(rescale(h, N), h.N)`` returns
    the original parameters up to rounding. ``n_source`` passes through
    unchanged.

    Raises:
        DegenerateChain: if the survival product underflows (so the chain
            cannot be represented at any level).
    """
    if not (isinstance(N, int) and N > 0):
        raise ValueError(f"N must be a positive integer, got {N!r}")
    if N == h.N:
        return h
    p0, pm, theta = conserved_products(h)
    if theta < DEGENERATE_SURVIVAL:
        raise DegenerateChain(
            f"survival fraction {theta!r} below {DEGENERATE_SURVIVAL!r}; no volume ships"
        )
    d2, em2, ei2 = _virtual_probs(p0, pm, theta, N)
    x1 = h.ei * (1.0 - h.em) * h.d
    x2 = ei2 * (1.0 - em2) * d2
    if x1 == 0.0 or x2 == 0.0 or theta == 1.0:
        scale = h.N / N
    else:
        scale = x2 / x1
    fixed_scale = h.N / N
    return replace(
        h,
        N=N,
        d=d2,
        em=em2,
        ei=ei2,
        c=h.c * scale,
        m=h.m * scale,
        i=h.i * scale,
        C=h.C * fixed_scale,
        M=h.M * fixed_scale,
        I=h.I * fixed_scale,
    )


# === Quality of the clustering approximation ===============================


def taylor_error(gamma: float, N: float) -> float:
    """Overhead of splitting one stage of survival gamma into N virtual ones.

    The per-stage damage probabilities of the N-way split sum to
    N*(1 - gamma**(1/N)), which exceeds the single-stage damage 1 - gamma.
    The gap (gamma - 1) + N*(1 - gamma**(1/N)) is exactly zero at N = 1,
    nondecreasing in N, and saturates at :func:`taylor_error_limit`.

    Args:
        gamma: a survival product in (0, 1].
        N: clustering level, >= 1.
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
    if not (math.isfinite(N) and N >= 1.0):
        raise ValueError(f"N must be >= 1, got {N!r}")
    return (gamma - 1.0) + N * (1.0 - math.pow(gamma, 1.0 / N))


def taylor_error_limit(gamma: float) -> float:
    """N -> infinity limit of :func:`taylor_error`: gamma - 1 - ln(gamma)."""
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma!r}")
    return (gamma - 1.0) - math.log(gamma)
