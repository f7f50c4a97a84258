"""End-to-end acceptance checks against published landmark values.

Each test evaluates one acceptance target at its stated tolerance and
emits one `[ACCEPTANCE] <name>: PASS|FAIL` line (echoed in the terminal
summary). The targets fall into four groups: exactness of the virtual
re-expression, agreement between independent computations of the same
quantity (recursion, simulation, three threshold methods), landmark
numbers for the fifty-stage reference chain, and randomized sign
properties of the critical thresholds.

The superiority lower-boundary landmark is a documented mismatch: the
model puts the boundary at 2.82e-3, outside the published reading band
[2.0e-3, 2.6e-3]. That test reports FAIL and is marked xfail rather than
widening the band.
"""

import math
import random
import time
from dataclasses import replace

import pytest

import numpy as np

from chaincost import (
    CriticalQuery,
    DegenerateBracket,
    Method,
    NoRoot,
    NoThreshold,
    Reputation,
    Strategy,
    StrategyPair,
    cost_breakdown,
    defective_sold_volume,
    find_cost_equality,
    homogenize,
    homogenized_unit_cost,
    recursive_volumes,
    rescale,
    simulate,
    sold_volume,
    superiority_surface,
    trace_critical_curve,
)
from chaincost.critical import (
    d_min_vs_zero,
    ei_for_em_crit_at_d0,
    em_crit_at_d0,
    em_crit_vs_inspection_Nn,
    em_crit_vs_zero_Nn,
    kappa_min,
    max_em_crit,
)
from chaincost.homogenize import taylor_error, taylor_error_limit
from chaincost.presets import ref50
from chaincost.solver import default_d_grid, default_ei_grid
from conftest import ACCEPTANCE_LINES, make_chain, relerr

RNG_SEED = 20260815


def report(name: str, ok: bool) -> bool:
    line = f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def with_kappa(chain, kappa: float):
    return replace(chain, reputation=Reputation(alpha=kappa / 2.0, beta=1.0))


def curve_minimum(h, hi: float = 0.2, num: int = 4000):
    """(d, value) at the sampled minimum of the vs-zero critical curve."""
    q = CriticalQuery(StrategyPair.MONITORING_VS_ZERO, h)
    lo = d_min_vs_zero(h) * 1.0001
    grid = tuple(float(x) for x in np.geomspace(lo, hi, num))
    curve = trace_critical_curve(q, grid, Method.CLOSED_FORM)
    best = min(curve.points, key=lambda p: p.value)
    return best.d, best.value


# === Exactness and cross-checks ===========================================


def test_homogenization_exactness():
    rng = random.Random(RNG_SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        chain = make_chain(rng)
        for strat in (Strategy.ZERO, Strategy.INSPECTION, Strategy.MONITORING):
            want = cost_breakdown(chain, strat).unit_cost
            for N in (1, chain.n, 2 * chain.n):
                got = homogenized_unit_cost(homogenize(chain, strat, N))
                worst = max(worst, relerr(got, want))
    elapsed = time.perf_counter() - start
    assert report("homogenization-exactness", worst <= 1e-10 and elapsed < 10.0)


def test_stagewise_recursion_oracle():
    rng = random.Random(RNG_SEED)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        chain = make_chain(rng)
        X, Xbad = recursive_volumes(chain)
        worst = max(worst, relerr(X, sold_volume(chain)))
        worst = max(worst, relerr(Xbad, defective_sold_volume(chain)))
    elapsed = time.perf_counter() - start
    assert report("stagewise-recursion-oracle", worst <= 1e-12 and elapsed < 5.0)


def test_monte_carlo_consistency():
    chain = replace(ref50(), X0=1e5)
    start = time.perf_counter()
    res = simulate(chain, Strategy.INSPECTION, replications=30, seed=0)
    elapsed = time.perf_counter() - start
    ok = (
        abs(res.X_n_hat - sold_volume(chain, Strategy.INSPECTION))
        <= 4.0 * res.stderr_X_n
        and abs(res.X_n_bad_hat - defective_sold_volume(chain, Strategy.INSPECTION))
        <= 4.0 * res.stderr_X_n_bad
        and elapsed < 60.0
    )
    assert report("monte-carlo-consistency", ok)


def test_unit_cost_saturation_bounds():
    cu_z = cost_breakdown(ref50(d=1.0), Strategy.ZERO).unit_cost
    cu_m = cost_breakdown(ref50(d=1.0, em=0.0), Strategy.MONITORING).unit_cost
    ok = abs(cu_z - 1002.5) <= 1e-9 and abs(cu_m - 1103.0) <= 1e-9
    assert report("unit-cost-saturation-bounds", ok)


def test_small_damage_landmark_values():
    h = homogenize(ref50())
    ok = (
        abs(max_em_crit(h) - 0.4845) <= 5e-4
        and abs(em_crit_at_d0(h, 0.8) - 0.3876) <= 5e-4
        and abs(ei_for_em_crit_at_d0(h, 0.4) - 0.826) <= 1e-3
        and abs(kappa_min(h) - 0.51545) <= 5e-5
    )
    assert report("small-damage-landmark-values", ok)


def test_triple_method_agreement():
    h = homogenize(ref50())
    start = time.perf_counter()
    worst = 0.0
    for pair in (StrategyPair.MONITORING_VS_ZERO, StrategyPair.MONITORING_VS_INSPECTION):
        q = CriticalQuery(pair, h)
        by_method = {
            method: {p.d: p.value for p in trace_critical_curve(q, method=method).points}
            for method in Method
        }
        direct = by_method[Method.DIRECT_NN]
        assert direct
        for other in (Method.N1_RESCALE, Method.CLOSED_FORM):
            common = set(direct) & set(by_method[other])
            assert common
            worst = max(worst, max(abs(direct[d] - by_method[other][d]) for d in common))
    elapsed = time.perf_counter() - start
    assert report("triple-method-agreement", worst <= 1e-5 and elapsed < 120.0)


# === Critical-curve landmarks =============================================


def test_curve_tangency_kappa1():
    d_star, em_star = curve_minimum(homogenize(with_kappa(ref50(), 1.0)))
    ok = abs(em_star - 0.35) <= 0.02 and abs(d_star - 0.02) <= 0.005
    assert report("curve-tangency-kappa1", ok)


def test_superiority_lower_boundary():
    q = CriticalQuery(StrategyPair.MONITORING_VS_ZERO, homogenize(ref50()))
    roots = find_cost_equality(q, "d")
    ok = len(roots) == 2 and 2.0e-3 <= roots[0] <= 2.6e-3
    if not report("superiority-lower-boundary", ok):
        pytest.xfail(
            f"boundary sits at {roots[0]:.4e}, outside the published reading "
            "band [2.0e-3, 2.6e-3]; the exact value is pinned in the solver suite"
        )


def test_curve_minimum_kappa4():
    d_star, em_star = curve_minimum(homogenize(with_kappa(ref50(), 4.0)))
    ok = abs(em_star - 0.18) <= 0.02 and abs(d_star - 0.012) <= 0.003
    assert report("curve-minimum-kappa4", ok)


def test_superiority_onset_kappa02():
    h = homogenize(with_kappa(ref50(), 0.2))
    _, em_star = curve_minimum(h)
    onset_d = d_min_vs_zero(h)
    ok = abs(em_star - 0.8) <= 0.02 and abs(onset_d - 0.015) <= 0.003
    assert report("superiority-onset-kappa02", ok)


# === Stage-splitting error function =======================================


def test_split_error_function():
    ok = all(
        taylor_error(g, 1) == 0.0 for g in (1e-6, 1e-3, 0.1, 0.5, 0.9, 0.99, 1.0)
    )
    for gamma in (0.5, 0.9, 0.99):
        vals = [taylor_error(gamma, N) for N in range(1, 1001)]
        ok = ok and all(b > a for a, b in zip(vals, vals[1:]))
        ok = ok and abs(taylor_error(gamma, 10**6) - taylor_error_limit(gamma)) <= 1e-6
    assert report("split-error-function", ok)


# === Randomized sign properties ===========================================


def test_threshold_cost_monotonicity():
    # Against zero maintenance: the threshold falls when reputation or the
    # processing cost rises and climbs when monitoring costs rise.
    rng = random.Random(RNG_SEED)
    checked = violations = 0
    for _ in range(1000):
        h = homogenize(make_chain(rng))
        try:
            base = em_crit_vs_zero_Nn(h)
            up_kappa = em_crit_vs_zero_Nn(
                replace(h, reputation=Reputation(alpha=h.kappa * 1.001 / 2.0, beta=1.0))
            )
            up_c = em_crit_vs_zero_Nn(replace(h, c=h.c * 1.001))
            up_M = em_crit_vs_zero_Nn(replace(h, M=h.M * 1.001 + 1e-9))
            up_m = em_crit_vs_zero_Nn(replace(h, m=h.m * 1.001 + 1e-9))
        except NoThreshold:
            continue
        checked += 1
        if not (up_kappa < base and up_c < base and up_M > base and up_m > base):
            violations += 1
    assert checked >= 800
    assert report("threshold-cost-monotonicity", violations == 0)


def window_length(h) -> float | None:
    q = CriticalQuery(StrategyPair.MONITORING_VS_ZERO, h)
    try:
        roots = find_cost_equality(q, "d")
    except (NoRoot, DegenerateBracket):
        return None
    return roots[1] - roots[0] if len(roots) == 2 else None


def test_window_shrinks_in_length():
    # With aggregates held fixed, the superiority window measured on the
    # level-n curve shrinks as n doubles. Near tangency the window is just
    # opening and its length is not yet monotone, so draws are gated on the
    # chain's effectiveness clearing the curve minimum by 2 percent.
    rng = random.Random(RNG_SEED)
    checked = violations = 0
    attempts = 0
    while checked < 1000 and attempts < 5000:
        attempts += 1
        chain = make_chain(rng)
        h = homogenize(chain)
        base = window_length(rescale(h, chain.n))
        if base is None:
            continue
        try:
            _, em_min = curve_minimum(h, hi=1.0 - 1e-9, num=200)
        except NoThreshold:
            continue
        if h.em - em_min < 0.02 * h.em:
            continue
        lens = [base]
        for n in (2 * chain.n, 4 * chain.n, 8 * chain.n):
            lens.append(window_length(rescale(h, n)))
        if any(l is None for l in lens):
            continue
        checked += 1
        if not all(b < a for a, b in zip(lens, lens[1:])):
            violations += 1
    assert checked == 1000
    assert report("window-shrinks-in-length", violations == 0)


def sampled_curve(h, num: int = 200) -> list[float] | None:
    try:
        lo = d_min_vs_zero(h)
    except NoThreshold:
        return None
    values = []
    for d in np.geomspace(lo * 1.001, 1.0 - 1e-9, num):
        try:
            values.append(em_crit_vs_zero_Nn(replace(h, d=float(d))))
        except NoThreshold:
            return None
    return values


def test_single_minimum_stability():
    # The vs-zero curve dips to exactly one strictly positive minimum, and
    # that minimum barely moves between the 50- and 500-stage expressions
    # of the same aggregates.
    rng = random.Random(RNG_SEED)
    checked = violations = 0
    for _ in range(1000):
        h = homogenize(make_chain(rng))
        c50 = sampled_curve(rescale(h, 50))
        c500 = sampled_curve(rescale(h, 500))
        if c50 is None or c500 is None:
            continue
        checked += 1
        k = c50.index(min(c50))
        unimodal = all(a > b for a, b in zip(c50[: k], c50[1 : k + 1])) and all(
            a < b for a, b in zip(c50[k:-1], c50[k + 1 :])
        )
        stable = abs(min(c500) - min(c50)) < 0.02 * abs(min(c50))
        if not (unimodal and min(c50) > 0.0 and stable):
            violations += 1
    assert checked >= 900
    assert report("single-minimum-stability", violations == 0)


def test_supremum_at_vanishing_damage():
    # With monitoring and inspection costing the same per stage, the
    # vs-inspection threshold is largest in the vanishing-damage limit.
    rng = random.Random(RNG_SEED)
    grid = [float(d) for d in np.geomspace(1e-5, 0.9, 60)]
    checked = violations = 0
    for _ in range(1000):
        h = homogenize(make_chain(rng))
        h = replace(h, i=h.m, I=h.M)
        ei = rng.uniform(0.0, 1.0)
        try:
            limit = em_crit_at_d0(h, ei)
        except NoThreshold:
            continue
        values = []
        for d in grid:
            try:
                values.append(
                    em_crit_vs_inspection_Nn(
                        CriticalQuery(
                            StrategyPair.MONITORING_VS_INSPECTION,
                            replace(h, d=d),
                            fixed_e_i=ei,
                        )
                    )
                )
            except NoThreshold:
                pass
        if not values:
            continue
        checked += 1
        if max(values) > limit + 1e-9:
            violations += 1
    assert checked >= 900
    assert report("supremum-at-vanishing-damage", violations == 0)


def vs_inspection_curve(h, ei, grid) -> dict[float, float]:
    out = {}
    for d in grid:
        try:
            out[d] = em_crit_vs_inspection_Nn(
                CriticalQuery(
                    StrategyPair.MONITORING_VS_INSPECTION, replace(h, d=d), fixed_e_i=ei
                )
            )
        except NoThreshold:
            pass
    return out


def test_balance_ordered_curves():
    # vs-inspection curves for different (M-I)/X0 + m - i never cross:
    # raising the fixed monitoring cost lifts the whole curve, raising the
    # fixed inspection cost lowers it.
    rng = random.Random(RNG_SEED)
    grid = [float(d) for d in np.geomspace(1e-5, 0.9, 40)]
    checked = violations = 0
    for _ in range(1000):
        h = homogenize(make_chain(rng))
        ei = rng.uniform(0.0, 1.0)
        base = vs_inspection_curve(h, ei, grid)
        lifted = vs_inspection_curve(replace(h, M=h.M * 1.1 + 10.0), ei, grid)
        lowered = vs_inspection_curve(replace(h, I=h.I * 1.1 + 10.0), ei, grid)
        common_up = set(base) & set(lifted)
        common_dn = set(base) & set(lowered)
        if not common_up or not common_dn:
            continue
        checked += 1
        if any(lifted[d] <= base[d] for d in common_up) or any(
            lowered[d] >= base[d] for d in common_dn
        ):
            violations += 1
    assert checked >= 950
    assert report("balance-ordered-curves", violations == 0)


def test_threshold_reputation_inspection_monotonicity():
    # Where inspection is at least as costly as monitoring per stage, an
    # in-range vs-inspection threshold climbs with reputation weight and
    # with inspection effectiveness.
    rng = random.Random(RNG_SEED)

    def value(h, ei):
        return em_crit_vs_inspection_Nn(
            CriticalQuery(StrategyPair.MONITORING_VS_INSPECTION, h, fixed_e_i=ei)
        )

    checked = violations = 0
    attempts = 0
    while checked < 1000 and attempts < 20000:
        attempts += 1
        h = homogenize(make_chain(rng))
        h = replace(h, i=h.m + rng.uniform(0.0, 2.0), I=h.M + rng.uniform(0.0, 1e4))
        ei = rng.uniform(0.0, 0.98)
        try:
            base = value(h, ei)
            if not 0.0 <= base <= 1.0:
                continue
            up_kappa = value(
                replace(h, reputation=Reputation(alpha=h.kappa * 1.001 / 2.0, beta=1.0)),
                ei,
            )
            up_ei = value(h, ei + 0.01)
        except NoThreshold:
            continue
        checked += 1
        if not (up_kappa > base and up_ei > base):
            violations += 1
    assert checked == 1000
    assert report("threshold-reputation-inspection-monotonicity", violations == 0)


def test_dominance_surface_bounds():
    q = CriticalQuery(StrategyPair.MONITORING_VS_INSPECTION, homogenize(ref50()))
    surface = superiority_surface(
        q, default_d_grid(num=50), default_ei_grid(40), method=Method.N1_RESCALE
    )
    finite = [
        cell.em_crit
        for row in surface.cells
        for cell in row
        if math.isfinite(cell.em_crit)
    ]
    corner = surface.cells[0][-1]
    assert corner.d == surface.d_grid[0] and corner.ei == 1.0
    ok = max(finite) < 0.5 and abs(corner.em_crit - 0.4845) <= 2e-3
    assert report("dominance-surface-bounds", ok)
