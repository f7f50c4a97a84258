"""Closed-form critical thresholds, their gates, and regime classification.

Scalar reference values in this file were computed independently with
50-digit mpmath arithmetic (root-finding on the exact unit-cost gap, or
direct evaluation of the defining expression). Tolerances reflect the
float cancellation observed in the package's double-precision forms.
"""

import random
from dataclasses import replace

import pytest

from chaincost import (
    Chain,
    ConditionViolated,
    CriticalQuery,
    DegenerateChain,
    NoThreshold,
    Reputation,
    StageParams,
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
    homogenize,
    homogenized_unit_cost,
    kappa_crit,
    kappa_min,
    max_em_crit,
    rescale,
)
from chaincost.chain import Strategy
from chaincost.critical import RegimeField
from chaincost.homogenize import HomogenizedChain
from chaincost.presets import ref50


@pytest.fixture(scope="module")
def h50():
    return homogenize(ref50())


def with_kappa(h, kappa: float):
    return replace(h, reputation=Reputation(alpha=kappa / 2.0, beta=1.0))


def insp_query(h, e_i: float | None = None) -> CriticalQuery:
    return CriticalQuery(StrategyPair.MONITORING_VS_INSPECTION, h, fixed_e_i=e_i)


class TestVersusZero:
    def test_reference_threshold(self, h50):
        got = em_crit_vs_zero_Nn(h50)
        assert got == pytest.approx(0.33847567644215528, rel=1e-12)

    def test_threshold_equalizes_costs(self, h50):
        em = em_crit_vs_zero_Nn(h50)
        cu_m = homogenized_unit_cost(replace(h50, em=em), Strategy.MONITORING)
        cu_z = homogenized_unit_cost(h50, Strategy.ZERO)
        assert cu_m == pytest.approx(cu_z, rel=1e-12)

    def test_minimum_damage_probability(self, h50):
        assert d_min_vs_zero(h50) == pytest.approx(0.0021271792309243177, rel=1e-12)
        low = with_kappa(h50, 0.2)
        assert d_min_vs_zero(low) == pytest.approx(0.013965514982447687, rel=1e-12)

    def test_no_threshold_below_minimum_damage(self, h50):
        with pytest.raises(NoThreshold):
            em_crit_vs_zero_Nn(replace(h50, d=0.002))

    def test_no_threshold_when_monitoring_overhead_dominates(self, h50):
        heavy = replace(h50, M=9.5e6)
        with pytest.raises(NoThreshold):
            em_crit_vs_zero_Nn(heavy)
        with pytest.raises(NoThreshold):
            d_min_vs_zero(heavy)

    def test_single_stage_form_agrees_with_general_form(self, h50):
        h1 = rescale(h50, 1)
        assert em_crit_vs_zero_N1(h1) == pytest.approx(em_crit_vs_zero_Nn(h1), rel=1e-12)

    def test_single_stage_form_requires_single_stage(self, h50):
        with pytest.raises(ValueError):
            em_crit_vs_zero_N1(h50)


class TestVersusInspection:
    def test_reference_thresholds(self, h50):
        cases = [
            (1e-4, 0.38581137317181645),
            (1e-6, 0.38761816922354089),
        ]
        for d, want in cases:
            got = em_crit_vs_inspection_Nn(insp_query(replace(h50, d=d)))
            assert got == pytest.approx(want, abs=1e-9)

    def test_negative_threshold_when_monitoring_always_wins(self, h50):
        # At this damage probability the monitored chain undercuts
        # inspection even at em=0; the formal threshold is negative.
        got = em_crit_vs_inspection_Nn(insp_query(h50))
        assert got == pytest.approx(-0.81368181186539840, rel=1e-12)

    def test_threshold_equalizes_costs(self, h50):
        h = replace(h50, d=1e-4)
        em = em_crit_vs_inspection_Nn(insp_query(h))
        cu_m = homogenized_unit_cost(replace(h, em=em), Strategy.MONITORING)
        cu_i = homogenized_unit_cost(h, Strategy.INSPECTION)
        assert cu_m == pytest.approx(cu_i, rel=1e-9)

    def test_no_threshold_when_inspection_collapses(self, h50):
        # Heavy removal at high damage makes inspection arbitrarily
        # expensive per sold unit; monitoring wins outright.
        with pytest.raises(NoThreshold):
            em_crit_vs_inspection_Nn(insp_query(replace(h50, d=0.5)))

    def test_single_stage_form_agrees_with_general_form(self, h50):
        h1 = rescale(h50, 1)
        # At this aggregated description the crossing exists only for
        # cheap enough inspection; pick an e_i where it does.
        q = insp_query(h1, e_i=0.3)
        assert em_crit_vs_inspection_N1(q) == pytest.approx(
            em_crit_vs_inspection_Nn(q), rel=1e-9
        )

    def test_single_stage_form_refuses_like_general_form(self, h50):
        # At the description's own inspection effectiveness the inspection
        # cost exceeds the monitoring ceiling, so both forms must refuse
        # rather than extrapolate past a zero survival factor.
        h1 = rescale(h50, 1)
        q = insp_query(h1)
        with pytest.raises(NoThreshold):
            em_crit_vs_inspection_Nn(q)
        with pytest.raises(NoThreshold):
            em_crit_vs_inspection_N1(q)

    def test_single_stage_full_removal_is_degenerate(self):
        h1 = HomogenizedChain(
            N=1, d=1.0, em=0.5, ei=1.0, c=5.0, m=1.0, i=1.0,
            C=1e4, M=1e4, I=1e4, X0=1e6,
            reputation=Reputation(alpha=0.5, beta=1.0), n_source=1,
        )
        with pytest.raises(DegenerateChain):
            em_crit_vs_inspection_N1(insp_query(h1))

    def test_fixed_effectiveness_overrides_description(self, h50):
        h = replace(h50, d=1e-4)
        default = em_crit_vs_inspection_Nn(insp_query(h))
        lowered = em_crit_vs_inspection_Nn(insp_query(h, e_i=0.4))
        assert default == em_crit_vs_inspection_Nn(insp_query(h, e_i=0.8))
        assert lowered != default


class TestSmallDamageExpansion:
    def test_matches_limit_value_under_balance(self, h50):
        # With balanced overheads the expansion is damage-independent,
        # so it equals the limit value at any admissible d.
        want = em_crit_at_d0(h50, 0.8)
        assert em_crit_taylor(replace(h50, d=0.0), 0.8) == want
        assert em_crit_taylor(replace(h50, d=1e-4), 0.8) == want

    def test_error_against_exact_form_shrinks_linearly(self, h50):
        errs = []
        for d in (1e-4, 1e-6):
            exact = em_crit_vs_inspection_Nn(insp_query(replace(h50, d=d)))
            errs.append(abs(em_crit_taylor(replace(h50, d=d), 0.8) - exact))
        assert errs[0] < 2e-3
        assert errs[1] < 2e-5
        assert errs[1] / errs[0] == pytest.approx(0.01, rel=0.2)

    def test_rejects_large_damage(self, h50):
        with pytest.raises(ConditionViolated):
            em_crit_taylor(h50, 0.8)

    def test_rejects_effectiveness_outside_unit_interval(self, h50):
        with pytest.raises(ValueError):
            em_crit_taylor(replace(h50, d=1e-4), 1.2)


class TestLimitFamily:
    def test_reference_values(self, h50):
        assert max_em_crit(h50) == pytest.approx(0.4845454545454545, rel=1e-14)
        assert em_crit_at_d0(h50, 0.8) == pytest.approx(0.3876363636363636, rel=1e-14)
        assert em_crit_at_d0(h50, 1.0) == pytest.approx(max_em_crit(h50), rel=1e-14)
        assert ei_for_em_crit_at_d0(h50, 0.4) == pytest.approx(0.8255159474671669, rel=1e-12)
        assert kappa_min(h50) == pytest.approx(0.5154545454545455, rel=1e-14)
        # kappa_crit needs a strictly positive balance term; REF50 sits
        # exactly on the balance line, so nudge M up to enter the regime.
        assert kappa_crit(replace(h50, M=2e4)) == pytest.approx(
            0.5154545454545455, rel=1e-14
        )
        with pytest.raises(ConditionViolated):
            kappa_crit(h50)

    def test_max_vanishes_at_minimum_reputation_strength(self, h50):
        at_min = with_kappa(h50, kappa_min(h50))
        assert max_em_crit(at_min) == pytest.approx(0.0, abs=1e-12)

    def test_inverse_round_trip(self, h50):
        for target in (0.1, 0.3, 0.45):
            ei = ei_for_em_crit_at_d0(h50, target)
            assert em_crit_at_d0(h50, ei) == pytest.approx(target, rel=1e-12)

    def test_limit_value_invariant_under_rescaling(self, h50):
        # The limit family describes the physical chain, so re-expressing
        # the parameters at another clustering level cannot move it.
        h0 = replace(h50, d=0.0)
        want = em_crit_at_d0(h0, 0.8)
        for N in (1, 50, 100):
            assert em_crit_at_d0(rescale(h0, N), 0.8) == pytest.approx(want, rel=1e-9)
        assert max_em_crit(rescale(h0, 1)) == pytest.approx(max_em_crit(h0), rel=1e-9)

    def test_requires_balanced_overheads(self, h50):
        unbalanced = replace(h50, M=2e4)
        for call in (
            lambda: max_em_crit(unbalanced),
            lambda: em_crit_at_d0(unbalanced, 0.8),
            lambda: ei_for_em_crit_at_d0(unbalanced, 0.4),
            lambda: kappa_min(unbalanced),
        ):
            with pytest.raises(ConditionViolated):
                call()

    def test_one_sided_gates_split_on_balance_sign(self, h50):
        # A negative balance term keeps the kappa_min bound valid (the
        # small-d threshold only drops further) but kills the sensitivity
        # flip that kappa_crit locates, and vice versa for a positive one.
        negative = replace(h50, M=0.0)
        assert kappa_min(negative) == pytest.approx(kappa_min(h50), rel=1e-14)
        with pytest.raises(ConditionViolated):
            kappa_crit(negative)
        positive = replace(h50, M=2e4)
        with pytest.raises(ConditionViolated):
            kappa_min(positive)

    def test_free_inspection_needs_no_reputation_pressure(self, h50):
        # Inspection that is free at the fixed and maintenance level
        # drives the viability bound down to the bare half-chain factor.
        free = replace(h50, C=0.0, I=0.0, M=0.0, m=0.0, i=0.0)
        assert kappa_min(free) == pytest.approx(0.51, rel=1e-14)
        long_chain = replace(free, n_source=10**9)
        assert kappa_min(long_chain) == pytest.approx(0.5, rel=1e-6)


class TestSensitivityFlips:
    @pytest.fixture()
    def synthetic(self):
        # Chosen so both flip points land inside (0, 1): balance term
        # (M-I)/X0 + m - i = 0.01 and moderate per-unit costs.
        return HomogenizedChain(
            N=1, d=0.01, em=0.5, ei=0.5, c=5.0, m=1.0, i=1.0,
            C=1e4, M=2e4, I=1e4, X0=1e6,
            reputation=Reputation(alpha=0.5, beta=1.0), n_source=1,
        )

    def test_ei_crit_reference(self, synthetic):
        assert ei_crit(synthetic, 0.01) == pytest.approx(0.16583747927031434, rel=1e-12)

    def test_ei_crit_scales_inversely_with_damage(self, synthetic):
        assert ei_crit(synthetic, 0.005) == pytest.approx(
            2.0 * ei_crit(synthetic, 0.01), rel=1e-12
        )

    def test_ei_crit_flips_reputation_sensitivity(self, synthetic):
        flip = ei_crit(synthetic, 0.01)
        dq = 1e-7

        def slope(e_i):
            lo = with_kappa(synthetic, 1.0 - dq)
            hi = with_kappa(synthetic, 1.0 + dq)
            return (em_crit_taylor(hi, e_i) - em_crit_taylor(lo, e_i)) / (2 * dq)

        assert slope(0.9 * flip) < 0
        assert slope(1.1 * flip) > 0

    def test_kappa_crit_flips_inspection_sensitivity(self, synthetic):
        flip = kappa_crit(synthetic)
        dq = 1e-7

        def slope(kappa):
            h = with_kappa(synthetic, kappa)
            return (em_crit_taylor(h, 0.5 + dq) - em_crit_taylor(h, 0.5 - dq)) / (2 * dq)

        assert flip == pytest.approx(1.0033333333333334, rel=1e-12)
        assert slope(0.9 * flip) < 0
        assert slope(1.1 * flip) > 0

    def test_ei_crit_requires_positive_balance(self, h50):
        with pytest.raises(ConditionViolated):
            ei_crit(rescale(h50, 1), 0.1)

    def test_worked_example_is_out_of_physical_range(self):
        # Characterization only: with the reference parameters at M=2e4,
        # I=1e4 and d=1e-4 the flip point lies far above 1 under both
        # readings of the single-stage costs (per-stage values rescaled,
        # or taken directly as aggregates), so no flip occurs for any
        # physical inspection effectiveness and no tighter value is
        # asserted here.
        base = ref50()
        src = Chain(
            stages=tuple(replace(s, M=2e4) for s in base.stages),
            X0=base.X0,
            reputation=base.reputation,
        )
        rescaled_reading = ei_crit(rescale(homogenize(src), 1), 1e-4)
        direct_reading = ei_crit(
            HomogenizedChain(
                N=1, d=1e-4, em=0.8, ei=0.8, c=10.0, m=1.0, i=1.0,
                C=5e4, M=2e4, I=1e4, X0=1e6,
                reputation=Reputation(alpha=0.5, beta=1.0), n_source=1,
            ),
            1e-4,
        )
        assert rescaled_reading == pytest.approx(9.755962040061128, rel=1e-12)
        assert direct_reading == pytest.approx(9.033423667570428, rel=1e-12)
        assert min(rescaled_reading, direct_reading) > 1.0


class TestRegimeClassification:
    def test_reference_window(self, h50):
        r = classify_regime(h50)
        assert r.window_exists
        assert r.a == pytest.approx(0.0028173066619415006, rel=1e-9)
        assert r.b == pytest.approx(0.16706776073637039, rel=1e-9)

    def test_fields_partition_the_damage_axis(self, h50):
        r = classify_regime(h50)
        assert r.field_at(0.001) is RegimeField.UNCERTAINTY
        assert r.field_at(0.05) is RegimeField.MONITORING_SUPERIORITY
        assert r.field_at(0.3) is RegimeField.AVOIDANCE
        with pytest.raises(ValueError):
            r.field_at(1.5)

    def test_window_boundaries_sit_on_cost_crossings(self, h50):
        r = classify_regime(h50)
        for d in (r.a, r.b):
            at = replace(h50, d=d)
            cu_m = homogenized_unit_cost(at, Strategy.MONITORING)
            cu_z = homogenized_unit_cost(at, Strategy.ZERO)
            assert cu_m == pytest.approx(cu_z, rel=1e-8)

    def test_free_perfect_monitoring_wins_everywhere(self, h50):
        r = classify_regime(replace(h50, em=1.0, m=0.0, M=0.0))
        assert (r.a, r.b, r.window_exists) == (0.0, 1.0, True)
        assert r.field_at(0.5) is RegimeField.MONITORING_SUPERIORITY

    def test_no_reputation_pressure_means_no_window(self, h50):
        r = classify_regime(with_kappa(h50, 0.0))
        assert not r.window_exists
        assert (r.a, r.b) == (1.0, 1.0)
        assert r.field_at(0.05) is RegimeField.UNCERTAINTY

    def test_rejects_effectiveness_outside_unit_interval(self, h50):
        with pytest.raises(ValueError):
            classify_regime(h50, em=1.2)
        with pytest.raises(ValueError):
            classify_regime(h50, ei=-0.1)
