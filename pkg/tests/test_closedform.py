"""Closed-form outage and capacity expressions against independent oracles."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy import special as sp

from fas_edof import (
    BcmParams,
    BranchWeights,
    SnrPoint,
    asymptotic_outage,
    capacity_high_snr_asymptote,
    capacity_quadrature,
    db_to_linear,
    default_blocks,
    edof_1d,
    ergodic_capacity_series,
    linear_to_db,
    outage_bcm,
    outage_edof,
    outage_iid,
    outage_single,
    outage_wim,
    required_snr,
)

# high-precision evaluations of the point examples (mpmath/fsum-checked)
EDOF_X1_K7 = 0.04032732428954376
EDOF_X1_K3 = 0.25258045782764715
IID_X1_N20 = 1.037524372314787e-4
WIM_EXAMPLE = 0.34021905567465266
RAYLEIGH_CAP_G1 = 0.860347382270886  # e * E1(1) / ln 2


def synthetic_weights(values) -> BranchWeights:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return BranchWeights(beta=np.asarray(values, dtype=float))


class TestSnrPoint:
    def test_db_conversion_is_exact_power_rule(self):
        point = SnrPoint.from_db(7.0, -3.0)
        assert point.gamma_bar == 10.0 ** 0.7
        assert point.gamma_th == 10.0 ** -0.3
        assert point.x == point.gamma_th / point.gamma_bar

    def test_round_trip_db(self):
        assert linear_to_db(db_to_linear(13.7)) == pytest.approx(13.7, abs=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            SnrPoint(gamma_bar=0.0, gamma_th=1.0)
        with pytest.raises(ValueError):
            SnrPoint(gamma_bar=1.0, gamma_th=-2.0)


class TestOutageEdof:
    def test_seven_branch_point_value(self):
        value = outage_edof(1.0, 7)
        assert value == pytest.approx(EDOF_X1_K7, rel=1e-12)
        # the quoted "~4.0e-2" level
        assert value == pytest.approx(0.040, abs=5e-4)

    def test_single_branch_reduces_to_rayleigh(self):
        for x in (0.05, 0.7, 2.0):
            assert outage_edof(x, 1) == pytest.approx(-math.expm1(-x), rel=1e-15)
            assert outage_single(x) == outage_edof(x, 1)

    def test_three_branch_point_value(self):
        assert outage_edof(1.0, 3) == pytest.approx(EDOF_X1_K3, rel=1e-12)

    def test_in_unit_interval_and_monotone(self):
        xs = np.logspace(-4, 1.5, 60)
        for k in (1, 3, 7, 49):
            values = [outage_edof(float(x), k) for x in xs]
            assert all(0.0 < v < 1.0 for v in values[:-1])
            assert all(a < b for a, b in zip(values, values[1:]))

    def test_monotone_in_aperture(self):
        x = 0.4
        values = [outage_edof(x, edof_1d(w)) for w in (0.5, 1.0, 1.5, 2.0, 3.0, 5.0)]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_deep_tail_slope_equals_branch_count(self):
        # secant of log P vs log x on x in [1e-6, 1e-4]
        for k in (3, 5, 7):
            x1, x2 = 1e-6, 1e-4
            slope = (math.log(outage_edof(x2, k)) - math.log(outage_edof(x1, k))) / (
                math.log(x2) - math.log(x1)
            )
            assert slope == pytest.approx(k, abs=1e-3)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            outage_edof(0.0, 3)
        with pytest.raises(ValueError):
            outage_edof(1.0, 0)


class TestOutageWim:
    def test_unit_weights_reduce_to_edof(self):
        weights = synthetic_weights([1.0] * 7)
        for x in (0.01, 0.3, 1.0, 4.0):
            assert outage_wim(x, weights) == pytest.approx(outage_edof(x, 7), rel=1e-14)

    def test_synthetic_two_branch_example(self):
        with pytest.warns(UserWarning):
            weights = BranchWeights(beta=np.array([2.0, 0.5]))
        assert outage_wim(1.0, weights) == pytest.approx(WIM_EXAMPLE, rel=1e-12)

    def test_small_threshold_power_law(self):
        weights = synthetic_weights([1.0, 1.0])
        x = 1e-4
        assert outage_wim(x, weights) == pytest.approx(x**2, rel=1e-3)

    @given(
        st.lists(st.floats(min_value=0.1, max_value=1.6), min_size=2, max_size=9),
        st.floats(min_value=1e-3, max_value=5.0),
    )
    @settings(max_examples=150, deadline=None)
    def test_jensen_ordering_vs_equal_power(self, raw, x):
        # any weight vector with sum(beta) <= K is at least as conservative as EDoF
        beta = np.sort(np.asarray(raw))[::-1]
        k = beta.size
        beta = beta * min(1.0, k / beta.sum())
        weights = synthetic_weights(beta)
        assert outage_wim(x, weights) >= outage_edof(x, k) * (1 - 1e-12)


class TestOutageIid:
    def test_single_port(self):
        assert outage_iid(0.8, 1) == outage_single(0.8)

    def test_twenty_port_point_value(self):
        assert outage_iid(1.0, 20) == pytest.approx(IID_X1_N20, rel=1e-12)

    def test_below_edof_for_larger_exponent(self):
        for x in (0.2, 1.0, 3.0):
            assert outage_iid(x, 20) < outage_edof(x, 7)


class TestOutageBcm:
    def test_unit_block_uncorrelated_reduces_to_iid(self):
        params = BcmParams(blocks=5, block_size=1, rho=0.0)
        for x in (0.1, 1.0, 2.5):
            assert outage_bcm(x, params) == pytest.approx(outage_iid(x, 5), rel=1e-12)

    def test_reference_parameters_stay_below_edof(self):
        params = BcmParams(blocks=4, block_size=10, rho=0.38)
        assert outage_bcm(1.0, params) < outage_edof(1.0, 7)

    def test_cdf_limit_at_large_threshold(self):
        params = BcmParams(blocks=4, block_size=10, rho=0.38)
        assert outage_bcm(900.0, params) == pytest.approx(1.0, abs=1e-12)

    def test_block_factor_matches_regularized_gamma(self):
        # scipy's regularized lower incomplete gamma as the oracle
        for b in (1, 3, 10):
            for rho in (0.0, 0.38, 0.9):
                params = BcmParams(blocks=1, block_size=b, rho=rho)
                for x in (1e-3, 0.3, 1.0, 5.0, 40.0):
                    y = x / (1.0 - rho)
                    assert outage_bcm(x, params) == pytest.approx(
                        float(sp.gammainc(b, y)), rel=1e-10, abs=1e-300
                    )

    def test_monotone_in_threshold(self):
        params = BcmParams(blocks=4, block_size=10, rho=0.38)
        values = [outage_bcm(float(x), params) for x in np.logspace(-1, 1.2, 40)]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_default_block_rule(self):
        assert default_blocks(7) == 4
        assert default_blocks(3) == 2

    def test_rho_domain(self):
        with pytest.raises(ValueError):
            BcmParams(blocks=2, block_size=2, rho=1.0)


class TestRequiredSnr:
    def test_round_trip_inverse(self):
        for p0 in (1e-6, 1e-3, 0.2, 0.9):
            for k in (1, 3, 7, 49):
                gbar = required_snr(p0, 1.0, k)
                assert outage_edof(1.0 / gbar, k) == pytest.approx(p0, rel=1e-10)

    def test_single_branch_unit_point(self):
        p0 = -math.expm1(-1.0)
        assert required_snr(p0, 1.0, 1) == pytest.approx(1.0, rel=1e-12)

    def test_three_branch_deep_target(self):
        # exact log, noticeably below the gamma_th / P0^(1/K) shortcut (=100)
        value = required_snr(1e-6, 1.0, 3)
        assert value == pytest.approx(99.49916247342207, rel=1e-10)
        assert value < 100.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            required_snr(0.0, 1.0, 3)
        with pytest.raises(ValueError):
            required_snr(1.0, 1.0, 3)


class TestAsymptoticOutage:
    def test_pure_power_law(self):
        assert asymptotic_outage(0.01, 3) == pytest.approx(1e-6, rel=1e-12)

    def test_unit_weights_match_no_weights(self):
        weights = synthetic_weights([1.0] * 5)
        assert asymptotic_outage(0.02, 5, weights) == asymptotic_outage(0.02, 5)

    def test_ratio_to_exact_approaches_one(self):
        ratio = outage_edof(1e-3, 7) / asymptotic_outage(1e-3, 7)
        assert 0.995 <= ratio <= 1.0


class TestCapacity:
    def test_single_branch_is_scaled_exponential_integral(self):
        for gbar in (0.3, 1.0, 25.0):
            z = 1.0 / gbar
            expected = math.exp(z) * float(sp.exp1(z)) / math.log(2.0)
            assert ergodic_capacity_series(gbar, 1) == pytest.approx(expected, rel=1e-12)

    def test_rayleigh_point_value(self):
        assert capacity_quadrature(1.0, 1) == pytest.approx(RAYLEIGH_CAP_G1, abs=1e-5)
        assert ergodic_capacity_series(1.0, 1) == pytest.approx(RAYLEIGH_CAP_G1, rel=1e-9)

    @pytest.mark.parametrize("gbar", [0.1, 1.0, 10.0, 100.0])
    @pytest.mark.parametrize("kstar", [1, 2, 3, 5, 7, 11])
    def test_series_matches_quadrature(self, gbar, kstar):
        series = ergodic_capacity_series(gbar, kstar)
        quad = capacity_quadrature(gbar, kstar)
        assert series == pytest.approx(quad, rel=1e-6)

    def test_quadrature_against_scipy_direct(self):
        # same integral via an unrelated quadrature setup
        def integrand(x):
            return math.log2(1 + 10 * x) * 7 * (1 - math.exp(-x)) ** 6 * math.exp(-x)

        reference, _ = integrate.quad(integrand, 0, 60, limit=300)
        assert capacity_quadrature(10.0, 7) == pytest.approx(reference, rel=1e-9)

    def test_monotone_in_snr_and_branches(self):
        caps = [ergodic_capacity_series(g, 7) for g in (0.5, 1, 5, 20, 100)]
        assert all(a < b for a, b in zip(caps, caps[1:]))
        at_fixed_snr = [ergodic_capacity_series(10.0, k) for k in range(1, 12)]
        assert all(a < b for a, b in zip(at_fixed_snr, at_fixed_snr[1:]))

    def test_large_branch_count_falls_back_to_quadrature(self):
        assert ergodic_capacity_series(10.0, 25) == pytest.approx(
            capacity_quadrature(10.0, 25), rel=1e-12
        )

    def test_high_snr_asymptote_helper_formula(self):
        # helper is the quoted closed-form law: log2(g) + gamma_EM/ln2 + log2(H_K)
        from fas_edof import GAMMA_EM, harmonic

        value = capacity_high_snr_asymptote(1e4, 7)
        expected = math.log2(1e4) + GAMMA_EM / math.log(2) + math.log2(harmonic(7))
        assert value == expected

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            ergodic_capacity_series(0.0, 3)
        with pytest.raises(ValueError):
            capacity_quadrature(1.0, 0)
