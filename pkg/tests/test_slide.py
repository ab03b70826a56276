import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from slidevar import (
    CapabilityError,
    CustomNormalization,
    EmpiricalDistribution,
    LinearNormalization,
    SlideVaRConfig,
    ValidationError,
    cvar,
    evaluate,
    exponential,
    flat,
    normalize,
    power_concave,
    risk_tail_membership,
    slide_var,
    step,
    tail_thickness,
    var,
)

finite_losses = arrays(
    np.float64,
    st.integers(min_value=2, max_value=60),
    elements=st.floats(min_value=-500.0, max_value=500.0, allow_nan=False, width=64),
)


class TestTailThickness:
    def test_flat_weight_reduces_to_cvar(self, one_to_hundred):
        assert tail_thickness(one_to_hundred, flat(0.95)) == pytest.approx(98.0, abs=1e-12)

    def test_step_weight_combines_cvar_levels(self, one_to_hundred):
        # piecewise-constant weights charge the exact mix of tail averages
        phi = step(0.90, 0.95, 0.99, (1 / 3, 1 / 3, 1 / 3))
        expected = (
            cvar(one_to_hundred, 0.90)
            + cvar(one_to_hundred, 0.95)
            + cvar(one_to_hundred, 0.99)
        ) / 3.0
        assert tail_thickness(one_to_hundred, phi) == pytest.approx(expected, abs=1e-12)

    @given(finite_losses)
    @settings(max_examples=150)
    def test_stays_between_sample_extremes(self, values):
        d = EmpiricalDistribution(values)
        u = tail_thickness(d, exponential(0.9, 0.2))
        assert d.lowest <= u <= d.highest

    @given(finite_losses, st.floats(min_value=-100.0, max_value=100.0))
    @settings(max_examples=150)
    def test_translation_equivariance(self, values, a):
        phi = power_concave(0.85, 0.5)
        u = tail_thickness(EmpiricalDistribution(values), phi)
        shifted = tail_thickness(EmpiricalDistribution(values + a), phi)
        assert shifted == pytest.approx(u + a, abs=1e-9 * (1.0 + abs(u) + abs(a)))

    @given(finite_losses, st.floats(min_value=0.0, max_value=8.0))
    @settings(max_examples=150)
    def test_positive_homogeneity(self, values, lam):
        phi = exponential(0.9, 0.4)
        u = tail_thickness(EmpiricalDistribution(values), phi)
        scaled = tail_thickness(EmpiricalDistribution(values * lam), phi)
        assert scaled == pytest.approx(lam * u, abs=1e-9 * (1.0 + abs(lam * u)))

    @given(finite_losses)
    @settings(max_examples=100)
    def test_monotone_in_the_sample(self, values):
        phi = exponential(0.9, 0.3)
        lifted = values + np.linspace(0.1, 3.0, values.size)
        u = tail_thickness(EmpiricalDistribution(values), phi)
        v = tail_thickness(EmpiricalDistribution(lifted), phi)
        assert v >= u - 1e-9 * (1.0 + abs(u))


class TestNormalization:
    def test_linear_ramp(self):
        s = LinearNormalization(20.0, 40.0)
        assert s(10.0) == 0.0
        assert s(20.0) == 0.0
        assert s(30.0) == pytest.approx(0.5)
        assert s(40.0) == 1.0
        assert s(55.0) == 1.0
        assert s.saturation_threshold == 40.0

    def test_linear_validation(self):
        with pytest.raises(ValidationError):
            LinearNormalization(5.0, 5.0)
        with pytest.raises(ValidationError):
            LinearNormalization(7.0, 2.0)
        with pytest.raises(ValidationError):
            LinearNormalization(0.0, np.inf)

    def test_custom_range_checked(self):
        bad = CustomNormalization(lambda u: 1.5)
        with pytest.raises(ValidationError):
            normalize(bad, 0.0)

    def test_custom_threshold_is_optional(self):
        s = CustomNormalization(lambda u: 1.0, saturation_threshold=3.0)
        assert s.saturation_threshold == 3.0
        assert CustomNormalization(lambda u: 0.5).saturation_threshold is None


class TestSlideVar:
    def test_frozen_midpoint(self, one_to_hundred):
        # U = 98 sits exactly halfway up the (96, 100) ramp
        config = SlideVaRConfig(0.99, 0.95, flat(0.95), LinearNormalization(96.0, 100.0))
        b = evaluate(one_to_hundred, config)
        assert b.tail_thickness == pytest.approx(98.0, abs=1e-12)
        assert b.weight == pytest.approx(0.5, abs=1e-12)
        assert b.value == pytest.approx(98.0, abs=1e-12)
        assert b.var_beta == 96.0
        assert b.cvar_alpha == pytest.approx(100.0, abs=1e-12)

    @given(finite_losses)
    @settings(max_examples=200)
    def test_bounded_by_var_and_cvar(self, values):
        d = EmpiricalDistribution(values)
        config = SlideVaRConfig(0.98, 0.9, exponential(0.9, 0.2), LinearNormalization(-5.0, 5.0))
        b = evaluate(d, config)
        slack = 1e-9 * (1.0 + abs(b.var_beta) + abs(b.cvar_alpha))
        assert b.var_beta - slack <= b.value <= b.cvar_alpha + slack

    def test_saturated_weight_is_cvar(self, one_to_hundred):
        config = SlideVaRConfig(
            0.99, 0.95, flat(0.95), CustomNormalization(lambda u: 1.0, -np.inf)
        )
        assert slide_var(one_to_hundred, config) == cvar(one_to_hundred, 0.99)

    def test_floored_weight_is_var(self, one_to_hundred):
        config = SlideVaRConfig(
            0.99, 0.95, flat(0.95), CustomNormalization(lambda u: 0.0, np.inf)
        )
        assert slide_var(one_to_hundred, config) == var(one_to_hundred, 0.95)

    def test_equal_levels_collapse_the_blend(self, one_to_hundred):
        # alpha = beta: the blend moves between VaR and CVaR at one level
        config = SlideVaRConfig(0.95, 0.95, flat(0.95), LinearNormalization(96.0, 100.0))
        value = slide_var(one_to_hundred, config)
        assert var(one_to_hundred, 0.95) <= value <= cvar(one_to_hundred, 0.95)


class TestConfigValidation:
    def test_level_order(self):
        with pytest.raises(ValidationError):
            SlideVaRConfig(0.9, 0.95, flat(0.95), LinearNormalization(0.0, 1.0))

    def test_aversion_level_must_match_beta(self):
        with pytest.raises(ValidationError, match="must equal beta"):
            SlideVaRConfig(0.99, 0.95, flat(0.9), LinearNormalization(0.0, 1.0))


class TestRiskTailMembership:
    def test_linear_threshold(self, one_to_hundred):
        config = SlideVaRConfig(0.99, 0.95, flat(0.95), LinearNormalization(90.0, 98.0))
        assert risk_tail_membership(one_to_hundred, config)  # U = 98 >= 98
        config_high = SlideVaRConfig(0.99, 0.95, flat(0.95), LinearNormalization(90.0, 98.5))
        assert not risk_tail_membership(one_to_hundred, config_high)

    def test_custom_without_threshold_is_an_error(self, one_to_hundred):
        config = SlideVaRConfig(0.99, 0.95, flat(0.95), CustomNormalization(lambda u: 0.5))
        with pytest.raises(CapabilityError):
            risk_tail_membership(one_to_hundred, config)
