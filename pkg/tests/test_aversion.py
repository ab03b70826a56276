import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import roots_jacobi, roots_legendre

from slidevar import (
    AdmissibilityError,
    ValidationError,
    custom,
    exponential,
    flat,
    power_concave,
    power_convex,
    step,
)

betas = st.floats(min_value=0.0, max_value=0.99)
unit_open = st.floats(min_value=0.01, max_value=0.99)


def gauss_norm(phi, segments):
    """Independent norm estimate: 64-node Gauss-Legendre on each segment.

    Evaluates only the density (never the antiderivative), so it would catch
    a density/antiderivative mismatch.
    """
    nodes, weights = roots_legendre(64)
    total = 0.0
    for lo, hi in segments:
        half = 0.5 * (hi - lo)
        p = lo + half * (nodes + 1.0)
        total += half * float(np.sum(weights * phi(p)))
    return total


def jacobi_norm(phi):
    """Norm of a power-convex weight via Gauss-Jacobi with weight (1-x)^(-gamma).

    The quadrature absorbs the endpoint singularity exactly, leaving a
    constant integrand, so 12 nodes are already exact.
    """
    gamma, beta = phi.gamma, phi.beta
    nodes, weights = roots_jacobi(12, -gamma, 0.0)
    half = 0.5 * (1.0 - beta)
    # substitute p = beta + half*(x+1); then (1-p) = half*(1-x)
    constant = (1.0 - gamma) / (1.0 - beta) ** (1.0 - gamma)
    return constant * half ** (1.0 - gamma) * float(np.sum(weights))


class TestUnitNorm:
    @given(betas, st.floats(min_value=0.01, max_value=1.0))
    @settings(max_examples=150)
    def test_exponential(self, beta, gamma):
        phi = exponential(beta, gamma)
        assert abs(phi.norm() - 1.0) <= 1e-9
        assert gauss_norm(phi, [(beta, 1.0)]) == pytest.approx(1.0, abs=1e-9)

    @given(betas, st.floats(min_value=0.0, max_value=0.95))
    @settings(max_examples=150)
    def test_power_convex(self, beta, gamma):
        phi = power_convex(beta, gamma)
        assert abs(phi.norm() - 1.0) <= 1e-9
        assert jacobi_norm(phi) == pytest.approx(1.0, abs=1e-9)

    @given(betas, st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=150)
    def test_power_concave(self, beta, gamma):
        phi = power_concave(beta, gamma)
        assert abs(phi.norm() - 1.0) <= 1e-9
        # p^gamma has a branch point at 0, so fixed-node Gauss rules stall
        # when beta = 0; adaptive quadrature handles it to full accuracy.
        estimate, _ = quad(phi, beta, 1.0, epsabs=1e-11, limit=200)
        assert estimate == pytest.approx(1.0, abs=1e-9)

    @given(betas)
    @settings(max_examples=60)
    def test_flat(self, beta):
        phi = flat(beta)
        assert abs(phi.norm() - 1.0) <= 1e-9
        assert gauss_norm(phi, [(beta, 1.0)]) == pytest.approx(1.0, abs=1e-9)

    @given(betas, unit_open, unit_open, unit_open, unit_open)
    @settings(max_examples=150)
    def test_step(self, beta, t1, t2, w1, w2):
        beta1 = beta + (1.0 - beta) * 0.2 * t1 + 1e-3 * (1.0 - beta)
        beta2 = beta1 + (1.0 - beta1) * 0.2 * t2 + 1e-3 * (1.0 - beta1)
        lead = 0.8 * w1
        mid = (1.0 - lead) * 0.8 * w2
        weights = (lead, mid, 1.0 - lead - mid)
        phi = step(beta, beta1, beta2, weights)
        assert abs(phi.norm() - 1.0) <= 1e-9
        segments = [(beta, beta1), (beta1, beta2), (beta2, 1.0)]
        assert gauss_norm(phi, segments) == pytest.approx(1.0, abs=1e-9)


class TestShape:
    def test_zero_below_base_level(self):
        phi = exponential(0.9, 0.3)
        p = np.array([0.0, 0.5, 0.89999])
        assert np.all(phi(p) == 0.0)
        assert np.all(np.asarray(phi.antiderivative(p)) == 0.0)

    def test_scalar_in_scalar_out(self):
        phi = flat(0.8)
        assert isinstance(phi(0.9), float)
        assert phi(0.9) == pytest.approx(5.0)
        assert isinstance(phi.antiderivative(0.9), float)

    def test_antiderivative_matches_finite_differences(self):
        phi = exponential(0.85, 0.25)
        p = np.linspace(0.86, 0.999, 200)
        h = 1e-6
        slopes = (np.asarray(phi.antiderivative(p + h)) - np.asarray(phi.antiderivative(p - h))) / (2 * h)
        np.testing.assert_allclose(slopes, phi(p), rtol=1e-7, atol=1e-9)

    def test_power_convex_pole_is_integrable(self):
        phi = power_convex(0.9, 0.7)
        assert phi(1.0) == np.inf
        assert phi.antiderivative(1.0) == pytest.approx(1.0)

    def test_step_density_levels(self):
        phi = step(0.90, 0.95, 0.99, (1 / 3, 1 / 3, 1 / 3))
        lead = (1 / 3) / 0.10
        mid = lead + (1 / 3) / 0.05
        top = mid + (1 / 3) / 0.01
        assert phi(0.92) == pytest.approx(lead)
        assert phi(0.97) == pytest.approx(mid)
        assert phi(0.995) == pytest.approx(top)

    def test_families_are_nondecreasing_on_a_grid(self):
        grid = np.linspace(0.9001, 0.9999, 500)
        for phi in (
            exponential(0.9, 0.1),
            power_convex(0.9, 0.5),
            power_concave(0.9, 0.8),
            flat(0.9),
            step(0.9, 0.94, 0.98, (0.5, 0.3, 0.2)),
        ):
            values = np.asarray(phi(grid))
            assert np.all(np.diff(values) >= -1e-12)


class TestValidation:
    def test_level_domain(self):
        with pytest.raises(ValidationError):
            exponential(1.0, 0.5)
        with pytest.raises(ValidationError):
            exponential(-0.1, 0.5)

    def test_shape_parameter_domains(self):
        with pytest.raises(ValidationError):
            exponential(0.9, 0.0)
        with pytest.raises(ValidationError):
            exponential(0.9, 1.5)
        with pytest.raises(ValidationError):
            power_convex(0.9, 1.0)
        with pytest.raises(ValidationError):
            power_concave(0.9, 1.2)

    def test_step_structure(self):
        with pytest.raises(ValidationError):
            step(0.9, 0.9, 0.95, (0.5, 0.3, 0.2))
        with pytest.raises(ValidationError):
            step(0.9, 0.95, 0.93, (0.5, 0.3, 0.2))
        with pytest.raises(ValidationError):
            step(0.9, 0.93, 0.96, (0.5, 0.6, -0.1))
        with pytest.raises(ValidationError):
            step(0.9, 0.93, 0.96, (0.5, 0.3, 0.3))

    def test_custom_negative_density_rejected(self):
        with pytest.raises(AdmissibilityError, match="negative"):
            custom(0.9, lambda p: np.sin(60.0 * p))

    def test_custom_decreasing_density_rejected(self):
        with pytest.raises(AdmissibilityError, match="decreasing"):
            custom(0.5, lambda p: 4.0 * (1.0 - p))

    def test_custom_wrong_mass_rejected(self):
        with pytest.raises(AdmissibilityError, match="integral"):
            custom(0.9, lambda p: np.full_like(np.asarray(p, dtype=float), 3.0))


class TestCustom:
    def test_quadrature_fallback_matches_exact(self):
        beta = 0.9
        exact = exponential(beta, 0.3)
        fallback = custom(beta, exact._density)
        p = np.linspace(0.9, 1.0, 7)
        np.testing.assert_allclose(
            np.asarray(fallback.antiderivative(p)),
            np.asarray(exact.antiderivative(p)),
            rtol=0,
            atol=1e-8,
        )

    def test_supplied_antiderivative_is_used_exactly(self):
        beta = 0.8
        phi = custom(beta, lambda p: np.full_like(p, 5.0), lambda p: 5.0 * p)
        assert phi.antiderivative(0.9) == pytest.approx(0.5, abs=1e-15)
        assert phi.norm() == pytest.approx(1.0, abs=1e-15)
