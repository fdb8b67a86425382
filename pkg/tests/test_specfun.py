"""Kernel tests: erf, Jacobi polynomials, terminating 2F1, quadrature, differences."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdm_osc.specfun import (
    erfcx,
    DegreeOverflowError,
    IntegrationError,
    JacobiParams,
    PoleError,
    QuadratureSpec,
    central_diff,
    erf,
    hyp2f1_terminating,
    hyp2f1_terminating_magnitude,
    integrate,
    jacobi_p,
    log_gamma,
)


def erf_by_gauss_legendre(x: float, order: int = 60) -> float:
    """Independent oracle: high-order Gauss-Legendre quadrature of the integral."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    t = 0.5 * x * (nodes + 1.0)
    return 2.0 / math.sqrt(math.pi) * 0.5 * x * float(np.sum(weights * np.exp(-t * t)))


class TestErf:
    def test_zero(self):
        assert erf(0.0) == 0.0

    def test_value_at_one(self):
        # frozen from the Gauss-Legendre oracle below
        assert erf(1.0) == pytest.approx(0.842700792949715, abs=1e-14)
        assert erf(1.0) == pytest.approx(erf_by_gauss_legendre(1.0), abs=1e-14)

    def test_oddness_example(self):
        assert erf(-2.0) == -erf(2.0)

    def test_oddness_randomized(self):
        rng = random.Random(20240801)
        for _ in range(1000):
            x = rng.uniform(-6.0, 6.0)
            assert abs(erf(-x) + erf(x)) <= 1e-15

    def test_bounds(self):
        rng = random.Random(7)
        for _ in range(1000):
            x = rng.uniform(-40.0, 40.0)
            assert abs(erf(x)) <= 1.0

    def test_monotone(self):
        # strictly increasing while increments are resolvable in doubles,
        # non-decreasing through the saturation tail
        xs = np.linspace(-5.0, 5.0, 400)
        vals = [erf(float(x)) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        xs = np.linspace(5.0, 8.0, 100)
        vals = [erf(float(x)) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_against_libm(self):
        # math.erf is an independent implementation; agreement certifies the
        # 1e-14 absolute accuracy target across the series/fraction switch
        rng = random.Random(99)
        for _ in range(5000):
            x = rng.uniform(-8.0, 8.0)
            assert abs(erf(x) - math.erf(x)) <= 1e-14

    def test_against_quadrature_oracle(self):
        for x in (0.25, 0.5, 1.5, 2.5, 3.5):
            assert erf(x) == pytest.approx(erf_by_gauss_legendre(x), abs=5e-14)


def test_log_gamma_matches_factorials():
    for n in range(1, 12):
        assert log_gamma(n + 1) == pytest.approx(math.log(math.factorial(n)), rel=1e-14)


class TestErfcx:
    def test_matches_definition_below_switch(self):
        for x in (0.0, 0.3, 1.0, 2.5):
            assert erfcx(x) == pytest.approx(math.exp(x * x) * math.erfc(x), rel=1e-11)

    def test_matches_definition_at_ten(self):
        # erfc(10) ~ 2.1e-45 is still a full-precision double
        assert erfcx(10.0) == pytest.approx(math.exp(100.0) * math.erfc(10.0), rel=1e-13)

    def test_large_argument_asymptote(self):
        # erfcx(x) -> (1 - 1/(2x^2) + 3/(4x^4)) / (x sqrt(pi))
        for x in (100.0, 1e4):
            lead = 1.0 / (x * math.sqrt(math.pi))
            correction = 1.0 - 0.5 / (x * x) + 0.75 / x**4
            assert erfcx(x) == pytest.approx(lead * correction, rel=1e-9)

    def test_stays_finite_where_erfc_underflows(self):
        assert math.erfc(40.0) == 0.0
        assert erfcx(40.0) > 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            erfcx(-1.0)


class TestJacobi:
    def test_degree_zero(self):
        assert jacobi_p(JacobiParams(a=0.0, b=0.0, n=0), 0.7) == 1.0

    def test_legendre_p2(self):
        assert jacobi_p(JacobiParams(a=0.0, b=0.0, n=2), 0.0) == pytest.approx(-0.5, abs=1e-15)

    def test_degree_one_closed_form(self):
        # (a+1) + (a+b+2)(x-1)/2 with a=1, b=3, x=0.25
        assert jacobi_p(JacobiParams(a=1.0, b=3.0, n=1), 0.25) == pytest.approx(-0.25, abs=1e-15)

    def test_negative_degree_rejected(self):
        with pytest.raises(ValueError):
            JacobiParams(a=0.0, b=0.0, n=-1)

    def test_degree_cap(self):
        with pytest.raises(DegreeOverflowError):
            JacobiParams(a=0.0, b=0.0, n=10**6 + 1)

    def test_orthogonality_flag(self):
        assert JacobiParams(a=0.5, b=0.0, n=2).is_orthogonal
        assert not JacobiParams(a=-1.5, b=0.0, n=2).is_orthogonal

    @settings(max_examples=300, deadline=None)
    @given(
        n=st.integers(0, 20),
        a=st.floats(-0.9, 5.0),
        b=st.floats(-0.9, 5.0),
        x=st.floats(-1.5, 1.5),
    )
    def test_symmetry(self, n, a, b, x):
        left = jacobi_p(JacobiParams(a=a, b=b, n=n), -x)
        right = (-1.0) ** n * jacobi_p(JacobiParams(a=b, b=a, n=n), x)
        scale = max(1.0, abs(left), abs(right))
        assert abs(left - right) <= 1e-12 * scale

    @settings(max_examples=300, deadline=None)
    @given(
        n=st.integers(0, 20),
        a=st.floats(-0.9, 5.0),
        b=st.floats(-0.9, 5.0),
        x=st.floats(-1.5, 1.5),
    )
    def test_recurrence_vs_series_route(self, n, a, b, x):
        """The recurrence and the Gamma-prefactor series agree to 1e-12.

        The series is an alternating sum, so the comparison is scaled by its
        term-magnitude total: near polynomial roots pointwise relative error
        is unattainable in fixed precision for either route.
        """
        z = 0.5 * (1.0 - x)
        series = hyp2f1_terminating(n, 1.0 + n + a + b, 1.0 + a, z)
        prefactor = math.exp(log_gamma(n + a + 1.0) - log_gamma(n + 1.0) - log_gamma(a + 1.0))
        via_series = prefactor * series
        via_recurrence = jacobi_p(JacobiParams(a=a, b=b, n=n), x)
        conditioning = prefactor * hyp2f1_terminating_magnitude(n, 1.0 + n + a + b, 1.0 + a, z)
        assert abs(via_recurrence - via_series) <= 1e-12 * max(1.0, conditioning)


class TestHyp2F1:
    def test_empty_product(self):
        assert hyp2f1_terminating(0, 3.7, 1.1, 0.9) == 1.0

    def test_two_term_expansion(self):
        # 1 - (5/2)(0.1)
        assert hyp2f1_terminating(1, 5.0, 2.0, 0.1) == pytest.approx(0.75, abs=1e-15)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            hyp2f1_terminating(-1, 1.0, 1.0, 0.5)

    def test_pole(self):
        with pytest.raises(PoleError):
            hyp2f1_terminating(3, 1.0, 0.0, 0.5)
        with pytest.raises(PoleError):
            hyp2f1_terminating(3, 1.0, -2.0, 0.5)
        # c = -3 is never reached by a degree-3 series
        assert math.isfinite(hyp2f1_terminating(3, 1.0, -3.5, 0.5))

    def test_gamma_prefactor_identity(self):
        # Gamma(n+a+1)/(n! Gamma(a+1)) 2F1(-n, 1+n+a+b; 1+a; z) == P_n^(a,b)(1-2z)
        a, b, n, z = 2.0, 1.0, 3, 0.3
        prefactor = math.exp(log_gamma(n + a + 1) - log_gamma(n + 1.0) - log_gamma(a + 1))
        lhs = prefactor * hyp2f1_terminating(n, 1 + n + a + b, 1 + a, z)
        rhs = jacobi_p(JacobiParams(a=a, b=b, n=n), 1.0 - 2.0 * z)
        assert lhs == pytest.approx(rhs, rel=1e-13)


class TestIntegrate:
    def test_constant(self):
        res = integrate(lambda x: 1.0, QuadratureSpec(0.0, 1.0))
        assert res.value == pytest.approx(1.0, abs=1e-14)

    def test_linear(self):
        res = integrate(lambda x: x, QuadratureSpec(0.0, 2.0))
        assert res.value == pytest.approx(2.0, abs=1e-13)

    def test_gaussian_vs_erf(self):
        res = integrate(lambda x: math.exp(-x * x), QuadratureSpec(0.0, 5.0))
        assert res.value == pytest.approx(math.sqrt(math.pi) / 2.0 * erf(5.0), rel=1e-10)
        assert res.value == pytest.approx(0.886226925, abs=1e-9)

    def test_polynomial_exactness(self):
        # inside the degree of the embedded rule: one panel, no refinement
        coeffs = [3.0, -2.0, 1.5, 0.25, -0.125, 1.0, 0.5, -0.75, 0.2, 0.1, -0.05]
        f = lambda x: sum(c * x**j for j, c in enumerate(coeffs))
        exact = sum(c * (2.0 ** (j + 1) - (-1.0) ** (j + 1)) / (j + 1) for j, c in enumerate(coeffs))
        res = integrate(f, QuadratureSpec(-1.0, 2.0))
        assert abs(res.value - exact) <= 1e-13 * abs(exact)

    def test_reports_refinements(self):
        res = integrate(lambda x: math.sin(40.0 * x), QuadratureSpec(0.0, 10.0))
        assert res.refinements > 0
        assert res.value == pytest.approx((1.0 - math.cos(400.0)) / 40.0, abs=1e-10)

    def test_nonconvergence_carries_best_estimate(self):
        spike = lambda x: 1.0 / math.sqrt(abs(x - 0.123456) + 1e-15)
        with pytest.raises(IntegrationError) as err:
            integrate(spike, QuadratureSpec(0.0, 1.0, rel_tol=1e-14, abs_tol=1e-16,
                                            max_refinements=4))
        assert math.isfinite(err.value.best_estimate)
        assert err.value.error_bound > 0.0

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(1.0, 0.0)
        with pytest.raises(ValueError):
            QuadratureSpec(0.0, 1.0, rel_tol=-1.0)
        with pytest.raises(ValueError):
            QuadratureSpec(0.0, 1.0, max_refinements=0)


class TestCentralDiff:
    def test_quadratic_first_derivative(self):
        assert central_diff(lambda x: x * x, 3.0, 1) == pytest.approx(6.0, abs=1e-8)

    def test_exponential_second_derivative(self):
        assert central_diff(math.exp, 0.0, 2, h=1e-3) == pytest.approx(1.0, abs=1e-6)

    def test_sine_first_derivative(self):
        assert central_diff(math.sin, 0.0, 1) == pytest.approx(1.0, abs=1e-8)

    def test_order_validation(self):
        with pytest.raises(ValueError):
            central_diff(math.sin, 0.0, 3)
        with pytest.raises(ValueError):
            central_diff(math.sin, 0.0, 1, h=0.0)
