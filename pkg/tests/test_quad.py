import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msforge import quad
from msforge.quad import AlgebraicIntegrand, QuadratureError, integrate

from oracles import simpson_oracle


def test_arcsine_integral_is_pi():
    assert integrate(AlgebraicIntegrand(-0.5, -0.5)).value == pytest.approx(math.pi, rel=1e-14)


def test_constant_integrand():
    assert integrate(AlgebraicIntegrand(0.0, 0.0)).value == pytest.approx(1.0, rel=1e-14)


def test_bad_exponent_rejected():
    with pytest.raises(ValueError):
        AlgebraicIntegrand(-1.0, 0.5)


def test_reversed_interval_rejected():
    with pytest.raises(ValueError):
        AlgebraicIntegrand(0.0, 0.0, interval=(1.0, 0.0))


def test_budget_exhaustion_raises():
    rough = AlgebraicIntegrand(0.0, 0.0, lambda x: np.abs(x - 0.3) ** 0.5)
    with pytest.raises(QuadratureError):
        integrate(rough, tol=1e-15, max_levels=3)


def test_beta_values():
    assert quad.beta(1, 1) == pytest.approx(1.0)
    assert quad.beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)
    x, y = 1 / 3, 2 / 3
    assert quad.beta(x, y + 1) == pytest.approx(y / (x + y) * quad.beta(x, y), rel=1e-14)
    with pytest.raises(ValueError):
        quad.beta(0, 1)


@settings(max_examples=50, deadline=None)
@given(st.floats(-0.9, 3.0), st.floats(-0.9, 3.0))
def test_matches_beta_function(a, b):
    val = integrate(AlgebraicIntegrand(a, b)).value
    assert val == pytest.approx(quad.beta(a + 1, b + 1), rel=1e-11)


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.9, 2.0), st.floats(-0.9, 2.0), st.floats(-3, 3), st.floats(0.1, 5))
def test_affine_invariance(a, b, lo, width):
    h = lambda x: np.exp(-x * x / 10)  # noqa: E731
    hi = lo + width
    direct = integrate(AlgebraicIntegrand(a, b, h, (lo, hi))).value
    mapped = integrate(AlgebraicIntegrand(a, b, lambda t: h(lo + width * t))).value * width ** (1 + a + b)
    assert direct == pytest.approx(mapped, rel=1e-11)


def test_error_estimate_is_conservative():
    rng = np.random.default_rng(3)
    hits = 0
    trials = 100
    for _ in range(trials):
        a, b = rng.uniform(-0.9, 3.0, 2)
        r = integrate(AlgebraicIntegrand(a, b), tol=1e-8)
        if abs(r.value - quad.beta(a + 1, b + 1)) <= max(r.error, 1e-15 * abs(r.value)):
            hits += 1
    assert hits >= 99


def test_gauss_jacobi_cross_check():
    integ = AlgebraicIntegrand(-2 / 3, 1 / 3, lambda t: (1.8 - t) ** (-1 / 3))
    assert quad.gauss_jacobi(integ) == pytest.approx(integrate(integ).value, rel=1e-10)


def test_simpson_oracle_on_genus_one_constant():
    integ = AlgebraicIntegrand(-0.5, -0.5, lambda t: (1 + t) ** -0.5)
    ref = simpson_oracle(Fraction(-1, 2), Fraction(-1, 2), lambda t: (1 + t) ** -0.5)
    assert integrate(integ).value == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("k", [2, 4, 6])
@pytest.mark.parametrize("a", [1.05, 1.8, 3.0, 50.0])
def test_defect_bounds_bracket_defect(k, a):
    from msforge.periods import even_family_defect

    lo, hi = quad.period_defect_bounds(k, a)
    assert lo <= even_family_defect(k, a) <= hi


def test_defect_bound_limits():
    # near a = 1 the lower bound tends to a positive beta value
    lo, _ = quad.period_defect_bounds(2, 1 + 1e-9)
    assert lo == pytest.approx(2 * quad.beta(2 / 3, 5 / 3), rel=1e-3)
    assert quad.period_defect_bounds(2, 1e6)[1] < 0
    with pytest.raises(ValueError):
        quad.period_defect_bounds(3, 2.0)
    with pytest.raises(ValueError):
        quad.period_defect_bounds(2, 1.0)
