import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from presnov.errors import NonFiniteValueError, QuadratureError
from presnov.quadrature import QuadratureConfig, integrate_unit


def test_polynomial_exact():
    value, err = integrate_unit(lambda t: t**3)
    assert value == pytest.approx(0.25, abs=1e-14)
    assert err <= 1e-10


def test_exponential():
    value, err = integrate_unit(np.exp)
    assert value == pytest.approx(math.e - 1.0, rel=1e-13)
    assert abs(value - (math.e - 1.0)) <= max(1e-10, err * 10)


def test_oscillatory_forces_refinement():
    # sin(40 t) needs more than one panel at order 16.
    value, _ = integrate_unit(lambda t: np.sin(40.0 * t))
    assert value == pytest.approx((1.0 - math.cos(40.0)) / 40.0, abs=1e-12)


def test_vector_integrand():
    value, err = integrate_unit(lambda t: np.column_stack((t, t**2, np.cos(t))))
    expected = np.array([0.5, 1.0 / 3.0, math.sin(1.0)])
    assert np.allclose(value, expected, atol=1e-12)
    assert value.shape == (3,) and err.shape == (3,)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(order=1)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0.0)


def test_subdivision_budget_exhausted():
    cfg = QuadratureConfig(max_subdivisions=4, abs_tol=1e-14, rel_tol=1e-14)
    with pytest.raises(QuadratureError):
        integrate_unit(lambda t: t**-0.9, cfg)


def test_non_finite_integrand():
    with pytest.raises(NonFiniteValueError):
        integrate_unit(lambda t: np.where(t < 0.5, np.inf, 1.0))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(min_value=-5.0, max_value=5.0), min_size=1, max_size=8)
)
def test_random_polynomials_match_antiderivative(coeffs):
    coeffs = np.asarray(coeffs)
    powers = np.arange(len(coeffs))

    def f(t):
        return (coeffs * t[:, None] ** powers).sum(axis=1)

    expected = float((coeffs / (powers + 1)).sum())
    value, _ = integrate_unit(f)
    assert value == pytest.approx(expected, abs=1e-12, rel=1e-12)
