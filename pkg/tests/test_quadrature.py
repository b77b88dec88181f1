import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate

from dressed_rf.errors import NonConvergence, NonFinite, TailNotDecayed
from dressed_rf.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    QuadSettings,
    fourier_half_transform,
    integrate_finite,
    integrate_semi_infinite,
)

OMEGA_C = 493.33


def test_rule_tables_are_consistent():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    np.testing.assert_allclose(NODES, -NODES[::-1], atol=0)
    # Kronrod is exact through degree 22, Gauss-7 through 13
    for k in (2, 10, 22):
        assert KRONROD_WEIGHTS @ NODES**k == pytest.approx(2 / (k + 1), rel=1e-14)
    assert GAUSS_WEIGHTS @ NODES**12 == pytest.approx(2 / 13, rel=1e-14)


def test_linear_polynomial():
    res = integrate_finite(lambda x: x, 0.0, 1.0)
    assert res.value == pytest.approx(0.5, abs=1e-15)
    assert res.error_estimate >= 0
    assert res.evaluations >= 1


def test_full_periods_of_cosine():
    res = integrate_finite(lambda x: np.cos(50 * x), 0.0, 2 * math.pi, max_panel=0.1)
    assert abs(res.value) <= 1e-12


def test_gaussian_moment():
    res = integrate_finite(lambda w: w * np.exp(-((w / OMEGA_C) ** 2)), 0.0, 8 * OMEGA_C)
    assert res.value == pytest.approx(OMEGA_C**2 / 2, rel=1e-10)


def test_semi_infinite_exponential_and_gaussian():
    assert integrate_semi_infinite(lambda x: np.exp(-x), 1.0).value == pytest.approx(1.0, rel=1e-10)
    gauss = integrate_semi_infinite(lambda x: np.exp(-x * x), 1.0)
    assert gauss.value == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-10)


def test_fourier_half_transform_of_exponential():
    assert fourier_half_transform(lambda t: np.exp(-t), 0.0, 1.0).value == pytest.approx(1.0, rel=1e-10)
    res = fourier_half_transform(lambda t: np.exp(-t), 1.0, 1.0)
    assert res.value == pytest.approx(0.5 + 0.5j, rel=1e-9)


def test_fourier_resolves_fast_carrier():
    # 1/(1 - i w) for a carrier 400 times faster than the envelope decay
    res = fourier_half_transform(lambda t: np.exp(-t), 400.0, 1.0)
    assert res.value == pytest.approx(1 / (1 - 400j), rel=1e-8)


def test_zero_frequency_is_the_semi_infinite_path():
    f = lambda t: np.exp(-t) * (1 + t * t)  # noqa: E731
    a = fourier_half_transform(f, 0.0, 1.0)
    b = integrate_semi_infinite(f, 1.0)
    assert a.value == b.value
    assert a.error_estimate == b.error_estimate


def test_vector_valued_integrand():
    ks = np.array([1.0, 2.0, 3.0])
    res = integrate_finite(lambda x: np.cos(np.outer(x, ks)), 0.0, 1.0)
    np.testing.assert_allclose(res.value, np.sin(ks) / ks, rtol=1e-12)
    assert res.value.shape == (3,)


def test_complex_integrand():
    res = integrate_finite(lambda x: np.exp(1j * x), 0.0, math.pi)
    assert res.value == pytest.approx(2j, abs=1e-13)


def test_refinement_never_hurts():
    f = lambda x: 1.0 / (1e-2 + (x - 0.3) ** 2)  # noqa: E731
    exact = 10 * (math.atan(7) + math.atan(3))
    errors = []
    for rel in (1e-4, 5e-5, 1e-6, 5e-7, 1e-8, 5e-9):
        res = integrate_finite(f, 0.0, 1.0, QuadSettings(rel_tol=rel, abs_tol=0.0))
        errors.append(abs(res.value - exact))
        assert errors[-1] <= max(rel * exact, 1e-13)
    assert all(b <= a + 1e-13 for a, b in zip(errors, errors[1:]))


def test_matches_scipy_on_peaked_integrand():
    f = lambda x: np.exp(-x) / (1e-3 + (x - 2.0) ** 2)  # noqa: E731
    ref, _ = sp_integrate.quad(lambda x: float(f(np.array([x]))[0]), 0, 60, points=[2.0], limit=500,
                               epsabs=0, epsrel=1e-12)
    assert integrate_semi_infinite(f, 1.0, QuadSettings(abs_tol=0)).value == pytest.approx(ref, rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-5, 5), b=st.floats(-5, 5), k=st.floats(0.1, 20))
def test_linearity(a, b, k):
    f = lambda x: np.exp(-x * x)  # noqa: E731
    g = lambda x: np.sin(k * x) ** 2  # noqa: E731
    s = QuadSettings(rel_tol=1e-10, abs_tol=1e-14)
    lhs = integrate_finite(lambda x: a * f(x) + b * g(x), -1.0, 2.0, s).value
    rhs = a * integrate_finite(f, -1.0, 2.0, s).value + b * integrate_finite(g, -1.0, 2.0, s).value
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(lo=st.floats(-10, 10), width=st.floats(1e-3, 10), n=st.integers(0, 12))
def test_monomials_exact(lo, width, n):
    hi = lo + width
    exact = (hi ** (n + 1) - lo ** (n + 1)) / (n + 1)
    res = integrate_finite(lambda x: x**n, lo, hi)
    assert res.value == pytest.approx(exact, rel=1e-10, abs=1e-12 * max(1.0, abs(hi) ** (n + 1)))


def test_budget_exhaustion_raises():
    with pytest.raises(NonConvergence):
        integrate_finite(lambda x: np.sin(1 / (x + 1e-9)), 0.0, 1.0, QuadSettings(max_subdivisions=5))


def test_non_finite_integrand_raises():
    with pytest.raises(NonFinite):
        integrate_finite(lambda x: np.where(x > 0.4, np.nan, 1.0), 0.0, 1.0)


def test_slow_tail_raises():
    with pytest.raises(TailNotDecayed):
        integrate_semi_infinite(lambda x: 1.0 / (1.0 + x), 1.0)


def test_tail_extension_recovers_underestimated_scale():
    # decay scale understated by 10x: the cut is pushed out until f is negligible
    res = integrate_semi_infinite(lambda x: np.exp(-x / 10), 1.0)
    assert res.value == pytest.approx(10.0, rel=1e-8)


@pytest.mark.parametrize("kwargs", [
    {"rel_tol": 0}, {"abs_tol": -1}, {"max_subdivisions": 0}, {"tail_cutoff_factor": 0.5},
])
def test_settings_validation(kwargs):
    with pytest.raises(ValueError):
        QuadSettings(**kwargs)


def test_bad_interval():
    with pytest.raises(ValueError):
        integrate_finite(lambda x: x, 1.0, 1.0)
