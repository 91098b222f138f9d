import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sps

from alsbr.errors import DomainError, QuadratureError
from alsbr.special import (
    EULER_GAMMA,
    LOG2E,
    QuadratureSpec,
    dilog,
    exp_integral_en,
    integral_i,
    integral_i_rate,
    integral_j,
    integral_j_asymptotic,
    integral_j_quadrature,
    integral_j_series,
    quadrature,
    scaled_e1,
    scaled_en,
)

# E_1(1) from quadrature of int_1^inf e^-t / t dt, frozen
E1_AT_1 = 0.21938393439552029


def test_quadrature_basic():
    assert quadrature(lambda x: math.exp(-x), 0.0) == pytest.approx(1.0, rel=1e-13)
    assert quadrature(lambda x: x, 0.0, 1.0) == pytest.approx(0.5, rel=1e-14)
    assert quadrature(lambda t: math.exp(-t) / t, 1.0) == pytest.approx(E1_AT_1, rel=1e-12)


def test_quadrature_reports_failure():
    with pytest.raises(QuadratureError):
        quadrature(lambda x: 1.0 / x, 1.0, spec=QuadratureSpec(rel_tol=1e-12, max_subdivisions=5))


@pytest.mark.parametrize("kwargs", [dict(rel_tol=0.0), dict(abs_tol=-1.0), dict(max_subdivisions=0)])
def test_quadrature_spec_validation(kwargs):
    with pytest.raises(DomainError):
        QuadratureSpec(**kwargs)


def test_e1_reference_values():
    assert exp_integral_en(1, 1.0) == pytest.approx(E1_AT_1, rel=1e-14)
    assert exp_integral_en(2, 1.0) == pytest.approx(math.exp(-1) - E1_AT_1, rel=1e-14)
    assert exp_integral_en(2, 0.0) == 1.0
    assert exp_integral_en(5, 0.0) == 0.25


@pytest.mark.parametrize("n", [1, 2, 3, 5, 10, 30])
@pytest.mark.parametrize("x", [1e-8, 1e-3, 0.5, 1.0, 1.5, 7.0, 40.0, 300.0, 700.0])
def test_en_matches_reference_library(n, x):
    assert exp_integral_en(n, x) == pytest.approx(float(sps.expn(n, x)), rel=1e-13)


@pytest.mark.parametrize("n,x", [(1, 0.0), (0, 1.0), (1, -1.0), (2, float("nan"))])
def test_en_domain(n, x):
    with pytest.raises(DomainError):
        exp_integral_en(n, x)


@given(st.integers(1, 25), st.floats(1e-6, 500.0))
def test_en_recurrence(n, x):
    lhs = n * exp_integral_en(n + 1, x)
    rhs = math.exp(-x) - x * exp_integral_en(n, x)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-13 * math.exp(-x))


@given(st.integers(1, 12), st.floats(1e-4, 200.0))
def test_en_bounds_and_monotone(n, x):
    v = exp_integral_en(n, x)
    # e^-x/(x+n) < E_n(x) <= e^-x/(x+n-1)
    scale = math.exp(-x)
    assert scale / (x + n) * (1 - 1e-12) < v <= scale / (x + n - 1) * (1 + 1e-12)
    if n >= 2:
        assert v < scale
    assert exp_integral_en(n + 1, x) <= v
    assert exp_integral_en(n, x * 1.1) <= v


def test_scaled_e1_values():
    assert scaled_e1(1.0) == pytest.approx(math.e * E1_AT_1, rel=1e-14)
    # e^x E_1(x) ~ (1/x)(1 - 1/x + 2/x^2 - 6/x^3)
    x = 1000.0
    assert scaled_e1(x) == pytest.approx((1 - 1 / x + 2 / x ** 2 - 6 / x ** 3) / x, rel=1e-11)
    assert math.isfinite(scaled_e1(1e6)) and scaled_e1(1e6) == pytest.approx(1e-6, rel=1e-5)
    x = 1e-7
    assert scaled_e1(x) == pytest.approx(math.log(1 / x) - EULER_GAMMA, rel=1e-6)


@given(st.floats(1e-3, 1e6))
def test_scaled_e1_bracket(x):
    v = scaled_e1(x)
    assert 0 < v < 1 / x
    assert v > 1 / (x + 1)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_scaled_en_consistent(n):
    for x in (0.3, 1.0, 2.0, 50.0):
        assert scaled_en(n, x) == pytest.approx(math.exp(x) * exp_integral_en(n, x), rel=1e-13)


def test_dilog_convention():
    # Di2(x) = -int_1^x ln t / (t - 1) dt: zero at 1, pi^2/6 at 0
    assert dilog(1.0) == 0.0
    assert dilog(0.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    ref = -quadrature(lambda t: math.log(t) / (t - 1), 1.0, 0.5)
    assert dilog(0.5) == pytest.approx(ref, rel=1e-12)
    with pytest.raises(DomainError):
        dilog(-0.1)


@given(st.floats(0.01, 100.0))
def test_dilog_derivative(x):
    h = 1e-5 * x
    num = (dilog(x + h) - dilog(x - h)) / (2 * h)
    exact = -math.log(x) / (x - 1) if abs(x - 1) > 1e-9 else -1.0
    assert num == pytest.approx(exact, rel=1e-5, abs=1e-8)


@pytest.mark.parametrize("n,mu,lam,x", [(1, 1.0, 1.0, 0.0), (2, 2.0, 5.0, 1.0), (3, 0.1, 100.0, 4.0), (1, 50.0, 0.5, 0.2)])
def test_integral_i_matches_quadrature(n, mu, lam, x):
    ref = quadrature(lambda s: mu ** (n - 1) / (s + mu) ** n * math.exp(-s / lam), x, points=(mu, lam))
    assert integral_i(n, mu, lam, x) == pytest.approx(ref, rel=1e-10)


def test_integral_i_reference():
    assert integral_i(1, 1.0, 1.0) == pytest.approx(0.5963473623231946, rel=1e-14)
    assert integral_i(1, 1.0, 1.0, math.inf) == 0.0
    assert integral_i_rate(1, 3.0, 3.0) == pytest.approx(LOG2E * 0.5963473623231946, rel=1e-14)
    assert integral_i_rate(1, 1e6, 1.0) < 1e-5


def test_integral_i_rate_high_snr():
    # I1(mu, lam) ~ log2(lam/mu) - EuM log2(e); the constant offset does not vanish
    for lam in (1e3, 1e5, 1e7):
        gap = integral_i_rate(1, 1.0, lam) - math.log2(lam)
        assert gap == pytest.approx(-EULER_GAMMA * LOG2E, abs=2 * (math.log(lam) + 1) / lam)


@given(st.integers(2, 8), st.floats(0.05, 50.0), st.floats(0.05, 2000.0), st.floats(0.0, 100.0))
@settings(max_examples=60)
def test_integral_i_recursion(n, mu, lam, x):
    lhs = integral_i(n, mu, lam, x)
    rhs = (math.exp(-x / lam) * (mu / (x + mu)) ** (n - 1) - mu / lam * integral_i(n - 1, mu, lam, x)) / (n - 1)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-300)


@given(st.floats(0.05, 50.0), st.floats(0.05, 2000.0), st.floats(0.0, 50.0))
@settings(max_examples=40)
def test_integral_i_nonincreasing_in_x(mu, lam, x):
    assert integral_i(1, mu, lam, x + 0.5) <= integral_i(1, mu, lam, x)


@pytest.mark.parametrize("mu,lam", [(1.0, 10.0), (2.0, 50.0), (5.0, 1000.0), (0.8, 2.0), (20.0, 25.0), (0.6, 1e5)])
def test_j_series_vs_quadrature(mu, lam):
    ser = integral_j_series(mu, lam)
    assert ser is not None
    assert ser == pytest.approx(integral_j_quadrature(mu, lam), rel=1e-12)


@pytest.mark.parametrize("mu,lam", [(0.25, 10.0), (0.5, 3.0), (30.0, 2.0)])
def test_j_falls_back_to_quadrature(mu, lam):
    assert integral_j_series(mu, lam) is None
    assert integral_j(mu, lam) == pytest.approx(integral_j_quadrature(mu, lam), rel=1e-14)


def test_j_small_lambda():
    assert integral_j(1.0, 1e-6) < 1e-11


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0, 5.0, 50.0])
def test_j_asymptote_and_dilog(mu):
    assert integral_j_asymptotic(mu, 1e6) == pytest.approx(integral_j_quadrature(mu, 1e6), rel=1e-4)


def test_j_asymptote_gap_shrinks():
    gaps = [abs(integral_j(2.0, lam) - integral_j_asymptotic(2.0, lam)) / integral_j(2.0, lam) for lam in (1e2, 1e3, 1e4)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert integral_j_asymptotic(1.0, 1e4) == pytest.approx(integral_j(1.0, 1e4), rel=0.02)
    # Di2(1) = 0 leaves only the log terms
    lam = 1e4
    assert integral_j_asymptotic(1.0, lam) == pytest.approx(
        LOG2E * (0.5 * (EULER_GAMMA - math.log(lam)) ** 2 + math.pi ** 2 / 12), rel=1e-15
    )


@given(st.floats(0.1, 30.0), st.floats(0.5, 1e4))
@settings(max_examples=25, deadline=None)
def test_j_nondecreasing_in_lambda(mu, lam):
    assert integral_j(mu, lam * 1.5) >= integral_j(mu, lam)


def test_oracle_grid_spanning_ratios():
    # closed forms vs quadrature across mu/lam from 1e-3 to 1e3
    ratios = np.logspace(-3, 3, 13)
    count = 0
    for r in ratios:
        for mu in (0.7, 4.0, 60.0, 1000.0):
            lam = mu / r
            for n in (1, 2):
                ref = quadrature(lambda s: mu ** (n - 1) / (s + mu) ** n * math.exp(-s / lam), 0.0, points=(mu, lam))
                assert integral_i(n, mu, lam) == pytest.approx(ref, rel=1e-8)
                count += 1
    assert count >= 50


@pytest.mark.parametrize("n", [1, 2, 5])
@pytest.mark.parametrize("x", [1e7, 1e9, 1e12, 1e200, 1e300])
def test_scaled_en_huge_argument(n, x):
    v = scaled_en(n, x)
    assert v == pytest.approx(1.0 / (x + n), rel=1e-12)
    assert 1.0 / (x + n) < v * (1 + 1e-15) or n == 1
