"""Closed-form oscillatory-sum bounds against brute-force summation."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergosum.analytic_bounds import (
    PhaseFunction,
    frac_dist,
    hlawka_bound,
    nth_derivative_bound,
    power_derivative_range,
    power_phase_exponent,
    steep_power_phase_exponent,
    van_der_corput_bound,
)


def brute_phase_sum(pf: PhaseFunction, a: int, b: int) -> float:
    total = 0j
    for k in range(a, b + 1):
        total += cmath.exp(2j * math.pi * pf.value(k))
    return abs(total)


def test_quadratic_phase_values_and_derivatives():
    pf = PhaseFunction(kind="quadratic", c2=-0.5)  # f(x) = -x^2/2
    assert pf.value(4.0) == pytest.approx(-8.0)
    assert pf.d1(3.0) == pytest.approx(-3.0)
    assert pf.d2(10.0) == pytest.approx(-1.0)


def test_van_der_corput_textbook_checkpoint():
    # f(x) = -x^2/2 on [0, 10], rho = 1: (10 + 2)(4 + 3) = 84
    pf = PhaseFunction(kind="quadratic", c2=-0.5)
    assert van_der_corput_bound(pf, 0.0, 10.0, 1.0) == pytest.approx(84.0)
    assert brute_phase_sum(pf, 0, 10) <= 84.0


def test_van_der_corput_dominates_random_concave_quadratics():
    rng = np.random.default_rng(5)
    for _ in range(60):
        rho = float(rng.uniform(0.05, 1.0))
        b = float(rng.integers(20, 300))
        pf = PhaseFunction(kind="quadratic", c2=-rho / 2.0,
                           c1=float(rng.uniform(-3, 3)))
        bound = van_der_corput_bound(pf, 0.0, b, rho)
        assert brute_phase_sum(pf, 0, int(b)) <= bound * (1 + 1e-12)


def test_nth_derivative_textbook_checkpoint():
    # n = 2 (K = 4), lambda = 1, h = 1, N = 100:
    # 100 (1 + 100^{-1/2} + 100^{-1}) = 111
    assert nth_derivative_bound(2, 1.0, 1.0, 100.0) == pytest.approx(111.0)


def test_nth_derivative_bound_monotone_in_h():
    b1 = nth_derivative_bound(3, 1e-4, 1.0, 1000.0)
    b2 = nth_derivative_bound(3, 1e-4, 2.0, 1000.0)
    assert b2 == pytest.approx(2 * b1)


def test_power_derivative_range_brackets_truth():
    """lam <= f^(n) <= h lam on [a, b] for f = x^delta."""
    delta, n, a, b = 2.5, 3, 10.0, 100.0
    lam, h = power_derivative_range(delta, n, a, b)
    c = delta * (delta - 1) * (delta - 2)
    for x in np.linspace(a, b, 50):
        d3 = c * x ** (delta - 3)
        assert lam * (1 - 1e-12) <= d3 <= h * lam * (1 + 1e-12)


def test_exponents_pinned():
    # 1 - delta/2 for the fractional range
    assert power_phase_exponent(0.5) == pytest.approx(0.75)
    # 1 - ||delta|| 2/(3(K-2)) with K = 8 for delta = 2.5
    assert steep_power_phase_exponent(2.5) == pytest.approx(17.0 / 18.0)


def test_exponents_below_one():
    for d in (0.1, 0.5, 0.9):
        assert 0.5 <= power_phase_exponent(d) < 1.0
    for d in (1.5, 2.5, 3.3, 4.7):
        assert 0.5 <= steep_power_phase_exponent(d) < 1.0


def test_hlawka_bound_values():
    assert hlawka_bound(1.0) == pytest.approx(60.0)
    assert hlawka_bound(0.5) == pytest.approx(75.0)
    assert hlawka_bound(2.0) == pytest.approx(75.0)
    with pytest.raises(ValueError):
        hlawka_bound(0.0)


def test_hlawka_bound_dominates_harmonic_log_sums():
    """Direct check of the closed-form bound at modest N."""
    for h in (0.5, 1.0):
        for theta in (0.0, 0.1, 0.37):
            total = 0j
            for k in range(1, 3001):
                ph = (h * math.log(k) + theta * k) % 1.0
                total += cmath.exp(2j * math.pi * ph) / k
            assert abs(total) <= hlawka_bound(h)


@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_frac_dist_properties(x):
    d = frac_dist(x)
    assert 0.0 <= d <= 0.5
    assert frac_dist(x + 1.0) == pytest.approx(d, abs=1e-6)


def test_frac_dist_values():
    assert frac_dist(0.25) == pytest.approx(0.25)
    assert frac_dist(2.5) == pytest.approx(0.5)
    assert frac_dist(-0.1) == pytest.approx(0.1)
