"""Trigonometric sums: grid evaluation, certified sup estimates."""

import math
from fractions import Fraction

import numpy as np
import pytest

from ergosum.trigsum import (
    ThetaGrid,
    default_grid,
    eval_grid,
    eval_harmonic,
    eval_sum,
    sup_envelope,
    sup_harmonic,
)
from ergosum.weights import WeightSpec, gen_weights, moebius_sieve

import oracles


def test_eval_sum_matches_oracle():
    w = np.exp(2j * np.pi * np.sqrt(np.arange(1, 200)))
    u = np.arange(1, 200, dtype=np.int64)
    for theta in (0.0, 0.123, 0.999, 1.0 / 3.0):
        want = oracles.exp_sum(w, u, theta)
        assert eval_sum(w, u, theta) == pytest.approx(want, rel=1e-12)


def test_eval_sum_fraction_theta_exact_rational_reduction():
    w = np.ones(50, dtype=np.complex128)
    u = np.arange(1, 51, dtype=np.int64) ** 2
    theta = Fraction(3, 7)
    want = oracles.exp_sum(w, u, theta)
    assert eval_sum(w, u, theta) == pytest.approx(want, rel=1e-12)


def test_eval_grid_exact_at_grid_points():
    """FFT scatter evaluation equals direct evaluation on each grid point."""
    rng = np.random.default_rng(0)
    w = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    u = np.sort(rng.choice(500, size=64, replace=False)).astype(np.int64)
    grid = ThetaGrid(1024)
    vals = eval_grid(w, u, grid)
    for i in (0, 1, 511, 1023):
        theta = i / 1024
        assert vals[i] == pytest.approx(eval_sum(w, u, theta), rel=1e-10, abs=1e-10)


def test_dirichlet_kernel_modulus():
    """w = 1, u = k: |V_N(theta)| has the classic sine-ratio closed form."""
    N = 100
    w = np.ones(N, dtype=np.complex128)
    u = np.arange(1, N + 1, dtype=np.int64)
    rng = np.random.default_rng(1)
    for theta in rng.uniform(0.0, 1.0, 50):
        got = abs(eval_sum(w, u, float(theta)))
        assert got == pytest.approx(oracles.dirichlet_modulus(N, float(theta)), rel=1e-9)


def test_sup_envelope_dirichlet_peak():
    """The sup of the Dirichlet sum is exactly N, attained at theta = 0."""
    for N in (10, 100):
        w = np.ones(N, dtype=np.complex128)
        u = np.arange(1, N + 1, dtype=np.int64)
        est = sup_envelope(w, u)
        assert est.lower == pytest.approx(N, rel=1e-12)
        assert est.upper == pytest.approx(N, rel=1e-12)
        assert est.lower <= est.upper
        assert min(est.argmax_theta, 1.0 - est.argmax_theta) < 1e-3
        assert not est.aliased


def test_certificate_orders_and_weight_mass_cap():
    rng = np.random.default_rng(2)
    w = np.exp(2j * np.pi * rng.uniform(size=300))
    u = np.arange(1, 301, dtype=np.int64)
    est = sup_envelope(w, u)
    assert 0.0 <= est.lower <= est.upper <= est.weight_l1 * (1 + 1e-12)
    assert est.deriv_bound == pytest.approx(2 * np.pi * np.sum(np.abs(w) * u), rel=1e-12)


def test_sup_upper_dominates_random_probes():
    """Certified upper bounds |V| at arbitrary probe points."""
    rng = np.random.default_rng(3)
    w = np.exp(2j * np.pi * np.cbrt(np.arange(1, 129)))
    u = np.arange(1, 129, dtype=np.int64)
    est = sup_envelope(w, u)
    probes = rng.uniform(0.0, 1.0, 2000)
    vals = np.abs([eval_sum(w, u, float(t)) for t in probes])
    assert vals.max() <= est.upper * (1 + 1e-9)


def test_aliased_flag():
    w = np.ones(8, dtype=np.complex128)
    u = (np.arange(1, 9, dtype=np.int64)) ** 3  # u_max = 512
    with pytest.warns(RuntimeWarning):
        est = sup_envelope(w, u, grid=ThetaGrid(64))
    assert est.aliased  # 64 < 8 * 513
    est2 = sup_envelope(w, u)
    assert not est2.aliased


def test_vacuous_certificate_warns():
    w = np.ones(4, dtype=np.complex128)
    u = np.array([10**7, 2 * 10**7, 3 * 10**7, 4 * 10**7], dtype=np.int64)
    with pytest.warns(RuntimeWarning):
        sup_envelope(w, u, grid=ThetaGrid(16), refine_iters=0)


def test_default_grid_scales():
    g = default_grid(1000, 1000)
    assert g.points >= 16 * 1000
    assert g.points & (g.points - 1) == 0  # power of two


def test_eval_harmonic_small_closed_form():
    # w = 1, u = k, theta = 0: 1 + 1/2 + 1/3 = 11/6
    w = np.ones(3, dtype=np.complex128)
    u = np.arange(1, 4, dtype=np.int64)
    got = eval_harmonic(w, u, 0.0, k_first=1)
    assert got == pytest.approx(11.0 / 6.0, rel=1e-15)


def test_sup_harmonic_matches_divided_weights():
    w = np.exp(2j * np.pi * np.log(np.arange(1, 65)))
    u = np.arange(1, 65, dtype=np.int64)
    est = sup_harmonic(w, u, k_first=1)
    est2 = sup_envelope(w / u, u)
    assert est.upper == pytest.approx(est2.upper, rel=1e-12)


def test_moebius_weights_at_zero_give_mertens():
    N = 100
    spec = WeightSpec(kind="moebius")
    w = gen_weights(spec, 1, N + 1)
    u = np.arange(1, N + 1, dtype=np.int64)
    mu = moebius_sieve(N)
    assert eval_sum(w, u, 0.0) == pytest.approx(float(mu[1:].sum()), abs=1e-12)


def test_shape_validation():
    with pytest.raises(ValueError):
        eval_sum(np.ones(3), np.arange(4), 0.1)
    with pytest.raises(TypeError):
        eval_sum(np.ones(3), np.array([0.5, 1.5, 2.5]), 0.1)
