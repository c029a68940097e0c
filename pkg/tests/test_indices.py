"""Index families: exact values, sieves against trial division."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergosum.indices import (
    IndexSpec,
    first_primes,
    gen_indices,
    pi_count,
    primes_upto,
)

import oracles


def test_identity_and_monomial():
    assert np.array_equal(gen_indices(IndexSpec(kind="identity"), 0, 5),
                          np.array([0, 1, 2, 3, 4]))
    assert np.array_equal(gen_indices(IndexSpec(kind="monomial", d=3), 1, 5),
                          np.array([1, 8, 27, 64]))


def test_polynomial_integer_exact():
    spec = IndexSpec(kind="polynomial", coeffs=(1, 0, 2))  # 1 + 2k^2
    u = gen_indices(spec, 0, 4)
    assert np.array_equal(u, np.array([1, 3, 9, 19]))


def test_explicit_values():
    # explicit lists are 0-based: u_k = values[k]
    spec = IndexSpec(kind="explicit", values=(2, 3, 5, 9))
    assert np.array_equal(gen_indices(spec, 0, 3), np.array([2, 3, 5]))
    assert np.array_equal(gen_indices(spec, 1, 4), np.array([3, 5, 9]))
    with pytest.raises(ValueError):
        gen_indices(spec, 1, 6)  # beyond the provided list


def test_primes_upto_against_trial_division():
    ps = primes_upto(500)
    want = [n for n in range(2, 501) if oracles.is_prime(n)]
    assert ps.tolist() == want


def test_first_primes_count_and_tail():
    ps = first_primes(1000)
    assert ps.size == 1000
    assert oracles.is_prime(int(ps[-1]))
    assert int(ps[0]) == 2 and int(ps[99]) == 541  # the 100th prime


def test_primes_kind_window():
    spec = IndexSpec(kind="primes")
    u = gen_indices(spec, 3, 7)  # 3rd..6th primes
    assert u.tolist() == [5, 7, 11, 13]


def test_monomial_rejects_degree_zero():
    with pytest.raises(ValueError):
        IndexSpec(kind="monomial", d=0)


def test_polynomial_rejects_float_coeffs():
    with pytest.raises(ValueError):
        IndexSpec(kind="polynomial", coeffs=(1.5, 2))


def test_cramer_deterministic_and_increasing():
    spec = IndexSpec(kind="cramer_primes", seed=4)
    u = gen_indices(spec, 1, 2000)
    v = gen_indices(spec, 1, 2000)
    assert np.array_equal(u, v)
    assert np.all(np.diff(u) > 0)
    assert int(u[0]) >= 3


@given(st.integers(min_value=1, max_value=1500), st.integers(min_value=1, max_value=400))
@settings(max_examples=30, deadline=None)
def test_cramer_window_consistency(m, size):
    """Windows are slices of one fixed random set per seed."""
    spec = IndexSpec(kind="cramer_primes", seed=11)
    big = gen_indices(spec, 1, 2001)
    win = gen_indices(spec, m, m + size)
    assert np.array_equal(win, big[m - 1 : m - 1 + size])


def test_cramer_counting_function_consistent_with_elements():
    spec = IndexSpec(kind="cramer_primes", seed=2)
    u = gen_indices(spec, 1, 5001)
    for bound in (10, 100, 1000, int(u[-1])):
        want = int((u <= bound).sum())
        assert pi_count(spec, bound) == want


def test_cramer_density_tracks_li():
    """Pi(N) log N / N should sit near 1 for N ~ 10^5."""
    vals = []
    for seed in range(1, 9):
        spec = IndexSpec(kind="cramer_primes", seed=seed)
        n = 100_000
        vals.append(pi_count(spec, n) * np.log(n) / n)
    med = float(np.median(vals))
    assert 0.9 < med < 1.25


def test_pi_count_true_primes():
    spec = IndexSpec(kind="primes")
    assert pi_count(spec, 100) == 25
    assert pi_count(spec, 1000) == 168


def test_round_trip_dict():
    for spec in (IndexSpec(kind="monomial", d=2),
                 IndexSpec(kind="cramer_primes", seed=8),
                 IndexSpec(kind="explicit", values=(1, 4, 9))):
        assert IndexSpec.from_dict(spec.to_dict()) == spec
