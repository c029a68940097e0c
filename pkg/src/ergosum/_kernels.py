"""Deterministic numeric kernels shared across the package.

Two concerns live here:

* fixed-shape chunked pairwise reductions, so every sum in the package is
  reproducible bit for bit regardless of how the work is batched, and

* exact mod-1 argument reduction for phases theta*u with integer u, via the
  dyadic representation of the double theta (low-64-bit wraparound products
  keep the residue exact), which keeps trigonometric sums accurate when
  theta*u is far above 2**53.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

# chunk width for pairwise reductions; partial sums over one chunk are
# combined by a fixed binary tree, so serial and batched runs agree exactly
CHUNK = 4096

_U64 = np.uint64
_FULL_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)


def next_pow2(n: int) -> int:
    """Smallest power of two >= max(n, 1)."""
    if n <= 1:
        return 1
    return 1 << (int(n - 1).bit_length())


def chunk_sums(a: np.ndarray, chunk: int = CHUNK) -> np.ndarray:
    """Per-chunk sums of a 1-d array; zero padding keeps the shape fixed."""
    a = np.ascontiguousarray(a)
    n = a.shape[0]
    if n == 0:
        return np.zeros(1, dtype=a.dtype)
    rows = -(-n // chunk)
    if rows * chunk == n:
        return a.reshape(rows, chunk).sum(axis=1)
    padded = np.zeros(rows * chunk, dtype=a.dtype)
    padded[:n] = a
    return padded.reshape(rows, chunk).sum(axis=1)


def tree_reduce(partials: np.ndarray) -> complex | float:
    """Fold partial sums by a fixed binary tree (zero-padded at odd levels)."""
    p = partials
    while p.shape[0] > 1:
        if p.shape[0] % 2:
            p = np.concatenate([p, np.zeros(1, dtype=p.dtype)])
        p = p[0::2] + p[1::2]
    return p[0]


def pairwise_sum(a: np.ndarray, chunk: int = CHUNK):
    """Deterministic chunked pairwise sum of a 1-d array."""
    return tree_reduce(chunk_sums(a, chunk))


def prefix_at(terms: np.ndarray, bounds: np.ndarray, chunk: int = CHUNK) -> np.ndarray:
    """Prefix sums of ``terms`` evaluated at exclusive end positions.

    ``bounds`` must be strictly increasing integers in [1, len(terms)].
    Element i of the result is sum(terms[:bounds[i]]), assembled from a
    fixed chunk partition (cumulative inside each chunk, sequential across
    chunk totals), so a bound's value is bit-identical no matter which
    other bounds are requested alongside it.
    """
    terms = np.ascontiguousarray(terms)
    n = terms.shape[0]
    bounds = np.asarray(bounds, dtype=np.int64)
    if bounds.size == 0:
        return np.zeros(0, dtype=terms.dtype)
    if bounds[0] < 1 or bounds[-1] > n or np.any(np.diff(bounds) <= 0):
        raise ValueError("bounds must be strictly increasing in [1, len(terms)]")
    n_chunks = -(-n // chunk)
    padded = np.zeros(n_chunks * chunk, dtype=terms.dtype)
    padded[:n] = terms
    within = np.cumsum(padded.reshape(n_chunks, chunk), axis=1)
    chunk_prefix = np.cumsum(within[:, -1])
    q, r = np.divmod(bounds, chunk)
    out = np.empty(bounds.size, dtype=terms.dtype)
    full = r == 0
    out[full] = chunk_prefix[q[full] - 1]
    out[~full] = within[q[~full], r[~full] - 1]
    prior = ~full & (q > 0)
    out[prior] += chunk_prefix[q[prior] - 1]
    return out


# ---------------------------------------------------------------------------
# exact dyadic argument reduction


def float_as_dyadic(x: float) -> tuple[int, int]:
    """Write a finite double exactly as M * 2**E with integer M, E."""
    if not math.isfinite(x):
        raise ValueError("dyadic form requires a finite value")
    m, e = math.frexp(x)
    return int(m * (1 << 53)), e - 53


def frac_mul(theta: float, u: np.ndarray) -> np.ndarray:
    """frac(theta * u) for integer u, exact to one ulp of the unit interval.

    theta is decomposed as M * 2**E; the residue (M*u) mod 2**-E is computed
    with wraparound uint64 products (exact low bits) when -E <= 64 and with
    python integers otherwise, so no precision is lost however large theta*u
    gets.
    """
    u = np.asarray(u)
    if theta == 0.0:
        return np.zeros(u.shape, dtype=np.float64)
    M, E = float_as_dyadic(abs(theta))
    if E >= 0:
        return np.zeros(u.shape, dtype=np.float64)
    J = -E
    if J <= 64:
        with np.errstate(over="ignore"):
            mask = _U64((1 << J) - 1)
            mres = _U64(M & ((1 << J) - 1))
            r = (u.astype(_U64) * mres) & mask
        f = r.astype(np.float64) * math.ldexp(1.0, E)
    else:
        q = 1 << J
        f = np.array([((int(v) * M) % q) / q for v in u.ravel()],
                     dtype=np.float64).reshape(u.shape)
    if theta < 0.0:
        f = np.where(f > 0.0, 1.0 - f, 0.0)
    return np.where(f >= 1.0, 0.0, f)


def frac_poly(coeffs, k: np.ndarray) -> np.ndarray:
    """frac(sum_j coeffs[j] * k**j) for integer k, exact per monomial.

    Each monomial residue is reduced mod 1 through the dyadic form of its
    coefficient before anything is added, so integer-coefficient polynomials
    give exact zeros and large k never degrade the phase.
    """
    k = np.asarray(k)
    total = np.zeros(k.shape, dtype=np.float64)
    for j, c in enumerate(coeffs):
        c = float(c)
        if c == 0.0:
            continue
        M, E = float_as_dyadic(c)
        if E >= 0:
            continue  # c * k**j is an exact integer
        J = -E
        if J <= 64:
            with np.errstate(over="ignore"):
                mask = _U64((1 << J) - 1)
                mres = _U64(M % (1 << J))
                kp = k.astype(_U64) ** _U64(j)  # wraparound keeps low bits
                r = (kp * mres) & mask
            total += r.astype(np.float64) * math.ldexp(1.0, E)
        else:
            q = 1 << J
            total += np.array([((int(v) ** j * M) % q) / q for v in k.ravel()],
                              dtype=np.float64).reshape(k.shape)
    return np.mod(total, 1.0)


def frac_ratio(num: int, den: int, u: np.ndarray) -> np.ndarray:
    """frac(u * num/den) for integer u, exact rational reduction."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    p = num % den
    if p == 0:
        return np.zeros(np.asarray(u).shape, dtype=np.float64)
    rems = np.array([(int(v) * p) % den for v in np.asarray(u).ravel()],
                    dtype=np.float64)
    return (rems / den).reshape(np.asarray(u).shape)


def frac_of(theta, u: np.ndarray) -> np.ndarray:
    """Dispatch exact frac(theta*u) for float or Fraction theta."""
    if isinstance(theta, Fraction):
        return frac_ratio(theta.numerator, theta.denominator, u)
    return frac_mul(float(theta), u)
