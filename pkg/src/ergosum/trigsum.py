"""Trigonometric sums V(theta) = sum_k w_k exp(2 i pi theta u_k) and their
sup-over-theta envelopes with explicit certificates.

Conventions:

* the caller passes aligned slices (w_k, u_k) for the k-range of interest,
  so a sum over [M, N) is just the corresponding array slices;
* the harmonic variant divides each weight by its index k (k >= 1), the
  shape used by one-sided Hilbert-type series;
* indices are integers, so sums are 1-periodic in theta and the sup is
  taken over the fundamental domain [0, 1).

Certificates: `lower` is the largest |V| actually evaluated (grid plus
golden-section refinement around the best grid cells), hence a true lower
bound. `upper` adds the mean-value slack (final bracket width) *
deriv_bound / 2, capped at the triangle bound sum |w_k|; deriv_bound =
2 pi sum |w_k| u_k dominates |V'|. The upper value certifies the refined
brackets; how well the grid resolves peaks between samples is exposed by
`grid_spacing`, `deriv_bound` and the `aliased` flag rather than folded
into a would-be global bound that would swamp the estimate.

Every reduction is chunked pairwise (see _kernels), and phase arguments
theta*u are reduced mod 1 exactly through the dyadic form of theta, so
evaluation is deterministic and keeps full precision at large u.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import frac_of, next_pow2, pairwise_sum

TWO_PI = 2.0 * math.pi
_GOLDEN_STEP = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_GRID_CAP = 1 << 22
SCALED_GRID_CAP = 1 << 26
OVERSAMPLE = 8
DEFAULT_REFINE_ITERS = 48


@dataclass(frozen=True)
class ThetaGrid:
    """Equispaced theta samples: points values on [span[0], span[1])."""

    points: int
    span: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("grid needs at least 2 points")
        if not self.span[0] < self.span[1]:
            raise ValueError("grid span must be nonempty")

    @property
    def spacing(self) -> float:
        return (self.span[1] - self.span[0]) / self.points

    @property
    def canonical(self) -> bool:
        return self.span == (0.0, 1.0)

    def thetas(self) -> np.ndarray:
        return self.span[0] + self.spacing * np.arange(self.points)


@dataclass(frozen=True)
class SupEstimate:
    """Certified bracket for sup_theta |V(theta)|."""

    lower: float
    upper: float
    argmax_theta: float
    deriv_bound: float
    weight_l1: float
    grid_points: int
    grid_spacing: float
    bracket_width: float
    aliased: bool

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper * (1 + 1e-12)):
            raise ValueError("sup estimate needs 0 <= lower <= upper")

    @property
    def honesty_ratio(self) -> float:
        """upper/lower; near 1 when the certificate is tight."""
        return self.upper / self.lower if self.lower > 0 else math.inf


def _check_pair(weights: np.ndarray, indices: np.ndarray):
    w = np.ascontiguousarray(weights, dtype=np.complex128)
    u = np.ascontiguousarray(indices)
    if u.dtype.kind not in "iu":
        raise TypeError("indices must be integers")
    if w.shape != u.shape or w.ndim != 1:
        raise ValueError("weights and indices must be aligned 1-d arrays")
    if w.size == 0:
        raise ValueError("empty range")
    if u.size and int(u.min()) < 0:
        raise ValueError("indices must be nonnegative")
    return w, u


def eval_sum(weights, indices, theta) -> complex:
    """V(theta) = sum_k w_k exp(2 i pi theta u_k), chunked pairwise.

    theta may be a float or a Fraction (exact rational reduction, useful
    for spectral atoms and rotation angles given as convergents).
    """
    w, u = _check_pair(weights, indices)
    phase = frac_of(theta, u)
    return complex(pairwise_sum(w * np.exp(2j * np.pi * phase)))


def eval_grid(weights, indices, grid: ThetaGrid) -> np.ndarray:
    """V on every grid point.

    Canonical [0, 1) grids go through an FFT scatter: weights are binned at
    u_k mod L and one inverse transform of length L = grid.points returns
    every value exactly (integer indices fold mod L without error). Other
    grids are evaluated directly point by point.
    """
    w, u = _check_pair(weights, indices)
    if grid.canonical:
        L = grid.points
        pos = (u.astype(np.uint64) % np.uint64(L)).astype(np.int64)
        acc = np.bincount(pos, weights=w.real, minlength=L).astype(np.complex128)
        acc += 1j * np.bincount(pos, weights=w.imag, minlength=L)
        return L * np.fft.ifft(acc)
    thetas = grid.thetas()
    return np.array([eval_sum(w, u, float(t)) for t in thetas], dtype=np.complex128)


def default_grid(n_terms: int, u_max: int) -> ThetaGrid:
    """Default sup grid: min(2**22, next_pow2(16 N)), rescaled by u_max/N
    (capped at 2**26) when indices grow superlinearly, so peak widths
    ~1/u_max stay sampled."""
    points = min(DEFAULT_GRID_CAP, next_pow2(16 * max(1, n_terms)))
    if u_max > n_terms > 0:
        scale = u_max / n_terms
        points = min(SCALED_GRID_CAP, next_pow2(int(points * scale)))
    return ThetaGrid(max(points, 16))


def _golden_max(fn, a: float, b: float, iters: int):
    """Golden-section maximization; returns (best_x, best_val, width)."""
    c = b - _GOLDEN_STEP * (b - a)
    d = a + _GOLDEN_STEP * (b - a)
    fc, fd = fn(c), fn(d)
    best_x, best = (c, fc) if fc >= fd else (d, fd)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN_STEP * (b - a)
            fc = fn(c)
            if fc > best:
                best_x, best = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN_STEP * (b - a)
            fd = fn(d)
            if fd > best:
                best_x, best = d, fd
    return best_x, best, b - a


def sup_envelope(weights, indices, grid: ThetaGrid | None = None,
                 refine_iters: int = DEFAULT_REFINE_ITERS) -> SupEstimate:
    """Certified estimate of sup over theta in [0, 1) of |V(theta)|.

    Grid maximum, then golden-section refinement around the 8 best grid
    cells; see the module docstring for what the certificate asserts.
    """
    w, u = _check_pair(weights, indices)
    u_max = int(u.max())
    if grid is None:
        grid = default_grid(w.size, u_max)
    absw = np.abs(w)
    weight_l1 = float(pairwise_sum(absw))
    deriv_bound = TWO_PI * float(pairwise_sum(absw * u.astype(np.float64)))
    if weight_l1 > 0 and grid.spacing * deriv_bound > 0.5 * weight_l1:
        warnings.warn(
            "grid spacing times derivative bound exceeds half the weight mass; "
            "the certificate is close to vacuous at this resolution",
            RuntimeWarning,
        )
    vals = np.abs(eval_grid(w, u, grid))
    thetas = grid.thetas()
    top = int(np.argmax(vals))
    lower = float(vals[top])
    arg = float(thetas[top])
    bracket = grid.spacing
    if refine_iters > 0 and weight_l1 > 0:
        n_cells = min(8, grid.points)
        cells = np.argpartition(vals, -n_cells)[-n_cells:]
        fn = lambda t: abs(eval_sum(w, u, t))  # noqa: E731
        for i in cells:
            t0 = float(thetas[int(i)])
            x, v, width = _golden_max(
                fn, t0 - grid.spacing, t0 + grid.spacing, refine_iters
            )
            if v > lower:
                lower, arg = float(v), float(x)
            bracket = width
    upper = min(lower + bracket * deriv_bound / 2.0, weight_l1)
    upper = max(upper, lower)
    return SupEstimate(
        lower=lower,
        upper=upper,
        argmax_theta=arg % 1.0 if grid.canonical else arg,
        deriv_bound=deriv_bound,
        weight_l1=weight_l1,
        grid_points=grid.points,
        grid_spacing=grid.spacing,
        bracket_width=bracket,
        aliased=grid.points < OVERSAMPLE * (u_max + 1),
    )


# ---------------------------------------------------------------------------
# harmonic variant: weights w_k / k, the Hilbert-series shape


def _harmonic_pair(weights, indices, k_first: int):
    w, u = _check_pair(weights, indices)
    if k_first < 1:
        raise ValueError("harmonic sums start at k >= 1")
    k = np.arange(k_first, k_first + w.size, dtype=np.float64)
    return w / k, u


def eval_harmonic(weights, indices, theta, k_first: int = 1) -> complex:
    """sum_k (w_k / k) exp(2 i pi theta u_k); weights[0] belongs to k_first."""
    hw, u = _harmonic_pair(weights, indices, k_first)
    return eval_sum(hw, u, theta)


def sup_harmonic(weights, indices, grid: ThetaGrid | None = None,
                 refine_iters: int = DEFAULT_REFINE_ITERS,
                 k_first: int = 1) -> SupEstimate:
    """Certified sup estimate for the harmonic sum; deriv_bound becomes
    2 pi sum |w_k| u_k / k automatically through the divided weights."""
    hw, u = _harmonic_pair(weights, indices, k_first)
    return sup_envelope(hw, u, grid=grid, refine_iters=refine_iters)
