"""Weighted sums along orbits, normalizers, series partial sums, block
ladders and oscillation statistics.

Conventions used throughout:

    running sums      S_N = sum_{k_first <= k < N} w_k f(T^{u_k} x0)
                      (exclusive N, element j of the term arrays is k_first+j)
    series sums       partial(N) = sum_{k_first <= k <= N} (w_k / A(k)) f_k
                      (inclusive N, the one-sided transform shape)
    normalizers       A(k) = k^gamma log^a k (log log k)^b, evaluated for
                      k >= k0 where every factor is positive

Runs store prefix values on a grid: every N up to a dense limit (10^6 by
default), then geometric checkpoints; statistics over "all N" are grid
statistics and say so. Prefixes come from the chunked pairwise kernel, so
a stored value is bit-identical however the run is later re-chunked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import frac_of, next_pow2, pairwise_sum, prefix_at
from .dynamics import SpectralMeasure

LADDER_KINDS = ("dyadic", "doubly_exponential", "rho_ladder", "rho_rho_ladder")

DENSE_LIMIT = 1_000_000
GRID_RATIO = 1.01
_N_CAP = 1 << 62


@dataclass(frozen=True)
class NormalizerSpec:
    """A(k) = k**gamma * log**a k * (log log k)**b for k >= k0.

    k0 defaults to 3, or 16 when b != 0 (small log log values would make
    monotonicity checks meaningless); it may be lowered to 1 for pure
    powers (a = b = 0), to 2 when only a != 0.
    """

    gamma: float
    a: float = 0.0
    b: float = 0.0
    k0: int | None = None

    def __post_init__(self):
        if not (self.gamma >= 0 and math.isfinite(self.gamma)):
            raise ValueError("gamma must be finite and >= 0")
        minimum = 1
        if self.a != 0:
            minimum = 2
        if self.b != 0:
            minimum = 3
        default = 16 if self.b != 0 else 3
        k0 = default if self.k0 is None else int(self.k0)
        if k0 < minimum:
            raise ValueError(f"k0 must be >= {minimum} for this normalizer")
        object.__setattr__(self, "k0", k0)

    def values(self, ks) -> np.ndarray:
        """A(k) on an integer array; every k must be >= k0."""
        k = np.ascontiguousarray(ks, dtype=np.float64)
        if k.size and k.min() < self.k0:
            raise ValueError(f"normalizer defined for k >= {self.k0}")
        out = k ** self.gamma
        if self.a != 0:
            out = out * np.log(k) ** self.a
        if self.b != 0:
            out = out * np.log(np.log(k)) ** self.b
        if np.any(~np.isfinite(out)) or np.any(out <= 0.0):
            raise ValueError("normalizer must be positive on the range")
        return out

    def is_monotone_on(self, n_lo: int, n_hi: int) -> bool:
        ks = np.arange(max(self.k0, n_lo), n_hi + 1, dtype=np.int64)
        if ks.size < 2:
            return True
        return bool(np.all(np.diff(self.values(ks)) >= 0.0))

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "a": self.a, "b": self.b, "k0": self.k0}

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizerSpec":
        return cls(**d)


@dataclass(frozen=True)
class BlockLadder:
    """Checkpoints N_j along which anchors and oscillations are measured.

    dyadic              N_j = 2**j
    doubly_exponential  N_j = 2**(2**j)
    rho_ladder          N_j = floor(rho**(j**(1-eps) * log j)), j >= 2
    rho_rho_ladder      N_j = floor(rho**(rho**(j**(1-eps) * log j))), j >= 2
    """

    kind: str
    j_lo: int
    j_hi: int
    rho: float | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if self.kind not in LADDER_KINDS:
            raise ValueError(f"unknown ladder kind {self.kind!r}")
        if not (0 <= self.j_lo <= self.j_hi):
            raise ValueError("need 0 <= j_lo <= j_hi")
        if self.kind in ("rho_ladder", "rho_rho_ladder"):
            if self.rho is None or not self.rho > 1:
                raise ValueError("rho ladders need rho > 1")
            if self.epsilon is None or not (0 < self.epsilon <= 0.5):
                raise ValueError("rho ladders need epsilon in (0, 1/2]")
            if self.j_lo < 2:
                raise ValueError("rho ladders start at j = 2 (log j > 0)")
        ns = self.values()
        if np.any(np.diff(ns) <= 0):
            raise ValueError("ladder must be strictly increasing on its j range")

    def js(self) -> np.ndarray:
        return np.arange(self.j_lo, self.j_hi + 1, dtype=np.int64)

    def values(self) -> np.ndarray:
        j = self.js()
        if self.kind == "dyadic":
            if self.j_hi >= 62:
                raise ValueError("dyadic ladder exceeds the 2**62 cap")
            return (np.int64(1) << j).astype(np.int64)
        if self.kind == "doubly_exponential":
            if self.j_hi >= 6:
                raise ValueError("doubly exponential ladder exceeds the 2**62 cap")
            return (np.int64(1) << (np.int64(1) << j)).astype(np.int64)
        expo = j.astype(np.float64) ** (1.0 - self.epsilon) * np.log(j)
        if self.kind == "rho_rho_ladder":
            expo = self.rho ** expo
        vals = np.floor(self.rho ** expo)
        if np.any(~np.isfinite(vals)) or np.any(vals > _N_CAP):
            raise ValueError("ladder exceeds the 2**62 cap")
        return vals.astype(np.int64)

    @classmethod
    def dyadic(cls, j_lo: int, j_hi: int) -> "BlockLadder":
        return cls(kind="dyadic", j_lo=j_lo, j_hi=j_hi)

    @classmethod
    def doubly_exponential(cls, j_lo: int, j_hi: int) -> "BlockLadder":
        return cls(kind="doubly_exponential", j_lo=j_lo, j_hi=j_hi)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "j_lo": self.j_lo, "j_hi": self.j_hi}
        if self.rho is not None:
            out["rho"] = self.rho
        if self.epsilon is not None:
            out["epsilon"] = self.epsilon
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "BlockLadder":
        return cls(**d)


def storage_grid(n_lo: int, n_hi: int, dense_limit: int = DENSE_LIMIT,
                 ratio: float = GRID_RATIO) -> np.ndarray:
    """Stored checkpoints: every integer in [n_lo, min(n_hi, dense_limit)],
    then geometric steps of the given ratio, always ending at n_hi."""
    if not (1 <= n_lo <= n_hi):
        raise ValueError("need 1 <= n_lo <= n_hi")
    if ratio <= 1.0:
        raise ValueError("ratio must exceed 1")
    dense_top = min(n_hi, max(dense_limit, n_lo))
    out = list(range(n_lo, dense_top + 1))
    n = dense_top
    while n < n_hi:
        n = min(max(n + 1, int(n * ratio)), n_hi)
        out.append(n)
    return np.array(out, dtype=np.int64)


@dataclass(eq=False)
class SeriesRun:
    """Prefix values on a stored N grid.

    convention "exclusive": sums[i] = sum over k in [k_first, n_grid[i]).
    convention "inclusive": sums[i] = sum over k in [k_first, n_grid[i]].
    """

    k_first: int
    n_grid: np.ndarray
    sums: np.ndarray
    normalizer: NormalizerSpec | None = None
    convention: str = "exclusive"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.n_grid = np.ascontiguousarray(self.n_grid, dtype=np.int64)
        self.sums = np.ascontiguousarray(self.sums, dtype=np.complex128)
        if self.convention not in ("exclusive", "inclusive"):
            raise ValueError("convention must be exclusive or inclusive")
        if self.n_grid.ndim != 1 or self.n_grid.size == 0:
            raise ValueError("empty run")
        if self.n_grid.size != self.sums.size:
            raise ValueError("grid and sums must align")
        if np.any(np.diff(self.n_grid) <= 0):
            raise ValueError("stored grid must be strictly increasing")
        first_ok = self.k_first + (1 if self.convention == "exclusive" else 0)
        if int(self.n_grid[0]) < first_ok:
            raise ValueError("grid starts before the first term")

    @property
    def n_max(self) -> int:
        return int(self.n_grid[-1])

    def sum_at(self, N: int) -> complex:
        i = int(np.searchsorted(self.n_grid, N))
        if i >= self.n_grid.size or self.n_grid[i] != N:
            raise KeyError(f"N = {N} is not a stored checkpoint")
        return complex(self.sums[i])


def weighted_sums(orbit_values, weights, k_first: int = 0,
                  normalizer: NormalizerSpec | None = None,
                  n_grid: np.ndarray | None = None,
                  meta: dict | None = None) -> SeriesRun:
    """Running sums S_N = sum_{k_first <= k < N} w_k * orbit_k on a stored
    grid (default: dense up to 10^6 then geometric)."""
    v = np.ascontiguousarray(orbit_values, dtype=np.complex128)
    w = np.ascontiguousarray(weights, dtype=np.complex128)
    if v.shape != w.shape or v.ndim != 1 or v.size == 0:
        raise ValueError("orbit values and weights must be aligned 1-d arrays")
    n_top = k_first + v.size
    if n_grid is None:
        n_grid = storage_grid(k_first + 1, n_top)
    n_grid = np.ascontiguousarray(n_grid, dtype=np.int64)
    if n_grid.size == 0 or n_grid[0] <= k_first or n_grid[-1] > n_top:
        raise ValueError(f"grid must lie within ({k_first}, {n_top}]")
    sums = prefix_at(w * v, n_grid - k_first)
    return SeriesRun(k_first=k_first, n_grid=n_grid, sums=sums,
                     normalizer=normalizer, meta=dict(meta or {}))


@dataclass(eq=False)
class NormalizedSeries:
    """Ratios |S_N| / A(N) on the stored grid, with tail and slope reports."""

    n_grid: np.ndarray
    ratios: np.ndarray
    gamma: float
    k0: int
    monotone_normalizer: bool

    def value_at(self, N: int) -> float:
        i = int(np.searchsorted(self.n_grid, N, side="right")) - 1
        if i < 0:
            raise KeyError(f"no stored checkpoint at or below N = {N}")
        return float(self.ratios[i])

    def tail_max(self, n_tail: int) -> float:
        mask = self.n_grid >= n_tail
        if not mask.any():
            raise ValueError("tail start exceeds the stored grid")
        return float(self.ratios[mask].max())

    def slope(self, n_lo: int | None = None) -> float:
        """Least-squares slope of log ratio against log N, or against
        log log N when gamma = 0 (log-scale normalizers)."""
        mask = self.ratios > 0.0
        if n_lo is not None:
            mask &= self.n_grid >= n_lo
        if mask.sum() < 2:
            return math.nan
        n = self.n_grid[mask].astype(np.float64)
        x = np.log(np.log(n)) if self.gamma == 0.0 else np.log(n)
        y = np.log(self.ratios[mask])
        xc = x - x.mean()
        den = float(xc @ xc)
        if den == 0.0:
            return math.nan
        return float(xc @ (y - y.mean())) / den


def normalized_series(run: SeriesRun,
                      normalizer: NormalizerSpec | None = None) -> NormalizedSeries:
    """Divide a run by its normalizer on the stored grid (N >= k0 only)."""
    norm = normalizer or run.normalizer
    if norm is None:
        raise ValueError("run carries no normalizer and none was given")
    mask = run.n_grid >= norm.k0
    if not mask.any():
        raise ValueError("entire grid lies below the normalizer offset k0")
    n = run.n_grid[mask]
    a = norm.values(n)
    ratios = np.abs(run.sums[mask]) / a
    mono = bool(np.all(np.diff(a) >= 0.0))
    return NormalizedSeries(n_grid=n, ratios=ratios, gamma=norm.gamma,
                            k0=norm.k0, monotone_normalizer=mono)


# ---------------------------------------------------------------------------
# series partial sums (one-sided transform shape) and tail diagnostics


def _series_terms(weights, orbit_values, norm: NormalizerSpec, k_first: int):
    w = np.ascontiguousarray(weights, dtype=np.complex128)
    v = np.ascontiguousarray(orbit_values, dtype=np.complex128)
    if w.shape != v.shape or w.ndim != 1 or w.size == 0:
        raise ValueError("weights and orbit values must be aligned 1-d arrays")
    if k_first < norm.k0:
        raise ValueError(f"series terms start at k >= k0 = {norm.k0}")
    ks = np.arange(k_first, k_first + w.size, dtype=np.int64)
    return w * v / norm.values(ks)


def hilbert_partial(weights, orbit_values, norm: NormalizerSpec, N: int,
                    k_first: int | None = None) -> complex:
    """partial(N) = sum_{k_first <= k <= N} (w_k / A(k)) * orbit_k."""
    if k_first is None:
        k_first = norm.k0
    terms = _series_terms(weights, orbit_values, norm, k_first)
    count = N - k_first + 1
    if not (1 <= count <= terms.size):
        raise ValueError("N outside the supplied term range")
    return complex(pairwise_sum(terms[:count]))


def hilbert_series(weights, orbit_values, norm: NormalizerSpec,
                   k_first: int | None = None,
                   n_grid: np.ndarray | None = None,
                   meta: dict | None = None) -> SeriesRun:
    """Partial sums of the series on a stored grid (inclusive convention)."""
    if k_first is None:
        k_first = norm.k0
    terms = _series_terms(weights, orbit_values, norm, k_first)
    n_top = k_first + terms.size - 1
    if n_grid is None:
        n_grid = storage_grid(k_first, n_top)
    n_grid = np.ascontiguousarray(n_grid, dtype=np.int64)
    if n_grid.size == 0 or n_grid[0] < k_first or n_grid[-1] > n_top:
        raise ValueError(f"grid must lie within [{k_first}, {n_top}]")
    sums = prefix_at(terms, n_grid - k_first + 1)
    return SeriesRun(k_first=k_first, n_grid=n_grid, sums=sums, normalizer=norm,
                     convention="inclusive", meta=dict(meta or {}))


def _diameter(points: np.ndarray) -> float:
    """Exact diameter of a finite complex point set."""
    if points.size <= 1:
        return 0.0
    xy = np.column_stack([points.real, points.imag])
    if points.size > 3:
        try:
            from scipy.spatial import ConvexHull  # heavy import kept local

            xy = xy[ConvexHull(xy).vertices]
        except Exception:
            # degenerate (collinear) input: extremes along the principal
            # direction realize the diameter exactly
            c = xy - xy.mean(axis=0)
            proj = c @ np.linalg.svd(c, full_matrices=False)[2][0]
            xy = xy[[int(np.argmin(proj)), int(np.argmax(proj))]]
    best = 0.0
    for i in range(len(xy) - 1):
        d = xy[i + 1 :] - xy[i]
        best = max(best, float(np.max(np.einsum("ij,ij->i", d, d))))
    return math.sqrt(best)


def cauchy_tail_report(run: SeriesRun, tail_starts) -> list[dict]:
    """For each N0: sup over stored M, N >= N0 of |partial(N) - partial(M)|,
    i.e. the diameter of the stored tail values. A series converges exactly
    when these diameters fall to 0."""
    out = []
    for n0 in tail_starts:
        i = int(np.searchsorted(run.n_grid, int(n0)))
        if i >= run.n_grid.size:
            raise ValueError(f"tail start {n0} is beyond the stored grid")
        out.append({
            "N0": int(n0),
            "points": int(run.n_grid.size - i),
            "sup_diff": _diameter(run.sums[i:]),
        })
    return out


def abel_decompose(weights, orbit_values, norm: NormalizerSpec, N: int,
                   k_first: int | None = None) -> complex:
    """Summation-by-parts value of the series partial sum:

        sum_{k<N} S'_k (1/A(k) - 1/A(k+1)) + S'_N / A(N),

    with S'_k the inclusive plain sums of w_k * orbit_k. Agrees with
    hilbert_partial to rounding (the identity is algebraic)."""
    if k_first is None:
        k_first = norm.k0
    w = np.ascontiguousarray(weights, dtype=np.complex128)
    v = np.ascontiguousarray(orbit_values, dtype=np.complex128)
    if w.shape != v.shape or w.ndim != 1 or w.size == 0:
        raise ValueError("weights and orbit values must be aligned 1-d arrays")
    if k_first < norm.k0:
        raise ValueError(f"series terms start at k >= k0 = {norm.k0}")
    count = N - k_first + 1
    if not (1 <= count <= w.size):
        raise ValueError("N outside the supplied term range")
    s = np.cumsum(w[:count] * v[:count])
    ks = np.arange(k_first, N + 2, dtype=np.int64)
    inv_a = 1.0 / norm.values(ks)
    boundary = s[-1] * inv_a[-2]
    if count == 1:
        return complex(boundary)
    steps = inv_a[:-2] - inv_a[1:-1]
    return complex(pairwise_sum(s[:-1] * steps) + boundary)


def control_integral(m: int, n: int, L: float) -> float:
    """The superadditive tail control integral

        integral over x in [1/n, 1/m] of dx / (x * log^L(1/x))
          = (log^{1-L} m - log^{1-L} n) / (L - 1),

    defined for 3 <= m < n and L > 1 (it diverges for L <= 1)."""
    if L <= 1.0:
        raise ValueError("the control integral diverges for L <= 1")
    if not (3 <= m < n):
        raise ValueError("need 3 <= m < n")
    return (math.log(m) ** (1.0 - L) - math.log(n) ** (1.0 - L)) / (L - 1.0)


# ---------------------------------------------------------------------------
# oscillation statistics along a ladder


@dataclass(eq=False)
class OscillationReport:
    """Anchors and block oscillations of a normalized run along a ladder.

    Block j covers stored N in (N_j, N_{j+1}]:
        anchor_j = |r(N_j)|,  osc_j = max |r(N) - r(N_j)| over the block,
    with r = S_N / A(N) complex. cumulative_sq holds running sums of
    osc_j^2. grid_points records how many stored N realize each maximum
    (the oscillation is a grid statistic, a lower bound on the true sup).
    """

    ladder_j: np.ndarray
    ladder_n: np.ndarray
    anchors: np.ndarray
    osc: np.ndarray
    cumulative_sq: np.ndarray
    grid_points: np.ndarray
    _abs_r: np.ndarray
    _block_bound: np.ndarray

    def weighted_cumulative_sq(self, l_exponent: float) -> np.ndarray:
        """Running sums of j^l * osc_j^2 over the ladder blocks."""
        j = self.ladder_j[:-1].astype(np.float64)
        return np.cumsum(j ** l_exponent * self.osc**2)

    def check_decomposition(self, ulp_slack: int = 8) -> dict:
        """Verify |r(N)| <= anchor_j + osc_j on every stored N of every
        block, up to ulp_slack last-place units of the right side."""
        worst = 0.0
        for j in range(self.osc.size):
            lo, hi = self._block_bound[j], self._block_bound[j + 1]
            if hi <= lo:
                continue
            bound = self.anchors[j] + self.osc[j]
            excess = float(self._abs_r[lo:hi].max()) - bound
            worst = max(worst, excess / max(np.spacing(bound), 5e-324))
        return {"passed": bool(worst <= ulp_slack), "max_excess_ulps": worst}

    def to_dict(self) -> dict:
        return {
            "ladder_j": [int(v) for v in self.ladder_j],
            "ladder_n": [int(v) for v in self.ladder_n],
            "anchors": [float(v) for v in self.anchors],
            "osc": [float(v) for v in self.osc],
            "cumulative_sq": [float(v) for v in self.cumulative_sq],
            "grid_points": [int(v) for v in self.grid_points],
        }


def oscillation_report(run: SeriesRun, ladder: BlockLadder,
                       normalizer: NormalizerSpec | None = None) -> OscillationReport:
    """Per-block oscillation maxima of the normalized run along a ladder.

    Every ladder value must be a stored checkpoint of the run."""
    norm = normalizer or run.normalizer
    if norm is None:
        raise ValueError("run carries no normalizer and none was given")
    ladder_n = ladder.values()
    if ladder_n.size < 2:
        raise ValueError("ladder needs at least two checkpoints")
    pos = np.searchsorted(run.n_grid, ladder_n)
    if np.any(pos >= run.n_grid.size) or np.any(run.n_grid[pos] != ladder_n):
        raise ValueError("every ladder value must be a stored checkpoint")
    if int(ladder_n[0]) < norm.k0:
        raise ValueError(f"ladder starts below the normalizer offset k0 = {norm.k0}")
    lo_i, hi_i = int(pos[0]), int(pos[-1])
    n = run.n_grid[lo_i : hi_i + 1]
    r = run.sums[lo_i : hi_i + 1] / norm.values(n)
    anchors = np.abs(r[pos[:-1] - lo_i])
    bound = pos - lo_i
    osc = np.zeros(ladder_n.size - 1, dtype=np.float64)
    counts = np.zeros(ladder_n.size - 1, dtype=np.int64)
    for j in range(osc.size):
        seg = r[bound[j] + 1 : bound[j + 1] + 1]
        counts[j] = seg.size
        if seg.size:
            osc[j] = float(np.abs(seg - r[bound[j]]).max())
    return OscillationReport(
        ladder_j=ladder.js(),
        ladder_n=ladder_n,
        anchors=anchors,
        osc=osc,
        cumulative_sq=np.cumsum(osc**2),
        grid_points=counts,
        _abs_r=np.abs(r),
        _block_bound=bound + 1,
    )


def maximal_norm(weights, indices, norm: NormalizerSpec,
                 measure: SpectralMeasure, n_grid, k_first: int = 0,
                 theta_resolution: int = 1 << 16) -> float:
    """Grid maximal function in the spectral model:

        sqrt( integral of max_{N in grid} |V_N(t) / A(N)|^2 d measure(t) ),

    a lower bound for the true maximal norm (the max runs over the finite
    grid only). V_N uses terms k in [k_first, N)."""
    w = np.ascontiguousarray(weights, dtype=np.complex128)
    u = np.ascontiguousarray(indices)
    if u.dtype.kind not in "iu":
        raise TypeError("indices must be integers")
    if w.shape != u.shape or w.ndim != 1 or w.size == 0:
        raise ValueError("weights and indices must be aligned 1-d arrays")
    ns = np.ascontiguousarray(n_grid, dtype=np.int64)
    if ns.size == 0 or np.any(np.diff(ns) <= 0):
        raise ValueError("N grid must be nonempty and strictly increasing")
    if ns[0] <= k_first or ns[-1] > k_first + w.size:
        raise ValueError("N grid outside the supplied term range")
    a = norm.values(ns)
    bounds = ns - k_first
    total = 0.0
    for t, mass in measure.atoms:
        pref = prefix_at(w * np.exp(2j * np.pi * frac_of(t, u)), bounds)
        total += mass * float((np.abs(pref) / a).max()) ** 2
    if measure.density is not None:
        cells = measure.density.size
        r = next_pow2(max(int(theta_resolution), cells, 2))
        dens = np.repeat(measure.density, r // cells)
        acc = np.zeros(r, dtype=np.complex128)
        best = np.zeros(r, dtype=np.float64)
        prev = 0
        for i, b in enumerate(bounds):
            seg = slice(prev, int(b))
            pos = (u[seg].astype(np.uint64) % np.uint64(r)).astype(np.int64)
            acc += np.bincount(pos, weights=w[seg].real, minlength=r)
            acc += 1j * np.bincount(pos, weights=w[seg].imag, minlength=r)
            prev = int(b)
            vals = np.abs(r * np.fft.ifft(acc)) / a[i]
            np.maximum(best, vals, out=best)
        total += float(pairwise_sum(dens * best**2)) / r
    return float(math.sqrt(total))


# ---------------------------------------------------------------------------
# bounded-observable splitting diagnostics


def split_level(k, epsilon: float, delta: float) -> np.ndarray:
    """Truncation levels a_k = k^epsilon / log^delta k (k >= 2)."""
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    ks = np.ascontiguousarray(k, dtype=np.float64)
    if np.any(ks < 2):
        raise ValueError("levels are defined for k >= 2")
    return ks**epsilon / np.log(ks) ** delta


def epsilon_for_beta(beta: float) -> float:
    """The epsilon coupled to a decay exponent beta by beta = 1/(2(1-eps)):
    epsilon = 1 - 1/(2 beta), requiring beta > 1/2."""
    if not beta > 0.5:
        raise ValueError("coupling requires beta > 1/2")
    return 1.0 - 1.0 / (2.0 * beta)
