"""Index (orbit time) sequences u_k: deterministic and random models.

An IndexSpec names a family; gen_indices materializes any slice. As with
weights, generation is a pure function of (spec, range): the random prime
model draws its Bernoulli indicator for integer i through a counter-based
generator keyed by (seed, i), and realized segments are cached per
(seed, segment) with idempotent fills, so chunked and whole-range calls
agree exactly.

Prime ranges come from a segmented sieve sized by a bound-doubling loop; no
prime tables are shipped.
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, fields
import numbers

import numpy as np

from ._rng import cramer_indicator

KINDS = ("identity", "monomial", "polynomial", "primes", "cramer_primes", "explicit")

_SEG = 1 << 20


@dataclass(frozen=True)
class IndexSpec:
    """One index family plus its parameters.

    offset is the first valid k: 1 for the prime-like kinds (u_1 = first
    element), 0 otherwise.
    """

    kind: str
    d: int | None = None
    coeffs: tuple[int, ...] | None = None
    seed: int | None = None
    values: tuple[int, ...] | None = None
    offset: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown index kind {self.kind!r}")
        if self.kind == "monomial":
            if not isinstance(self.d, numbers.Integral) or self.d < 1:
                raise ValueError("monomial requires integer degree d >= 1")
            object.__setattr__(self, "d", int(self.d))
        if self.kind == "polynomial":
            if not self.coeffs:
                raise ValueError("polynomial requires integer coeffs")
            if not all(isinstance(c, numbers.Integral) for c in self.coeffs):
                raise ValueError("polynomial coefficients must be integers")
            object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if self.kind == "cramer_primes":
            if not isinstance(self.seed, numbers.Integral):
                raise ValueError("cramer_primes requires an integer seed")
            object.__setattr__(self, "seed", int(self.seed))
        if self.kind == "explicit":
            if self.values is None or len(self.values) == 0:
                raise ValueError("explicit requires a nonempty value list")
            vals = tuple(int(v) for v in self.values)
            if vals[0] < 0 or any(b < a for a, b in zip(vals, vals[1:])):
                raise ValueError("explicit values must be nondecreasing and >= 0")
            object.__setattr__(self, "values", vals)
        minimum = 1 if self.kind in ("primes", "cramer_primes") else 0
        if self.offset is None:
            object.__setattr__(self, "offset", minimum)
        elif self.offset < minimum:
            raise ValueError(f"{self.kind} offset must be >= {minimum}")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name != "kind" and v is not None:
                out[f.name] = list(v) if isinstance(v, tuple) else v
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "IndexSpec":
        d = dict(d)
        for key in ("coeffs", "values"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        return cls(**d)


def gen_indices(spec: IndexSpec, m: int, n: int) -> np.ndarray:
    """Indices u_k for k in [m, n) as int64; element j is u_{m+j}.

    Requires 0 <= m < n and m >= spec.offset. Values must fit in int64;
    monomials and polynomials are range-checked before evaluation, and a
    polynomial must be nonnegative and nondecreasing on the range.
    """
    if not (0 <= m < n):
        raise ValueError("need 0 <= m < n")
    if m < spec.offset:
        raise ValueError(f"{spec.kind} indices start at k = {spec.offset}")
    kind = spec.kind
    if kind == "identity":
        return np.arange(m, n, dtype=np.int64)
    if kind == "monomial":
        if (n - 1) ** spec.d >= 2**63:
            raise ValueError("monomial index values exceed int64 range")
        k = np.arange(m, n, dtype=np.int64)
        return k**spec.d
    if kind == "polynomial":
        # guard every Horner partial by the L1 bound at the largest k
        kmax = n - 1
        if sum(abs(c) * kmax**j for j, c in enumerate(spec.coeffs)) >= 2**63:
            raise ValueError("polynomial index values exceed int64 range")
        k = np.arange(m, n, dtype=np.int64)
        u = np.zeros(n - m, dtype=np.int64)
        for c in reversed(spec.coeffs):
            u = u * k + c
        if u[0] < 0 or np.any(np.diff(u) < 0):
            raise ValueError("polynomial must be nonnegative and nondecreasing on the range")
        return u
    if kind == "primes":
        return first_primes(n - 1)[m - 1 : n - 1]
    if kind == "cramer_primes":
        return _cramer_nth_range(spec.seed, m, n)
    if kind == "explicit":
        if len(spec.values) < n:
            raise ValueError("explicit index list shorter than requested range")
        return np.array(spec.values[m:n], dtype=np.int64)
    raise AssertionError(kind)


def pi_count(spec: IndexSpec, N: int) -> int:
    """Number of selected integers up to N: in [2, N] for primes, [3, N]
    for the clamped random model. Requires N >= 2."""
    if N < 2:
        raise ValueError("pi_count needs N >= 2")
    if spec.kind == "primes":
        return int(primes_upto(N).size)
    if spec.kind == "cramer_primes":
        return _cramer_count_upto(spec.seed, N)
    raise ValueError("pi_count applies to primes or cramer_primes")


# ---------------------------------------------------------------------------
# primes


def _simple_sieve(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def primes_upto(limit: int) -> np.ndarray:
    """All primes <= limit, via a segmented sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    base = _simple_sieve(math.isqrt(limit) + 1)
    chunks = []
    lo = 2
    while lo <= limit:
        hi = min(lo + _SEG, limit + 1)
        mask = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            mask[start - lo :: p] = False
        chunks.append(np.flatnonzero(mask).astype(np.int64) + lo)
        lo = hi
    return np.concatenate(chunks)


def first_primes(count: int) -> np.ndarray:
    """The first `count` primes, sieve bound grown by doubling until enough."""
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    if count < 6:
        bound = 13
    else:
        bound = int(count * (math.log(count) + math.log(math.log(count)))) + 3
    while True:
        ps = primes_upto(bound)
        if ps.size >= count:
            return ps[:count]
        bound *= 2


# ---------------------------------------------------------------------------
# random prime model (clamped probability min(1, 1/log k), first index 3)

_cramer_cache: OrderedDict[tuple[int, int], np.ndarray] = OrderedDict()
_cramer_lock = threading.Lock()
_CRAMER_CACHE_MAX = 64


def _cramer_segment(seed: int, si: int) -> np.ndarray:
    """Selected integers in segment si, cached per (seed, segment).

    Fills are idempotent (the draw is a pure function of (seed, k)), so
    concurrent fills of one key agree; the lock only guards the map itself.
    """
    key = (int(seed), int(si))
    with _cramer_lock:
        got = _cramer_cache.get(key)
        if got is not None:
            _cramer_cache.move_to_end(key)
            return got
    lo = max(3, si * _SEG)
    hi = (si + 1) * _SEG
    if lo >= hi:
        arr = np.zeros(0, dtype=np.int64)
    else:
        ks = np.arange(lo, hi, dtype=np.int64)
        arr = ks[cramer_indicator(seed, ks)]
    with _cramer_lock:
        arr = _cramer_cache.setdefault(key, arr)
        _cramer_cache.move_to_end(key)
        while len(_cramer_cache) > _CRAMER_CACHE_MAX:
            _cramer_cache.popitem(last=False)
    return arr


def _cramer_nth_range(seed: int, m: int, n: int) -> np.ndarray:
    """Elements u_m..u_{n-1} (1-based) of the realized random index set."""
    need = n - 1
    parts = []
    total = 0
    si = 0
    while total < need:
        seg = _cramer_segment(seed, si)
        parts.append(seg)
        total += seg.size
        si += 1
        if si > 4096:
            raise RuntimeError("random index model failed to fill the range")
    u = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return u[m - 1 : n - 1]


def _cramer_count_upto(seed: int, N: int) -> int:
    count = 0
    lo = 3
    while lo <= N:
        hi = min(lo + _SEG, N + 1)
        ks = np.arange(lo, hi, dtype=np.int64)
        count += int(cramer_indicator(seed, ks).sum())
        lo = hi
    return count
