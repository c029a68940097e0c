"""Weight sequence generators w_k for weighted averages and their sums.

A WeightSpec names one of the supported families; gen_weights materializes
any slice of the sequence. Generation is a pure function of
(spec, range): random families draw through a counter-based generator keyed
by (seed, k), so disjoint chunks of one sequence agree with a single long
call bit for bit.

Phase families reduce their phase mod 1 *before* the complex exponential.
Polynomial phases are reduced exactly through the dyadic form of each
coefficient (integer-coefficient polynomials give w_k = 1 exactly); power
phases k**delta are evaluated in double precision, so their phase carries
the unavoidable k**delta * ulp rounding, which the sum-level tolerances
account for.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
import numbers

import numpy as np

from ._kernels import frac_poly
from ._rng import cramer_indicator, uniform01

TWO_PI = 2.0 * np.pi

KINDS = (
    "constant",
    "polynomial_phase",
    "power_phase",
    "logpower_phase",
    "log_phase",
    "moebius",
    "iid_uniform_phase",
    "centered_cramer",
)

# smallest k the family is defined for; log 0 is undefined, and the
# centered random model needs 1/log k to be a probability
_MIN_OFFSET = {
    "logpower_phase": 1,
    "log_phase": 1,
    "centered_cramer": 3,
}

_SEEDED = ("iid_uniform_phase", "centered_cramer")


@dataclass(frozen=True)
class WeightSpec:
    """One weight family plus its parameters.

    offset is the first index k for which the sequence is defined; it
    defaults to the family minimum (0, or 2 for log-based phases, or 3 for
    the centered random model).
    """

    kind: str
    coeffs: tuple[float, ...] | None = None
    delta: float | None = None
    h: float | None = None
    seed: int | None = None
    offset: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "polynomial_phase":
            if not self.coeffs:
                raise ValueError("polynomial_phase requires coeffs")
            object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if self.kind in ("power_phase", "logpower_phase"):
            if self.delta is None or not self.delta > 0:
                raise ValueError(f"{self.kind} requires delta > 0")
        if self.kind == "log_phase":
            if self.h is None or self.h == 0:
                raise ValueError("log_phase requires h != 0")
        if self.kind in _SEEDED:
            if not isinstance(self.seed, numbers.Integral):
                raise ValueError(f"{self.kind} requires an integer seed")
            object.__setattr__(self, "seed", int(self.seed))
        minimum = _MIN_OFFSET.get(self.kind, 0)
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
    def from_dict(cls, d: dict) -> "WeightSpec":
        d = dict(d)
        if "coeffs" in d and d["coeffs"] is not None:
            d["coeffs"] = tuple(d["coeffs"])
        return cls(**d)


def gen_weights(spec: WeightSpec, m: int, n: int) -> np.ndarray:
    """Weights w_k for k in [m, n) as complex128; element j is w_{m+j}.

    Requires 0 <= m < n and m >= spec.offset (the family's first defined
    index). Identical arguments give bit-identical output.
    """
    if not (0 <= m < n):
        raise ValueError("need 0 <= m < n")
    if m < spec.offset:
        raise ValueError(
            f"{spec.kind} weights start at k = {spec.offset}; got range from {m}"
        )
    k = np.arange(m, n, dtype=np.int64)
    kind = spec.kind
    if kind == "constant":
        return np.ones(n - m, dtype=np.complex128)
    if kind == "polynomial_phase":
        return np.exp(2j * np.pi * frac_poly(spec.coeffs, k))
    if kind == "power_phase":
        phase = np.mod(np.power(k.astype(np.float64), spec.delta), 1.0)
        return np.exp(2j * np.pi * phase)
    if kind == "logpower_phase":
        phase = np.mod(np.power(np.log(k.astype(np.float64)), spec.delta), 1.0)
        return np.exp(2j * np.pi * phase)
    if kind == "log_phase":
        phase = np.mod(spec.h * np.log(k.astype(np.float64)), 1.0)
        return np.exp(2j * np.pi * phase)
    if kind == "moebius":
        return moebius_sieve(n - 1)[m:n].astype(np.complex128)
    if kind == "iid_uniform_phase":
        return np.exp(2j * np.pi * uniform01(spec.seed, k))
    if kind == "centered_cramer":
        x = cramer_indicator(spec.seed, k).astype(np.float64)
        p = 1.0 / np.log(k.astype(np.float64))
        return (x - np.minimum(1.0, p)).astype(np.complex128)
    raise AssertionError(kind)


def moebius_sieve(n: int) -> np.ndarray:
    """Moebius function on 0..n as int8; index k holds mu(k), mu(0) = 0.

    Multiplicative sieve: every prime flips the sign of its multiples, and
    multiples of p**2 are squarefree-killed to 0.
    """
    if n < 1:
        raise ValueError("moebius_sieve needs n >= 1")
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    prime = np.ones(n + 1, dtype=bool)
    prime[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if prime[p]:
            prime[p * p :: p] = False
    for p in np.flatnonzero(prime):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= n:
            mu[p * p :: p * p] = 0
    return mu
