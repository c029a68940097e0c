"""Concrete measure-preserving systems and spectral models.

Three system kinds:

    rotation   x -> x + theta0 mod 1 on the circle
    doubling   x -> 2x mod 1, points carried as explicit bit strings
    spectral   no points at all; the system is a finite positive measure
               on [0, 1) and norms are computed by quadrature against it

Rotation angles can be floats or exact rationals (Fraction). The bundled
rotation_sqrt2 / rotation_golden constructors return continued-fraction
convergents p/q with q <= 2**62, and orbit positions are then reduced
exactly with integer arithmetic: u * theta0 mod 1 in doubles loses every
significant bit once u is large, so the exact path is the reference and
the float path (itself exact in the dyadic sense, see frac_mul) is the
fast cross-check.

Doubling-map points are seeded bit strings; T^u just shifts the window,
so orbit values of indicator observables are exact bits with no floating
error. The window width B (default 53) is the evaluation precision: a
point needs max(u) + B stored bits.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import frac_mul, frac_ratio, next_pow2, pairwise_sum
from ._rng import bits as _seeded_bits
from .trigsum import ThetaGrid, eval_grid, eval_sum

SYSTEM_KINDS = ("rotation", "doubling", "spectral")
OBSERVABLE_KINDS = ("fourier_mode", "indicator", "finite_fourier")

MAX_ANGLE_DEN = 1 << 62
DEFAULT_DENSITY_CELLS = 1 << 16
DEFAULT_BIT_WINDOW = 53
MIN_BIT_LENGTH = 64


def _cf_constant_convergent(a: int, max_den: int) -> Fraction:
    # convergents of [0; a, a, a, ...]; stop at the last denominator <= max_den
    p_prev, p = 1, 0
    q_prev, q = 0, 1
    while True:
        p_next = a * p + p_prev
        q_next = a * q + q_prev
        if q_next > max_den:
            return Fraction(p, q)
        p_prev, p, q_prev, q = p, p_next, q, q_next


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Finite positive measure on [0, 1): atoms plus an optional
    piecewise-constant density on a dyadic partition (power-of-two cells).

    Atom positions may be Fractions for exact evaluation.
    """

    atoms: tuple = ()
    density: np.ndarray | None = None

    def __post_init__(self):
        atoms = tuple((t, float(m)) for t, m in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        seen = set()
        for t, m in atoms:
            tf = float(t)
            if not (0.0 <= tf < 1.0):
                raise ValueError("atom positions must lie in [0, 1)")
            if not (m > 0.0 and np.isfinite(m)):
                raise ValueError("atom masses must be positive and finite")
            key = t if isinstance(t, Fraction) else tf
            if key in seen:
                raise ValueError("atom positions must be distinct")
            seen.add(key)
        if self.density is not None:
            d = np.ascontiguousarray(self.density, dtype=np.float64)
            if d.ndim != 1 or d.size < 1 or d.size != next_pow2(d.size):
                raise ValueError("density needs a power-of-two cell count")
            if not np.all(np.isfinite(d)) or np.any(d < 0.0):
                raise ValueError("density values must be finite and >= 0")
            d.flags.writeable = False
            object.__setattr__(self, "density", d)
        if not self.total_mass() > 0.0:
            raise ValueError("measure must have positive total mass")

    def total_mass(self) -> float:
        mass = sum(m for _, m in self.atoms)
        if self.density is not None:
            mass += float(self.density.mean())
        return float(mass)

    @classmethod
    def uniform(cls) -> "SpectralMeasure":
        return cls(density=np.ones(1))

    def to_dict(self) -> dict:
        out: dict = {"atoms": [[float(t), m] for t, m in self.atoms]}
        if self.density is not None:
            out["density"] = [float(v) for v in self.density]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "SpectralMeasure":
        atoms = tuple((float(t), float(m)) for t, m in d.get("atoms", ()))
        dens = d.get("density")
        return cls(atoms=atoms, density=None if dens is None else np.asarray(dens))


@dataclass(frozen=True, eq=False)
class SystemModel:
    """A dynamical system: kind plus the data that defines it."""

    kind: str
    theta0: float | Fraction | None = None
    measure: SpectralMeasure | None = None

    def __post_init__(self):
        if self.kind not in SYSTEM_KINDS:
            raise ValueError(f"unknown system kind {self.kind!r}")
        if self.kind == "rotation":
            t = self.theta0
            if t is None or not (0 < float(t) < 1):
                raise ValueError("rotation needs theta0 in (0, 1)")
            if isinstance(t, Fraction) and t.denominator > MAX_ANGLE_DEN:
                raise ValueError("rational angle denominator must be <= 2**62")
        if self.kind == "spectral" and self.measure is None:
            raise ValueError("spectral system needs a measure")

    @classmethod
    def rotation(cls, theta0) -> "SystemModel":
        return cls(kind="rotation", theta0=theta0)

    @classmethod
    def rotation_sqrt2(cls, max_den: int = MAX_ANGLE_DEN) -> "SystemModel":
        """Rotation by sqrt(2) - 1 = [0; 2, 2, 2, ...] as the deepest
        convergent with denominator <= max_den."""
        return cls.rotation(_cf_constant_convergent(2, max_den))

    @classmethod
    def rotation_golden(cls, max_den: int = MAX_ANGLE_DEN) -> "SystemModel":
        """Rotation by (sqrt(5) - 1)/2 = [0; 1, 1, 1, ...], a ratio of
        consecutive Fibonacci numbers."""
        return cls.rotation(_cf_constant_convergent(1, max_den))

    @classmethod
    def doubling(cls) -> "SystemModel":
        return cls(kind="doubling")

    @classmethod
    def spectral(cls, measure: SpectralMeasure) -> "SystemModel":
        return cls(kind="spectral", measure=measure)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.theta0 is not None:
            if isinstance(self.theta0, Fraction):
                out["theta0"] = [self.theta0.numerator, self.theta0.denominator]
            else:
                out["theta0"] = float(self.theta0)
        if self.measure is not None:
            out["measure"] = self.measure.to_dict()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "SystemModel":
        theta0 = d.get("theta0")
        if isinstance(theta0, (list, tuple)):
            theta0 = Fraction(int(theta0[0]), int(theta0[1]))
        measure = d.get("measure")
        if measure is not None:
            measure = SpectralMeasure.from_dict(measure)
        return cls(kind=d["kind"], theta0=theta0, measure=measure)


@dataclass(frozen=True, eq=False)
class Observable:
    """A function on the circle with a closed-form L2 norm.

    fourier_mode(m): x -> exp(2 i pi m x)
    indicator(a, b): x -> 1 on [a, b), 0 elsewhere (0 <= a < b <= 1)
    finite_fourier(terms): finite combination sum_j c_j exp(2 i pi m_j x)
    """

    kind: str
    mode: int | None = None
    interval: tuple[float, float] | None = None
    terms: tuple = ()

    def __post_init__(self):
        if self.kind not in OBSERVABLE_KINDS:
            raise ValueError(f"unknown observable kind {self.kind!r}")
        if self.kind == "fourier_mode":
            if not isinstance(self.mode, numbers.Integral):
                raise ValueError("fourier_mode needs an integer mode")
            object.__setattr__(self, "mode", int(self.mode))
        elif self.kind == "indicator":
            if self.interval is None:
                raise ValueError("indicator needs an interval")
            a, b = (float(v) for v in self.interval)
            if not (0.0 <= a < b <= 1.0):
                raise ValueError("indicator interval must satisfy 0 <= a < b <= 1")
            object.__setattr__(self, "interval", (a, b))
        else:
            terms = tuple((int(m), complex(c)) for m, c in self.terms)
            if not terms:
                raise ValueError("finite_fourier needs at least one term")
            modes = [m for m, _ in terms]
            if len(set(modes)) != len(modes):
                raise ValueError("finite_fourier modes must be distinct")
            if not all(np.isfinite(c.real) and np.isfinite(c.imag) for _, c in terms):
                raise ValueError("finite_fourier coefficients must be finite")
            object.__setattr__(self, "terms", terms)

    @classmethod
    def fourier_mode(cls, m: int) -> "Observable":
        return cls(kind="fourier_mode", mode=m)

    @classmethod
    def indicator(cls, a: float, b: float) -> "Observable":
        return cls(kind="indicator", interval=(a, b))

    @classmethod
    def finite_fourier(cls, terms) -> "Observable":
        return cls(kind="finite_fourier", terms=tuple(terms))

    def eval(self, x: np.ndarray) -> np.ndarray:
        """Observable values at circle positions x (taken mod 1)."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        if self.kind == "fourier_mode":
            return np.exp(2j * np.pi * np.mod(self.mode * x, 1.0))
        if self.kind == "indicator":
            a, b = self.interval
            return ((x >= a) & (x < b)).astype(np.complex128)
        out = np.zeros(x.shape, dtype=np.complex128)
        for m, c in self.terms:
            out += c * np.exp(2j * np.pi * np.mod(m * x, 1.0))
        return out

    def l2_norm(self) -> float:
        """L2 norm against the invariant (Lebesgue) measure, closed form."""
        if self.kind == "fourier_mode":
            return 1.0
        if self.kind == "indicator":
            a, b = self.interval
            return float(np.sqrt(b - a))
        return float(np.sqrt(sum(abs(c) ** 2 for _, c in self.terms)))

    def to_dict(self) -> dict:
        if self.kind == "fourier_mode":
            return {"kind": self.kind, "mode": self.mode}
        if self.kind == "indicator":
            return {"kind": self.kind, "interval": list(self.interval)}
        return {
            "kind": self.kind,
            "terms": [[m, c.real, c.imag] for m, c in self.terms],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Observable":
        if d["kind"] == "finite_fourier":
            terms = tuple((int(m), complex(re, im)) for m, re, im in d["terms"])
            return cls.finite_fourier(terms)
        if d["kind"] == "indicator":
            return cls.indicator(*d["interval"])
        return cls.fourier_mode(d["mode"])


@dataclass(frozen=True, eq=False)
class OrbitPoint:
    """A starting point: a circle position for rotation, a stored bit
    string (seeded, reproducible) for doubling."""

    kind: str
    x0: float | Fraction | None = None
    bit_string: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind == "rotation":
            if self.x0 is None or not (0.0 <= float(self.x0) < 1.0):
                raise ValueError("rotation point needs x0 in [0, 1)")
        elif self.kind == "doubling":
            b = self.bit_string
            if b is None or b.ndim != 1 or b.size < MIN_BIT_LENGTH:
                raise ValueError(
                    f"doubling point needs at least {MIN_BIT_LENGTH} bits"
                )
        else:
            raise ValueError(f"unknown orbit point kind {self.kind!r}")

    @classmethod
    def rotation(cls, x0) -> "OrbitPoint":
        return cls(kind="rotation", x0=x0)

    @classmethod
    def doubling(cls, seed: int, length: int) -> "OrbitPoint":
        if length < MIN_BIT_LENGTH:
            raise ValueError(f"bit length must be >= {MIN_BIT_LENGTH}")
        b = _seeded_bits(seed, np.arange(length, dtype=np.int64))
        b.flags.writeable = False
        return cls(kind="doubling", bit_string=b, seed=int(seed))

    @property
    def bit_length(self) -> int:
        return 0 if self.bit_string is None else int(self.bit_string.size)


def _rotation_positions(theta0, x0, u: np.ndarray) -> np.ndarray:
    """frac(x0 + u * theta0) with the reduction of u * theta0 done exactly.

    Fully exact when both theta0 and x0 are Fractions; otherwise x0 enters
    through one final rounded addition (error ~1 ulp, independent of u).
    """
    if isinstance(theta0, Fraction):
        if isinstance(x0, Fraction):
            a, b = x0.numerator, x0.denominator
            p, q = theta0.numerator, theta0.denominator
            den = b * q
            out = np.empty(u.size, dtype=np.float64)
            for i, ui in enumerate(u.tolist()):
                out[i] = ((a * q + ui * p * b) % den) / den
            return out
        fr = frac_ratio(theta0.numerator, theta0.denominator, u)
    else:
        fr = frac_mul(float(theta0), u)
    return np.mod(fr + float(x0), 1.0)


def _doubling_window_values(bits: np.ndarray, window: int) -> np.ndarray:
    # y[n] = 0.b_n b_{n+1} ... b_{n+window-1}; each value is a 53-bit
    # dyadic rational, so the convolution below is exact in doubles
    weights = np.ldexp(1.0, -np.arange(1, window + 1))
    return np.convolve(bits.astype(np.float64), weights[::-1], mode="valid")


def orbit_eval(system: SystemModel, f: Observable, x0: OrbitPoint,
               indices, bit_window: int = DEFAULT_BIT_WINDOW) -> np.ndarray:
    """Values f(T^{u_j} x0) as a complex array, one per index.

    bit_window is the evaluation precision B for doubling systems: the
    point must store at least max(u) + B bits.
    """
    u = np.ascontiguousarray(indices)
    if u.dtype.kind not in "iu":
        raise TypeError("orbit indices must be integers")
    if u.ndim != 1 or u.size == 0:
        raise ValueError("orbit indices must form a nonempty 1-d array")
    if int(u.min()) < 0:
        raise ValueError("orbit indices must be nonnegative")
    if system.kind == "spectral":
        raise TypeError(
            "spectral systems have no orbit points; use spectral_l2_norm"
        )
    if system.kind == "rotation":
        if x0.kind != "rotation":
            raise ValueError("rotation system needs a rotation orbit point")
        pos = _rotation_positions(system.theta0, x0.x0, u)
        return f.eval(pos)
    if x0.kind != "doubling":
        raise ValueError("doubling system needs a doubling orbit point")
    if bit_window < 1:
        raise ValueError("bit window must be >= 1")
    need = int(u.max()) + bit_window
    if x0.bit_length < need:
        raise ValueError(
            f"bit string too short for the requested shifts: have "
            f"{x0.bit_length} bits, need max(u) + window = {need}"
        )
    y = _doubling_window_values(x0.bit_string, bit_window)
    return f.eval(y[u])


def spectral_l2_norm(weights, indices, normalizer_value: float,
                     measure: SpectralMeasure,
                     theta_resolution: int = DEFAULT_DENSITY_CELLS) -> float:
    """L2 norm of the normalized weighted sum in the spectral model.

    Returns sqrt(sum_i mass_i |V(t_i)|^2 + integral density |V(t)|^2 dt)
    divided by normalizer_value, where V(t) = sum_k w_k exp(2 i pi t u_k).
    Atom terms are exact (rational atoms use exact reduction); the density
    integral is a trapezoid rule on a periodic grid of theta_resolution
    points (rounded up to a power of two and to at least the cell count),
    so the quadrature error scales with resolution relative to max(u).
    """
    if not normalizer_value > 0:
        raise ValueError("normalizer value must be positive")
    total = 0.0
    for t, mass in measure.atoms:
        total += mass * abs(eval_sum(weights, indices, t)) ** 2
    if measure.density is not None:
        cells = measure.density.size
        r = next_pow2(max(int(theta_resolution), cells, 2))
        vals = np.abs(eval_grid(weights, indices, ThetaGrid(r))) ** 2
        dens = np.repeat(measure.density, r // cells)
        total += float(pairwise_sum(dens * vals)) / r
    return float(np.sqrt(total)) / float(normalizer_value)
