"""
One-sided series partial sums
=============================

The series sum_k (w_k / A(k)) f(T^{u_k} x0): partial sums on a stored
grid, Cauchy tail diameters, and the summation-by-parts cross-check.
"""

import numpy as np

from ergosum.averages import (
    NormalizerSpec,
    abel_decompose,
    cauchy_tail_report,
    hilbert_partial,
    hilbert_series,
)
from ergosum.dynamics import Observable, OrbitPoint, SystemModel, orbit_eval
from ergosum.weights import WeightSpec, gen_weights

n = 100_000
system = SystemModel.rotation_sqrt2()
f = Observable.fourier_mode(1)
u = np.arange(1, n + 1, dtype=np.int64)
vals = orbit_eval(system, f, OrbitPoint.rotation(0.0), u)

# log-phase weights divided by A(k) = k: the one-sided transform shape
w = gen_weights(WeightSpec(kind="log_phase", h=1.0), 1, n + 1)
norm = NormalizerSpec(1.0, k0=1)
run = hilbert_series(w, vals, norm)
print("partial sums of sum (w_k / k) f(T^k x0), log-phase weights:")
for N in (10, 1000, 100_000):
    s = run.sum_at(N)
    print(f"  N = {N:6d}: {s.real:+.6f} {s.imag:+.6f}i  |.| = {abs(s):.6f}")

# Cauchy tails: the diameter of the remaining partial-sum cloud
rep = cauchy_tail_report(run, [1 << j for j in range(7, 17, 3)])
print()
print("tail diameters (convergence means they fall to zero):")
for row in rep:
    print(f"  N0 = {row['N0']:6d}  sup |partial(N) - partial(M)| = "
          f"{row['sup_diff']:.2e}  over {row['points']} stored points")

# summation by parts is an algebraic identity: both evaluations agree
N = 54_321
direct = hilbert_partial(w, vals, norm, N)
abel = abel_decompose(w, vals, norm, N)
print()
print(f"direct partial sum   {direct:+.15f}")
print(f"summation by parts   {abel:+.15f}")
print(f"difference           {abs(direct - abel):.2e}")
