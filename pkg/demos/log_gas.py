"""The potential on the circle and the particle system it drives.

Prints the Fourier coefficients of the pair potential (closed form against
quadrature), then samples n particles with that pairwise interaction and
estimates (1/n) log E[exp(sum h(theta_j))] for a zero-mean test function,
which shrinks roughly like 1/n.
Run: python demos/log_gas.py   (about ten seconds)
"""
import numpy as np

from instanton.potential import LogGasConfig, estimate_h_limit, fourier_f, fourier_f_quadrature

q1, q2 = 0.3, 0.2
for k in range(4):
    print(f"c_{k}: closed form {fourier_f(k, q1, q2).real:+.10f}  quadrature {fourier_f_quadrature(k, q1, q2).real:+.10f}")

print()
for n in (8, 16, 32):
    cfg = LogGasConfig(n=n, q1=q1, q2=q2, steps=200 * n, burn_in=50 * n, seed=n, chains=16)
    est = estimate_h_limit(np.cos, cfg)
    print(f"n = {n:<3} estimate {est.value:.5f} +- {est.stderr:.5f}  n * estimate {n * est.value:.3f}"
          f"  acceptance {est.acceptance_rate:.2f}")
