"""The same coefficients as torus integrals.

Z_n is the mean of a rational integrand over the n-torus |z_j| = rho.  The
trapezoidal rule on an M^n grid converges geometrically, so doubling M
roughly squares the error until rounding takes over.
Run: python demos/quadrature.py
"""
from instanton.contour import choose_rho, rho_interval, zn_quadrature
from instanton.nekrasov import MultiplicativeParams, zn_multiplicative

mp = MultiplicativeParams(q1=0.3 + 0.1j, q2=0.3 - 0.1j, u=(1.0, 1.1j), p=(0.9,))
lo, hi = rho_interval(mp)
rho = choose_rho(mp).rho
print(f"admissible radii ({lo:.4f}, {hi:.4f}); using rho = {rho:.4f}")

for n in (1, 2):
    exact = zn_multiplicative(mp, n)
    print(f"\nn = {n}: fixed points give {exact:.12f}")
    for M in (8, 16, 32, 64):
        res = zn_quadrature(mp, n, M=M, rho=rho)
        print(f"  M = {M:<3} rel error {abs(res.value - exact) / abs(exact):.2e}  (estimate {res.est_error / abs(exact):.1e})")
