"""Fixed-point coefficients Z_n and how fast they grow.

Computes Z_n for a pure-gauge U(2) point, compares the two closed forms of the
fixed-point weights, and reads the radius of convergence off |Z_n|^(1/n).
Run: python demos/coefficients.py
"""
from instanton.nekrasov import MultiplicativeParams, cancellation_ratio, radius_bound, zn_multiplicative
from instanton.potential import empirical_radius

mp = MultiplicativeParams(q1=0.3, q2=0.2, u=(1.0, 1.1j))
mp.check_admissible()
zs = [zn_multiplicative(mp, n) for n in range(9)]

print("n   Z_n                                   N vs M form   cancellation")
for n, z in enumerate(zs):
    m = zn_multiplicative(mp, n, "M")
    print(f"{n:<3} {z.real:+.12e} {z.imag:+.12e}j  {abs(z - m) / abs(z):.1e}       {cancellation_ratio(mp, n):.1e}")

# |Z_n| levels off here, so |Z_n|^(1/n) creeps down towards the bound
rep = empirical_radius(zs, bound=radius_bound(mp))
print("\n|Z_n|^(1/n):", " ".join(f"{r:.3f}" for _, r in rep.rows), f" bound {rep.bound:.3f}")

# near q1 = q2 single terms grow far beyond the sum; "auto" arithmetic
# notices and redoes the sum with extra digits
near = MultiplicativeParams(0.43879, 0.43811, (1.0, 1.1j), (0.9,))
for mode in ("double", "auto"):
    print(f"Z_6 near the diagonal, {mode:6}: {zn_multiplicative(near, 6, precision=mode):.12f}")
print(f"Z_6 near the diagonal, 50 dig: {zn_multiplicative(near, 6, precision=50):.12f}")
