"""Deformed Virasoro norms against the pair-of-partitions sum.

The Gaiotto vector is found level by level by inverting the Shapovalov
matrix.  Its norm coefficients agree with (t/q)^n times a fixed-point sum at
q1 = t, q2 = 1/q, u = (sqrt Q, 1/sqrt Q), and the matrix is singular exactly
at the Kac weights.
Run: python demos/agt.py
"""
import cmath

from instanton.nekrasov import zn_gaiotto
from instanton.virasoro import AlgebraParams, gaiotto_norm_coefficient, kac_zeros, shapovalov_matrix, weight_from_Q

q, t, Q = 3.0, 0.3, 0.9 * cmath.exp(0.3j)
ap = AlgebraParams(q, t, weight_from_Q(Q))
for n in range(1, 5):
    kac = gaiotto_norm_coefficient(n, ap)
    agt = (t / q) ** n * zn_gaiotto(q, t, Q, n)
    print(f"n = {n}: algebra {kac:.12f}  fixed points {agt:.12f}  rel diff {abs(kac - agt) / abs(kac):.1e}")

print("\nShapovalov determinant at level 2:")
for h in kac_zeros(q, t, 2):
    on = abs(shapovalov_matrix(2, AlgebraParams(q, t, h)).det())
    off = abs(shapovalov_matrix(2, AlgebraParams(q, t, h + 0.1)).det())
    print(f"  h = {h:.6f}: |det| {on:.1e} there, {off:.1e} at h + 0.1")
