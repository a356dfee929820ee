"""Combinatorial identities behind the residue evaluation.

Signed sums over ordered partitions of J with a marked strip cancel exactly;
a telescoping product identity holds for arbitrary positive reals; and the
ratio of consecutive fixed-point terms equals a residue of the integrand.
Run: python demos/appendix_identities.py
"""
import numpy as np

from instanton.draws import random_multiplicative
from instanton.partitions import enumerate_tuples
from instanton.residue_comb import cancellation_sum, ordered_partitions, step_ratio_check, telescoping_check

for J in range(2, 7):
    sums = [cancellation_sum(J, l0) for l0 in range(1, J)]
    print(f"J = {J}: {len(ordered_partitions(J))} ordered partitions, signed sums {sums}")

rng = np.random.default_rng(0)
lhs, rhs = telescoping_check(rng.uniform(0, 5, size=6))
print(f"\ntelescoping: {lhs:.15f} vs {rhs:.15f}")

mp = random_multiplicative(rng, 2, 1)
worst = max(abs(a - b) / abs(b) for V in enumerate_tuples(2, 3) for a, b in [step_ratio_check(mp, V)])
print(f"step ratio vs residue, all pairs of size 3: max rel diff {worst:.1e}")
