"""Random admissible parameter draws used by the verification suites.

Draws keep a margin from the admissibility boundary so that the trapezoidal
rule converges quickly: |q_i| <= 0.5 and max|u| / min|u| <= 1.25.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .nekrasov import MultiplicativeParams


def random_q_pair(rng: np.random.Generator, regime: str, qmax: float = 0.5) -> tuple[complex, complex]:
    if regime == "real":
        q1, q2 = rng.uniform(0.1, qmax, size=2)
        return complex(q1), complex(q2)
    if regime == "conj":
        mod = rng.uniform(0.1, qmax)
        phase = rng.uniform(0.2, 2.8)
        q = mod * cmath.exp(1j * phase)
        return q, q.conjugate()
    raise ValueError(f"unknown regime {regime!r}")


def random_multiplicative(rng: np.random.Generator, r: int, s: int, regime: str | None = None) -> MultiplicativeParams:
    regime = regime or ("real" if rng.uniform() < 0.5 else "conj")
    q1, q2 = random_q_pair(rng, regime)
    mods = np.concatenate([[1.0], rng.uniform(1.0, 1.25, size=r - 1)])
    u = [m * cmath.exp(2j * math.pi * rng.uniform()) for m in mods]
    p = [rng.uniform(0.5, 2.0) * cmath.exp(2j * math.pi * rng.uniform()) for _ in range(s)]
    return MultiplicativeParams(q1, q2, u, p)


def random_gaiotto(rng: np.random.Generator) -> tuple[complex, complex, complex]:
    """(q, t, Q) with |t| < 1 < |q|, t conj(q) = 1 or both real, |Q| near 1."""
    if rng.uniform() < 0.5:
        t = complex(rng.uniform(0.2, 0.5))
        q = complex(rng.uniform(2.0, 5.0))
    else:
        mod = rng.uniform(0.2, 0.5)
        phase = rng.uniform(0.3, 2.8)
        t = mod * cmath.exp(1j * phase)
        q = 1 / t.conjugate()
    Q = rng.uniform(0.9, 1.1) * cmath.exp(1j * rng.uniform(0.3, 2 * math.pi - 0.3))
    return q, t, Q
