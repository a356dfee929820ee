"""Truncated power series helpers."""
from __future__ import annotations

import numpy as np


def exp_series(log_coeffs) -> np.ndarray:
    """Coefficients of exp(L(x)) where L(x) = sum_{k>=1} log_coeffs[k] x^k.

    log_coeffs[0] is ignored (taken as zero).  Uses the recurrence
    n b_n = sum_{k=1}^n k L_k b_{n-k} that follows from B' = L' B.
    """
    L = np.asarray(log_coeffs, dtype=complex)
    N = len(L) - 1
    b = np.zeros(N + 1, dtype=complex)
    b[0] = 1.0
    k = np.arange(N + 1)
    kL = k * L
    for n in range(1, N + 1):
        b[n] = np.dot(kL[1:n + 1], b[n - 1::-1][:n]) / n
    return b


def root_statistic(values) -> np.ndarray:
    """|c_n|^(1/n) for n >= 1; entry 0 is nan."""
    v = np.abs(np.asarray(values, dtype=complex))
    out = np.full(len(v), np.nan)
    n = np.arange(1, len(v))
    with np.errstate(divide="ignore"):
        out[1:] = np.exp(np.log(v[1:]) / n)
    return out
