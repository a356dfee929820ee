"""Torus-contour representation of the multiplicative coefficients.

The coefficient of order n is

    (1/n!) * pref^n * oint prod_j dz_j / (2 pi i z_j) * prod_{j,m} (z_j - p_m) * I(z),
    pref = (1 - q1 q2) / ((1 - q1)(1 - q2)),

over the torus |z_j| = rho.  With z_j = rho e^{i theta_j} the measure
dz/(2 pi i z) becomes dtheta/(2 pi), so the integral is the mean of
``prod (z_j - p_m) * I(z)`` over the torus.  That mean is computed with the
tensor-product trapezoidal rule, which converges geometrically for periodic
analytic integrands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, InadmissibleParameters, PoleHit
from .nekrasov import MultiplicativeParams
from .qseries import exp_series

DEFAULT_N_MAX = 3
DEFAULT_MAX_POINTS = 1 << 22
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ContourSpec:
    rho: float
    M: int = 128


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    M: int
    est_error: float

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "est_error", float(self.est_error))


def rho_interval(mp: MultiplicativeParams) -> tuple[float, float]:
    umax = max(abs(u) for u in mp.u)
    umin = min(abs(u) for u in mp.u)
    qmax = max(abs(mp.q1), abs(mp.q2))
    return umax, umin / qmax


def choose_rho(mp: MultiplicativeParams, M: int = 128) -> ContourSpec:
    """Geometric mean of the admissible radius interval."""
    mp.check_admissible()
    lo, hi = rho_interval(mp)
    return ContourSpec(math.sqrt(lo * hi), M)


def _check_rho(mp: MultiplicativeParams, rho: float) -> None:
    lo, hi = rho_interval(mp)
    if not lo < rho < hi:
        raise InadmissibleParameters(f"rho = {rho} outside the pole-free interval ({lo}, {hi})")


def prefactor(q1, q2) -> complex:
    return (1 - q1 * q2) / ((1 - q1) * (1 - q2))


def pair_product(z: np.ndarray, q1, q2, adjoint_mass=None) -> np.ndarray:
    """prod_{j != k} (z_j - z_k)(z_j - q1q2 z_k) / ((z_j - q1 z_k)(z_j - q2 z_k)).

    z has shape (..., n).  With ``adjoint_mass`` the extra pairwise factor
    for adjoint matter is included for j < k.
    """
    n = z.shape[-1]
    out = np.ones(z.shape[:-1], dtype=complex)
    q12 = q1 * q2
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            zj, zk = z[..., j], z[..., k]
            out *= (zj - zk) * (zj - q12 * zk) / ((zj - q1 * zk) * (zj - q2 * zk))
            if adjoint_mass is not None and j < k:
                out *= adjoint_weight(zj, zk, adjoint_mass, q1, q2)
    return out


def _weight_without_measure(z: np.ndarray, mp: MultiplicativeParams, adjoint_mass=None) -> np.ndarray:
    """prod (z_j - p_m) * I(z); the torus mean of this is the integral."""
    q12 = mp.q1 * mp.q2
    out = pair_product(z, mp.q1, mp.q2, adjoint_mass)
    for u in mp.u:
        out *= np.prod(-u * z / ((z - u) * (q12 * z - u)), axis=-1)
    for p in mp.p:
        out *= np.prod(z - p, axis=-1)
    return out


def _pole_distance(z: np.ndarray, mp: MultiplicativeParams) -> float:
    q1, q2 = mp.q1, mp.q2
    d = np.inf
    for u in mp.u:
        d = min(d, np.min(np.abs(z - u)), np.min(np.abs(q1 * q2 * z - u)) )
    n = len(z)
    for j in range(n):
        for k in range(n):
            if j != k:
                d = min(d, abs(z[j] - q1 * z[k]), abs(z[j] - q2 * z[k]))
    return d


def integrand(z, mp: MultiplicativeParams, adjoint_mass=None) -> complex:
    """Full integrand including the 1/z_j of the measure, without the prefactor."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    scale = max(1.0, float(np.max(np.abs(z))))
    if _pole_distance(z, mp) <= 1e-12 * scale:
        raise PoleHit(f"z = {z} lies on a pole of the integrand")
    return complex(_weight_without_measure(z, mp, adjoint_mass) / np.prod(z))


def _torus_mean(func, n: int, rho: float, M: int) -> complex:
    theta = 2 * np.pi * np.arange(M) / M
    circle = rho * np.exp(1j * theta)
    total = 0j
    count = M ** n
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, count))
        digits = np.empty((len(idx), n), dtype=np.int64)
        rest = idx
        for d in range(n - 1, -1, -1):
            digits[:, d] = rest % M
            rest = rest // M
        total += np.sum(func(circle[digits]))
    return total / count


def _check_budget(n: int, M: int, n_max: int, max_points: int) -> None:
    if n > n_max:
        raise BudgetExceeded(f"n = {n} exceeds n_max = {n_max}; raise n_max explicitly to accept M^n cost")
    if M ** n > max_points:
        raise BudgetExceeded(f"M^n = {M ** n} grid points exceeds the cap {max_points}")


def zn_quadrature(mp: MultiplicativeParams, n: int, M: int = 128, rho: float | None = None,
                  n_max: int = DEFAULT_N_MAX, max_points: int = DEFAULT_MAX_POINTS,
                  adjoint_mass=None) -> QuadratureResult:
    if n == 0:
        return QuadratureResult(1.0 + 0j, M, 0.0)
    if rho is None:
        rho = choose_rho(mp).rho
    else:
        mp.check_admissible()
        _check_rho(mp, rho)
    _check_budget(n, M, n_max, max_points)
    scale = prefactor(mp.q1, mp.q2) ** n / math.factorial(n)

    def f(z):
        return _weight_without_measure(z, mp, adjoint_mass)

    fine = scale * _torus_mean(f, n, rho, M)
    coarse = scale * _torus_mean(f, n, rho, max(M // 2, 1))
    return QuadratureResult(fine, M, abs(fine - coarse))


def a_n_quadrature(q1, q2, n: int, M: int = 64, n_max: int = DEFAULT_N_MAX,
                   max_points: int = DEFAULT_MAX_POINTS) -> QuadratureResult:
    """The pure pair-interaction integral on the unit torus."""
    if n == 0:
        return QuadratureResult(1.0 + 0j, M, 0.0)
    _check_budget(n, M, n_max, max_points)
    q1, q2 = complex(q1), complex(q2)
    scale = prefactor(q1, q2) ** n / math.factorial(n)

    def f(z):
        return pair_product(z, q1, q2)

    fine = scale * _torus_mean(f, n, 1.0, M)
    coarse = scale * _torus_mean(f, n, 1.0, max(M // 2, 1))
    return QuadratureResult(fine, M, abs(fine - coarse))


def a_n_series(q1, q2, N: int) -> np.ndarray:
    """Coefficients a_0..a_N of exp(sum_k (1-q1^k q2^k)/((1-q1^k)(1-q2^k)) z^k / k)."""
    q1, q2 = complex(q1), complex(q2)
    if not (abs(q1) < 1 and abs(q2) < 1):
        raise InadmissibleParameters("need |q1|, |q2| < 1")
    L = np.zeros(N + 1, dtype=complex)
    for k in range(1, N + 1):
        L[k] = (1 - q1 ** k * q2 ** k) / ((1 - q1 ** k) * (1 - q2 ** k)) / k
    return exp_series(L)


def adjoint_weight(zj, zk, m, q1, q2):
    """Extra pairwise factor for matter in the adjoint representation."""
    num = (zj - q1 / m * zk) * (zj - q2 / m * zk) * (zj - m / q1 * zk) * (zj - m / q2 * zk)
    den = (zj - m * zk) * (zj - zk / m) * (zj - q1 * q2 / m * zk) * (zj - m / (q1 * q2) * zk)
    if np.any(den == 0):
        raise PoleHit("adjoint factor has a vanishing denominator")
    return num / den
