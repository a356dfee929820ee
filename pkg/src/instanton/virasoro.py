"""Deformed Virasoro algebra acting on a Verma module.

Generators T_n obey

    [T_n, T_m] = -sum_{l>=1} r_l (T_{n-l} T_{m+l} - T_{m-l} T_{n+l})
                 - kappa (q^n t^-n - q^-n t^n) delta_{n+m,0},
    kappa = (1-q)(1-1/t)/(1-q/t),
    sum_l r_l x^l = exp(sum_{n>=1} (1-q^n)(1-t^-n)/(1+q^n t^-n) x^n/n).

The Verma module has basis T_{-l1} ... T_{-lk}|h> for partitions l1 >= ... >= lk,
with T_0|h> = h|h> and T_n|h> = 0 for n >= 1.  The action of any T_m on a
basis vector is reduced to this basis by commuting T_m past the leftmost
factor; the l-sum truncates because T_k kills every vector of level < k.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, InadmissibleParameters, RegimeViolation, SingularKacMatrix
from .partitions import Partition, enumerate_partitions
from .qseries import exp_series

DEFAULT_LEVEL_CAP = 4
KAC_GUARD = 1e-6


@dataclass(frozen=True)
class AlgebraParams:
    q: complex
    t: complex
    h: complex

    def __post_init__(self):
        for name in ("q", "t", "h"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.q == 1 or self.t == 1 or self.q == self.t or self.q == 0 or self.t == 0:
            raise InadmissibleParameters("need q, t nonzero, q != 1, t != 1 and q != t")

    @property
    def kappa(self) -> complex:
        q, t = self.q, self.t
        return (1 - q) * (1 - 1 / t) / (1 - q / t)

    def central(self, n: int) -> complex:
        q, t = self.q, self.t
        return self.kappa * (q ** n * t ** (-n) - q ** (-n) * t ** n)


def r_coefficients(q, t, L: int) -> np.ndarray:
    q, t = complex(q), complex(t)
    logc = np.zeros(L + 1, dtype=complex)
    for n in range(1, L + 1):
        logc[n] = (1 - q ** n) * (1 - t ** (-n)) / (1 + q ** n * t ** (-n)) / n
    return exp_series(logc)


@dataclass
class GradedState:
    level: int
    amplitudes: dict = field(default_factory=dict)

    @classmethod
    def vacuum(cls) -> "GradedState":
        return cls(0, {Partition(): 1.0 + 0j})

    @classmethod
    def basis(cls, lam) -> "GradedState":
        lam = Partition(lam)
        return cls(lam.size, {lam: 1.0 + 0j})

    def coefficient(self, lam) -> complex:
        return self.amplitudes.get(Partition(lam), 0j)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.amplitudes.values())


class VermaModule:
    """Memoised action of the generators on the canonical basis.

    ``l_extra`` adds terms to every truncated l-sum beyond the level-forced
    bound; those terms vanish identically and exist only for testing.
    """

    def __init__(self, ap: AlgebraParams, level_cap: int = DEFAULT_LEVEL_CAP, l_extra: int = 0):
        self.ap = ap
        self.level_cap = level_cap
        self.l_extra = l_extra
        # l never exceeds (input level) + (output level) + l_extra
        self.r = r_coefficients(ap.q, ap.t, 2 * level_cap + 2 + l_extra)
        self._memo: dict = {}
        self._active: set = set()

    def _r(self, l: int) -> complex:
        if l >= len(self.r):
            self.r = r_coefficients(self.ap.q, self.ap.t, 2 * l)
        return self.r[l]

    def act(self, m: int, lam: tuple) -> dict:
        """T_m applied to the basis vector labelled by the partition tuple lam."""
        key = (m, lam)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if key in self._active:
            raise RuntimeError(f"rewriting cycle at T_{m} on {lam}")
        self._active.add(key)
        try:
            out = self._reduce(m, lam)
        finally:
            self._active.discard(key)
        self._memo[key] = out
        return out

    def _act_on(self, m: int, vec: dict) -> dict:
        out: dict = {}
        for lam, c in vec.items():
            for mu, d in self.act(m, lam).items():
                out[mu] = out.get(mu, 0j) + c * d
        return out

    def _reduce(self, m: int, lam: tuple) -> dict:
        level = sum(lam)
        if m > level:
            return {}
        if not lam:
            if m == 0:
                return {(): self.ap.h}
            return {(-m,): 1.0 + 0j}
        first = lam[0]
        if m < 0 and -m >= first:
            return {(-m,) + lam: 1.0 + 0j}
        # T_a T_b R = T_b T_a R + [T_a, T_b] R with a = m, b = -first, a > b
        a, b = m, -first
        R = lam[1:]
        dR = level - first
        out = self._act_on(b, self.act(a, R))

        def add(vec, coeff):
            for mu, d in vec.items():
                out[mu] = out.get(mu, 0j) + coeff * d

        for l in range(1, dR - b + 1 + self.l_extra):
            rl = self._r(l)
            if b + l <= dR:
                add(self._act_on(a - l, self.act(b + l, R)), -rl)
            if a + l <= dR:
                add(self._act_on(b - l, self.act(a + l, R)), rl)
        if a + b == 0:
            add({R: 1.0 + 0j}, -self.ap.central(a))
        return out


@lru_cache(maxsize=32)
def _module(ap: AlgebraParams, level_cap: int) -> VermaModule:
    return VermaModule(ap, level_cap)


def apply_T(m: int, v: GradedState, ap: AlgebraParams, level_cap: int = DEFAULT_LEVEL_CAP) -> GradedState:
    new_level = v.level - m
    if new_level > level_cap:
        raise CapExceeded(f"result level {new_level} exceeds level cap {level_cap}")
    if new_level < 0:
        return GradedState(0, {})
    mod = _module(ap, level_cap)
    out: dict = {}
    for lam, c in v.amplitudes.items():
        for mu, d in mod.act(m, tuple(lam)).items():
            key = Partition(mu)
            out[key] = out.get(key, 0j) + c * d
    return GradedState(new_level, out)


@dataclass
class KacMatrix:
    level: int
    basis: list
    entries: np.ndarray

    def det(self) -> complex:
        return complex(np.linalg.det(self.entries)) if self.level else 1.0 + 0j


def shapovalov_matrix(n: int, ap: AlgebraParams, level_cap: int = DEFAULT_LEVEL_CAP,
                      module: VermaModule | None = None) -> KacMatrix:
    """Gram matrix S(T_lam|h>, T_mu|h>) on level n."""
    if n > level_cap:
        raise CapExceeded(f"level {n} exceeds level cap {level_cap}")
    mod = module or _module(ap, level_cap)
    basis = enumerate_partitions(n)
    S = np.zeros((len(basis), len(basis)), dtype=complex)
    for j, mu in enumerate(basis):
        for i, lam in enumerate(basis):
            vec = {tuple(mu): 1.0 + 0j}
            for part in lam:
                vec = mod._act_on(part, vec)
            S[i, j] = vec.get((), 0j)
    return KacMatrix(n, basis, S)


def kac_zeros(q, t, n: int, all_lower: bool = False) -> list[complex]:
    """h = +-(t^(r/2) q^(-s/2) + t^(-r/2) q^(s/2)) for r s = n (or r s <= n)."""
    sq, st = cmath.sqrt(complex(q)), cmath.sqrt(complex(t))
    out = []
    for r in range(1, n + 1):
        for s in range(1, n + 1):
            if r * s == n or (all_lower and r * s < n):
                v = st ** r / sq ** s + sq ** s / st ** r
                out.extend([v, -v])
    return out


def kac_distance(ap: AlgebraParams, n: int) -> float:
    zeros = kac_zeros(ap.q, ap.t, n, all_lower=True)
    return min((abs(ap.h - z) for z in zeros), default=float("inf"))


def gaiotto_coefficients(n: int, ap: AlgebraParams, level_cap: int = DEFAULT_LEVEL_CAP) -> dict:
    """Solve sum_lam g_lam S_{lam mu} = delta_{mu,(1^n)}."""
    if n == 0:
        return {Partition(): 1.0 + 0j}
    dist = kac_distance(ap, n)
    if dist < KAC_GUARD:
        raise SingularKacMatrix(f"h is {dist:.3g} from a Kac determinant zero at level <= {n}", dist)
    K = shapovalov_matrix(n, ap, level_cap)
    rhs = np.zeros(len(K.basis), dtype=complex)
    rhs[K.basis.index(Partition((1,) * n))] = 1.0
    g = np.linalg.solve(K.entries.T, rhs)
    resid = np.linalg.norm(K.entries.T @ g - rhs)
    if resid > 1e-10 * max(1.0, np.linalg.norm(K.entries) * np.linalg.norm(g)):
        raise SingularKacMatrix(f"Kac solve residual {resid:.3g} too large", dist)
    return {lam: complex(c) for lam, c in zip(K.basis, g)}


def gaiotto_state(n: int, ap: AlgebraParams, level_cap: int = DEFAULT_LEVEL_CAP) -> GradedState:
    return GradedState(n, gaiotto_coefficients(n, ap, level_cap))


def gaiotto_norm_coefficient(n: int, ap: AlgebraParams, level_cap: int = DEFAULT_LEVEL_CAP) -> complex:
    """The ((1^n),(1^n)) entry of the inverse Kac matrix."""
    return gaiotto_coefficients(n, ap, level_cap)[Partition((1,) * n)]


def weight_from_Q(Q) -> complex:
    sq = cmath.sqrt(complex(Q))
    return sq + 1 / sq


def gaiotto_radius(q, t) -> float:
    """Radius in xi below which the Gaiotto norm series converges."""
    aq, at = abs(complex(q)), abs(complex(t))
    if not (at < 1 < aq):
        raise RegimeViolation(f"need |t| < 1 < |q|, got |t| = {at}, |q| = {aq}")
    return (aq / at) ** 0.5


def t0_level_matrix(n: int, ap: AlgebraParams, level_cap: int = DEFAULT_LEVEL_CAP) -> np.ndarray:
    """Matrix of T_0 on the level-n basis (columns are images of basis vectors)."""
    mod = _module(ap, level_cap)
    basis = enumerate_partitions(n)
    A = np.zeros((len(basis), len(basis)), dtype=complex)
    for j, lam in enumerate(basis):
        for mu, c in mod.act(0, tuple(lam)).items():
            A[basis.index(Partition(mu)), j] += c
    return A
