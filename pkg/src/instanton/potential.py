"""Log-gas on the circle with pair potential f.

f(theta) = -log(|e^{i theta} - 1| |e^{i theta} - q1 q2| / (|e^{i theta} - q1| |e^{i theta} - q2|))

The Gibbs density on n angles is proportional to exp(-sum_{j != k} f(theta_k - theta_j)).
This module provides the Fourier data of f, the mean of log|g| that enters the
coefficient bound, a batched Metropolis sampler and the Monte Carlo estimator
for (1/n) log E_n[exp(sum_j h(theta_j))].
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from .errors import InadmissibleParameters
from .nekrasov import MultiplicativeParams
from .qseries import root_statistic


def f_potential(theta, q1, q2):
    """Pair potential; +inf where theta is a multiple of 2 pi."""
    th = np.asarray(theta, dtype=float)
    e = np.exp(1j * th)
    q1, q2 = complex(q1), complex(q2)
    with np.errstate(divide="ignore"):
        val = (-np.log(np.abs(e - 1)) - np.log(np.abs(e - q1 * q2))
               + np.log(np.abs(e - q1)) + np.log(np.abs(e - q2)))
    val = np.where(np.abs(e - 1) == 0, np.inf, val)
    return val if val.ndim else float(val)


def fourier_g(sigma: float, k: int) -> float:
    """Fourier coefficient of log|e^{i theta} - sigma|, sigma > 0."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if k == 0:
        return max(0.0, math.log(sigma))
    k = abs(k)
    return -min(sigma ** k, sigma ** (-k)) / (2 * k)


def fourier_f(k: int, q1, q2) -> complex:
    if k == 0:
        return 0j
    q1, q2 = complex(q1), complex(q2)
    a = abs(k)
    t1, t2 = np.angle(q1), np.angle(q2)
    val = (1 + abs(q1 * q2) ** a
           - np.exp(-1j * k * t1) * abs(q1) ** a
           - np.exp(-1j * k * t2) * abs(q2) ** a) / (2 * a)
    return complex(val)


def fourier_coefficient_trapezoid(func: Callable, k: int, M: int = 4096, offset: float = 0.5) -> complex:
    """(1/2 pi) int func(theta) e^{-ik theta} on a uniform grid shifted off theta = 0."""
    th = 2 * np.pi * (np.arange(M) + offset) / M
    return complex(np.mean(func(th) * np.exp(-1j * k * th)))


def _fourier_log_chord(k: int) -> float:
    """(1/2 pi) int log|e^{i theta} - 1| e^{-ik theta}, by adaptive quadrature.

    log|e^{i theta} - 1| = log(2 sin(theta/2)) is even, so only the cosine
    part on (0, pi) is needed; the log theta endpoint singularity is handled
    by an algebraic-logarithmic weight.
    """
    sing, _ = integrate.quad(lambda t: np.cos(k * t), 0, np.pi, weight="alg-loga", wvar=(0, 0))

    def smooth(t):
        return (np.log(2 * np.sin(t / 2) / t) if t > 0 else 0.0) * np.cos(k * t)

    reg, _ = integrate.quad(smooth, 0, np.pi, limit=200, epsabs=1e-13, epsrel=1e-13)
    return (sing + reg) / np.pi


def fourier_f_quadrature(k: int, q1, q2, M: int = 2048) -> complex:
    """Numerical c_k(f) from the split f = -g_1 - (smooth part)."""
    q1, q2 = complex(q1), complex(q2)

    def smooth(th):
        e = np.exp(1j * th)
        return -np.log(np.abs(e - q1 * q2)) + np.log(np.abs(e - q1)) + np.log(np.abs(e - q2))

    return fourier_coefficient_trapezoid(smooth, k, M, offset=0.0) - _fourier_log_chord(k)


def _g_modulus_log(theta, rho: float, mp: MultiplicativeParams):
    z = rho * np.exp(1j * np.asarray(theta, dtype=float))
    q12 = mp.q1 * mp.q2
    out = np.zeros(z.shape)
    for p in mp.p:
        out += np.log(np.abs(z - p))
    for u in mp.u:
        out += np.log(np.abs(u * z)) - np.log(np.abs(z - u)) - np.log(np.abs(q12 * z - u))
    return out


def _check_rho_log(rho: float, mp: MultiplicativeParams) -> None:
    umax = max(abs(u) for u in mp.u)
    umin = min(abs(u) for u in mp.u)
    if not (umax < rho and rho * abs(mp.q1 * mp.q2) < umin):
        raise InadmissibleParameters(f"rho = {rho} does not separate the poles of g")


def log_g_mean(rho: float, mp: MultiplicativeParams) -> float:
    """(1/2 pi) int log|g(rho, theta)| = sum_m max(log|p_m|, log rho)."""
    _check_rho_log(rho, mp)
    return float(sum(max(math.log(abs(p)), math.log(rho)) for p in mp.p))


def log_g_mean_quadrature(rho: float, mp: MultiplicativeParams, M: int = 4096) -> float:
    _check_rho_log(rho, mp)
    th = 2 * np.pi * (np.arange(M) + 0.5) / M
    return float(np.mean(_g_modulus_log(th, rho, mp)))


# -- sampler ----------------------------------------------------------------

@dataclass(frozen=True)
class LogGasConfig:
    """Metropolis settings.  steps, burn_in and stride count single-site updates."""
    n: int
    q1: complex
    q2: complex
    steps: int
    burn_in: int = 0
    seed: int = 0
    proposal_width: float = math.pi / 4
    stride: int | None = None
    chains: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not self.steps > self.burn_in:
            raise ValueError("steps must exceed burn_in")
        if self.chains < 1:
            raise ValueError("need at least one chain")

    @property
    def record_stride(self) -> int:
        return self.stride if self.stride is not None else 2 * self.n


@dataclass
class LogGasRun:
    samples: np.ndarray          # (records, chains, n)
    acceptance_rate: float
    config: LogGasConfig

    @property
    def mixing_ok(self) -> bool:
        return 0.05 <= self.acceptance_rate <= 0.98


def pair_energy(theta: np.ndarray, q1, q2) -> np.ndarray:
    """sum_{j != k} f(theta_k - theta_j) for configurations in the last axis."""
    d = theta[..., None, :] - theta[..., :, None]
    n = theta.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sum(f_potential(d[..., mask], q1, q2), axis=-1)


def log_density(theta, q1, q2) -> float:
    """Unnormalised log density -sum_{j != k} f(theta_k - theta_j)."""
    return -float(pair_energy(np.asarray(theta, dtype=float), q1, q2))


def single_site_delta(theta: np.ndarray, j: int, new_angle, q1, q2) -> np.ndarray:
    """Energy change when theta[..., j] is replaced by new_angle."""
    others = np.delete(theta, j, axis=-1)
    old = theta[..., j:j + 1]
    new = np.asarray(new_angle)[..., None] if np.ndim(new_angle) else np.asarray([new_angle])
    d_new = new - others
    d_old = old - others
    e_new = f_potential(d_new, q1, q2) + f_potential(-d_new, q1, q2)
    e_old = f_potential(d_old, q1, q2) + f_potential(-d_old, q1, q2)
    return np.sum(e_new, axis=-1) - np.sum(e_old, axis=-1)


def sample_log_gas(cfg: LogGasConfig) -> LogGasRun:
    """Batched Metropolis chains with systematic-scan single-site updates."""
    rng = np.random.default_rng(cfg.seed)
    n, C = cfg.n, cfg.chains
    theta = rng.uniform(0, 2 * np.pi, size=(C, n))
    stride = cfg.record_stride
    records = []
    accepted = 0
    proposed = 0
    for step in range(cfg.steps):
        j = step % n
        prop = theta[:, j] + rng.uniform(-cfg.proposal_width, cfg.proposal_width, size=C)
        prop = np.mod(prop, 2 * np.pi)
        if n > 1:
            with np.errstate(invalid="ignore"):
                delta = single_site_delta(theta, j, prop, cfg.q1, cfg.q2)
            delta = np.where(np.isnan(delta), np.inf, delta)
        else:
            delta = np.zeros(C)
        with np.errstate(over="ignore"):
            accept = np.log(rng.uniform(size=C)) < -delta
        theta[accept, j] = prop[accept]
        if step >= cfg.burn_in:
            accepted += int(np.sum(accept))
            proposed += C
            if (step - cfg.burn_in) % stride == stride - 1:
                records.append(theta.copy())
    rate = accepted / proposed if proposed else float("nan")
    samples = np.array(records) if records else np.empty((0, C, n))
    return LogGasRun(samples, rate, cfg)


def energy_diagnostic(run: LogGasRun, eta: float | None = None) -> dict:
    """Mean of I[delta_theta] = (1/n^2) sum_{j != k} f(theta_j - theta_k) over records."""
    n = run.config.n
    flat = run.samples.reshape(-1, n)
    vals = pair_energy(flat, run.config.q1, run.config.q2) / n ** 2
    out = {"mean": float(np.mean(vals)), "std": float(np.std(vals))}
    if eta is not None:
        out["fraction_below_eta"] = float(np.mean(vals <= eta))
    return out


@dataclass
class HLimitEstimate:
    value: float
    stderr: float
    acceptance_rate: float
    mixing_ok: bool
    records: int


def _log_mean_exp(x: np.ndarray) -> float:
    return float(logsumexp(x) - math.log(x.size))


def estimate_h_limit(h: Callable, cfg: LogGasConfig, n_boot: int = 200,
                     blocks_per_chain: int = 4) -> HLimitEstimate:
    """(1/n) log E_n[exp(sum_j h(theta_j))] with a block-bootstrap error bar.

    Each chain's record sequence is cut into contiguous blocks; blocks are
    resampled with replacement, which keeps within-chain correlation.
    """
    run = sample_log_gas(cfg)
    n = cfg.n
    S = np.sum(h(run.samples), axis=-1)          # (records, chains)
    value = _log_mean_exp(S) / n
    R = S.shape[0]
    nb = max(1, min(blocks_per_chain, R))
    blocks = [blk for c in range(S.shape[1]) for blk in np.array_split(S[:, c], nb)]
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 1]))
    boot = np.empty(n_boot)
    for i in range(n_boot):
        pick = rng.integers(0, len(blocks), size=len(blocks))
        boot[i] = _log_mean_exp(np.concatenate([blocks[p] for p in pick])) / n
    return HLimitEstimate(value, float(np.std(boot, ddof=1)), run.acceptance_rate, run.mixing_ok, R * S.shape[1])


# -- root statistic ---------------------------------------------------------

@dataclass
class RadiusReport:
    rows: list = field(default_factory=list)     # (n, |Z_n|^(1/n))
    bound: float | None = None
    running_max: float = float("nan")
    within: bool | None = None
    slope: float = float("nan")


def empirical_radius(values, bound: float | None = None, n_min: int = 1, slack: float = 1.25) -> RadiusReport:
    """Root statistic table with a running max from n_min and a linear trend slope."""
    roots = root_statistic(values)
    rows = [(n, float(roots[n])) for n in range(1, len(roots))]
    tail = np.array([r for n, r in rows if n >= n_min])
    rep = RadiusReport(rows=rows, bound=bound)
    if tail.size:
        rep.running_max = float(np.max(tail))
        if tail.size >= 2:
            rep.slope = float(np.polyfit(np.arange(tail.size), tail, 1)[0])
        if bound is not None:
            rep.within = rep.running_max <= slack * bound
    return rep
