"""Fixed-seed invariant suites run by ``instanton verify``.

Each check returns a CheckResult.  Suites are reduced versions of the
acceptance tests: same identities, fewer draws, so a full run takes seconds.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import contour, nekrasov, potential, residue_comb, virasoro
from .draws import random_gaiotto, random_multiplicative
from .partitions import enumerate_tuples

SUITES = ("residues", "agt", "potential", "appendix")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _timed(name: str, fn: Callable[[], tuple[bool, str]]) -> CheckResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    return CheckResult(name, bool(ok), detail, time.perf_counter() - t0)


# -- residues ---------------------------------------------------------------

def quadrature_vs_fixed_points(seed: int = 1, draws: int = 3, M: int = 128, tol: float = 1e-8):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r in (1, 2):
        for s in (0, 1):
            for n in (1, 2):
                for _ in range(draws):
                    mp = random_multiplicative(rng, r, s)
                    quad = contour.zn_quadrature(mp, n, M=M).value
                    for form in ("N", "M"):
                        worst = max(worst, _rel(quad, nekrasov.zn_multiplicative(mp, n, form)))
    return worst <= tol, f"max relative difference {worst:.3e} (tol {tol:g})"


def n_form_vs_m_form(seed: int = 2, draws: int = 10, n_max: int = 4, tol: float = 1e-10):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r in (1, 2):
        for _ in range(draws):
            mp = random_multiplicative(rng, r, int(rng.integers(0, 3)))
            for n in range(1, n_max + 1):
                worst = max(worst, _rel(nekrasov.zn_multiplicative(mp, n, "N"),
                                        nekrasov.zn_multiplicative(mp, n, "M")))
    return worst <= tol, f"max relative difference {worst:.3e} (tol {tol:g})"


def inversion_symmetry(seed: int = 3, draws: int = 5, n_max: int = 4, tol: float = 1e-10):
    """zn at inverted parameters equals (q1 q2)^(nr) zn, in the original q's."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r in (1, 2):
        for _ in range(draws):
            mp = random_multiplicative(rng, r, 0)
            inv = nekrasov.invert_params(mp)
            for n in range(1, n_max + 1):
                lhs = nekrasov.zn_multiplicative(inv, n)
                rhs = (mp.q1 * mp.q2) ** (n * r) * nekrasov.zn_multiplicative(mp, n)
                worst = max(worst, _rel(lhs, rhs))
    return worst <= tol, f"max relative difference {worst:.3e} (tol {tol:g})"


# -- agt --------------------------------------------------------------------

def agt_identity(seed: int = 4, draws: int = 3, n_max: int = 3, tol: float = 1e-8):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        q, t, Q = random_gaiotto(rng)
        ap = virasoro.AlgebraParams(q, t, virasoro.weight_from_Q(Q))
        for n in range(1, n_max + 1):
            kac = virasoro.gaiotto_norm_coefficient(n, ap)
            agt = (t / q) ** n * nekrasov.zn_gaiotto(q, t, Q, n)
            worst = max(worst, _rel(kac, agt))
    return worst <= tol, f"max relative difference {worst:.3e} (tol {tol:g})"


def kac_zero_check(q: complex = 2.0 + 0.5j, t: complex = 0.4 - 0.1j, n_max: int = 3, ratio_tol: float = 1e-6):
    worst = 0.0
    for n in range(1, n_max + 1):
        for h in virasoro.kac_zeros(q, t, n):
            at = abs(virasoro.shapovalov_matrix(n, virasoro.AlgebraParams(q, t, h)).det())
            off = abs(virasoro.shapovalov_matrix(n, virasoro.AlgebraParams(q, t, h + 0.1)).det())
            worst = max(worst, at / off)
    return worst <= ratio_tol, f"max |det at zero| / |det off zero| = {worst:.3e} (tol {ratio_tol:g})"


# -- potential --------------------------------------------------------------

def fourier_closed_forms(k_max: int = 8, tol: float = 1e-7):
    worst = 0.0
    for sigma in (0.3, 0.5, 2.0):
        for k in range(-k_max, k_max + 1):
            quad = potential.fourier_coefficient_trapezoid(
                lambda th: np.log(np.abs(np.exp(1j * th) - sigma)), k, M=4096, offset=0.0)
            worst = max(worst, abs(quad - potential.fourier_g(sigma, k)))
    return worst <= tol, f"max absolute difference {worst:.3e} (tol {tol:g})"


def fourier_positivity(k_max: int = 8, tol: float = 1e-8):
    worst_c0 = 0.0
    min_ck = np.inf
    worst_diff = 0.0
    for q1, q2 in ((0.3, 0.2), (0.4 * np.exp(0.7j), 0.4 * np.exp(-0.7j))):
        worst_c0 = max(worst_c0, abs(potential.fourier_f_quadrature(0, q1, q2)))
        for k in range(1, k_max + 1):
            for kk in (k, -k):
                closed = potential.fourier_f(kk, q1, q2)
                quad = potential.fourier_f_quadrature(kk, q1, q2)
                worst_diff = max(worst_diff, abs(closed - quad))
                min_ck = min(min_ck, quad.real)
    ok = worst_c0 < tol and min_ck > 0 and worst_diff < 1e-7
    return ok, f"|c_0| = {worst_c0:.2e}, min c_k = {min_ck:.4f}, closed-form diff {worst_diff:.2e}"


def generating_function(q1: float = 0.3, q2: float = 0.2, tol: float = 1e-9):
    series = contour.a_n_series(q1, q2, 40)
    worst = 0.0
    for n in range(1, 4):
        quad = contour.a_n_quadrature(q1, q2, n, M=64).value
        worst = max(worst, abs(quad - series[n]) / abs(series[n]))
    roots = [abs(series[n]) ** (1 / n) for n in range(10, 41)]
    ok = worst <= tol and 0.8 <= min(roots) and max(roots) <= 1.1
    return ok, f"quadrature diff {worst:.2e}; root statistic on [10, 40] in [{min(roots):.4f}, {max(roots):.4f}]"


# -- appendix ---------------------------------------------------------------

def cancellation(J_max: int = 8):
    bad = [(J, l0) for J in range(2, J_max + 1) for l0 in range(1, J)
           if residue_comb.cancellation_sum(J, l0) != 0]
    return not bad, f"nonzero sums at {bad}" if bad else f"all zero for 2 <= J <= {J_max}"


def telescoping(seed: int = 5, draws: int = 100, tol: float = 1e-10):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        x = rng.uniform(0.0, 5.0, size=int(rng.integers(1, 9)))
        lhs, rhs = residue_comb.telescoping_check(x)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst <= tol, f"max relative difference {worst:.3e} (tol {tol:g})"


def step_ratio(seed: int = 6, tol: float = 1e-9, size_max: int = 4):
    rng = np.random.default_rng(seed)
    mp = random_multiplicative(rng, 2, 1)
    worst = 0.0
    count = 0
    for n in range(1, size_max + 1):
        for V in enumerate_tuples(2, n):
            lhs, rhs = residue_comb.step_ratio_check(mp, V)
            worst = max(worst, _rel(lhs, rhs))
            count += 1
    return worst <= tol, f"{count} tuples, max relative difference {worst:.3e} (tol {tol:g})"


SUITE_CHECKS: dict[str, list[tuple[str, Callable]]] = {
    "residues": [
        ("quadrature_vs_fixed_points", quadrature_vs_fixed_points),
        ("n_form_vs_m_form", n_form_vs_m_form),
        ("inversion_symmetry", inversion_symmetry),
    ],
    "agt": [
        ("agt_identity", agt_identity),
        ("kac_zeros", kac_zero_check),
    ],
    "potential": [
        ("fourier_closed_forms", fourier_closed_forms),
        ("fourier_positivity", fourier_positivity),
        ("generating_function", generating_function),
    ],
    "appendix": [
        ("cancellation_sum", cancellation),
        ("telescoping", telescoping),
        ("step_ratio", step_ratio),
    ],
}


def run_suite(suite: str, threads: int = 1) -> list[CheckResult]:
    if suite == "all":
        names = SUITES
    elif suite in SUITE_CHECKS:
        names = (suite,)
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    jobs = [(f"{s}.{name}", fn) for s in names for name, fn in SUITE_CHECKS[s]]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(lambda job: _timed(*job), jobs))
