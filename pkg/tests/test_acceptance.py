"""Acceptance criteria, one test each.

Every test prints a line ``CRITERION k PASS|FAIL: detail``.  Run directly
(``python tests/test_acceptance.py``) to get just the eleven lines.
Tolerances and sizes are module constants so they are visible in one place.
"""
from __future__ import annotations

import cmath
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_REPORT
from instanton.checks import fourier_closed_forms
from instanton.contour import a_n_quadrature, a_n_series, zn_quadrature
from instanton.draws import random_gaiotto, random_multiplicative
from instanton.nekrasov import (
    ExponentialParams, MultiplicativeParams, gaiotto_as_multiplicative, invert_params, radius_bound,
    zn_exponential, zn_gaiotto, zn_homological, zn_multiplicative,
)
from instanton.partitions import enumerate_tuples
from instanton.potential import LogGasConfig, estimate_h_limit, fourier_f, fourier_f_quadrature
from instanton.qseries import root_statistic
from instanton.residue_comb import cancellation_sum, step_ratio_check, telescoping_check
from instanton.virasoro import (
    AlgebraParams, gaiotto_norm_coefficient, gaiotto_radius, kac_zeros, shapovalov_matrix, weight_from_Q,
)

SEED = 20240603

C1_TOL, C1_DRAWS, C1_M, C1_SECONDS = 1e-8, 20, 128, 120
C2_TOL, C2_DRAWS, C2_NMAX, C2_SECONDS = 1e-10, 50, 5, 30
C3_TOL, C3_DRAWS, C3_SECONDS_N4 = 1e-8, 5, 300
C4_RATIO = 1e-6
C5_TOL, C5_ROOT_RANGE = 1e-9, (0.8, 1.1)
C6_TOL, C6_C0 = 1e-7, 1e-8
C7_NS, C7_SIGMAS, C7_SECONDS = (16, 32, 64), 3.0, 180
C7_CHAINS, C7_SWEEPS, C7_BURN = 64, 400, 50
C8_TOL, C8_NMAX = 1e-10, 4
C9_STEP_TOL, C9_TELE_TOL = 1e-9, 1e-10
C10_SLACK, C10_N_PURE, C10_N_GAIOTTO = 1.25, 10, 6
C11_FACTOR = 10.0


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def report(k: int, ok: bool, detail: str, extra: list[str] = ()) -> None:
    line = f"CRITERION {k} {'PASS' if ok else 'FAIL'}: {detail}"
    ACCEPTANCE_REPORT.append(line)
    ACCEPTANCE_REPORT.extend(f"    {e}" for e in extra)
    if __name__ == "__main__":
        print("\n" + line, *(f"    {e}" for e in extra), sep="\n", flush=True)


def gaiotto_draws():
    rng = np.random.default_rng(SEED)
    return [random_gaiotto(rng) for _ in range(C3_DRAWS)]


# -- criteria -----------------------------------------------------------------

def criterion_1():
    rng = np.random.default_rng(SEED + 1)
    t0 = time.perf_counter()
    worst = {}
    for r in (1, 2):
        for s in (0, 1):
            for n in (1, 2):
                w = 0.0
                for _ in range(C1_DRAWS):
                    mp = random_multiplicative(rng, r, s)
                    quad = zn_quadrature(mp, n, M=C1_M).value
                    for form in ("N", "M"):
                        w = max(w, _rel(quad, zn_multiplicative(mp, n, form)))
                worst[(r, s, n)] = w
    secs = time.perf_counter() - t0
    top = max(worst.values())
    ok = top <= C1_TOL and secs < C1_SECONDS
    extra = [f"(r,s,n)={k}: max rel diff {v:.2e}" for k, v in worst.items()]
    return ok, f"max relative difference {top:.2e} over 8 cells x {C1_DRAWS} draws, {secs:.1f} s", extra


def criterion_2():
    rng = np.random.default_rng(SEED + 2)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(C2_DRAWS):
        mp = random_multiplicative(rng, int(rng.integers(1, 3)), int(rng.integers(0, 3)))
        for n in range(1, C2_NMAX + 1):
            worst = max(worst, _rel(zn_multiplicative(mp, n, "N"), zn_multiplicative(mp, n, "M")))
    secs = time.perf_counter() - t0
    return worst <= C2_TOL and secs < C2_SECONDS, f"max relative difference {worst:.2e}, {secs:.1f} s", []


def criterion_3():
    worst = 0.0
    extra = []
    n4_done = True
    for q, t, Q in gaiotto_draws():
        ap = AlgebraParams(q, t, weight_from_Q(Q))
        gaiotto_as_multiplicative(q, t, Q).check_admissible()
        for n in range(1, 4):
            worst = max(worst, _rel(gaiotto_norm_coefficient(n, ap), (t / q) ** n * zn_gaiotto(q, t, Q, n)))
        t0 = time.perf_counter()
        d4 = _rel(gaiotto_norm_coefficient(4, ap), (t / q) ** 4 * zn_gaiotto(q, t, Q, 4))
        n4_done &= time.perf_counter() - t0 < C3_SECONDS_N4
        worst = max(worst, d4)
        extra.append(f"q={q:.3f} t={t:.3f} Q={Q:.3f}: n=4 rel diff {d4:.2e}")
    return worst <= C3_TOL and n4_done, f"max relative difference {worst:.2e} for n <= 4", extra


def criterion_4():
    worst = 0.0
    pairs = [(q, t) for q, t, _ in gaiotto_draws()[:3]] + [(2.0 + 0.5j, 0.4 - 0.1j)]
    for q, t in pairs:
        for n in (1, 2, 3):
            for h in kac_zeros(q, t, n):
                at = abs(shapovalov_matrix(n, AlgebraParams(q, t, h)).det())
                off = abs(shapovalov_matrix(n, AlgebraParams(q, t, h + 0.1)).det())
                worst = max(worst, at / off)
    return worst < C4_RATIO, f"max |det at zero| / |det at h+0.1| = {worst:.2e} over {len(pairs)} (q, t)", []


def criterion_5():
    q1, q2 = 0.3, 0.2
    series = a_n_series(q1, q2, 40)
    worst = max(_rel(a_n_quadrature(q1, q2, n).value, series[n]) for n in range(1, 4))
    roots = root_statistic(series)[10:41]
    lo, hi = C5_ROOT_RANGE
    ok = worst <= C5_TOL and lo <= roots.min() and roots.max() <= hi
    return ok, f"quadrature rel diff {worst:.2e}; root statistic on [10, 40] in [{roots.min():.4f}, {roots.max():.4f}]", []


def criterion_6():
    ok_g, detail_g = fourier_closed_forms(k_max=8, tol=C6_TOL)
    worst_c0, min_ck, worst_f = 0.0, math.inf, 0.0
    for q1, q2 in ((0.3, 0.2), (0.4 * cmath.exp(0.7j), 0.4 * cmath.exp(-0.7j))):
        worst_c0 = max(worst_c0, abs(fourier_f_quadrature(0, q1, q2)))
        for k in range(-8, 9):
            if k:
                quad = fourier_f_quadrature(k, q1, q2)
                worst_f = max(worst_f, abs(quad - fourier_f(k, q1, q2)))
                min_ck = min(min_ck, quad.real)
    ok = ok_g and worst_c0 < C6_C0 and min_ck > 0 and worst_f < C6_TOL
    return ok, f"g: {detail_g}; f: diff {worst_f:.1e}, min c_k {min_ck:.4f}, |c_0| {worst_c0:.1e}", []


def criterion_7():
    t0 = time.perf_counter()
    rows = []
    for i, n in enumerate(C7_NS):
        cfg = LogGasConfig(n=n, q1=0.3, q2=0.2, steps=C7_SWEEPS * n, burn_in=C7_BURN * n,
                           seed=SEED + 70 + i, chains=C7_CHAINS)
        rows.append((n, estimate_h_limit(np.cos, cfg)))
    secs = time.perf_counter() - t0
    within = all(abs(e.value) <= C7_SIGMAS * e.stderr for _, e in rows)
    monotone = all(abs(b.value) <= abs(a.value) for (_, a), (_, b) in zip(rows, rows[1:]))
    mixing = all(e.mixing_ok for _, e in rows)
    # the finite-n estimate has a positive O(1/n) bias; Gaussian fluctuations
    # of the linear statistic predict n * value -> 1 / (8 c_1(f))
    pred = 1 / (8 * fourier_f(1, 0.3, 0.2).real)
    extra = [f"n={n}: {e.value:.5f} +- {e.stderr:.5f} (acceptance {e.acceptance_rate:.2f}); "
             f"n*value = {n * e.value:.3f} vs {pred:.3f}" for n, e in rows]
    extra.append(f"within {C7_SIGMAS:g} SE of 0: {within}; |value| non-increasing: {monotone}; mixing: {mixing}")
    ok = within and monotone and mixing and secs < C7_SECONDS
    return ok, f"estimates {[round(e.value, 5) for _, e in rows]}, {secs:.0f} s", extra


def criterion_8():
    rng = np.random.default_rng(SEED + 8)
    worst = 0.0
    for r in (1, 2):
        for _ in range(5):
            mp = random_multiplicative(rng, r, 0)
            inv = invert_params(mp)
            for n in range(1, C8_NMAX + 1):
                # the q's in the factor are those of the inverted parameters
                expect = (inv.q1 * inv.q2) ** (-n * r) * zn_multiplicative(mp, n)
                worst = max(worst, _rel(zn_multiplicative(inv, n), expect))
    return worst <= C8_TOL, f"max relative difference {worst:.2e} (factor in inverted q's)", []


def criterion_9():
    bad = [(J, l0) for J in range(2, 9) for l0 in range(1, J) if cancellation_sum(J, l0) != 0]
    rng = np.random.default_rng(SEED + 9)
    tele = 0.0
    for _ in range(100):
        lhs, rhs = telescoping_check(rng.uniform(0, 5, size=int(rng.integers(1, 9))))
        tele = max(tele, abs(lhs - rhs) / max(1.0, abs(rhs)))
    step = 0.0
    count = 0
    for r, s in ((1, 0), (1, 1), (2, 0), (2, 1)):
        mp = random_multiplicative(rng, r, s)
        for n in range(1, 5):
            for V in enumerate_tuples(r, n):
                lhs, rhs = step_ratio_check(mp, V)
                step = max(step, _rel(lhs, rhs))
                count += 1
    ok = not bad and tele <= C9_TELE_TOL and step <= C9_STEP_TOL
    return ok, f"cancellation nonzero at {bad}; telescoping {tele:.1e}; step ratio {step:.1e} over {count} tuples", []


def criterion_10():
    extra = []
    ok_pure = True
    for a in ((0.0,), (0.1, -0.1), (0.2j, -0.2j)):
        ep = ExponentialParams(1.0, 1.0, 2 ** 0.5, a)
        mp = ep.to_multiplicative()
        ratio = abs(zn_exponential(ep, C10_N_PURE)) ** (1 / C10_N_PURE) / radius_bound(mp)
        ok_pure &= ratio <= C10_SLACK
        extra.append(f"pure gauge r={len(a)} a={a}: |Z_10|^(1/10) / bound = {ratio:.4f}")
    ok_g = True
    for q, t, Q in gaiotto_draws():
        bound = 1 / gaiotto_radius(q, t)
        ratios = [abs((t / q) ** n * zn_gaiotto(q, t, Q, n)) ** (1 / (2 * n)) / bound
                  for n in range(1, C10_N_GAIOTTO + 1)]
        ok_g &= max(ratios) <= C10_SLACK
        extra.append(f"gaiotto q={q:.3f} t={t:.3f} Q={Q:.3f}: ratios n=1..6 " + " ".join(f"{x:.3f}" for x in ratios))
    return ok_pure and ok_g, f"pure gauge within slack: {ok_pure}; Gaiotto within slack for all n <= 6: {ok_g}", extra


def criterion_11():
    e1, e2 = 1.0, 2 ** 0.5
    ratios = []
    for n in (1, 2, 3):
        hom = zn_homological(e1, e2, (0.0,), n)
        errs = [abs(lam ** (2 * n) * zn_exponential(ExponentialParams(lam, e1, e2, (0.0,)), n) - hom)
                for lam in (1e-2, 1e-3)]
        ratios.append(errs[0] / errs[1])
    ok = min(ratios) >= C11_FACTOR
    return ok, "error ratios lambda 1e-2 -> 1e-3 for n=1..3: " + ", ".join(f"{x:.3f}" for x in ratios), []


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 12)}


@pytest.mark.parametrize("k", list(CRITERIA))
def test_criterion(k):
    ok, detail, extra = CRITERIA[k]()
    report(k, ok, detail, extra)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for k, fn in CRITERIA.items():
        ok, detail, extra = fn()
        report(k, ok, detail, extra)
        failed += not ok
    raise SystemExit(1 if failed else 0)
