import cmath

import numpy as np
import pytest

from conftest import rel
from instanton.errors import CapExceeded, InadmissibleParameters, RegimeViolation, SingularKacMatrix
from instanton.nekrasov import zn_gaiotto
from instanton.partitions import Partition, enumerate_partitions
from instanton.virasoro import (
    AlgebraParams, GradedState, VermaModule, apply_T, gaiotto_coefficients, gaiotto_norm_coefficient,
    gaiotto_radius, gaiotto_state, kac_distance, kac_zeros, r_coefficients, shapovalov_matrix, t0_level_matrix,
    weight_from_Q,
)

Q_, T_ = 2.0 + 0.5j, 0.4 - 0.1j
AP = AlgebraParams(Q_, T_, 1.3 + 0.2j)


def test_params_validation():
    with pytest.raises(InadmissibleParameters):
        AlgebraParams(1, 0.5, 1)
    with pytest.raises(InadmissibleParameters):
        AlgebraParams(0.5, 0.5, 1)


def test_r_coefficients():
    q, t = Q_, T_
    r = r_coefficients(q, t, 4)
    assert r[0] == 1
    assert rel(r[1], (1 - q) * (1 - 1 / t) / (1 + q / t)) < 1e-14
    # q = 0: log coefficients L_n = (1 - t^-n)/n, so r_2 = L_2 + L_1^2/2
    r0 = r_coefficients(0, t, 2)
    L1, L2 = 1 - 1 / t, (1 - t ** -2) / 2
    assert rel(r0[2], L2 + L1 ** 2 / 2) < 1e-12


def test_basic_actions():
    vac = GradedState.vacuum()
    assert apply_T(1, vac, AP).is_zero()
    out = apply_T(0, vac, AP)
    assert out.coefficient(()) == AP.h
    v = apply_T(-1, vac, AP)
    assert v.level == 1 and v.coefficient((1,)) == 1
    back = apply_T(1, v, AP)
    r1 = r_coefficients(Q_, T_, 1)[1]
    expect = -r1 * AP.h ** 2 - AP.kappa * (Q_ / T_ - T_ / Q_)
    assert rel(back.coefficient(()), expect) < 1e-12


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        apply_T(-3, GradedState.basis((2,)), AP, level_cap=4)
    with pytest.raises(CapExceeded):
        shapovalov_matrix(5, AP, level_cap=4)


def _apply(ops, vec: GradedState, cap):
    for m in reversed(ops):
        vec = apply_T(m, vec, AP, cap)
    return vec


def _sub(a: GradedState, b: GradedState, scale=1.0) -> dict:
    out = dict(a.amplitudes)
    for k, v in b.amplitudes.items():
        out[k] = out.get(k, 0j) - scale * v
    return out


@pytest.mark.parametrize("n,m", [(1, -1), (2, -1), (1, -2), (2, -2), (0, -1), (1, 0), (-1, -2), (2, 1), (3, -1)])
def test_commutation_relation_on_states(n, m):
    cap = 7
    r = r_coefficients(Q_, T_, 20)
    for lam in [(), (1,), (2,), (1, 1), (2, 1)]:
        v = GradedState.basis(lam)
        lhs = _sub(_apply([n, m], v, cap), _apply([m, n], v, cap))
        rhs: dict = {}
        lmax = v.level + abs(n) + abs(m) + 2
        for l in range(1, lmax):
            for ops, sign in (([n - l, m + l], -1), ([m - l, n + l], 1)):
                if v.level - sum(ops) > cap or min(v.level - ops[1], v.level - sum(ops)) < 0:
                    continue
                for k, c in _apply(ops, v, cap).amplitudes.items():
                    rhs[k] = rhs.get(k, 0j) + sign * r[l] * c
        if n + m == 0:
            rhs[Partition(lam)] = rhs.get(Partition(lam), 0j) - AP.central(n)
        keys = set(lhs) | set(rhs)
        scale = max([abs(x) for x in lhs.values()] + [1.0])
        assert all(abs(lhs.get(k, 0j) - rhs.get(k, 0j)) < 1e-10 * scale for k in keys), lam


def test_truncation_is_exact():
    full = VermaModule(AP, level_cap=4, l_extra=4)
    for n in range(1, 5):
        a = shapovalov_matrix(n, AP, module=full).entries
        b = shapovalov_matrix(n, AP).entries
        assert np.allclose(a, b, rtol=1e-12, atol=0)


def test_kac_matrix_basic():
    K0 = shapovalov_matrix(0, AP)
    assert K0.entries.shape == (1, 1) and K0.entries[0, 0] == 1
    for n in range(1, 5):
        K = shapovalov_matrix(n, AP)
        assert K.entries.shape == (len(enumerate_partitions(n)),) * 2
        assert np.allclose(K.entries, K.entries.T, rtol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kac_zeros(n):
    zeros = kac_zeros(Q_, T_, n)
    assert len(zeros) == 2 * sum(1 for r in range(1, n + 1) if n % r == 0)
    for h in zeros:
        at = abs(shapovalov_matrix(n, AlgebraParams(Q_, T_, h)).det())
        off = abs(shapovalov_matrix(n, AlgebraParams(Q_, T_, h + 0.1)).det())
        assert at < 1e-6 * off


def test_level_one_zero_formula():
    h = cmath.sqrt(T_) / cmath.sqrt(Q_) + cmath.sqrt(Q_) / cmath.sqrt(T_)
    assert abs(shapovalov_matrix(1, AlgebraParams(Q_, T_, h)).det()) < 1e-8


def test_gaiotto_vectors():
    assert gaiotto_coefficients(0, AP) == {Partition(): 1}
    S1 = shapovalov_matrix(1, AP).entries[0, 0]
    g1 = gaiotto_coefficients(1, AP)
    assert rel(g1[Partition((1,))], 1 / S1) < 1e-14
    assert gaiotto_norm_coefficient(0, AP) == 1
    assert rel(gaiotto_norm_coefficient(1, AP), 1 / S1) < 1e-14
    for n in range(1, 4):
        Gn, Gm = gaiotto_state(n, AP), gaiotto_state(n - 1, AP)
        down = apply_T(1, Gn, AP)
        keys = set(down.amplitudes) | set(Gm.amplitudes)
        scale = max(abs(c) for c in Gm.amplitudes.values())
        assert all(abs(down.coefficient(k) - Gm.coefficient(k)) < 1e-10 * scale for k in keys)
        if n >= 2:
            assert apply_T(2, Gn, AP).is_zero(1e-10 * scale)


def test_singular_near_kac_zero():
    h = kac_zeros(Q_, T_, 2)[0]
    ap = AlgebraParams(Q_, T_, h)
    assert kac_distance(ap, 2) == 0
    with pytest.raises(SingularKacMatrix) as info:
        gaiotto_coefficients(2, ap)
    assert info.value.distance == 0


@pytest.mark.parametrize("q,t,Q", [(3.0, 0.3, 0.9 * cmath.exp(0.3j)),
                                   (2 * cmath.exp(1.2j), 0.5 * cmath.exp(1.2j), 1.05 * cmath.exp(2.0j))])
def test_agt(q, t, Q):
    ap = AlgebraParams(q, t, weight_from_Q(Q))
    for n in range(1, 4):
        agt = (t / q) ** n * zn_gaiotto(q, t, Q, n)
        assert rel(gaiotto_norm_coefficient(n, ap), agt) < 1e-8


def test_gaiotto_radius():
    assert gaiotto_radius(2, 0.5) == pytest.approx(2)
    t = 0.4 * cmath.exp(0.3j)
    assert gaiotto_radius(1 / t.conjugate(), t) == pytest.approx(1 / 0.4)
    with pytest.raises(RegimeViolation):
        gaiotto_radius(0.5, 0.4)


def test_t0_on_vacuum():
    assert t0_level_matrix(0, AP)[0, 0] == AP.h
    A = t0_level_matrix(2, AP)
    assert A.shape == (2, 2) and np.all(np.isfinite(A))
