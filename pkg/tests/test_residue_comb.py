import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import rel
from instanton.draws import random_multiplicative
from instanton.nekrasov import MultiplicativeParams
from instanton.partitions import MultiPartition, enumerate_tuples
from instanton.residue_comb import (
    StripContext, cancellation_sum, cut_and_reorder, geometric_sign, ordered_partitions, placement_weight,
    sign_s, simulate_weight, step_ratio_check, telescoping_check, weight_w,
)


def test_ordered_partitions():
    assert ordered_partitions(1) == [(1,)]
    assert ordered_partitions(2) == [(2,), (1, 1)]
    for J in range(1, 10):
        comps = ordered_partitions(J)
        assert len(comps) == 2 ** (J - 1) and len(set(comps)) == len(comps)
        assert all(sum(c) == J for c in comps)
    with pytest.raises(ValueError):
        ordered_partitions(0)


def test_context_validation():
    with pytest.raises(ValueError):
        StripContext(3, 3)
    ctx = StripContext(8, 4)
    assert (ctx.M, ctx.K) == (5, 3)


def test_cut_and_reorder_examples():
    cut, A, b, c = cut_and_reorder((1, 1, 4, 2), StripContext(8, 4))
    assert A == (4, 1, 1, 2) and (b, c) == (2, 1)
    assert cut == (1, 1, 3)
    for J in range(1, 6):
        for l0 in range(J):
            ctx = StripContext(J, l0)
            assert cut_and_reorder((J,), ctx)[1:] == ((J,), 0, 0)
            _, A, b, c = cut_and_reorder((1,) * J, ctx)
            assert A[0] == 1 and b == l0 and c == ctx.K


def test_weight_examples():
    for J in range(1, 8):
        for l0 in range(J):
            assert weight_w((J,), StripContext(J, l0)) == math.factorial(J - 1)
    assert weight_w((1,), StripContext(1, 0)) == 1
    assert placement_weight((1,)) == 1


@pytest.mark.parametrize("J", range(1, 6))
def test_weight_matches_simulation(J):
    for l0 in range(J):
        ctx = StripContext(J, l0)
        for v in ordered_partitions(J):
            assert weight_w(v, ctx) == simulate_weight(v, ctx)
            assert sign_s(v, ctx) == geometric_sign(v, ctx)


def test_sign_examples():
    assert sign_s((1, 3, 1), StripContext(5, 4)) == 1
    assert sign_s((2, 1), StripContext(3, 2)) == -1
    assert sign_s((2,), StripContext(2, 1)) == -1


def test_cancellation():
    assert cancellation_sum(2, 1) == 0
    assert cancellation_sum(5, 2) == 0
    for J in range(2, 9):
        for l0 in range(1, J):
            assert cancellation_sum(J, l0) == 0
        # l0 = 0: every sign is +1 and the count is J!
        assert cancellation_sum(J, 0) == math.factorial(J)


def test_telescoping_examples():
    lhs, rhs = telescoping_check([0.7])
    assert lhs == pytest.approx(0.7) and rhs == pytest.approx(0.7)
    assert telescoping_check([1, 1]) == pytest.approx((2, 2))


@given(st.lists(st.floats(0, 10), min_size=1, max_size=8))
def test_telescoping_property(x):
    lhs, rhs = telescoping_check(x)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)


def test_step_ratio_examples(rng):
    mp = random_multiplicative(rng, 1, 0)
    lhs, rhs = step_ratio_check(mp, MultiPartition([(1,)]))
    assert rel(lhs, rhs) < 1e-10
    lhs, rhs = step_ratio_check(mp, MultiPartition([(2, 1)]))
    assert rel(lhs, rhs) < 1e-10
    mp2 = random_multiplicative(rng, 2, 1)
    lhs, rhs = step_ratio_check(mp2, MultiPartition([(1,), (2,)]))
    assert rel(lhs, rhs) < 1e-10


@pytest.mark.parametrize("r,s", [(1, 0), (1, 2), (2, 0), (2, 1)])
def test_step_ratio_all_small_tuples(r, s):
    mp = random_multiplicative(np.random.default_rng(100 + 10 * r + s), r, s)
    for n in range(1, 5):
        for V in enumerate_tuples(r, n):
            lhs, rhs = step_ratio_check(mp, V)
            assert rel(lhs, rhs) < 1e-9
