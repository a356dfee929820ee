import math
from itertools import product

import pytest
from hypothesis import given, strategies as st

from instanton.partitions import (
    EMPTY, Box, MultiPartition, Partition, add_box, arm, enumerate_partitions,
    enumerate_tuples, hook, hook_product, leg, remove_last_box, transpose,
)

partitions_st = st.integers(0, 12).flatmap(lambda n: st.sampled_from(enumerate_partitions(n)))


def brute_partition_count(n):
    # p(n) by Euler's pentagonal recurrence, independent of the enumerator
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, total = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def test_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    assert Partition(()).size == 0 and Partition(()).length == 0


def test_enumerate_small():
    assert enumerate_partitions(0) == [EMPTY]
    assert enumerate_partitions(3) == [(3,), (2, 1), (1, 1, 1)]
    assert len(enumerate_partitions(10)) == 42


@pytest.mark.parametrize("n", range(16))
def test_partition_counts(n):
    parts = enumerate_partitions(n)
    assert len(parts) == brute_partition_count(n)
    assert len(set(parts)) == len(parts)
    assert all(p.size == n for p in parts)
    assert parts == sorted(parts, reverse=True)


def test_enumerate_tuples():
    assert enumerate_tuples(1, 2) == [((2,),), ((1, 1),)]
    assert enumerate_tuples(2, 2) == [((2,), ()), ((1, 1), ()), ((1,), (1,)), ((), (2,)), ((), (1, 1))]
    assert len(enumerate_tuples(2, 5)) == 36  # sum_k p(k) p(5-k)
    for r, n in product((1, 2, 3), range(6)):
        expect = sum(len(enumerate_partitions(k)) * len(enumerate_tuples(r - 1, n - k)) for k in range(n + 1)) if r > 1 \
            else len(enumerate_partitions(n))
        assert len(enumerate_tuples(r, n)) == expect


def test_arm_leg_examples():
    Y = Partition((5, 3, 2))
    assert arm(Y, (1, 2)) == 3
    assert arm(Y, (3, 2)) == 0
    assert arm(Y, (4, 1)) == -1
    assert leg(Y, (1, 2)) == 2
    assert leg(Y, (1, 5)) == 0
    assert leg(EMPTY, (1, 1)) == -1


def test_transpose_examples():
    assert transpose((5, 3, 2)) == (3, 3, 2, 1, 1)
    assert transpose(()) == ()
    assert transpose((1, 1, 1)) == (3,)


@given(partitions_st)
def test_transpose_involution(Y):
    assert transpose(transpose(Y)) == Y
    assert transpose(Y).size == Y.size


@given(partitions_st)
def test_arm_leg_swap_under_transpose(Y):
    T = transpose(Y)
    for x, y in Y.boxes():
        assert arm(Y, (x, y)) == leg(T, (y, x))
        assert leg(Y, (x, y)) == arm(T, (y, x))


def test_hook_examples():
    assert hook(Partition((1,)), (1, 1)) == 1
    assert hook(Partition((2, 1)), (1, 1)) == 3
    # hooks of (5,3,2): rows 7 6 4 2 1 / 4 3 1 / 2 1
    assert hook_product(Partition((5, 3, 2))) == 8064
    with pytest.raises(ValueError):
        hook(Partition((2,)), (2, 1))


@pytest.mark.parametrize("n", range(1, 8))
def test_hook_length_formula(n):
    # sum over |Y| = n of (n!/prod hooks)^2 = n!
    total = sum(math.factorial(n) ** 2 // hook_product(Y) ** 2 for Y in enumerate_partitions(n))
    assert total == math.factorial(n)


def test_remove_last_box_examples():
    assert remove_last_box(MultiPartition([(2, 1)])) == (MultiPartition([(2,)]), Box(2, 1), 0)
    assert remove_last_box(MultiPartition([(1,), (1,)])) == (MultiPartition([(1,), ()]), Box(1, 1), 1)
    assert remove_last_box(MultiPartition([(3, 3)])) == (MultiPartition([(3, 2)]), Box(2, 3), 0)
    with pytest.raises(ValueError):
        remove_last_box(MultiPartition([(), ()]))


@given(st.integers(1, 3).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda n: st.sampled_from(enumerate_tuples(r, n)))))
def test_remove_then_add_roundtrip(V):
    Vp, box, idx = remove_last_box(V)
    assert Vp.size == V.size - 1
    assert add_box(Vp, box, idx) == V


def test_multipartition_transpose():
    V = MultiPartition([(2, 1), (3,)])
    assert V.transpose() == ((2, 1), (1, 1, 1))
    assert V.r == 2 and V.size == 6
