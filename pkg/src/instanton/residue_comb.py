"""Combinatorial identities behind the iterated-residue evaluation.

A residue strip of J boxes is numbered 1..J from west to east.  The marked
box u_0 sits at position M = l0 + 1, leaving K = J - M boxes east of it.
A way of building the strip is a composition of J into substrips, together
with an order of placing them (the substrip containing u_0 first, then
westward and eastward substrips interleaved) and, inside each substrip, a
choice of partner variable for every pair-type pole.

cancellation_sum adds the signed weights of all compositions; it vanishes
whenever l0 >= 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import fsum
from typing import Sequence

from .errors import DegenerateFactor
from .nekrasov import MultiplicativeParams, box_position, term_multiplicative
from .contour import prefactor
from .partitions import MultiPartition, remove_last_box


@dataclass(frozen=True)
class StripContext:
    J: int
    l0: int

    def __post_init__(self):
        if not 0 <= self.l0 <= self.J - 1:
            raise ValueError(f"need 0 <= l0 <= J-1, got J={self.J}, l0={self.l0}")

    @property
    def M(self) -> int:
        return self.l0 + 1

    @property
    def K(self) -> int:
        return self.J - self.M


@lru_cache(maxsize=None)
def _compositions(J: int) -> tuple:
    if J == 0:
        return ((),)
    return tuple((first,) + rest for first in range(J, 0, -1) for rest in _compositions(J - first))


def ordered_partitions(J: int) -> list[tuple]:
    if J < 1:
        raise ValueError("J must be positive")
    return list(_compositions(J))


def _locate(vecJ: Sequence[int], box: int) -> int:
    end = 0
    for i, part in enumerate(vecJ):
        end += part
        if box <= end:
            return i
    raise ValueError("box beyond the strip")


def cut_and_reorder(vecJ: Sequence[int], ctx: StripContext):
    """Return (cut, A, b, c).

    cut is the composition of M obtained by slicing directly east of u_0;
    A = (B_0, B_1..B_b, C_1..C_c) lists the substrip holding u_0, then the
    western substrips going west, then the eastern ones going east.
    """
    vecJ = tuple(vecJ)
    if sum(vecJ) != ctx.J:
        raise ValueError(f"{vecJ} is not a composition of {ctx.J}")
    i0 = _locate(vecJ, ctx.M)
    start = sum(vecJ[:i0])
    cut = vecJ[:i0] + (ctx.M - start,)
    west = vecJ[:i0][::-1]
    east = vecJ[i0 + 1:]
    return cut, (vecJ[i0],) + west + east, len(west), len(east)


def placement_weight(seq: Sequence[int]) -> int:
    """prod_j prod_{h=1}^{A_j - 1} (sum_{k>j} A_k + h) for one placement order."""
    w = 1
    tail = sum(seq)
    for a in seq:
        tail -= a
        for h in range(1, a):
            w *= tail + h
    return w


def weight_w(vecJ: Sequence[int], ctx: StripContext) -> int:
    _, A, b, c = cut_and_reorder(vecJ, ctx)
    west, east = A[1:1 + b], A[1 + b:]
    total = 0
    for pos in itertools.combinations(range(b + c), b):
        seq = [0] * (b + c)
        wi = iter(west)
        ei = iter(east)
        chosen = set(pos)
        for i in range(b + c):
            seq[i] = next(wi) if i in chosen else next(ei)
        total += placement_weight((A[0],) + tuple(seq))
    return total


def sign_s(vecJ: Sequence[int], ctx: StripContext) -> int:
    cut, _, _, _ = cut_and_reorder(vecJ, ctx)
    s = 1
    for part in cut:
        if part % 2 == 0:
            s = -s
    return s


def cancellation_sum(J: int, l0: int) -> int:
    ctx = StripContext(J, l0)
    return sum(sign_s(v, ctx) * weight_w(v, ctx) for v in ordered_partitions(J))


# -- independent oracle: enumerate picking procedures explicitly ------------

def simulate_weight(vecJ: Sequence[int], ctx: StripContext) -> int:
    """Count residue-picking procedures for one composition by brute force.

    Substrips are placed one at a time: first the one holding u_0, then at
    each step either the next substrip to the west or the next one to the
    east of the block built so far.  Variables z_1..z_J are integrated in
    label order.  Inside a substrip of length A the first A - 1 variables
    each pick a pair-type pole q_i z_b with z_b any other variable that is
    still unintegrated; the last one lands on the base pole.  Every branch
    is enumerated explicitly.
    """
    vecJ = tuple(vecJ)
    i0 = _locate(vecJ, ctx.M)
    west = list(vecJ[:i0][::-1])
    east = list(vecJ[i0 + 1:])

    def place(length: int, free: tuple) -> list[tuple]:
        # all ways to integrate `length` variables from `free`; returns the
        # surviving free tuples, one entry per branch
        branches = [free]
        for step in range(length):
            nxt = []
            for fr in branches:
                current, rest = fr[0], fr[1:]
                if step < length - 1:
                    nxt.extend(rest for _partner in rest)
                else:
                    nxt.append(rest)
            branches = nxt
        return branches

    def grow(wi: int, ei: int, free: tuple) -> int:
        if wi == len(west) and ei == len(east):
            return 1
        count = 0
        if wi < len(west):
            for fr in place(west[wi], free):
                count += grow(wi + 1, ei, fr)
        if ei < len(east):
            for fr in place(east[ei], free):
                count += grow(wi, ei + 1, fr)
        return count

    total = 0
    for fr in place(vecJ[i0], tuple(range(1, ctx.J + 1))):
        total += grow(0, 0, fr)
    return total


def geometric_sign(vecJ: Sequence[int], ctx: StripContext) -> int:
    """(-1) per even-length piece west of the cut made directly east of u_0."""
    sign = 1
    pos = 0
    for part in vecJ:
        lo, hi = pos + 1, pos + part
        pos = hi
        if lo > ctx.M:
            break
        if (min(hi, ctx.M) - lo + 1) % 2 == 0:
            sign = -sign
    return sign


# -- telescoping identity ---------------------------------------------------

def telescoping_check(x: Sequence[float]) -> tuple[float, float]:
    """sum_{J=1}^L prod_{j<=J} (sum_{k>=j} x_k)/(sum_{k>j} x_k + 1) against sum x."""
    x = list(x)
    L = len(x)
    tails = [fsum(x[j:]) for j in range(L + 1)]
    lhs_terms = []
    prod = 1.0
    for j in range(L):
        prod *= tails[j] / (tails[j + 1] + 1)
        lhs_terms.append(prod)
    return fsum(lhs_terms), tails[0]


# -- ratio of consecutive fixed-point terms ---------------------------------

def _limit_residue(num: list, den: list, tol: float = 1e-9) -> complex:
    """lim_{xi -> 1} (xi - 1) prod(a xi - b over num) / prod(a xi - b over den)."""
    val = 1.0 + 0j
    order = 0
    for a, b in num:
        if abs(b / a - 1) < tol:
            val *= a
            order += 1
        else:
            val *= a - b
    for a, b in den:
        if abs(b / a - 1) < tol:
            val /= a
            order -= 1
        else:
            val /= a - b
    if order != -1:
        raise DegenerateFactor(f"expected a simple pole, got pole order {-order}")
    return val


def integrand_step_ratio(mp: MultiplicativeParams, V: MultiPartition) -> complex:
    """Ratio of consecutive iterated-residue terms computed from the integrand.

    With V' = V minus its last box at z*, the extra variable contributes
    pref * Res_{z = z*} of (integrand in n variables)/(integrand in n-1),
    the other variables sitting at their fixed-point positions.
    """
    Vp, box, idx = remove_last_box(V)
    zs = box_position(mp, idx, box)
    q1, q2 = mp.q1, mp.q2
    q12 = q1 * q2
    num, den = [], []
    for u in mp.u:
        num.append((-u * zs, 0j))
        den.append((zs, u))
        den.append((q12 * zs, u))
    for p in mp.p:
        num.append((zs, p))
    for al, Y in enumerate(Vp):
        for s in Y.boxes():
            w = box_position(mp, al, s)
            num += [(zs, w), (zs, w), (zs, q12 * w), (zs, w / q12)]
            den += [(zs, q1 * w), (zs, q2 * w), (zs, w / q1), (zs, w / q2)]
    return prefactor(q1, q2) * _limit_residue(num, den)


def step_ratio_check(mp: MultiplicativeParams, V: MultiPartition) -> tuple[complex, complex]:
    """(integrand residue ratio, ratio of closed-form fixed-point terms)."""
    V = MultiPartition(V)
    Vp, _, _ = remove_last_box(V)
    lhs = integrand_step_ratio(mp, V)
    rhs = term_multiplicative(mp, V, "N") / term_multiplicative(mp, Vp, "N")
    return lhs, rhs
