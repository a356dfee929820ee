"""Partitions, Young diagrams and r-tuples of them.

Diagrams are stored as weakly decreasing row lengths (English convention).
Boxes are 1-based ``(x, y)`` = (row, column).  Arm and leg lengths are
defined for every box, also outside the diagram, where they can be negative.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, NamedTuple


class Box(NamedTuple):
    x: int
    y: int


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    def __repr__(self):
        return f"Partition({tuple(self)})"

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def row(self, x: int) -> int:
        """Y(x), zero beyond the last row."""
        return self[x - 1] if 1 <= x <= len(self) else 0

    def col(self, y: int) -> int:
        """Y^T(y), the number of rows of length at least y."""
        n = 0
        for p in self:
            if p < y:
                break
            n += 1
        return n

    def contains(self, s) -> bool:
        x, y = s
        return x >= 1 and y >= 1 and y <= self.row(x)

    def boxes(self) -> Iterator[Box]:
        for x, p in enumerate(self, start=1):
            for y in range(1, p + 1):
                yield Box(x, y)

    def transpose(self) -> "Partition":
        return transpose(self)


class MultiPartition(tuple):
    """An r-tuple of partitions, r >= 1."""

    def __new__(cls, components):
        comps = tuple(c if isinstance(c, Partition) else Partition(c) for c in components)
        if not comps:
            raise ValueError("a multipartition needs at least one component")
        return super().__new__(cls, comps)

    def __repr__(self):
        return f"MultiPartition({tuple(tuple(c) for c in self)})"

    @property
    def r(self) -> int:
        return len(self)

    @property
    def size(self) -> int:
        return sum(c.size for c in self)

    def transpose(self) -> "MultiPartition":
        return MultiPartition(transpose(c) for c in self)


EMPTY = Partition()


def arm(Y: Partition, s) -> int:
    x, y = s
    return Y.row(x) - y


def leg(Y: Partition, s) -> int:
    x, y = s
    return Y.col(y) - x


def transpose(Y) -> Partition:
    Y = Y if isinstance(Y, Partition) else Partition(Y)
    if not Y:
        return EMPTY
    return Partition(Y.col(y) for y in range(1, Y[0] + 1))


def hook(Y: Partition, s) -> int:
    if not Y.contains(s):
        raise ValueError(f"box {tuple(s)} is outside the diagram {tuple(Y)}")
    return arm(Y, s) + leg(Y, s) + 1


def hook_product(Y: Partition) -> int:
    prod = 1
    for s in Y.boxes():
        prod *= hook(Y, s)
    return prod


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(n: int) -> list[Partition]:
    """All partitions of n in lexicographically descending order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return [Partition(p) for p in _partitions(n, n)]


@lru_cache(maxsize=None)
def _tuples(r: int, n: int) -> tuple:
    if r == 1:
        return tuple((p,) for p in enumerate_partitions(n))
    out = []
    for k in range(n, -1, -1):
        for head in enumerate_partitions(k):
            for tail in _tuples(r - 1, n - k):
                out.append((head,) + tail)
    return tuple(out)


def enumerate_tuples(r: int, n: int) -> list[MultiPartition]:
    """All r-tuples of total size n.

    Ordered by the size of the first component (largest first), then
    lexicographically descending within each component.
    """
    if r < 1 or n < 0:
        raise ValueError("need r >= 1 and n >= 0")
    return [MultiPartition(t) for t in _tuples(r, n)]


def remove_last_box(V: MultiPartition) -> tuple[MultiPartition, Box, int]:
    """Remove box (l(Y), Y(l)) from the last nonempty component Y.

    Returns the smaller tuple, the removed box and the 0-based component index.
    """
    for idx in range(len(V) - 1, -1, -1):
        Y = V[idx]
        if Y:
            l = len(Y)
            box = Box(l, Y[l - 1])
            rows = list(Y)
            rows[-1] -= 1
            if rows[-1] == 0:
                rows.pop()
            comps = list(V)
            comps[idx] = Partition(rows)
            return MultiPartition(comps), box, idx
    raise ValueError("all components are empty")


def add_box(V: MultiPartition, box, idx: int) -> MultiPartition:
    """Inverse of remove_last_box; the result must be a valid diagram."""
    x, y = box
    rows = list(V[idx])
    if x == len(rows) + 1:
        rows.append(0)
    if x > len(rows) or rows[x - 1] != y - 1:
        raise ValueError(f"cannot add box {tuple(box)} to {tuple(V[idx])}")
    rows[x - 1] = y
    comps = list(V)
    comps[idx] = Partition(rows)
    return MultiPartition(comps)
