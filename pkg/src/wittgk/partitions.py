"""Integer partitions, as used for graded bases of S(W+), U(W+) and Verma modules."""
from __future__ import annotations

from functools import lru_cache


def iter_partitions(n: int, max_part: int | None = None, parts: int | None = None):
    """Partitions of ``n`` as nondecreasing tuples, in lexicographic order.

    ``parts`` restricts to exactly that many parts.
    """
    if max_part is None:
        max_part = n

    def rec(remaining, smallest, slots):
        if remaining == 0:
            if slots is None or slots == 0:
                yield ()
            return
        if slots == 0:
            return
        hi = min(remaining, max_part)
        for p in range(smallest, hi + 1):
            if slots is not None and p * slots > remaining:
                break
            for rest in rec(remaining - p, p, None if slots is None else slots - 1):
                yield (p,) + rest

    yield from rec(n, 1, parts)


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """Number of partitions of ``n`` (Euler's pentagonal recurrence)."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def negative_partitions(n: int):
    """Module-basis labels of grade ``-n``: nondecreasing tuples of negative integers summing to ``-n``."""
    for p in iter_partitions(n):
        yield tuple(-q for q in reversed(p))
