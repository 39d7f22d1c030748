"""Exact set-partition combinatorics: Bell and Stirling numbers, partition laws.

All counts are Python integers and all probabilities are
:class:`fractions.Fraction`, so identities such as ``sum_k S(n, k) == B_n``
hold exactly.
"""

from __future__ import annotations

import math
import threading
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from migraph.errors import BoundExceeded, InvalidPartition, OutOfRange, TooManyBlocks

__all__ = [
    "DEFAULT_BOUND",
    "Partition",
    "bell",
    "stirling2",
    "stirling2_row",
    "falling_factorial",
    "partition_probability",
    "block_count_probability",
]

DEFAULT_BOUND = 2000

# Bell triangle rows are extended lazily and shared; guarded so concurrent
# callers never observe a half-built cache.
_bell_lock = threading.Lock()
_bell_cache: list[int] = [1]
_bell_row: list[int] = [1]


def _check_n(n: int, bound: int) -> None:
    if n < 0:
        raise OutOfRange(f"n must be non-negative, got {n}")
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds the configured bound {bound}")


def bell(n: int, *, bound: int = DEFAULT_BOUND) -> int:
    """Return the Bell number ``B_n`` (number of partitions of an n-set).

    Computed with the Bell triangle, which only needs big-integer additions.
    """
    _check_n(n, bound)
    global _bell_row
    with _bell_lock:
        row = _bell_row
        while len(_bell_cache) <= n:
            # each row starts with the last entry of the previous one
            new = [row[-1]]
            for x in row:
                new.append(new[-1] + x)
            row = new
            _bell_cache.append(row[0])
        _bell_row = row
        return _bell_cache[n]


_stirling_lock = threading.Lock()
_stirling_rows: dict[int, tuple[int, ...]] = {0: (1,)}
_STIRLING_CACHE_SIZE = 16


def _stirling_row(n: int) -> tuple[int, ...]:
    with _stirling_lock:
        if n in _stirling_rows:
            return _stirling_rows[n]
        start = max(m for m in _stirling_rows if m <= n)
        row = list(_stirling_rows[start])
        for m in range(start + 1, n + 1):
            # S(m, k) = k S(m-1, k) + S(m-1, k-1)
            new = [0] * (m + 1)
            for k in range(1, m):
                new[k] = k * row[k] + row[k - 1]
            new[m] = 1
            row = new
        result = tuple(row)
        if len(_stirling_rows) >= _STIRLING_CACHE_SIZE:
            del _stirling_rows[min(m for m in _stirling_rows if m != 0)]
        _stirling_rows[n] = result
        return result


def stirling2(n: int, k: int, *, bound: int = DEFAULT_BOUND) -> int:
    """Return the Stirling number of the second kind ``S(n, k)``."""
    _check_n(n, bound)
    if k < 0:
        raise OutOfRange(f"k must be non-negative, got {k}")
    if k > n:
        return 0
    return _stirling_row(n)[k]


def stirling2_row(n: int, *, bound: int = DEFAULT_BOUND) -> tuple[int, ...]:
    """Return ``(S(n, 0), ..., S(n, n))``."""
    _check_n(n, bound)
    return _stirling_row(n)


def falling_factorial(m: int, k: int) -> int:
    return math.perm(m, k) if 0 <= k <= m else 0


@dataclass(frozen=True)
class Partition:
    """A set partition of ``{1, ..., n}`` in canonical form.

    Blocks are sorted tuples and appear in order of their smallest element.
    """

    blocks: tuple[tuple[int, ...], ...]
    n: int

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> Partition:
        """Validate *blocks* and put them in canonical form.

        Raises:
            InvalidPartition: a block is empty, blocks overlap, or they do not
                cover ``{1, ..., n}``.
        """
        canon = []
        seen: set[int] = set()
        for block in blocks:
            b = tuple(sorted(block))
            if not b:
                raise InvalidPartition("partition blocks must be non-empty")
            if len(set(b)) != len(b) or seen.intersection(b):
                raise InvalidPartition(f"block {b} overlaps another block")
            seen.update(b)
            canon.append(b)
        if n is None:
            n = len(seen)
        if seen != set(range(1, n + 1)):
            raise InvalidPartition(f"blocks do not cover exactly 1..{n}")
        canon.sort(key=lambda b: b[0])
        return cls(tuple(canon), n)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def partition_probability(n: int, m: int, partition: Partition) -> Fraction:
    """Probability that throwing n labelled items into m boxes yields *partition*.

    Equals ``m (m-1) ... (m-k+1) / m**n`` for a partition with k blocks.

    Raises:
        InvalidPartition: *partition* is not a partition of ``{1, ..., n}``.
        TooManyBlocks: it has more blocks than there are boxes.
    """
    if n < 1 or m < 1:
        raise OutOfRange("n and m must be positive")
    if partition.n != n:
        raise InvalidPartition(f"partition is over {partition.n} items, expected {n}")
    # re-validate in case the instance was built directly
    Partition.from_blocks(partition.blocks, n)
    k = partition.block_count
    if k > m:
        raise TooManyBlocks(f"partition has {k} blocks but only {m} boxes")
    return Fraction(falling_factorial(m, k), m**n)


def block_count_probability(n: int, m: int, k: int, *, bound: int = DEFAULT_BOUND) -> Fraction:
    """Probability that exactly k of the m boxes end up non-empty."""
    if n < 1 or m < 1:
        raise OutOfRange("n and m must be positive")
    if not 1 <= k <= min(n, m):
        raise OutOfRange(f"k={k} outside 1..min(n, m)={min(n, m)}")
    return Fraction(stirling2(n, k, bound=bound) * falling_factorial(m, k), m**n)
