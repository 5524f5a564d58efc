"""Set-partition enumeration in a fixed canonical order.

A partition is a tuple of blocks; each block is a sorted tuple of 1-based
firm ids and blocks are ordered by least member, so equality is syntactic.
Enumeration follows restricted growth strings in lexicographic order, which
is deterministic and yields exactly the Bell number of partitions.
"""

from __future__ import annotations

from functools import lru_cache

Partition = tuple[tuple[int, ...], ...]

DEFAULT_LIMIT = 10


class PartitionLimitError(ValueError):
    """Enumeration refused: the Bell number would be unreasonably large."""


def bell_number(n: int) -> int:
    if n < 1:
        return 1
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


def enumerate_partitions(n: int, limit: int = DEFAULT_LIMIT) -> tuple[Partition, ...]:
    if n < 1:
        raise ValueError("need at least one element to partition")
    if n > limit:
        raise PartitionLimitError(
            f"partitions of {n} elements ({bell_number(n)} of them) exceed the "
            f"configured limit of {limit} elements; raise the limit explicitly "
            "if you really want the exhaustive sweep")
    return _partitions(n)


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[Partition, ...]:
    out: list[Partition] = []
    labels = [0] * n

    def grow(i: int, used: int):
        if i == n:
            blocks: list[list[int]] = [[] for _ in range(used)]
            for element, label in enumerate(labels, start=1):
                blocks[label].append(element)
            out.append(tuple(tuple(b) for b in blocks))
            return
        for label in range(used + 1):
            labels[i] = label
            grow(i + 1, max(used, label + 1))

    grow(0, 0)
    return tuple(out)


def singleton_partition(n: int) -> Partition:
    return tuple((i,) for i in range(1, n + 1))


def block_with_singletons(members, n: int) -> Partition:
    """The partition whose only non-trivial block is ``members``."""
    block = tuple(sorted(members))
    rest = [(i,) for i in range(1, n + 1) if i not in members]
    return tuple(sorted([block] + rest, key=lambda b: b[0]))


def partitions_containing(partitions, members) -> list[Partition]:
    block = tuple(sorted(members))
    return [p for p in partitions if block in p]
