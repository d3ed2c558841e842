"""Sorting items by a numeric key and cutting them into buckets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

EQUAL_COUNT = "equal_count"
LOG_HALVING = "log_halving"
STRATEGIES = (EQUAL_COUNT, LOG_HALVING)


@dataclass(frozen=True)
class Item:
    key: float
    faults: int = 0
    notes: int = 0
    label: Any = None


@dataclass(frozen=True)
class Bucket:
    members: tuple[Item, ...]
    min_key: float
    max_key: float
    fault_count: int
    note_count: int

    @property
    def rate(self) -> float:
        return self.fault_count / self.note_count if self.note_count else 0.0


@dataclass(frozen=True)
class Bucketing:
    strategy: str
    buckets: tuple[Bucket, ...]

    @property
    def sizes(self) -> list[int]:
        return [len(b.members) for b in self.buckets]


def bucket_sizes(n: int, strategy: str, k: int) -> list[int]:
    if k < 1:
        raise ValueError("need at least one bucket")
    if k > n:
        raise ValueError(f"{k} buckets for {n} items")
    if strategy == EQUAL_COUNT:
        q, r = divmod(n, k)
        return [q + 1] * r + [q] * (k - r)
    if strategy == LOG_HALVING:
        sizes, left = [], n
        for _ in range(k - 1):
            take = (left + 1) // 2
            sizes.append(take)
            left -= take
        sizes.append(left)
        if 0 in sizes:
            raise ValueError(f"{n} items are too few for {k} halving buckets")
        return sizes
    raise ValueError(f"unknown strategy {strategy!r}")


def bucketize(items: Sequence[Item], strategy: str, bucket_count: int) -> Bucketing:
    if not items:
        raise ValueError("nothing to bucket")
    ordered = sorted(items, key=lambda it: it.key)  # stable: ties keep input order
    out, pos = [], 0
    for size in bucket_sizes(len(ordered), strategy, bucket_count):
        chunk = tuple(ordered[pos:pos + size])
        pos += size
        out.append(Bucket(
            chunk, chunk[0].key, chunk[-1].key,
            sum(it.faults for it in chunk), sum(it.notes for it in chunk),
        ))
    return Bucketing(strategy, tuple(out))
