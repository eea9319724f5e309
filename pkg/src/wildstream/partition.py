"""Partitions of the pattern index range ``[0, m-1]`` into pattern intervals.

The preliminary partition cuts the pattern at its wildcards.  The secondary
partition refines every wildcard-free piece into blocks whose lengths start at
the longest block seen so far and then double, which keeps the running maximum
block length a power of two and guarantees that every block of length ``L > 1``
is preceded by ``L`` consecutive non-wildcard pattern characters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .symbols import WILDCARD, PatternLike, encode_pattern

REGULAR = "regular"
WILDCARD_KIND = "wildcard"

P1 = "property 1: interval spans a wildcard or mislabels its kind"
P2 = "property 2: too many intervals"
P3 = "property 3: no preceding run of |I| non-wildcard characters"
P4 = "property 4: too many distinct running-maximum lengths"
COVER = "intervals are not an ordered disjoint cover of [0, m-1]"


@dataclass(frozen=True)
class PatternInterval:
    lo: int
    hi: int
    kind: str = REGULAR

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    @property
    def is_wildcard(self) -> bool:
        return self.kind == WILDCARD_KIND

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]" + ("w" if self.is_wildcard else "")


@dataclass(frozen=True)
class IntervalPartition:
    intervals: tuple[PatternInterval, ...]

    @property
    def mu(self) -> list[int]:
        """Running maximum of interval lengths."""
        out = []
        best = 0
        for iv in self.intervals:
            best = max(best, len(iv))
            out.append(best)
        return out

    @property
    def bounds(self) -> list[tuple[int, int]]:
        return [(iv.lo, iv.hi) for iv in self.intervals]

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __getitem__(self, h: int) -> PatternInterval:
        return self.intervals[h]

    def index_of(self, pos: int) -> int:
        """Index of the interval containing pattern index ``pos``."""
        for h, iv in enumerate(self.intervals):
            if iv.lo <= pos <= iv.hi:
                return h
        raise IndexError(pos)


def _kinded(p: Sequence[int], bounds: Sequence[tuple[int, int]]) -> IntervalPartition:
    ivs = []
    for lo, hi in bounds:
        kind = WILDCARD_KIND if lo == hi and p[lo] == WILDCARD else REGULAR
        ivs.append(PatternInterval(lo, hi, kind))
    return IntervalPartition(tuple(ivs))


def from_bounds(pattern: PatternLike, bounds: Sequence[tuple[int, int]], wildcard="?") -> IntervalPartition:
    """Build a partition from explicit ``(lo, hi)`` pairs; kinds are inferred."""
    return _kinded(encode_pattern(pattern, wildcard), bounds)


def _pieces(p: Sequence[int]) -> list[tuple[int, int, bool]]:
    """Maximal wildcard-free runs and single wildcards, as ``(lo, hi, is_wild)``."""
    out = []
    start = 0
    for k, c in enumerate(p):
        if c == WILDCARD:
            if k > start:
                out.append((start, k - 1, False))
            out.append((k, k, True))
            start = k + 1
    if start < len(p):
        out.append((start, len(p) - 1, False))
    return out


def preliminary_partition(pattern: PatternLike, wildcard="?") -> IntervalPartition:
    p = encode_pattern(pattern, wildcard)
    if not p:
        raise ValueError("empty pattern")
    return _kinded(p, [(lo, hi) for lo, hi, _ in _pieces(p)])


def secondary_partition(pattern: PatternLike, wildcard="?") -> IntervalPartition:
    p = encode_pattern(pattern, wildcard)
    if not p:
        raise ValueError("empty pattern")
    bounds: list[tuple[int, int]] = []
    longest = 0
    for i, j, is_wild in _pieces(p):
        if is_wild:
            bounds.append((i, i))
            longest = max(longest, 1)
            continue
        delta = longest if longest else 1
        if j <= i + delta - 1:
            bounds.append((i, j))
        elif j <= i + 2 * delta - 1:
            bounds.append((i, i + delta - 1))
            bounds.append((i + delta, j))
        else:
            bounds.append((i, i + delta - 1))
            bounds.append((i + delta, i + 2 * delta - 1))
            pos = i + 2 * delta
            last = delta
            while pos + 2 * last - 1 <= j:
                bounds.append((pos, pos + 2 * last - 1))
                pos += 2 * last
                last *= 2
            rest = j - pos + 1
            if 0 < rest <= last:
                bounds.append((pos, j))
            elif rest > last:
                bounds.append((pos, pos + last - 1))
                bounds.append((pos + last, j))
        longest = max(longest, max(hi - lo + 1 for lo, hi in bounds))
    return _kinded(p, bounds)


def split_at(partition: IntervalPartition, pos: int) -> IntervalPartition:
    """Make ``pos`` the start of an interval by splitting the interval holding it."""
    out = []
    for iv in partition:
        if iv.lo < pos <= iv.hi:
            out.append(PatternInterval(iv.lo, pos - 1, iv.kind))
            out.append(PatternInterval(pos, iv.hi, iv.kind))
        else:
            out.append(iv)
    return IntervalPartition(tuple(out))


def interval_count_bound(m: int, d: int) -> int:
    return 5 * (d + 1) + 2 * ceil_log2(m) + 4


def ceil_log2(m: int) -> int:
    return max(0, math.ceil(math.log2(m))) if m > 0 else 0


def verify_partition_properties(
    pattern: PatternLike, partition: IntervalPartition | Sequence[tuple[int, int]], wildcard="?"
) -> list[str]:
    """Violated partition properties, empty when the partition is valid."""
    p = encode_pattern(pattern, wildcard)
    if not isinstance(partition, IntervalPartition):
        partition = _kinded(p, partition)
    m = len(p)
    d = sum(1 for c in p if c == WILDCARD)
    problems = []

    expected = 0
    for iv in partition:
        if iv.lo != expected or iv.hi < iv.lo:
            problems.append(COVER)
            break
        expected = iv.hi + 1
    else:
        if expected != m:
            problems.append(COVER)
    if COVER in problems:
        return problems

    # Longest run of non-wildcards ending strictly before each index.
    run_before = [0] * (m + 1)
    run = 0
    best = 0
    for k, c in enumerate(p):
        run = 0 if c == WILDCARD else run + 1
        best = max(best, run)
        run_before[k + 1] = best

    p1_ok = True
    p3_ok = True
    for iv in partition:
        seg = p[iv.lo : iv.hi + 1]
        has_wild = WILDCARD in seg
        if iv.is_wildcard:
            if not (iv.lo == iv.hi and seg[0] == WILDCARD):
                p1_ok = False
        elif has_wild:
            p1_ok = False
        elif len(iv) > 1 and run_before[iv.lo] < len(iv):
            p3_ok = False
    if not p1_ok:
        problems.append(P1)
    if len(partition) > interval_count_bound(m, d):
        problems.append(P2)
    if not p3_ok:
        problems.append(P3)
    if len(set(partition.mu)) > ceil_log2(m) + 1:
        problems.append(P4)
    return problems
