"""Ground truth and baseline matchers used for differential testing.

``oracle_match`` compares every alignment directly.  ``NaiveStream`` walks each
live candidate through one pattern position per character, and
``prelim_fingerprint_stream`` runs the queue engine on the wildcard-cut
partition with every candidate stored explicitly.  All three are independent
of the compressed queues.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .engine import MatchReport, MatcherState, Metrics
from .fingerprint import FieldParams
from .partition import preliminary_partition
from .symbols import WILDCARD, PatternLike, encode_pattern, encode_text


@dataclass(frozen=True)
class OracleResult:
    positions: list[int] = field(default_factory=list)


def oracle_match(text: str | bytes | Iterable[int], pattern: PatternLike, wildcard="?") -> OracleResult:
    """Every start ``s`` with ``p[k]`` a wildcard or equal to ``t[s+k]`` for all ``k``."""
    p = np.asarray(encode_pattern(pattern, wildcard), dtype=np.int64)
    t = np.asarray(encode_text(text), dtype=np.int64)
    m, n = len(p), len(t)
    if m == 0 or n < m:
        return OracleResult([])
    alive = np.ones(n - m + 1, dtype=bool)
    for k in np.flatnonzero(p != WILDCARD):
        alive &= t[k : k + n - m + 1] == p[k]
    return OracleResult(np.flatnonzero(alive).tolist())


class NaiveStream:
    """Per-position candidate walk: Theta(m) words and time per character.

    Candidate ``c`` is compared with ``p[alpha - c]`` when ``t[alpha]`` arrives,
    so the live set is exactly the starts whose prefix read so far matches.
    """

    def __init__(self, pattern: PatternLike, wildcard="?") -> None:
        self.pattern = encode_pattern(pattern, wildcard)
        if not self.pattern:
            raise ValueError("empty pattern")
        self.m = len(self.pattern)
        self.alpha = -1
        self.live: deque[int] = deque()
        self.peak_live = 0
        self.matches = 0
        self.comparisons = 0

    def process_char(self, ch: int) -> list[MatchReport]:
        self.alpha += 1
        alpha = self.alpha
        self.live.append(alpha)
        p = self.pattern
        out = []
        survivors: deque[int] = deque()
        self.comparisons += len(self.live)
        for c in self.live:
            k = alpha - c
            pk = p[k]
            if pk != WILDCARD and pk != ch:
                continue
            if k == self.m - 1:
                out.append(MatchReport(c, alpha))
            else:
                survivors.append(c)
        self.live = survivors
        self.peak_live = max(self.peak_live, len(survivors))
        self.matches += len(out)
        return out

    def snapshot_metrics(self) -> Metrics:
        return Metrics(
            chars=self.alpha + 1,
            matches=self.matches,
            dequeues=self.comparisons,
            assassinations=self.comparisons - self.matches - len(self.live),
            total_explicit=len(self.live),
            max_total_explicit=self.peak_live,
            words_used=len(self.live) + self.m,
            words_used_peak=self.peak_live + self.m,
        )

    def feed(self, text: str | bytes | Iterable[int]) -> list[int]:
        return [r.start for ch in encode_text(text) for r in self.process_char(ch)]


def naive_stream(pattern: PatternLike, wildcard="?") -> NaiveStream:
    return NaiveStream(pattern, wildcard)


def prelim_fingerprint_stream(
    pattern: PatternLike, field_params: Optional[FieldParams] = None, wildcard="?"
) -> MatcherState:
    """Queue engine on the wildcard-cut partition, storing every candidate explicitly."""
    partition = preliminary_partition(pattern, wildcard)
    return MatcherState(pattern, field_params, wildcard=wildcard, partition=partition, compress=False)
