"""Split matching: a small-period prefix engine feeding the queue chain.

The longest pattern prefix whose wildcard period is at most ``tau`` is matched
by the offset-column engine.  Each of its occurrences is injected into the
queue of the interval that starts right after the prefix, and the remaining
intervals are validated as usual.  Queues are serviced through a heap keyed by
their next exit time.

An injected candidate normally carries only the text fingerprint taken when it
entered (reduced info), which is all its next validation needs.  When the
prefix just read equals the head of a downstream periodic completion, the
candidate fingerprint is recovered from it, so the candidate can later join a
progression block.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .candidate_queue import ENTRY_WORDS, QUEUE_WORDS, CandidateFingerprintQueue, precompute_ui
from .engine import MatchReport, Metrics
from .fingerprint import EMPTY, FieldParams, Fingerprint
from .offset import DUMMY, RollingDictionary, SmallWPMatcher
from .partition import IntervalPartition, secondary_partition, split_at
from .periodicity import pi_value
from .symbols import WILDCARD, PatternLike, encode_pattern, encode_text


def threshold_tau(d: int, delta: float) -> int:
    """``ceil(d ** delta)``, and 1 without wildcards."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("delta must lie in [0, 1]")
    if d == 0:
        return 1
    return max(1, math.ceil(d**delta - 1e-12))


def compute_p_star(pattern: PatternLike, tau: int, wildcard="?") -> tuple[tuple[int, ...], int]:
    """Longest prefix whose wildcard period (or its certified bound) is at most ``tau``.

    Scans from the full pattern down without assuming monotonicity.
    """
    p = encode_pattern(pattern, wildcard)
    if not p:
        raise ValueError("empty pattern")
    for length in range(len(p), 0, -1):
        if pi_value(p[:length], None)[0] <= tau:
            return p[:length], length
    raise AssertionError("a single symbol always has period 1")


def build_psi(
    pattern: PatternLike, partition: IntervalPartition, i_star: int, field_params: FieldParams, wildcard="?"
) -> dict[tuple[int, ...], int]:
    """Distinct length-``i_star`` heads of the periodic completions of downstream intervals."""
    p = encode_pattern(pattern, wildcard)
    out: dict[tuple[int, ...], int] = {}
    for iv in partition:
        if iv.lo < i_star:
            continue
        ui = precompute_ui(p, iv, field_params)
        if ui.exists and ui.u is not None:
            head = ui.u[:i_star]
            if head not in out:
                out[head] = len(out) + 1
    return out


@dataclass
class TradeoffState:
    pattern: tuple[int, ...]
    delta: float
    tau: int
    p_star: tuple[int, ...]
    i_star: int
    small_engine: SmallWPMatcher
    field: FieldParams
    partition: Optional[IntervalPartition] = None
    first: int = 0
    queues: list[CandidateFingerprintQueue] = field(default_factory=list)
    psi: dict[tuple[int, ...], int] = field(default_factory=dict)
    psi_matcher: Optional[RollingDictionary] = None
    psi_fps: dict[int, Fingerprint] = field(default_factory=dict)
    heap: list[tuple[int, int]] = field(default_factory=list)
    alpha: int = -1
    text_fp: Fingerprint = EMPTY
    chars: int = 0
    matches: int = 0
    injected_full: int = 0
    injected_reduced: int = 0
    downstream_ops: int = 0
    dequeues: int = 0
    assassinations: int = 0
    p_prime_occurrences: int = 0
    total_explicit: int = 0
    max_total_explicit: int = 0

    @classmethod
    def build(
        cls,
        pattern: PatternLike,
        delta: float = 0.5,
        seed: int = 0,
        *,
        tau: Optional[int] = None,
        cover: str = "random",
        field_params: Optional[FieldParams] = None,
        wildcard="?",
    ) -> "TradeoffState":
        p = encode_pattern(pattern, wildcard)
        if not p:
            raise ValueError("empty pattern")
        d = sum(1 for c in p if c == WILDCARD)
        if tau is None:
            tau = threshold_tau(d, delta)
        f = field_params if field_params is not None else FieldParams(seed)
        p_star, i_star = compute_p_star(p, tau, None)
        small = SmallWPMatcher.build(p_star, tau, seed, cover=cover, field_params=f, wildcard=None)
        state = cls(p, delta, tau, p_star, i_star, small, f)
        if i_star == len(p):
            return state
        partition = split_at(secondary_partition(p, None), i_star)
        state.partition = partition
        state.first = next(h for h, iv in enumerate(partition) if iv.lo == i_star)
        prefix = f.prefix_fingerprints([0 if c == WILDCARD else c for c in p])
        for h, iv in enumerate(partition):
            if h < state.first:
                continue
            seg = None if iv.is_wildcard else f.remove_prefix(prefix[iv.hi + 1], prefix[iv.lo])
            state.queues.append(CandidateFingerprintQueue(iv, f, precompute_ui(p, iv, f), seg))
        state.psi = build_psi(p, partition, i_star, f, None)
        if state.psi:
            state.psi_matcher = RollingDictionary(i_star, state.psi, f)
            state.psi_fps = {i: f.of(s) for s, i in state.psi.items()}
        return state

    @property
    def collapsed(self) -> bool:
        return self.i_star == len(self.pattern)

    @property
    def m(self) -> int:
        return len(self.pattern)

    def _enqueue(self, k: int, c: int, candidate_fp: Optional[Fingerprint]) -> None:
        q = self.queues[k]
        was_empty = len(q) == 0
        if q.enqueue(c, self.text_fp, candidate_fp):
            self.total_explicit += 1
            self.max_total_explicit = max(self.max_total_explicit, self.total_explicit)
        self.downstream_ops += 1
        if was_empty:
            heapq.heappush(self.heap, (c + q.hi, k))

    def process_char(self, ch: int) -> list[MatchReport]:
        self.alpha += 1
        self.chars += 1
        alpha = self.alpha
        f = self.field
        self.text_fp = f.append(self.text_fp, ch)
        small = self.small_engine.process_char(ch)
        if self.collapsed:
            self.matches += len(small)
            return small
        psi_id = self.psi_matcher.push(0, ch) if self.psi_matcher is not None else DUMMY
        for rep in small:
            # rep.start + i_star - 1 == alpha: the candidate enters the first
            # downstream interval right now.
            if psi_id != DUMMY:
                self.injected_full += 1
                cand = f.remove_suffix(self.text_fp, self.psi_fps[psi_id])
            else:
                self.injected_reduced += 1
                cand = None
            self._enqueue(0, rep.start, cand)
        out: list[MatchReport] = []
        heap = self.heap
        last = len(self.queues) - 1
        while heap and heap[0][0] == alpha:
            _, k = heapq.heappop(heap)
            q = self.queues[k]
            n0 = len(q.explicit)
            got = q.dequeue(alpha)
            if got is None:
                raise AssertionError(f"queue {k} keyed at {alpha} released nothing")
            self.dequeues += 1
            self.downstream_ops += 1
            if len(q.explicit) != n0:
                self.total_explicit -= 1
            nxt = q.peek_next_exit()
            if nxt is not None:
                heapq.heappush(heap, (nxt, k))
            c, cand, entry = got
            if q.segment_fp is not None and not f.splits_as(self.text_fp, entry, q.segment_fp):
                self.assassinations += 1
                continue
            if k == 0:
                self.p_prime_occurrences += 1
            if k == last:
                out.append(MatchReport(c, alpha))
                self.matches += 1
            else:
                self._enqueue(k + 1, c, cand)
        return out

    def feed(self, text: str | bytes | Iterable[int]) -> list[int]:
        return [r.start for ch in encode_text(text) for r in self.process_char(ch)]

    def words_used(self) -> int:
        queues = sum(q.words_used() for q in self.queues)
        psi = self.psi_matcher.words_used() if self.psi_matcher is not None else 0
        return self.small_engine.words_used() + queues + psi + 2 * len(self.heap)

    def snapshot_metrics(self) -> Metrics:
        inner = self.small_engine.snapshot_metrics()
        base = QUEUE_WORDS * len(self.queues) + inner.words_used_peak
        if self.psi_matcher is not None:
            base += self.psi_matcher.words_used()
        return Metrics(
            chars=self.chars,
            matches=self.matches,
            enqueues=inner.enqueues + self.downstream_ops - self.dequeues,
            dequeues=inner.dequeues + self.dequeues,
            validations=inner.validations,
            assassinations=inner.assassinations + self.assassinations,
            total_explicit=inner.total_explicit + self.total_explicit,
            max_total_explicit=inner.max_total_explicit + self.max_total_explicit,
            words_used=self.words_used(),
            words_used_peak=base + ENTRY_WORDS * self.max_total_explicit,
        )


def tradeoff_process_char(state: TradeoffState, ch: int) -> list[MatchReport]:
    return state.process_char(ch)


def amortized_report(state: TradeoffState) -> dict:
    """Downstream work against the stream length and the threshold."""
    chars = max(state.chars, 1)
    return {
        "chars": state.chars,
        "tau": state.tau,
        "i_star": state.i_star,
        "downstream_intervals": len(state.queues),
        "downstream_ops": state.downstream_ops,
        "p_prime_occurrences": state.p_prime_occurrences,
        "injected_full": state.injected_full,
        "injected_reduced": state.injected_reduced,
        "ops_per_char": state.downstream_ops / chars,
        "psi_entries": len(state.psi),
    }
