"""Streaming matcher for patterns with wildcards over a chain of candidate queues.

Every text position enters the first queue just before its character arrives.
When a candidate leaves the text interval of queue ``h`` it is checked against
the pattern segment of that interval with one fingerprint comparison, then
either moves on to queue ``h + 1``, is reported, or is dropped.

Queues are serviced by exit time: each nonempty queue is registered under the
time its smallest candidate leaves, so a character only touches queues that
actually release a candidate.  The outcome is the same as sweeping every
queue in order on every character.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Generator, Iterable, NamedTuple, Optional, Sequence

from .candidate_queue import (
    ENTRY_WORDS,
    QUEUE_WORDS,
    NO_UI,
    CandidateFingerprintQueue,
    precompute_ui,
)
from .fingerprint import EMPTY, FieldParams, Fingerprint
from .partition import IntervalPartition, secondary_partition
from .symbols import WILDCARD, PatternLike, encode_pattern, encode_text

_new = tuple.__new__
_NO_REPORTS: tuple = ()


class MatchReport(NamedTuple):
    start: int
    reported_at: int


@dataclass
class Metrics:
    chars: int = 0
    matches: int = 0
    enqueues: int = 0
    dequeues: int = 0
    validations: int = 0
    assassinations: int = 0
    total_explicit: int = 0
    max_total_explicit: int = 0
    words_used: int = 0
    words_used_peak: int = 0
    off_spacing: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


class _Shadow:
    """Debug mirror that stores every candidate explicitly with its true entrance."""

    def __init__(self, engine: "MatcherState") -> None:
        self.engine = engine
        self.prefix = [EMPTY]
        self.stored: list[dict[int, Fingerprint]] = [dict() for _ in engine.queues]
        # Taken from the pattern, not the queues, so uncompressed runs are checked too.
        self.ui = [precompute_ui(engine.pattern, iv, engine.field) for iv in engine.partition]
        self.progression_violations: list[tuple] = []
        self.si_violations: list[tuple] = []
        self.max_ops_per_char = 0

    def advance(self, text_fp: Fingerprint) -> None:
        self.prefix.append(text_fp)

    def entered(self, h: int, c: int) -> None:
        q = self.engine.queues[h]
        f = self.engine.field
        entrance = f.remove_prefix(self.prefix[c + q.lo], self.prefix[c])
        group = self.stored[h]
        group[c] = entrance
        same = sorted(x for x, e in group.items() if e == entrance)
        if len(same) >= 3:
            gaps = {b - a for a, b in zip(same, same[1:])}
            ui = self.ui[h]
            if len(gaps) != 1 or not ui.exists or entrance != ui.u_fp or gaps != {ui.rho}:
                self.progression_violations.append((self.engine.alpha, h, tuple(same)))

    def left(self, h: int, c: int, entry_fp: Fingerprint) -> None:
        q = self.engine.queues[h]
        self.stored[h].pop(c, None)
        if entry_fp != self.prefix[c + q.lo]:
            self.si_violations.append((self.engine.alpha, h, c))


# Counter slots shared by both processing paths.
_DEQ, _VAL, _ASS, _MAT, _EXPL, _PEAK = range(6)


class MatcherState:
    """Streaming matcher for one pattern; feed it one symbol at a time.

    ``partition`` overrides the default doubling partition and ``compress=False``
    stores every candidate explicitly with the text fingerprint taken when it
    entered its interval.  ``debug`` attaches a shadow that checks the queue
    invariants and ``trace`` records every queue exit.
    """

    def __init__(
        self,
        pattern: PatternLike,
        field: Optional[FieldParams] = None,
        *,
        wildcard: str | int | None = "?",
        partition: Optional[IntervalPartition] = None,
        compress: bool = True,
        debug: bool = False,
        trace: bool = False,
    ) -> None:
        p = encode_pattern(pattern, wildcard)
        if not p:
            raise ValueError("empty pattern")
        self.pattern = p
        self.m = len(p)
        self.wildcards = [k for k, c in enumerate(p) if c == WILDCARD]
        self.d = len(self.wildcards)
        self.field = field if field is not None else FieldParams()
        self.partition = partition if partition is not None else secondary_partition(p, None)
        self._check_partition()
        self.compress = compress
        self.queues = self._build_queues()
        self.last = len(self.queues) - 1
        self.text_fp = EMPTY
        self._cnt = [0] * 6
        self._out: list[MatchReport] = []
        self.trace: Optional[list[tuple[int, int, int, str]]] = [] if trace else None
        self.shadow: Optional[_Shadow] = _Shadow(self) if debug else None
        # Exit times of stored candidates lie in (alpha, alpha + m], so a ring of
        # m + 1 slots indexed by time mod (m + 1) holds every pending schedule.
        self._ring = self.m + 1
        self._due: list[Optional[list[int]]] = [None] * self._ring
        self._enqueue(0, 0, EMPTY)
        self._implicit_head = not debug and not trace and self.partition[0].hi == 0
        if self._implicit_head:
            # The first queue's single candidate lives in the core loop as
            # (alpha + 1, text_fp) instead of in its deque.
            self.queues[0].explicit.clear()
            self._due[0] = None
            self._cnt[_EXPL] = self._cnt[_PEAK] = 0
            core = self._core()
            next(core)
            self._send = core.send
            self.process_char = self._process_one  # type: ignore[method-assign]

    @property
    def alpha(self) -> int:
        """Index of the last symbol consumed (-1 before any)."""
        return self.text_fp[1] - 1

    def _check_partition(self) -> None:
        expected = 0
        for iv in self.partition:
            if iv.lo != expected or iv.hi < iv.lo:
                raise ValueError("partition must cover [0, m-1] in order")
            seg = self.pattern[iv.lo : iv.hi + 1]
            if iv.is_wildcard != (len(seg) == 1 and seg[0] == WILDCARD) or (
                not iv.is_wildcard and WILDCARD in seg
            ):
                raise ValueError(f"interval {iv} mixes wildcards and characters")
            expected = iv.hi + 1
        if expected != self.m:
            raise ValueError("partition must cover [0, m-1] in order")

    def _build_queues(self) -> list[CandidateFingerprintQueue]:
        f = self.field
        p = self.pattern
        queues = []
        for iv in self.partition:
            seg = None if iv.is_wildcard else f.of(p[iv.lo : iv.hi + 1])
            ui = precompute_ui(p, iv, f) if self.compress and iv.hi > iv.lo else NO_UI
            queues.append(CandidateFingerprintQueue(iv, f, ui, seg))
        return queues

    # -- instrumented path ------------------------------------------------

    def _schedule(self, h: int, time: int) -> None:
        k = time % self._ring
        slot = self._due[k]
        if slot is None:
            self._due[k] = [h]
        else:
            slot.append(h)

    def _enqueue(self, h: int, c: int, candidate_fp: Optional[Fingerprint]) -> None:
        q = self.queues[h]
        was_empty = not q.ap_count and not q.explicit
        cnt = self._cnt
        if q.enqueue(c, self.text_fp, candidate_fp if self.compress else None):
            cnt[_EXPL] += 1
            if cnt[_EXPL] > cnt[_PEAK]:
                cnt[_PEAK] = cnt[_EXPL]
        if was_empty:
            self._schedule(h, c + q.hi)
        if self.shadow is not None:
            self.shadow.entered(h, c)

    def _service(self, h: int) -> None:
        q = self.queues[h]
        alpha = self.alpha
        n0 = len(q.explicit)
        got = q.dequeue(alpha)
        if got is None:
            raise AssertionError(f"queue {h} scheduled at {alpha} released nothing")
        c, cand_fp, entry_fp = got
        cnt = self._cnt
        cnt[_DEQ] += 1
        if len(q.explicit) != n0:
            cnt[_EXPL] -= 1
        nxt = q.head()
        if nxt >= 0:
            self._schedule(h, nxt + q.hi)
        if self.shadow is not None:
            self.shadow.left(h, c, entry_fp)
        seg = q.segment_fp
        if seg is not None:
            cnt[_VAL] += 1
            if not self.field.splits_as(self.text_fp, entry_fp, seg):
                cnt[_ASS] += 1
                if self.trace is not None:
                    self.trace.append((alpha, h, c, "assassinated"))
                return
        if h == self.last:
            self._out.append(MatchReport(c, alpha))
            cnt[_MAT] += 1
            if self.trace is not None:
                self.trace.append((alpha, h, c, "reported"))
            return
        if self.trace is not None:
            self.trace.append((alpha, h, c, "passed"))
        self._enqueue(h + 1, c, cand_fp)

    def process_char(self, ch: int) -> Sequence[MatchReport]:
        """Consume ``t[alpha+1]`` and return the occurrences ending there."""
        self.text_fp = self.field.append(self.text_fp, ch)
        if self.shadow is not None:
            self.shadow.advance(self.text_fp)
        out = self._out = []
        k = self.alpha % self._ring
        hs = self._due[k]
        if hs is not None:
            self._due[k] = None
            for h in sorted(hs):
                self._service(h)
        self._enqueue(0, self.alpha + 1, self.text_fp)
        return out

    # -- fast path --------------------------------------------------------

    def _process_one(self, ch: int) -> Sequence[MatchReport]:
        return self._send((ch,))

    def _core(self) -> Generator[Sequence[MatchReport], Sequence[int], None]:
        # The instrumented path with the queue operations inlined and the state
        # held in locals; CandidateFingerprintQueue.enqueue/dequeue are the
        # reference for the code below (the ``tail`` order check is skipped:
        # positions reach each queue in increasing order by construction).
        # Each resume consumes a chunk of symbols.  Text fingerprint tuples are
        # built only when a candidate is stored.  With compress=False every
        # candidate fingerprint is None, so nothing joins a progression block.
        f = self.field
        mod = f.prime_modulus
        base = f.base
        inv_base = f.inv_base
        queues = self.queues
        last = self.last
        compress = self.compress
        due = self._due
        ring = self._ring
        cnt = self._cnt
        DEQ, VAL, ASS, MAT, EXPL, PEAK = _DEQ, _VAL, _ASS, _MAT, _EXPL, _PEAK
        seg0 = queues[0].segment_fp
        s0v = seg0[0] if seg0 is not None else 0
        q1 = queues[1] if last >= 1 else None
        text_fp: Optional[Fingerprint] = self.text_fp
        tv, tl, tb, ti = text_fp
        out: Sequence[MatchReport] = _NO_REPORTS
        while True:
            chunk = yield out
            out = _NO_REPORTS
            for ch in chunk:
                prev = text_fp
                pv, pb, pi = tv, tb, ti
                alpha = tl
                tv = (tv + ch * tb) % mod
                tl += 1
                tb = tb * base % mod
                ti = ti * inv_base % mod
                text_fp = None

                # First queue [0, 0]: candidate alpha with entry fingerprint prev.
                # Its survivor goes to the interval starting at 1, whose one-character
                # entrance prefix never supports a progression block.  Its dequeue
                # and validation counts equal the symbol count and are added on read.
                if seg0 is not None and (tv - pv - s0v * pb) % mod:
                    cnt[ASS] += 1
                elif last == 0:
                    if not out:
                        out = []
                    out.append(MatchReport(alpha, alpha))  # type: ignore[attr-defined]
                    cnt[MAT] += 1
                else:
                    explicit = q1.explicit
                    if not explicit:
                        t = (alpha + q1.hi) % ring
                        slot = due[t]
                        if slot is None:
                            due[t] = [1]
                        else:
                            slot.append(1)
                    text_fp = _new(Fingerprint, (tv, tl, tb, ti))
                    if compress:
                        if prev is None:
                            prev = _new(Fingerprint, (pv, alpha, pb, pi))
                        explicit.append((alpha, prev, text_fp))
                    else:
                        explicit.append((alpha, None, text_fp))
                    cnt[EXPL] += 1
                    if cnt[EXPL] > cnt[PEAK]:
                        cnt[PEAK] = cnt[EXPL]

                slot_now = alpha % ring
                hs = due[slot_now]
                if hs is None:
                    continue
                due[slot_now] = None
                if len(hs) > 1:
                    hs.sort()
                for h in hs:
                    q = queues[h]
                    c = alpha - q.hi
                    if q.ap_count and q.ap_first == c:
                        ui = q.ui
                        cand = q.ap_fp
                        cv, cl, cb, ci = cand
                        q.ap_count -= 1
                        if q.ap_count:
                            q.ap_first = c + ui.rho
                            pf = ui.period_fp
                            q.ap_fp = _new(Fingerprint, (
                                (cv + pf[0] * cb) % mod, cl + pf[1], cb * pf[2] % mod, ci * pf[3] % mod,
                            ))
                        else:
                            q.ap_first = -1
                            q.ap_fp = None
                        uf = ui.u_fp
                        ev = (cv + uf[0] * cb) % mod
                        el = cl + uf[1]
                        eb = cb * uf[2] % mod
                    else:
                        explicit = q.explicit
                        if not explicit or explicit[0][0] != c:
                            raise AssertionError(f"queue {h} scheduled at {alpha} released nothing")
                        _, cand, entry = explicit.popleft()
                        ev, el, eb, _ = entry
                        cnt[EXPL] -= 1
                    cnt[DEQ] += 1
                    # Reschedule this queue at its new head's exit time.
                    explicit = q.explicit
                    if explicit:
                        nxt = explicit[0][0]
                        if q.ap_count and q.ap_first < nxt:
                            nxt = q.ap_first
                    elif q.ap_count:
                        nxt = q.ap_first
                    else:
                        nxt = -1
                    if nxt >= 0:
                        t = (nxt + q.hi) % ring
                        slot = due[t]
                        if slot is None:
                            due[t] = [h]
                        else:
                            slot.append(h)
                    seg = q.segment_fp
                    if seg is not None:
                        cnt[VAL] += 1
                        if tl != el + seg[1] or (tv - ev - seg[0] * eb) % mod:
                            cnt[ASS] += 1
                            continue
                    if h == last:
                        if not out:
                            out = []
                        out.append(MatchReport(c, alpha))  # type: ignore[attr-defined]
                        cnt[MAT] += 1
                        continue
                    # Forward into the next interval.
                    if text_fp is None:
                        text_fp = _new(Fingerprint, (tv, tl, tb, ti))
                    q = queues[h + 1]
                    was_empty = not q.ap_count and not q.explicit
                    ui = q.ui
                    if cand is not None and ui.exists:
                        uf = ui.u_fp
                        if tl == cand[1] + uf[1] and not (tv - cand[0] - uf[0] * cand[2]) % mod:
                            if not q.ap_count:
                                q.ap_first = c
                                q.ap_fp = cand
                                q.ap_count = 1
                                cand = None
                            elif c == q.ap_first + q.ap_count * ui.rho:
                                q.ap_count += 1
                                cand = None
                            else:
                                q.off_spacing += 1
                        if cand is not None:
                            q.explicit.append((c, cand, text_fp))
                            cnt[EXPL] += 1
                            if cnt[EXPL] > cnt[PEAK]:
                                cnt[PEAK] = cnt[EXPL]
                    else:
                        q.explicit.append((c, cand, text_fp))
                        cnt[EXPL] += 1
                        if cnt[EXPL] > cnt[PEAK]:
                            cnt[PEAK] = cnt[EXPL]
                    if was_empty:
                        t = (c + q.hi) % ring
                        slot = due[t]
                        if slot is None:
                            due[t] = [h + 1]
                        else:
                            slot.append(h + 1)
            if text_fp is None:
                text_fp = _new(Fingerprint, (tv, tl, tb, ti))
            self.text_fp = text_fp

    # -- driving and inspection -------------------------------------------

    def feed(self, text: str | bytes | Iterable[int]) -> list[int]:
        """Process a whole text and return the match starts it produced."""
        codes = encode_text(text)
        if self._implicit_head:
            return [r.start for r in self._send(codes)]
        out: list[int] = []
        step = self.process_char
        for ch in codes:
            reps = step(ch)
            if reps:
                out.extend(r.start for r in reps)
        return out

    def stored_positions(self) -> list[list[int]]:
        out = [q.positions() for q in self.queues]
        if self._implicit_head:
            out[0] = [self.alpha + 1]
        return out

    def words_used(self) -> int:
        return sum(q.words_used() for q in self.queues) + (ENTRY_WORDS if self._implicit_head else 0)

    def snapshot_metrics(self) -> Metrics:
        cnt = list(self._cnt)
        if self._implicit_head:
            cnt[_DEQ] += self.alpha + 1
            if self.queues[0].segment_fp is not None:
                cnt[_VAL] += self.alpha + 1
        stored = sum(len(p) for p in self.stored_positions())
        base = QUEUE_WORDS * len(self.queues)
        head = 1 if self._implicit_head else 0
        return Metrics(
            chars=self.alpha + 1,
            matches=cnt[_MAT],
            enqueues=cnt[_DEQ] + stored,
            dequeues=cnt[_DEQ],
            validations=cnt[_VAL],
            assassinations=cnt[_ASS],
            total_explicit=cnt[_EXPL] + head,
            max_total_explicit=cnt[_PEAK] + head,
            words_used=base + ENTRY_WORDS * (cnt[_EXPL] + head),
            words_used_peak=base + ENTRY_WORDS * (cnt[_PEAK] + head),
            off_spacing=sum(q.off_spacing for q in self.queues),
        )

    @property
    def metrics(self) -> Metrics:
        return self.snapshot_metrics()


def preprocess(pattern: PatternLike, field: Optional[FieldParams] = None, **kwargs) -> MatcherState:
    return MatcherState(pattern, field, **kwargs)


def process_char(state: MatcherState, ch: int) -> list[MatchReport]:
    return state.process_char(ch)


def snapshot_metrics(state: MatcherState) -> Metrics:
    return state.snapshot_metrics()
