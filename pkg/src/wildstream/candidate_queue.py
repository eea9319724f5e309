"""Per-interval candidate storage with compressed periodic runs.

For an interval ``[i, j]`` every stored candidate ``c`` has an entrance prefix
``t[c:c+i]`` that matched ``p[0:i]``.  At most one entrance prefix, ``u``, can be
shared by three or more simultaneous candidates, and those candidates are
spaced by the principle period of ``u``.  They are kept as one arithmetic
progression block in O(1) words; everything else goes to an explicit list.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .fingerprint import EMPTY, FieldParams, Fingerprint
from .partition import PatternInterval
from .periodicity import principle_period
from .symbols import WILDCARD

ENTRY_WORDS = 6
QUEUE_WORDS = 16


class FullSI(NamedTuple):
    """Candidate fingerprint ``phi(t[0:c])`` plus ``phi(t[0:c+i])``.

    The entrance fingerprint ``phi(t[c:c+i])`` is ``remove_prefix(entry_fp,
    candidate_fp)``; storing the concatenation instead of the entrance carries
    the same two words and spares a field inversion on every hop.
    """

    candidate_fp: Fingerprint
    entry_fp: Fingerprint


class ReducedSI(NamedTuple):
    entry_text_fp: Fingerprint


@dataclass(frozen=True)
class UIData:
    exists: bool
    u_fp: Fingerprint = EMPTY
    rho: int = 0
    period_fp: Fingerprint = EMPTY
    u: Optional[tuple[int, ...]] = None


NO_UI = UIData(False)


def _first_clean_window(p: Sequence[int], end: int, width: int) -> int:
    run = 0
    for k in range(end):
        run = 0 if p[k] == WILDCARD else run + 1
        if run >= width:
            return k - width + 1
    return -1


def periodic_completion(pattern: Sequence[int], iv: PatternInterval) -> Optional[tuple[int, ...]]:
    """The only entrance prefix that can carry three candidates of ``iv``, if any.

    A run ``v`` of ``len(iv)`` non-wildcards inside ``p[0:i]`` is shifted along
    with every candidate, so three candidates force ``v`` to be periodic and the
    whole prefix to repeat its period; the result must still agree with every
    non-wildcard prefix character.
    """
    i = iv.lo
    width = len(iv)
    if iv.is_wildcard or width <= 1:
        return None
    r = _first_clean_window(pattern, i, width)
    if r < 0:
        return None
    v = pattern[r : r + width]
    rho = principle_period(v)
    if 2 * rho > width:
        return None
    prefix = np.asarray(pattern[:i], dtype=np.int64)
    shift = (-r) % rho
    period = np.asarray([v[(x + shift) % rho] for x in range(rho)], dtype=np.int64)
    u = np.resize(period, i)
    if not np.all((prefix == WILDCARD) | (prefix == u)):
        return None
    return tuple(int(x) for x in u)


def precompute_ui(pattern: Sequence[int], iv: PatternInterval, field: FieldParams) -> UIData:
    u = periodic_completion(pattern, iv)
    if u is None:
        return NO_UI
    r = _first_clean_window(pattern, iv.lo, len(iv))
    rho = principle_period(pattern[r : r + len(iv)])
    period_fp = field.of(u[:rho])
    whole, part = divmod(len(u), rho)
    u_fp = field.concat(field.repeat(period_fp, whole), field.of(u[:part]))
    return UIData(True, u_fp, rho, period_fp, u)


class Dequeued(NamedTuple):
    position: int
    candidate_fp: Optional[Fingerprint]
    entry_fp: Fingerprint


_new = tuple.__new__


class CandidateFingerprintQueue:
    """Candidates of one text interval, ordered by position.

    Explicit entries are ``(position, candidate_fp, entry_fp)``; a ``None``
    candidate fingerprint marks reduced satellite info, which never joins the
    progression block.
    """

    __slots__ = (
        "lo", "hi", "kind", "segment_fp", "ui", "field",
        "ap_first", "ap_fp", "ap_count", "explicit", "tail", "off_spacing",
    )

    def __init__(
        self,
        interval: PatternInterval,
        field: FieldParams,
        ui: UIData = NO_UI,
        segment_fp: Optional[Fingerprint] = None,
    ) -> None:
        self.lo = interval.lo
        self.hi = interval.hi
        self.kind = interval.kind
        self.segment_fp = segment_fp
        self.ui = ui
        self.field = field
        self.ap_first = -1
        self.ap_fp: Optional[Fingerprint] = None
        self.ap_count = 0
        self.explicit: deque = deque()
        self.tail = -1
        self.off_spacing = 0

    def __len__(self) -> int:
        return self.ap_count + len(self.explicit)

    @property
    def ap_last(self) -> int:
        return self.ap_first + (self.ap_count - 1) * self.ui.rho

    def enqueue(self, c: int, text_fp: Fingerprint, candidate_fp: Optional[Fingerprint] = None) -> bool:
        """Add candidate ``c`` at time ``alpha = text_fp.length - 1``.

        ``c`` must equal ``alpha - i + 1`` so that ``text_fp`` is ``phi(t[0:c+i])``.
        Returns True when the candidate went to the explicit list.
        """
        if c != text_fp[1] - self.lo:
            raise ValueError(
                f"candidate {c} does not enter interval [{self.lo},{self.hi}] at time {text_fp[1] - 1}"
            )
        if c <= self.tail:
            raise ValueError(f"candidate {c} enqueued after {self.tail}")
        self.tail = c
        if candidate_fp is not None:
            ui = self.ui
            if ui.exists and self.field.splits_as(text_fp, candidate_fp, ui.u_fp):
                if not self.ap_count:
                    self.ap_first = c
                    self.ap_fp = candidate_fp
                    self.ap_count = 1
                    return False
                if c == self.ap_first + self.ap_count * ui.rho:
                    self.ap_count += 1
                    return False
                self.off_spacing += 1
        self.explicit.append((c, candidate_fp, text_fp))
        return True

    def head(self) -> int:
        """Smallest stored position, or -1 when empty."""
        if self.explicit:
            h = self.explicit[0][0]
            if self.ap_count and self.ap_first < h:
                return self.ap_first
            return h
        return self.ap_first if self.ap_count else -1

    def peek_next_exit(self) -> Optional[int]:
        h = self.head()
        return None if h < 0 else h + self.hi

    def dequeue(self, alpha: int) -> Optional[Dequeued]:
        """Remove the candidate at ``alpha - j`` if one is stored.

        Returns it with ``phi(t[0:c])`` (None for reduced info) and ``phi(t[0:c+i])``.
        """
        c = alpha - self.hi
        if self.ap_count and self.ap_first == c:
            field = self.field
            cand_fp = self.ap_fp
            ui = self.ui
            self.ap_count -= 1
            if self.ap_count:
                self.ap_first = c + ui.rho
                self.ap_fp = field.concat(cand_fp, ui.period_fp)
            else:
                self.ap_first = -1
                self.ap_fp = None
            return _new(Dequeued, (c, cand_fp, field.concat(cand_fp, ui.u_fp)))
        explicit = self.explicit
        if explicit and explicit[0][0] == c:
            return _new(Dequeued, explicit.popleft())
        return None

    def satellite(self, position: int) -> FullSI | ReducedSI:
        """Satellite info of a stored candidate (diagnostics; O(size))."""
        for k in range(self.ap_count):
            if self.ap_first + k * self.ui.rho == position:
                fp = self.ap_fp
                for _ in range(k):
                    fp = self.field.concat(fp, self.ui.period_fp)
                return FullSI(fp, self.field.concat(fp, self.ui.u_fp))
        for c, cand, entry in self.explicit:
            if c == position:
                return ReducedSI(entry) if cand is None else FullSI(cand, entry)
        raise KeyError(position)

    def words_used(self) -> int:
        return QUEUE_WORDS + ENTRY_WORDS * len(self.explicit)

    def positions(self) -> list[int]:
        ap = [self.ap_first + k * self.ui.rho for k in range(self.ap_count)]
        return sorted(ap + [e[0] for e in self.explicit])

    def dump(self) -> str:
        """One ``pos kind`` line per stored candidate."""
        rows = [(self.ap_first + k * self.ui.rho, "ap") for k in range(self.ap_count)]
        rows += [(e[0], "explicit") for e in self.explicit]
        return "\n".join(f"{c} {kind}" for c, kind in sorted(rows))
