"""Periods of plain strings and the wildcard-period length of patterns.

The wildcard-period length of a pattern ``P`` is ``ceil(|P| / occ)`` where
``occ`` is the largest number of occurrences of ``P`` that fit in any text of
length ``2|P| - 1``.  Occurrence start sets are exactly the shift sets whose
pairwise differences are compatible: every text position is constrained only
by pairs of pattern characters landing on it, so pairwise agreement already
makes the whole set realizable.  The maximum is therefore a maximum clique in
the shift-compatibility graph, found exactly by branch and bound below a size
cap, and bounded greedily above it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .symbols import WILDCARD, PatternLike, encode_pattern

EXACT_CAP = 24


def _as_symbols(s) -> Sequence[int]:
    if isinstance(s, str):
        return [ord(c) for c in s]
    return s


def failure_function(s: Sequence) -> list[int]:
    """Border array: ``fail[k]`` is the longest proper border of ``s[:k+1]``."""
    fail = [0] * len(s)
    k = 0
    for i in range(1, len(s)):
        while k and s[i] != s[k]:
            k = fail[k - 1]
        if s[i] == s[k]:
            k += 1
        fail[i] = k
    return fail


def principle_period(s) -> int:
    """Length of the shortest period of a nonempty wildcard-free string."""
    s = _as_symbols(s)
    if len(s) == 0:
        raise ValueError("period of the empty string is undefined")
    if WILDCARD in s:
        raise ValueError("principle_period expects a wildcard-free string")
    return len(s) - failure_function(s)[-1]


def is_periodic(s) -> bool:
    return 2 * principle_period(s) <= len(s)


@dataclass(frozen=True)
class ShiftCompat:
    """``compatible[delta]`` is true iff ``P`` overlapped with itself at ``delta``
    never puts two different non-wildcard characters on top of each other.

    Index 0 is unused and set to True.
    """

    pattern_length: int
    compatible: tuple[bool, ...]

    @classmethod
    def of(cls, pattern: PatternLike, wildcard: str | int | None = "?") -> "ShiftCompat":
        p = encode_pattern(pattern, wildcard)
        m = len(p)
        compat = [True] * max(m, 1)
        for delta in range(1, m):
            ok = True
            for k in range(m - delta):
                a, b = p[k], p[k + delta]
                if a != b and a != WILDCARD and b != WILDCARD:
                    ok = False
                    break
            compat[delta] = ok
        return cls(m, tuple(compat))

    def __getitem__(self, delta: int) -> bool:
        return self.compatible[abs(delta)]


def _adjacency(sc: ShiftCompat) -> list[int]:
    m = sc.pattern_length
    adj = [0] * m
    for a in range(m):
        mask = 0
        for b in range(m):
            if a != b and sc.compatible[abs(a - b)]:
                mask |= 1 << b
        adj[a] = mask
    return adj


def _max_clique_containing_zero(sc: ShiftCompat) -> int:
    adj = _adjacency(sc)
    best = 1

    def expand(size: int, cand: int) -> None:
        nonlocal best
        if cand == 0:
            if size > best:
                best = size
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            expand(size + 1, cand & adj[v])

    expand(1, adj[0])
    return best


def max_window_occurrences(
    pattern: PatternLike, wildcard: str | int | None = "?", cap: int = EXACT_CAP
) -> int:
    """Most occurrences of the pattern realizable in one text of length ``2m - 1``."""
    p = encode_pattern(pattern, wildcard)
    if not p:
        raise ValueError("empty pattern")
    if len(p) > cap:
        raise ValueError(
            f"pattern length {len(p)} exceeds the exact-search cap {cap}; "
            "use certified_pi_upper_bound instead"
        )
    return _max_clique_containing_zero(ShiftCompat.of(p, None))


def wildcard_period_length(
    pattern: PatternLike, wildcard: str | int | None = "?", cap: int = EXACT_CAP
) -> int:
    p = encode_pattern(pattern, wildcard)
    occ = max_window_occurrences(p, None, cap)
    return -(-len(p) // occ)


def greedy_shift_set(pattern: PatternLike, wildcard: str | int | None = "?") -> list[int]:
    """Pairwise-compatible shifts chosen greedily in increasing order from 0."""
    sc = ShiftCompat.of(pattern, wildcard)
    chosen = [0]
    for s in range(1, sc.pattern_length):
        if all(sc.compatible[s - c] for c in chosen):
            chosen.append(s)
    return chosen


def certified_pi_upper_bound(pattern: PatternLike, wildcard: str | int | None = "?") -> int:
    """An upper bound on the wildcard-period length that is valid at any length.

    The greedy shift set is realizable, so its size is a lower bound on the
    maximum occurrence count and ``ceil(m / size)`` bounds the period from above.
    """
    p = encode_pattern(pattern, wildcard)
    if not p:
        raise ValueError("empty pattern")
    return -(-len(p) // len(greedy_shift_set(p, None)))


def pi_value(pattern: PatternLike, wildcard: str | int | None = "?", cap: int = EXACT_CAP) -> tuple[int, bool]:
    """``(value, exact)``: the exact period within the cap, the certified bound beyond it."""
    p = encode_pattern(pattern, wildcard)
    if len(p) <= cap:
        return wildcard_period_length(p, None, cap), True
    return certified_pi_upper_bound(p, None), False
