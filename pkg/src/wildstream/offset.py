"""Matching through offset columns for patterns with a small wildcard period.

For a prime ``q`` the pattern is read as a matrix with ``q`` columns; column
``r`` is ``p[r], p[r+q], p[r+2q], ...``.  Every text residue class mod ``q`` is
streamed through an exact equal-length dictionary of the wildcard-free
columns, which turns the text into a stream of column ids.  A nested queue
engine matches the column pattern (the ids in column order) against that id
stream.  Running several primes whose wildcard-free columns jointly cover every
non-wildcard pattern index, and reporting only when all of them agree, gives
exact matches.

When ``q`` does not divide ``m`` the columns come in two lengths; each length
class gets its own instance and the columns of the other class count as
wildcards.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .engine import MatchReport, MatcherState, Metrics
from .fingerprint import EMPTY, FieldParams, Fingerprint
from .partition import ceil_log2
from .periodicity import pi_value
from .symbols import WILDCARD, PatternLike, encode_pattern, encode_text

DUMMY = 0
MAX_ROUNDS = 64

SINGLE = "single"
SAMPLED = "sampled"
FALLBACK = "fallback"
GREEDY = "greedy"


# -- primes ----------------------------------------------------------------


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for k in range(2, math.isqrt(n) + 1):
        if sieve[k]:
            sieve[k * k :: k] = False
    return np.flatnonzero(sieve).tolist()


def next_prime(m: int) -> int:
    """Smallest prime ``>= m`` (and ``>= 2``)."""
    k = max(2, m)
    while True:
        if all(k % d for d in range(2, math.isqrt(k) + 1)):
            return k
        k += 1


def sieve_bound(m: int, d: int) -> int:
    return max(2 * d * ceil_log2(m) ** 2, next_prime(m))


@dataclass(frozen=True)
class PrimeCover:
    """Primes whose wildcard-free columns together contain every non-wildcard index.

    ``witness[j]`` is a prime of the cover under which column ``j mod q`` holds
    no wildcard.
    """

    primes: tuple[int, ...]
    witness: dict[int, int]
    seed: int = 0
    resample_rounds: int = 0
    branch: str = SAMPLED


def _uncovered(m: int, wildcards: Sequence[int], primes: Iterable[int]) -> np.ndarray:
    """Boolean mask of non-wildcard indices not covered by any of ``primes``."""
    idx = np.arange(m)
    wild = np.zeros(m, dtype=bool)
    wild[list(wildcards)] = True
    left = ~wild
    w = np.asarray(list(wildcards), dtype=np.int64)
    for q in primes:
        bad = np.zeros(q, dtype=bool)
        bad[w % q] = True
        left &= bad[idx % q]
    return left


def witnesses_for(m: int, wildcards: Sequence[int], primes: Sequence[int]) -> dict[int, int]:
    """First prime (in the given order) whose column keeps each index wildcard-free."""
    wild = set(wildcards)
    out = {}
    for q in primes:
        bad = {w % q for w in wild}
        for j in range(m):
            if j not in wild and j not in out and j % q not in bad:
                out[j] = q
    return out


def verify_cover(m: int, wildcards: Sequence[int], cover: PrimeCover) -> bool:
    """Recheck the certificate: every witness is in the cover and really covers its index."""
    wild = set(wildcards)
    for j in range(m):
        if j in wild:
            continue
        q = cover.witness.get(j)
        if q is None or q not in cover.primes or any(j % q == w % q for w in wild):
            return False
    return True


def _single(m: int, wildcards: Sequence[int], seed: int, rounds: int, branch: str) -> PrimeCover:
    q = next_prime(m)
    return PrimeCover((q,), witnesses_for(m, wildcards, [q]), seed, rounds, branch)


def build_prime_cover(m: int, wildcards: Sequence[int], seed: int = 0) -> PrimeCover:
    """Randomized cover, checked deterministically and resampled on failure.

    With few wildcards (``2d <= m / log^2 m``) the single prime ``>= m`` is used
    directly.  Otherwise ``2 ceil(log2 m)`` distinct primes are drawn from the
    sieve range; a failed or uncompetitive draw (largest prime not below the
    single-prime cover) eventually falls back to that single prime.
    """
    if m < 1:
        raise ValueError("m must be positive")
    wildcards = sorted(set(wildcards))
    d = len(wildcards)
    logm = ceil_log2(m)
    single = next_prime(m)
    if logm == 0 or 2 * d * logm * logm <= m:
        return _single(m, wildcards, seed, 0, SINGLE)
    pool = primes_up_to(sieve_bound(m, d))
    take = min(2 * logm, len(pool))
    rng = random.Random(seed)
    for rounds in range(1, MAX_ROUNDS + 1):
        chosen = sorted(rng.sample(pool, take))
        if not _uncovered(m, wildcards, chosen).any():
            if chosen[-1] >= single:
                return _single(m, wildcards, seed, rounds, FALLBACK)
            return PrimeCover(tuple(chosen), witnesses_for(m, wildcards, chosen), seed, rounds, SAMPLED)
    return _single(m, wildcards, seed, MAX_ROUNDS, FALLBACK)


def greedy_prime_cover(m: int, wildcards: Sequence[int]) -> PrimeCover:
    """Smallest primes below ``m`` added in order until every index is covered.

    Not size-optimal; it exists to exercise real column decompositions where the
    randomized cover would fall back to a prime ``>= m``.
    """
    wildcards = sorted(set(wildcards))
    chosen: list[int] = []
    left = _uncovered(m, wildcards, [])
    for q in primes_up_to(m - 1):
        if not left.any():
            break
        now = left & _uncovered(m, wildcards, [q])
        if now.sum() < left.sum():
            chosen.append(q)
            left = now
    if left.any() or not chosen:
        return _single(m, wildcards, 0, 0, FALLBACK)
    return PrimeCover(tuple(chosen), witnesses_for(m, wildcards, chosen), 0, 0, GREEDY)


# -- columns ---------------------------------------------------------------


def columns(pattern: Sequence[int], q: int) -> list[tuple[int, ...]]:
    """Column ``r`` of the ``q``-column matrix: ``p[r], p[r+q], ...``."""
    return [tuple(pattern[r::q]) for r in range(q)]


def gamma_table(pattern: PatternLike, q: int, wildcard="?") -> dict[tuple[int, ...], int]:
    """Distinct nonempty wildcard-free columns with ids from 1 in residue order."""
    p = encode_pattern(pattern, wildcard)
    table: dict[tuple[int, ...], int] = {}
    for col in columns(p, q):
        if col and WILDCARD not in col and col not in table:
            table[col] = len(table) + 1
    return table


def gamma_size(pattern: PatternLike, q: int, wildcard="?") -> int:
    return len(gamma_table(pattern, q, wildcard))


# -- streaming dictionary ----------------------------------------------------


class RollingDictionary:
    """Exact matcher for a set of equal-length strings over interleaved streams.

    Each residue keeps its last ``length`` symbols and their fingerprint; a full
    window whose fingerprint is in the table yields that entry's id, anything
    else yields ``DUMMY``.
    """

    def __init__(
        self, length: int, entries: dict[tuple[int, ...], int], field_params: FieldParams, residues: int = 1
    ) -> None:
        if length < 1:
            raise ValueError("dictionary strings must be nonempty")
        if any(len(s) != length for s in entries):
            raise ValueError("dictionary strings must share one length")
        self.length = length
        self.field = field_params
        self.table = {field_params.of(s).value: i for s, i in entries.items()}
        self.buffers: list[deque[int]] = [deque() for _ in range(residues)]
        self.fps: list[Fingerprint] = [EMPTY] * residues

    def push(self, residue: int, ch: int) -> int:
        f = self.field
        buf = self.buffers[residue]
        fp = f.append(self.fps[residue], ch)
        buf.append(ch)
        if len(buf) > self.length:
            fp = f.remove_prefix(fp, f.of_char(buf.popleft()))
        self.fps[residue] = fp
        if len(buf) < self.length:
            return DUMMY
        return self.table.get(fp.value, DUMMY)

    def words_used(self) -> int:
        return len(self.table) * 2 + sum(len(b) + 4 for b in self.buffers)


@dataclass
class OffsetInstance:
    """One prime and one column length, or a direct engine when ``q >= m``."""

    q: int
    length_class: str
    column_len: int
    gamma: dict[tuple[int, ...], int]
    column_pattern: tuple[int, ...]
    window: Optional[RollingDictionary]
    column_matcher: MatcherState

    @property
    def direct(self) -> bool:
        return self.window is None


def length_classes(m: int, q: int) -> list[tuple[str, int]]:
    if m % q == 0:
        return [("exact", m // q)]
    return [("ceil", m // q + 1), ("floor", m // q)]


def build_offset_instance(
    pattern: PatternLike, q: int, length_class: str = "exact", field_params: Optional[FieldParams] = None, wildcard="?"
) -> OffsetInstance:
    """Column decomposition for one prime and length class.

    Column ``r`` of length ``L`` ends at text position ``s + r + (L-1)q`` for an
    occurrence at ``s``.  The column pattern therefore has length
    ``m - (L-1)q``: entry ``r < q`` is the id of column ``r`` when that column
    belongs to the class and is wildcard-free, and everything else is a
    wildcard.  Every instance then reports an occurrence at ``s + m - 1``.
    """
    p = encode_pattern(pattern, wildcard)
    m = len(p)
    if not p:
        raise ValueError("empty pattern")
    if q < 1:
        raise ValueError("q must be positive")
    f = field_params if field_params is not None else FieldParams()
    if q >= m:
        return OffsetInstance(q, "direct", 1, {}, p, None, MatcherState(p, f, wildcard=None))
    classes = dict(length_classes(m, q))
    if length_class not in classes:
        raise ValueError(f"length class {length_class!r} does not exist for m={m}, q={q}")
    L = classes[length_class]
    cols = columns(p, q)
    gamma: dict[tuple[int, ...], int] = {}
    col_pattern = [WILDCARD] * (m - (L - 1) * q)
    for r, col in enumerate(cols):
        if len(col) != L or WILDCARD in col:
            continue
        if col not in gamma:
            gamma[col] = len(gamma) + 1
        col_pattern[r] = gamma[col]
    window = RollingDictionary(L, gamma, f, q)
    matcher = MatcherState(tuple(col_pattern), f, wildcard=None)
    return OffsetInstance(q, length_class, L, gamma, tuple(col_pattern), window, matcher)


def dict_process_char(instance: OffsetInstance, alpha: int, ch: int) -> int:
    """Column id completed by ``t[alpha]`` in residue ``alpha mod q``, or ``DUMMY``."""
    if instance.window is None:
        raise ValueError("a direct instance has no dictionary layer")
    return instance.window.push(alpha % instance.q, ch)


@dataclass
class SmallWPMatcher:
    """Votes of every offset instance over a prime cover."""

    pattern: tuple[int, ...]
    cover: PrimeCover
    instances: list[OffsetInstance]
    tau: Optional[int] = None
    pi: tuple[int, bool] = (0, False)
    alpha: int = -1
    votes: int = 0
    chars: int = 0
    matches: int = 0
    _words_peak: int = field(default=0, repr=False)

    @property
    def m(self) -> int:
        return len(self.pattern)

    @property
    def threshold(self) -> int:
        return len(self.instances)

    @property
    def within_tau(self) -> bool:
        """Whether the wildcard period is known to be at most ``tau``."""
        return self.tau is None or self.pi[0] <= self.tau

    @classmethod
    def build(
        cls,
        pattern: PatternLike,
        tau: Optional[int] = None,
        seed: int = 0,
        *,
        primes: Optional[Sequence[int]] = None,
        cover: str = "random",
        field_params: Optional[FieldParams] = None,
        wildcard="?",
    ) -> "SmallWPMatcher":
        """``cover`` is ``"random"`` or ``"greedy"``; ``primes`` overrides both."""
        p = encode_pattern(pattern, wildcard)
        if not p:
            raise ValueError("empty pattern")
        m = len(p)
        wild = [k for k, c in enumerate(p) if c == WILDCARD]
        if primes is not None:
            pc = PrimeCover(tuple(primes), witnesses_for(m, wild, list(primes)), seed, 0, "given")
            if not verify_cover(m, wild, pc):
                raise ValueError(f"primes {tuple(primes)} do not cover every non-wildcard index")
        elif cover == "greedy":
            pc = greedy_prime_cover(m, wild)
        elif cover == "random":
            pc = build_prime_cover(m, wild, seed)
        else:
            raise ValueError(f"unknown cover {cover!r}")
        f = field_params if field_params is not None else FieldParams(seed)
        instances = []
        for q in pc.primes:
            if q >= m:
                instances.append(build_offset_instance(p, q, "direct", f, None))
            else:
                for name, _ in length_classes(m, q):
                    instances.append(build_offset_instance(p, q, name, f, None))
        return cls(p, pc, instances, tau, pi_value(p, None))

    def process_char(self, ch: int) -> list[MatchReport]:
        self.alpha += 1
        self.chars += 1
        alpha = self.alpha
        votes = 0
        for inst in self.instances:
            sym = ch if inst.window is None else inst.window.push(alpha % inst.q, ch)
            if inst.column_matcher.process_char(sym):
                votes += 1
        self.votes = votes
        if votes == len(self.instances) and alpha >= self.m - 1:
            self.matches += 1
            return [MatchReport(alpha - self.m + 1, alpha)]
        return []

    def feed(self, text: str | bytes | Iterable[int]) -> list[int]:
        return [r.start for ch in encode_text(text) for r in self.process_char(ch)]

    def words_used(self) -> int:
        total = 0
        for inst in self.instances:
            total += inst.column_matcher.words_used()
            if inst.window is not None:
                total += inst.window.words_used()
        return total

    def snapshot_metrics(self) -> Metrics:
        """Sums over the nested column matchers plus the dictionary buffers."""
        parts = [inst.column_matcher.snapshot_metrics() for inst in self.instances]
        windows = sum(inst.window.words_used() for inst in self.instances if inst.window is not None)
        return Metrics(
            chars=self.chars,
            matches=self.matches,
            enqueues=sum(x.enqueues for x in parts),
            dequeues=sum(x.dequeues for x in parts),
            validations=sum(x.validations for x in parts),
            assassinations=sum(x.assassinations for x in parts),
            total_explicit=sum(x.total_explicit for x in parts),
            max_total_explicit=sum(x.max_total_explicit for x in parts),
            words_used=self.words_used(),
            words_used_peak=sum(x.words_used_peak for x in parts) + windows,
        )


def small_wp_process_char(matcher: SmallWPMatcher, ch: int) -> list[MatchReport]:
    return matcher.process_char(ch)
