"""Engine registry, differential testing against the oracle, and benchmarks."""

from __future__ import annotations

import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Protocol, Sequence

from .engine import MatchReport, MatcherState, Metrics
from .fingerprint import FieldParams
from .offset import SmallWPMatcher
from .periodicity import pi_value
from .reference import NaiveStream, oracle_match, prelim_fingerprint_stream
from .symbols import PatternLike, encode_pattern
from .tradeoff import TradeoffState
from .workloads import Case, adversarial_cases, fibonacci_cases, punch, random_case

ENGINES = ("thm1", "smallwp", "tradeoff", "naive", "prelim", "oracle")
STREAMING = ("thm1", "smallwp", "tradeoff", "naive", "prelim")
FAULTS = ("skip-last-validation",)


class StreamMatcher(Protocol):
    def process_char(self, ch: int) -> Sequence[MatchReport]: ...

    def snapshot_metrics(self) -> Metrics: ...


def make_stream(
    engine: str,
    pattern: PatternLike,
    *,
    seed: int = 0,
    delta: Optional[float] = None,
    tau: Optional[int] = None,
    wildcard: str | int | None = "?",
    cover: str = "random",
) -> StreamMatcher:
    """Build a streaming matcher by name.

    ``smallwp`` defaults ``tau`` to the pattern's own wildcard period and
    ``tradeoff`` defaults ``delta`` to 0.5.
    """
    p = encode_pattern(pattern, wildcard)
    if not p:
        raise ValueError("empty pattern")
    f = FieldParams(seed)
    if engine == "thm1":
        return MatcherState(p, f, wildcard=None)
    if engine == "smallwp":
        if tau is None:
            tau = pi_value(p, None)[0]
        return SmallWPMatcher.build(p, tau, seed, cover=cover, field_params=f, wildcard=None)
    if engine == "tradeoff":
        return TradeoffState.build(p, 0.5 if delta is None else delta, seed, cover=cover, field_params=f, wildcard=None)
    if engine == "naive":
        return NaiveStream(p, None)
    if engine == "prelim":
        return prelim_fingerprint_stream(p, f, None)
    raise ValueError(f"unknown streaming engine {engine!r}")


def run_stream(matcher: StreamMatcher, text: Sequence[int]) -> list[int]:
    step = matcher.process_char
    out: list[int] = []
    for ch in text:
        for rep in step(ch):
            out.append(rep.start)
    return out


def _inject_fault(matcher: StreamMatcher, fault: str) -> None:
    if fault != "skip-last-validation":
        raise ValueError(f"unknown fault {fault!r}")
    if not isinstance(matcher, MatcherState):
        raise ValueError("faults apply to the thm1 engine")
    matcher.queues[-1].segment_fp = None


# -- difftest ----------------------------------------------------------------


@dataclass(frozen=True)
class Divergence:
    engine: str
    pattern: str
    text: str
    got: tuple[int, ...]
    expected: tuple[int, ...]
    family: str = ""

    def describe(self) -> str:
        return (
            f"engine={self.engine} family={self.family} pattern={self.pattern!r} text={self.text!r}\n"
            f"  got={list(self.got)}\n  expected={list(self.expected)}"
        )


@dataclass
class DifftestResult:
    cases: int = 0
    runs: int = 0
    per_family: dict[str, int] = field(default_factory=dict)
    divergence: Optional[Divergence] = None
    shrunk: Optional[Divergence] = None

    @property
    def ok(self) -> bool:
        return self.divergence is None


def difftest_cases(count: int, m_max: int, n_max: int, seed: int, d_max: int = 8) -> Iterator[Case]:
    """``count`` random cases followed by the adversarial families, all seeded."""
    rng = random.Random(seed)
    for _ in range(count):
        yield random_case(rng, m_range=(1, m_max), d_max=d_max, n_max=n_max)
    adv = max(1, count // 100)
    yield from adversarial_cases(rng, adv, m_max, n_max, d_max)
    yield from fibonacci_cases(rng, adv, m_max, n_max, d_max)


def check_case(
    case: Case, engines: Sequence[str], seed: int, fault: Optional[str] = None, delta: float = 0.5
) -> Optional[Divergence]:
    expected = tuple(oracle_match(case.text, case.pattern).positions)
    text = [ord(c) for c in case.text]
    for engine in engines:
        if engine == "oracle":
            continue
        matcher = make_stream(engine, case.pattern, seed=seed, delta=delta)
        if fault is not None and engine == "thm1":
            _inject_fault(matcher, fault)
        got = tuple(run_stream(matcher, text))
        if got != expected:
            return Divergence(engine, case.pattern, case.text, got, expected, case.family)
    return None


def shrink(div: Divergence, seed: int, fault: Optional[str] = None, delta: float = 0.5) -> Divergence:
    """Greedy chunk deletion on text and pattern, repeated until neither shrinks."""

    def failing(pattern: str, text: str) -> Optional[Divergence]:
        if not pattern:
            return None
        return check_case(Case(pattern, text, div.family), [div.engine], seed, fault, delta)

    best = div
    changed = True
    while changed:
        changed = False
        for attr in ("text", "pattern"):
            chunk = max(1, len(getattr(best, attr)) // 2)
            while chunk >= 1:
                progressed = False
                start = 0
                while start < len(getattr(best, attr)):
                    s = getattr(best, attr)
                    trial = s[:start] + s[start + chunk :]
                    args = (best.pattern, trial) if attr == "text" else (trial, best.text)
                    found = failing(*args)
                    if found is not None:
                        best = found
                        progressed = changed = True
                    else:
                        start += chunk
                if not progressed:
                    chunk //= 2
    return best


def run_difftest(
    count: int = 1000,
    m_max: int = 64,
    n_max: int = 2048,
    seed: int = 0,
    engines: Sequence[str] = STREAMING,
    fault: Optional[str] = None,
    jobs: int = 1,
    delta: float = 0.5,
) -> DifftestResult:
    """Compare every engine with the oracle; stop at the first divergence and shrink it.

    Cases are generated up front from ``seed`` and checked in order, so the
    outcome does not depend on ``jobs``.
    """
    cases = list(difftest_cases(count, m_max, n_max, seed))
    result = DifftestResult()
    check: Callable[[Case], Optional[Divergence]] = lambda c: check_case(c, engines, seed, fault, delta)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        for case, div in zip(cases, pool.map(check, cases)):
            result.cases += 1
            result.runs += len([e for e in engines if e != "oracle"])
            result.per_family[case.family] = result.per_family.get(case.family, 0) + 1
            if div is not None:
                result.divergence = div
                result.shrunk = shrink(div, seed, fault, delta)
                break
    return result


# -- bench -------------------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    engine: str
    workload: str
    m: int
    d: int
    n: int
    ns_per_char_p50: float
    ns_per_char_p99: float
    ns_per_char_mean: float
    words_used_peak: int
    matches: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def bench_pattern(rng: random.Random, m: int, d: int, workload: str) -> str:
    if workload == "unary":
        return punch(rng, "a" * m, d)
    return punch(rng, "".join(rng.choices("ab", k=m)), d)


def bench_text(rng: random.Random, pattern: str, n: int, workload: str) -> list[int]:
    if workload == "unary":
        return [ord("a")] * n
    return [ord(c) for c in rng.choices("ab", k=n)]


def time_stream(matcher: StreamMatcher, text: Sequence[int]) -> tuple[list[int], int]:
    """Per-character latencies in ns and the match count."""
    step = matcher.process_char
    clock = time.perf_counter_ns
    lat = []
    matches = 0
    for ch in text:
        t0 = clock()
        reps = step(ch)
        lat.append(clock() - t0)
        if reps:
            matches += len(reps)
    return lat, matches


def percentile(values: Sequence[float], q: float) -> float:
    if not values:
        return 0.0
    s = sorted(values)
    k = min(len(s) - 1, max(0, round(q / 100 * (len(s) - 1))))
    return float(s[k])


def run_bench(
    engines: Sequence[str] = ("thm1",),
    ms: Sequence[int] = (1 << 16,),
    ds: Sequence[int] = (4, 16, 64),
    n: int = 20000,
    seed: int = 0,
    workloads: Sequence[str] = ("random",),
) -> list[BenchRow]:
    rows = []
    for workload in workloads:
        for engine in engines:
            for m in ms:
                for d in ds:
                    if d > m:
                        continue
                    rng = random.Random(f"{seed}:{workload}:{m}:{d}")
                    pattern = bench_pattern(rng, m, d, workload)
                    text = bench_text(rng, pattern, n, workload)
                    matcher = make_stream(engine, pattern, seed=seed)
                    lat, matches = time_stream(matcher, text)
                    metrics = matcher.snapshot_metrics()
                    rows.append(
                        BenchRow(
                            engine, workload, m, d, n,
                            percentile(lat, 50), percentile(lat, 99), statistics.fmean(lat),
                            metrics.words_used_peak, matches,
                        )
                    )
    return rows

