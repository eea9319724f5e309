import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildstream.engine import MatcherState, MatchReport, preprocess, process_char, snapshot_metrics
from wildstream.fingerprint import FieldParams
from wildstream.partition import from_bounds, secondary_partition
from wildstream.reference import oracle_match
from wildstream.workloads import adversarial_cases, random_case

TWO_CANDIDATES = "abababaaab"
TWO_CANDIDATES_TEXT = "c" * 45 + TWO_CANDIDATES


def streamed(state, text):
    """Reports with their arrival times, driving the module-level entry point."""
    out = []
    for ch in text.encode():
        out.extend(process_char(state, ch))
    return out


def test_preprocess_examples():
    assert preprocess("abc").partition.bounds == [(0, 0), (1, 1), (2, 2)]
    single = preprocess("?")
    assert [iv.is_wildcard for iv in single.partition] == [True]
    assert len(preprocess("ab?cdefg?hij").queues) == 10


def test_process_char_examples():
    assert streamed(preprocess("abab?b"), "ababbbabab") == [MatchReport(0, 5)]
    assert [r.start for r in streamed(preprocess("?"), "xyz")] == [0, 1, 2]


def test_empty_pattern_rejected():
    with pytest.raises(ValueError):
        MatcherState("")


def test_metrics_counters():
    state = preprocess("abab?b")
    fresh = snapshot_metrics(state)
    assert (fresh.chars, fresh.matches, fresh.dequeues, fresh.assassinations) == (0, 0, 0, 0)
    state.feed("ababbbabab")
    after = snapshot_metrics(state)
    assert after.chars == 10 and after.matches == 1
    assert after.dequeues >= after.assassinations + after.matches
    assert after == state.metrics
    assert set(after.as_dict()) >= {"chars", "matches", "max_total_explicit", "words_used_peak"}


def test_two_candidate_trace():
    """Candidates 45 and 47 share the first two intervals; 47 dies in the second."""
    part = from_bounds(TWO_CANDIDATES, [(0, 3), (4, 7), (8, 9)])
    state = MatcherState(TWO_CANDIDATES, partition=part, trace=True)
    assert state.feed(TWO_CANDIDATES_TEXT) == [45]
    events = [e for e in state.trace if e[2] in (45, 47)]
    assert (52, 1, 45, "passed") in events
    assert (54, 1, 47, "assassinated") in events
    assert (54, 2, 45, "reported") in events
    assert not any(e[2] == 47 and e[3] == "passed" and e[1] == 1 for e in events)


def test_unary_progression_stays_compact():
    m = 40
    state = MatcherState("a" * m, debug=True)
    state.feed("a" * 2000)
    metrics = state.snapshot_metrics()
    assert metrics.matches == 2000 - m + 1
    # Every queue keeps its candidates in a progression block.
    assert metrics.max_total_explicit <= len(state.queues) + 1
    assert not state.shadow.progression_violations and not state.shadow.si_violations


def _run_both(pattern, text, seed, compress):
    field = FieldParams(seed)
    fast = MatcherState(pattern, field, compress=compress)
    slow = MatcherState(pattern, field, compress=compress, debug=True)
    return fast, slow, fast.feed(text), slow.feed(text)


@settings(max_examples=300, deadline=None)
@given(st.text("ab?", min_size=1, max_size=24), st.text("ab", max_size=120), st.integers(0, 99), st.booleans())
def test_matches_oracle_with_shadow(pattern, text, seed, compress):
    fast, slow, got_fast, got_slow = _run_both(pattern, text, seed, compress)
    expected = oracle_match(text, pattern).positions
    assert got_fast == got_slow == expected
    assert slow.shadow.progression_violations == [] and slow.shadow.si_violations == []
    assert fast.snapshot_metrics().matches == len(expected)


def test_fast_and_debug_paths_agree_on_counters():
    rng = random.Random(5)
    cases = [random_case(rng, m_range=(1, 40), n_max=600) for _ in range(150)]
    cases += adversarial_cases(rng, 20, 40, 600, 8)
    for case in cases:
        fast, slow, got_fast, got_slow = _run_both(case.pattern, case.text, 3, True)
        assert got_fast == got_slow == oracle_match(case.text, case.pattern).positions
        mf, ms = fast.snapshot_metrics(), slow.snapshot_metrics()
        for name in ("chars", "matches", "dequeues", "validations", "assassinations", "total_explicit"):
            assert getattr(mf, name) == getattr(ms, name), (case, name)


def test_reports_are_strictly_increasing_and_timely():
    state = preprocess("a?a")
    seen = []
    for alpha, ch in enumerate(b"aaaaaaa"):
        for rep in state.process_char(ch):
            assert rep.reported_at == alpha == rep.start + 2
            seen.append(rep.start)
    assert seen == sorted(set(seen)) == [0, 1, 2, 3, 4]


def test_explicit_partition_is_checked():
    with pytest.raises(ValueError):
        MatcherState("abc", partition=from_bounds("abc", [(0, 1)]))


def test_secondary_partition_is_default():
    assert MatcherState("ab?cd").partition == secondary_partition("ab?cd")


@settings(max_examples=100, deadline=None)
@given(st.text("ab?", min_size=1, max_size=16), st.text("ab", max_size=80), st.integers(0, 80))
def test_chunked_and_per_symbol_feeding_agree(pattern, text, cut):
    whole = MatcherState(pattern, FieldParams(1))
    per_symbol = MatcherState(pattern, FieldParams(1))
    split = MatcherState(pattern, FieldParams(1))
    reports = [r for ch in text.encode() for r in per_symbol.process_char(ch)]
    assert whole.feed(text) == [r.start for r in reports]
    assert split.feed(text[:cut]) + split.feed("") + split.feed(text[cut:]) == [r.start for r in reports]
    assert all(r.reported_at == r.start + len(pattern) - 1 for r in reports)
    assert whole.text_fp == per_symbol.text_fp == split.text_fp
    assert whole.snapshot_metrics() == per_symbol.snapshot_metrics() == split.snapshot_metrics()
