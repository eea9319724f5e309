import itertools
import random

import pytest

from wildstream.fingerprint import FieldParams
from wildstream.offset import SmallWPMatcher
from wildstream.partition import secondary_partition
from wildstream.reference import oracle_match
from wildstream.tradeoff import (
    TradeoffState,
    amortized_report,
    build_psi,
    compute_p_star,
    threshold_tau,
    tradeoff_process_char,
)
from wildstream.workloads import adversarial_cases, random_case

F = FieldParams(5)


def brute_pi(pattern: str) -> int:
    letters = sorted(set(pattern) - {"?"}) or ["a"]
    n = 2 * len(pattern) - 1
    occ = max(len(oracle_match("".join(t), pattern).positions) for t in itertools.product(letters, repeat=n))
    return -(-len(pattern) // occ)


def brute_p_star(pattern: str, tau: int) -> str:
    return next(pattern[:k] for k in range(len(pattern), 0, -1) if brute_pi(pattern[:k]) <= tau)


def as_str(symbols) -> str:
    return "".join("?" if c < 0 else chr(c) for c in symbols)


def test_threshold_tau():
    assert threshold_tau(0, 0.5) == 1
    assert threshold_tau(16, 0.5) == 4
    assert threshold_tau(10, 0.5) == 4
    assert threshold_tau(7, 0.0) == 1
    assert threshold_tau(7, 1.0) == 7
    with pytest.raises(ValueError):
        threshold_tau(3, 1.5)


@pytest.mark.parametrize("pattern, tau", [("aaaa?b", 1), ("abaab", 1), ("ab?ab?a", 2), ("a?ba", 1), ("aba?", 2)])
def test_p_star_against_brute_force(pattern, tau):
    p_star, length = compute_p_star(pattern, tau)
    assert as_str(p_star) == brute_p_star(pattern, tau)
    assert length == len(p_star)


def test_p_star_examples():
    assert as_str(compute_p_star("aaaa?b", 1)[0]) == "aaaa?"
    assert as_str(compute_p_star("abcde", 1)[0]) == "a"
    assert compute_p_star("ab?cd", 5)[1] == 5


def test_psi_of_unary_pattern_is_one_entry():
    pattern = "aaaaaaaa?aaaaaaaa"
    part = secondary_partition(pattern)
    psi = build_psi(pattern, part, 3, F)
    assert psi == {tuple(map(ord, "aaa")): 1}
    assert len(psi) <= len(part)


def test_psi_empty_without_progressions():
    assert build_psi("abcdefgh", secondary_partition("abcdefgh"), 2, F) == {}


@pytest.mark.parametrize("delta", [0.0, 0.5, 1.0])
def test_spec_example_agrees_with_oracle(delta):
    expected = oracle_match("aaabab", "a?ab").positions
    assert expected == [0, 2]
    state = TradeoffState.build("a?ab", delta, seed=1)
    got = [r.start for ch in b"aaabab" for r in tradeoff_process_char(state, ch)]
    assert got == expected


def test_collapse_when_prefix_is_whole_pattern():
    state = TradeoffState.build("abab", 1.0, seed=0, tau=4)
    assert state.collapsed and state.i_star == 4
    small = SmallWPMatcher.build("abab", tau=4, seed=0)
    text = "ababababcabab"
    assert state.feed(text) == small.feed(text)


def test_no_prefix_occurrences_means_no_downstream_work():
    state = TradeoffState.build("abcd?fgh", 0.0, seed=0)
    state.feed("x" * 500)
    report = amortized_report(state)
    assert report["downstream_ops"] == 0
    assert report["chars"] == 500


def test_injected_candidates_die_early():
    # "a" starts everywhere but "ab" never follows: nothing reaches later queues.
    state = TradeoffState.build("abcdefgh", 0.0, seed=0)
    state.feed("a" * 300)
    assert state.i_star == 1
    report = amortized_report(state)
    assert report["p_prime_occurrences"] == 0
    # The last injection is still waiting in the first downstream queue.
    assert state.assassinations + state.total_explicit == report["injected_full"] + report["injected_reduced"]


def test_unary_workload_accounting():
    pattern = "aaaa?aaaa?aaaa"
    for delta in (0.0, 0.5, 1.0):
        state = TradeoffState.build(pattern, delta, seed=3)
        assert state.feed("a" * 400) == oracle_match("a" * 400, pattern).positions
        report = amortized_report(state)
        assert report["downstream_ops"] == state.downstream_ops
        assert report["ops_per_char"] == state.downstream_ops / 400


@pytest.mark.parametrize("delta", [0.0, 0.5, 1.0])
def test_matches_oracle_random_and_adversarial(delta):
    rng = random.Random(int(delta * 10) + 40)
    cases = [random_case(rng, m_range=(1, 32), n_max=400) for _ in range(120)]
    cases += adversarial_cases(rng, 10, 32, 400, 8)
    for case in cases:
        state = TradeoffState.build(case.pattern, delta, seed=rng.randint(0, 99), cover=rng.choice(["random", "greedy"]))
        assert state.feed(case.text) == oracle_match(case.text, case.pattern).positions, case
        metrics = state.snapshot_metrics()
        assert metrics.chars == len(case.text)
