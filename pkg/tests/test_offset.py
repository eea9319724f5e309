import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wildstream.fingerprint import FieldParams
from wildstream.offset import (
    DUMMY,
    FALLBACK,
    MAX_ROUNDS,
    SINGLE,
    PrimeCover,
    RollingDictionary,
    SmallWPMatcher,
    build_offset_instance,
    build_prime_cover,
    columns,
    dict_process_char,
    gamma_size,
    gamma_table,
    greedy_prime_cover,
    length_classes,
    next_prime,
    primes_up_to,
    small_wp_process_char,
    verify_cover,
    witnesses_for,
)
from wildstream.periodicity import wildcard_period_length
from wildstream.reference import oracle_match
from wildstream.symbols import WILDCARD, encode_pattern
from wildstream.workloads import periodic_pattern, text_for

F = FieldParams(2)
SHARED_COLUMNS = "abcab?abcabcabcabcabc"


def covers(m, wildcards, primes):
    """Every non-wildcard index avoids every wildcard residue for some prime."""
    w = set(wildcards)
    return all(
        any(all(j % q != x % q for x in w) for q in primes) for j in range(m) if j not in w
    )


def test_primes():
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert [next_prime(k) for k in (1, 2, 12, 13, 24)] == [2, 2, 13, 13, 29]


def test_cover_spec_examples():
    assert covers(12, [2, 8], [5, 7])
    assert verify_cover(12, [2, 8], PrimeCover((5, 7), witnesses_for(12, [2, 8], (5, 7))))
    assert not verify_cover(12, [2, 8], PrimeCover((2,), witnesses_for(12, [2, 8], (2,))))
    assert not verify_cover(12, [2, 8], PrimeCover((5, 7), {}))
    no_wild = build_prime_cover(50, [])
    assert len(no_wild.primes) == 1 and verify_cover(50, [], no_wild)
    small = build_prime_cover(3, [1])
    assert small.primes == (3,) and small.branch in (SINGLE, FALLBACK)


def test_cover_witnesses_are_correct():
    cover = build_prime_cover(200, [3, 50, 51, 120], seed=9)
    assert verify_cover(200, [3, 50, 51, 120], cover)
    for j, q in cover.witness.items():
        assert all(j % q != w % q for w in (3, 50, 51, 120))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 600), st.data())
def test_greedy_cover_is_valid(m, data):
    wildcards = sorted(data.draw(st.sets(st.integers(0, m - 1), max_size=6)))
    cover = greedy_prime_cover(m, wildcards)
    assert covers(m, wildcards, cover.primes)


def test_columns_at_five():
    p = encode_pattern(SHARED_COLUMNS)
    cols = columns(p, 5)
    assert sum(WILDCARD in c for c in cols) == 1
    clean = [c for c in cols if WILDCARD not in c]
    pairs = [(a, b) for a in range(len(clean)) for b in range(a + 1, len(clean)) if clean[a] == clean[b]]
    assert len(pairs) == 1
    assert "".join(map(chr, cols[1])) == "bacb"
    assert cols[1] == cols[4]


def test_floor_class_ids_at_five():
    assert length_classes(21, 5) == [("ceil", 5), ("floor", 4)]
    inst = build_offset_instance(SHARED_COLUMNS, 5, "floor", F)
    assert inst.column_len == 4
    ids = inst.column_pattern[:5]
    assert ids[0] == WILDCARD
    assert ids[1] == ids[4] != WILDCARD
    assert len({ids[1], ids[2], ids[3]}) == 3
    ceil = build_offset_instance(SHARED_COLUMNS, 5, "ceil", F)
    assert ceil.gamma == {}


def test_abab_columns():
    inst = build_offset_instance("abab", 2, "exact", F)
    aa, bb = tuple(map(ord, "aa")), tuple(map(ord, "bb"))
    assert inst.gamma == {aa: 1, bb: 2}
    assert inst.column_pattern == (1, 2)
    assert gamma_size("abab", 2) == 2
    assert gamma_size("aaaa", 2) == 1


def test_wide_prime_runs_direct_engine():
    inst = build_offset_instance("abc", 5, field_params=F)
    assert inst.direct
    with pytest.raises(ValueError):
        dict_process_char(inst, 0, 97)


def test_unknown_length_class():
    with pytest.raises(ValueError):
        build_offset_instance("abcde", 2, "exact", F)


def test_rolling_dictionary_example():
    entries = {tuple(map(ord, "ab")): 1, tuple(map(ord, "ba")): 2}
    d = RollingDictionary(2, entries, F)
    assert [d.push(0, ord(c)) for c in "abab"] == [DUMMY, 1, 2, 1]
    again = RollingDictionary(2, entries, F)
    assert [again.push(0, ord(c)) for c in "abab"] == [DUMMY, 1, 2, 1]


def test_rolling_dictionary_residues_are_independent():
    entries = {tuple(map(ord, "aa")): 1}
    d = RollingDictionary(2, entries, F, residues=2)
    # Residue 0 sees a, a; residue 1 sees b, a.
    assert [d.push(k % 2, ord(c)) for k, c in enumerate("abaa")] == [DUMMY, DUMMY, 1, DUMMY]


def test_rolling_dictionary_rejects_mixed_lengths():
    with pytest.raises(ValueError):
        RollingDictionary(2, {(1,): 1}, F)


@pytest.mark.parametrize(
    "pattern, text, expected",
    [("a?a", "aaaaa", [0, 1, 2]), ("abab", "abababab", [0, 2, 4]), ("abcd", "abc", [])],
)
def test_small_wp_examples(pattern, text, expected):
    matcher = SmallWPMatcher.build(pattern, seed=1)
    got = [r.start for ch in text.encode() for r in small_wp_process_char(matcher, ch)]
    assert got == expected


def test_gamma_bound_exhaustive_small():
    rng = random.Random(4)
    for _ in range(300):
        pattern = periodic_pattern(rng, m_max=16)
        pi = wildcard_period_length(pattern)
        for q in range(1, 2 * len(pattern) + 1):
            assert gamma_size(pattern, q) <= 2 * pi, (pattern, q)


def test_gamma_table_ids_follow_residue_order():
    assert list(gamma_table("abcabc", 3).values()) == [1, 2, 3]
    assert gamma_table("a?ca?c", 3) == {(ord("a"), ord("a")): 1, (ord("c"), ord("c")): 2}


@pytest.mark.parametrize("cover", ["random", "greedy"])
def test_small_wp_matches_oracle(cover):
    rng = random.Random(17)
    for _ in range(150):
        pattern = periodic_pattern(rng, m_max=24)
        text = text_for(rng, pattern, rng.randint(0, 300))
        matcher = SmallWPMatcher.build(pattern, seed=rng.randint(0, 99), cover=cover)
        assert matcher.feed(text) == oracle_match(text, pattern).positions, (pattern, text)


def test_small_wp_forced_decomposition():
    # Small primes force real column instances of both length classes.
    pattern = "ab?ab?abaab?ab"
    rng = random.Random(3)
    used = 0
    for primes in [(2, 3), (3, 5), (5, 7), (3, 7), (2, 3, 5, 7)]:
        if not covers(len(pattern), [2, 5, 11], primes):
            with pytest.raises(ValueError):
                SmallWPMatcher.build(pattern, primes=primes, field_params=F)
            continue
        used += 1
        for _ in range(20):
            text = text_for(rng, pattern, 200)
            matcher = SmallWPMatcher.build(pattern, primes=primes, field_params=F)
            assert not any(inst.direct for inst in matcher.instances)
            assert matcher.feed(text) == oracle_match(text, pattern).positions
    assert used >= 2


def test_cover_sampling_bound():
    for m in (10, 100, 1000, 4096):
        cover = build_prime_cover(m, list(range(0, m, max(1, m // 5))), seed=m)
        assert cover.resample_rounds <= MAX_ROUNDS


def test_threshold_and_tau():
    matcher = SmallWPMatcher.build("abab", tau=2, seed=0)
    assert matcher.threshold == len(matcher.instances)
    assert matcher.within_tau
    assert not SmallWPMatcher.build("abcd", tau=1, seed=0).within_tau
