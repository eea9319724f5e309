import pytest

from wildstream.candidate_queue import (
    ENTRY_WORDS,
    NO_UI,
    QUEUE_WORDS,
    CandidateFingerprintQueue,
    FullSI,
    ReducedSI,
    precompute_ui,
)
from wildstream.fingerprint import FieldParams
from wildstream.partition import PatternInterval
from wildstream.symbols import encode_pattern

F = FieldParams(11)
# Interval [6,9] of this pattern admits a progression with entrance "ababab".
PATTERN = "abab?babab"
IV = PatternInterval(6, 9)
TEXT = "x" * 20 + "abababababab" + "x" + "ababab"


def ui_of(pattern, lo, hi):
    return precompute_ui(encode_pattern(pattern), PatternInterval(lo, hi), F)


def prefix(k, text=TEXT):
    return F.of(text[:k])


def progression_queue():
    return CandidateFingerprintQueue(IV, F, ui_of(PATTERN, 6, 9))


def enter(q, c, text=TEXT):
    return q.enqueue(c, prefix(c + q.lo, text), prefix(c, text))


def test_ui_unary():
    ui = ui_of("aaaa", 2, 3)
    assert ui.exists and ui.rho == 1 and ui.u == tuple(map(ord, "aa"))
    assert ui.u_fp == F.of("aa") and ui.period_fp == F.of("a")


def test_ui_absent_when_run_is_aperiodic():
    assert not ui_of("ab?bab", 3, 5).exists


def test_ui_periodic_completion():
    ui = ui_of(PATTERN, 6, 9)
    assert ui.exists and ui.rho == 2
    u = "".join(map(chr, ui.u))
    assert u == "ababab"
    # The completion repeats its period and agrees with the pattern prefix.
    assert all(u[k] == u[k % 2] for k in range(len(u)))
    assert all(pc in ("?", uc) for pc, uc in zip(PATTERN, u))
    assert ui.u_fp == F.of(u)


def test_three_equal_entrances_form_one_block():
    q = progression_queue()
    assert [enter(q, c) for c in (20, 22, 24)] == [False, False, False]
    assert (q.ap_first, q.ui.rho, q.ap_count) == (20, 2, 3)
    assert not q.explicit
    assert q.positions() == [20, 22, 24]


def test_off_spacing_goes_explicit():
    text = "x" * 20 + "ababab" + "x" + "ababab"
    q = progression_queue()
    assert enter(q, 20, text) is False
    # Same entrance "ababab" at 27, but 27 is not the next step of the block.
    assert enter(q, 27, text) is True
    assert q.off_spacing == 1
    assert q.ap_count == 1 and [e[0] for e in q.explicit] == [27]


def test_progression_head_dequeue_updates_fingerprint():
    q = progression_queue()
    for c in (20, 22, 24):
        enter(q, c)
    out = q.dequeue(20 + IV.hi)
    assert out.position == 20
    assert out.candidate_fp == prefix(20)
    assert out.entry_fp == prefix(26)
    assert (q.ap_first, q.ap_count) == (22, 2)
    assert q.ap_fp == prefix(22)
    assert q.satellite(24) == FullSI(prefix(24), prefix(30))


def test_dequeue_empty_and_wrong_time():
    q = progression_queue()
    assert q.dequeue(5) is None
    enter(q, 20)
    assert q.dequeue(28) is None
    assert len(q) == 1


def test_explicit_queue_and_exit_times():
    text = "c" * 60
    q = CandidateFingerprintQueue(PatternInterval(4, 7), F)
    assert q.peek_next_exit() is None
    for c in (45, 47):
        assert q.enqueue(c, prefix(c + 4, text), prefix(c, text)) is True
    assert q.peek_next_exit() == 52
    out = q.dequeue(52)
    assert out.position == 45 and out.entry_fp == prefix(49, text)
    assert q.peek_next_exit() == 54
    assert q.dequeue(54).position == 47
    assert q.peek_next_exit() is None


def test_reduced_info_is_kept_explicit():
    q = progression_queue()
    assert q.enqueue(20, prefix(26)) is True
    assert q.satellite(20) == ReducedSI(prefix(26))
    assert q.dequeue(29).candidate_fp is None


def test_enqueue_preconditions():
    q = progression_queue()
    with pytest.raises(ValueError):
        q.enqueue(21, prefix(26), prefix(21))
    enter(q, 22)
    with pytest.raises(ValueError):
        enter(q, 20)


def test_words_used():
    text = "c" * 40
    q = CandidateFingerprintQueue(PatternInterval(4, 7), F, NO_UI)
    assert q.words_used() == QUEUE_WORDS
    for c in range(5):
        q.enqueue(c, prefix(c + 4, text), prefix(c, text))
    assert q.words_used() == QUEUE_WORDS + 5 * ENTRY_WORDS

    unary = CandidateFingerprintQueue(PatternInterval(2, 3), F, ui_of("aaaa", 2, 3))
    a = "a" * 1100
    unary.enqueue(0, prefix(2, a), prefix(0, a))
    single = unary.words_used()
    for c in range(1, 1000):
        unary.enqueue(c, prefix(c + 2, a), prefix(c, a))
    assert unary.ap_count == 1000
    assert unary.words_used() == single


def test_dump():
    q = progression_queue()
    enter(q, 20)
    enter(q, 22)
    enter(q, 27, "x" * 20 + "abababab" + "x" * 10)
    assert q.dump() == "20 ap\n22 ap\n27 explicit"
