"""Why periodic inputs do not blow up the candidate store.

On ``T = a^n`` every position is a live candidate of ``P = (a^k ?)^j a^k``.  The
naive walk keeps all of them; the queue engine keeps equal-entrance candidates
as one arithmetic progression per queue, so its explicit storage stays tiny.
"""

from wildstream import MatcherState, naive_stream

for k, j in [(7, 1), (15, 3), (31, 3), (63, 3)]:
    pattern = ("a" * k + "?") * j + "a" * k
    text = "a" * 4 * len(pattern)
    engine = MatcherState(pattern)
    naive = naive_stream(pattern)
    assert engine.feed(text) == naive.feed(text)
    e, n = engine.snapshot_metrics(), naive.snapshot_metrics()
    print(
        f"m={len(pattern):4d} d={j}: queue engine peak explicit {e.max_total_explicit:3d} "
        f"({len(engine.queues)} queues), naive peak live {n.max_total_explicit:4d}"
    )
