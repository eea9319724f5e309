"""Stream a text through the matcher and watch reports arrive one character at a time.

Run with ``python3 demos/01_streaming_match.py``.
"""

from wildstream import MatcherState, oracle_match

pattern = "ab?ab?c"
text = "xxabcabdcabxabyc" * 3

state = MatcherState(pattern)
print(f"pattern {pattern!r}: {len(state.queues)} queues over intervals {state.partition.bounds}")

# Each report is available as soon as the last character of the occurrence arrives.
for alpha, ch in enumerate(text.encode()):
    for rep in state.process_char(ch):
        print(f"  t[{alpha}] = {chr(ch)!r} completes an occurrence starting at {rep.start}")

print("oracle:", oracle_match(text, pattern).positions)
m = state.snapshot_metrics()
print(f"{m.chars} chars, {m.dequeues} queue exits, {m.assassinations} dropped, peak {m.words_used_peak} words")
