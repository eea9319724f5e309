"""Trade space for time: a periodic prefix handled by columns, the rest by queues.

``delta`` sets the threshold ``ceil(d ** delta)`` on the prefix's wildcard
period.  The report shows how much queue work the downstream intervals did.
"""

import json
import random

from wildstream import TradeoffState, amortized_report, oracle_match

rng = random.Random(0)
pattern = "abab?abab?ab" + "".join(rng.choice("ab") for _ in range(20)) + "?b"
text = "".join(rng.choice("ab") for _ in range(5000))
expected = oracle_match(text, pattern).positions

for delta in (0.0, 0.5, 1.0):
    state = TradeoffState.build(pattern, delta, seed=1)
    assert state.feed(text) == expected
    report = amortized_report(state)
    print(f"delta={delta}:", json.dumps({k: report[k] for k in ("tau", "i_star", "downstream_ops", "ops_per_char")}))
