"""Split a pattern into columns of stride q and match the column ids instead.

A prime q turns the pattern into q interleaved columns.  Wildcard-free columns
are matched in the text by a rolling dictionary; the resulting id stream is
matched against the column pattern by the ordinary queue engine.  A set of
primes covers the pattern when every non-wildcard index sits in a clean column
for at least one of them.
"""

from wildstream import SmallWPMatcher, build_offset_instance, oracle_match
from wildstream.offset import columns, greedy_prime_cover
from wildstream.symbols import decode_pattern, encode_pattern

pattern = "abcab?abcabcabcabcabc"
p = encode_pattern(pattern)
print(f"pattern {pattern!r}, stride 5:")
for r, col in enumerate(columns(p, 5)):
    print(f"  residue {r}: {decode_pattern(col)}")
inst = build_offset_instance(pattern, 5, "floor")
print("floor-class column pattern:", ["?" if x < 0 else x for x in inst.column_pattern])

wild = [k for k, c in enumerate(pattern) if c == "?"]
cover = greedy_prime_cover(len(pattern), wild)
print("greedy prime cover:", cover.primes)

matcher = SmallWPMatcher.build(pattern, primes=cover.primes)
text = "abcabcabcabcabcabcabcabc"
print("matches:", matcher.feed(text), "oracle:", oracle_match(text, pattern).positions)
