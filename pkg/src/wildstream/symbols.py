"""Conversion of user-facing patterns and texts to integer symbol sequences.

Text symbols are nonnegative integers (bytes, code points, or column ids).
Inside a pattern the wildcard is the sentinel ``WILDCARD = -1``.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

WILDCARD = -1

PatternLike = Union[str, bytes, Sequence[int]]


def encode_pattern(pattern: PatternLike, wildcard: str | int | None = "?") -> tuple[int, ...]:
    """Map a pattern to a tuple of symbols, wildcards becoming ``WILDCARD``.

    ``wildcard`` names the pattern symbol treated as the wildcard; integer
    sequences may already carry ``WILDCARD`` entries.
    """
    if isinstance(pattern, str):
        codes = [ord(c) for c in pattern]
    else:
        codes = list(pattern)
    if isinstance(wildcard, str):
        if len(wildcard) != 1:
            raise ValueError("wildcard must be a single character")
        wildcard = ord(wildcard)
    out = []
    for c in codes:
        if c == WILDCARD or (wildcard is not None and c == wildcard):
            out.append(WILDCARD)
        elif c < 0:
            raise ValueError(f"negative pattern symbol {c}")
        else:
            out.append(c)
    return tuple(out)


def encode_text(text: str | bytes | Iterable[int]) -> list[int]:
    if isinstance(text, str):
        return list(map(ord, text))
    return list(text)


def wildcard_positions(pattern: Sequence[int]) -> list[int]:
    return [k for k, c in enumerate(pattern) if c == WILDCARD]


def decode_pattern(pattern: Sequence[int], wildcard: str = "?") -> str:
    """Readable form of an encoded pattern (for diagnostics)."""
    return "".join(wildcard if c == WILDCARD else chr(c) if c < 0x110000 else "#" for c in pattern)
