"""Seeded pattern/text generators shared by difftest, bench and the test suite."""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from typing import Iterator


@dataclass(frozen=True)
class Case:
    pattern: str
    text: str
    family: str = "random"


def _alphabet(size: int) -> str:
    return string.ascii_lowercase[:size]


def punch(rng: random.Random, s: str, count: int) -> str:
    """Replace ``count`` distinct positions of ``s`` by wildcards."""
    chars = list(s)
    for k in rng.sample(range(len(chars)), min(count, len(chars))):
        chars[k] = "?"
    return "".join(chars)


def random_case(
    rng: random.Random,
    alphabet_sizes: tuple[int, ...] = (2, 3, 26),
    m_range: tuple[int, int] = (1, 64),
    d_max: int = 8,
    n_max: int = 2048,
) -> Case:
    """Uniform pattern with ``d <= min(m, d_max)`` wildcards and a text of length in ``[m, n_max]``."""
    sigma = _alphabet(rng.choice(alphabet_sizes))
    m = rng.randint(*m_range)
    body = "".join(rng.choices(sigma, k=m))
    pattern = punch(rng, body, rng.randint(0, min(m, d_max)))
    n = rng.randint(m, max(m, n_max))
    text = "".join(rng.choices(sigma, k=n))
    return Case(pattern, text, f"random-{len(sigma)}")


def unary_cases(m_max: int = 64, n: int = 2048) -> Iterator[Case]:
    """``T = a^n`` against ``P = (a^k ?)^j a^k`` for every fitting ``k, j``."""
    for k in range(1, m_max + 1):
        for j in range(0, m_max + 1):
            m = j * (k + 1) + k
            if m > m_max:
                break
            yield Case(("a" * k + "?") * j + "a" * k, "a" * n, "unary")


def periodic_cases(rng: random.Random, count: int, m_max: int = 64, n_max: int = 2048, d_max: int = 8) -> Iterator[Case]:
    """Texts of period 2 or 3 with patterns cut from them, punched with wildcards.

    A few text characters are flipped so that some alignments fail late.
    """
    for _ in range(count):
        period = rng.choice(("ab", "abc", "aab", "aba"))
        n = rng.randint(1, n_max)
        text = list((period * (n // len(period) + 2))[:n])
        for _ in range(rng.randint(0, 3)):
            text[rng.randrange(n)] = rng.choice("abc")
        text = "".join(text)
        m = rng.randint(1, min(m_max, n))
        off = rng.randrange(len(period))
        body = (period * (m // len(period) + 3))[off : off + m]
        yield Case(punch(rng, body, rng.randint(0, min(m, d_max))), text, f"periodic-{len(period)}")


def boundary_cases(rng: random.Random, count: int, m_max: int = 64, n_max: int = 2048, d_max: int = 8) -> Iterator[Case]:
    """Patterns whose first and/or last symbol is a wildcard."""
    for _ in range(count):
        sigma = _alphabet(rng.choice((1, 2, 3)))
        m = rng.randint(1, m_max)
        body = rng.choices(sigma, k=m)
        where = rng.choice(("head", "tail", "both"))
        if where in ("head", "both"):
            body[0] = "?"
        if where in ("tail", "both"):
            body[-1] = "?"
        pattern = punch(rng, "".join(body), rng.randint(0, max(0, min(m, d_max) - 2)))
        n = rng.randint(m, max(m, n_max))
        yield Case(pattern, "".join(rng.choices(sigma, k=n)), "boundary")


def fibonacci_word(n: int) -> str:
    a, b = "a", "ab"
    while len(b) < n:
        a, b = b, b + a
    return b[:n]


def fibonacci_cases(rng: random.Random, count: int, m_max: int = 64, n_max: int = 2048, d_max: int = 8) -> Iterator[Case]:
    """Factors of the Fibonacci word, punched, against a prefix of it."""
    for _ in range(count):
        n = rng.randint(1, n_max)
        text = fibonacci_word(n)
        m = rng.randint(1, min(m_max, n))
        off = rng.randint(0, n - m)
        yield Case(punch(rng, text[off : off + m], rng.randint(0, min(m, d_max))), text, "fibonacci")


def adversarial_cases(
    rng: random.Random,
    count: int = 100,
    m_max: int = 64,
    n_max: int = 2048,
    d_max: int = 8,
    unary_n: int | None = None,
) -> Iterator[Case]:
    """Unary, periodic and wildcard-at-boundary families.

    Unary texts have length ``unary_n`` (default ``n_max``).
    """
    unary = unary_cases(m_max, n_max if unary_n is None else unary_n)
    yield from (c for c in unary if c.pattern.count("?") <= d_max)
    yield from periodic_cases(rng, count, m_max, n_max, d_max)
    yield from boundary_cases(rng, count, m_max, n_max, d_max)


def periodic_pattern(rng: random.Random, m_max: int = 24, period_max: int = 4, wildcards_max: int = 3, sigma: int = 3) -> str:
    """A string of period at most ``period_max`` with up to ``wildcards_max`` punched wildcards."""
    period = "".join(rng.choice(_alphabet(sigma)) for _ in range(rng.randint(1, period_max)))
    m = rng.randint(1, m_max)
    body = (period * (m // len(period) + 1))[:m]
    return punch(rng, body, rng.randint(0, min(m, wildcards_max)))


def text_for(rng: random.Random, pattern: str, n: int, sigma: int = 3) -> str:
    """A text that plants copies of the pattern (wildcards filled randomly) among noise."""
    alphabet = _alphabet(sigma)
    out: list[str] = []
    while len(out) < n:
        if rng.random() < 0.5:
            out.extend(rng.choice(alphabet) if c == "?" else c for c in pattern)
        else:
            out.extend(rng.choice(alphabet) for _ in range(rng.randint(1, len(pattern) + 1)))
    return "".join(out[:n])
