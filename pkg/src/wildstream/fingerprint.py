"""Sliding polynomial fingerprints over the Mersenne prime field GF(2^61 - 1).

A string ``s`` maps to ``sum(s[i] * base**i) mod p``.  Each :class:`Fingerprint`
also carries ``base**len`` and its inverse so that concatenation and removal of
a known prefix or suffix are O(1) field operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

MERSENNE_61 = (1 << 61) - 1
DEFAULT_SEED = 0x5EED


class Fingerprint(NamedTuple):
    value: int
    length: int
    base_pow: int
    inv_base_pow: int


EMPTY = Fingerprint(0, 0, 1, 1)
_new = tuple.__new__


@dataclass(frozen=True)
class FieldParams:
    """Modulus and random base shared by every fingerprint of one session.

    Two instances built from the same seed are identical.
    """

    seed: int = DEFAULT_SEED
    prime_modulus: int = MERSENNE_61
    base: int = field(init=False)
    inv_base: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        p = self.prime_modulus
        base = random.Random(self.seed).randint(2, p - 2)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "inv_base", pow(base, p - 2, p))

    def empty(self) -> Fingerprint:
        return EMPTY

    def of_char(self, ch: int) -> Fingerprint:
        return Fingerprint(ch % self.prime_modulus, 1, self.base, self.inv_base)

    def append(self, fp: Fingerprint, ch: int) -> Fingerprint:
        p = self.prime_modulus
        value, length, bp, ibp = fp
        return _new(
            Fingerprint, ((value + ch * bp) % p, length + 1, bp * self.base % p, ibp * self.inv_base % p)
        )

    def concat(self, u: Fingerprint, v: Fingerprint) -> Fingerprint:
        p = self.prime_modulus
        uv, ul, ub, ui = u
        vv, vl, vb, vi = v
        return _new(Fingerprint, ((uv + vv * ub) % p, ul + vl, ub * vb % p, ui * vi % p))

    def remove_prefix(self, w: Fingerprint, u: Fingerprint) -> Fingerprint:
        """Fingerprint of ``v`` given those of ``w = u + v`` and ``u``."""
        if u.length > w.length:
            raise ValueError(f"prefix of length {u.length} longer than string of length {w.length}")
        p = self.prime_modulus
        wv, wl, wb, wi = w
        uv, ul, ub, ui = u
        return _new(Fingerprint, ((wv - uv) * ui % p, wl - ul, wb * ui % p, wi * ub % p))

    def remove_suffix(self, w: Fingerprint, v: Fingerprint) -> Fingerprint:
        """Fingerprint of ``u`` given those of ``w = u + v`` and ``v``."""
        if v.length > w.length:
            raise ValueError(f"suffix of length {v.length} longer than string of length {w.length}")
        p = self.prime_modulus
        bp = w.base_pow * v.inv_base_pow % p
        return Fingerprint(
            (w.value - v.value * bp) % p,
            w.length - v.length,
            bp,
            w.inv_base_pow * v.base_pow % p,
        )

    def splits_as(self, w: Fingerprint, u: Fingerprint, v: Fingerprint) -> bool:
        """Whether ``remove_prefix(w, u) == v``, i.e. ``w`` is ``u`` followed by ``v``.

        Checked by cross-multiplication, without inverses.
        """
        return (
            w.length == u.length + v.length
            and (w.value - u.value - v.value * u.base_pow) % self.prime_modulus == 0
        )

    def repeat(self, fp: Fingerprint, times: int) -> Fingerprint:
        """Fingerprint of ``s * times`` by binary doubling, O(log times)."""
        result = EMPTY
        square = fp
        while times:
            if times & 1:
                result = self.concat(result, square)
            times >>= 1
            if times:
                square = self.concat(square, square)
        return result

    def of(self, s: Iterable[int] | str | bytes) -> Fingerprint:
        """Fingerprint of a whole string, evaluated directly from the polynomial."""
        p = self.prime_modulus
        b = self.base
        value = 0
        bp = 1
        length = 0
        for ch in _symbols(s):
            value = (value + ch * bp) % p
            bp = bp * b % p
            length += 1
        return Fingerprint(value, length, bp, pow(self.inv_base, length, p))

    def prefix_fingerprints(self, s: Sequence[int]) -> list[Fingerprint]:
        """``out[k]`` is the fingerprint of ``s[:k]``; ``len(out) == len(s) + 1``."""
        out = [EMPTY]
        fp = EMPTY
        for ch in s:
            fp = self.append(fp, ch)
            out.append(fp)
        return out

    def values_of_rows(self, rows: np.ndarray) -> list[int]:
        """Fingerprint values of each row of a 2-D array of byte symbols.

        Vectorised for bulk collision scans.  Powers of the base are split into
        a low 32-bit and a high 29-bit half, so every product and partial sum
        stays below 2**53 and float64 matrix products are exact.
        """
        rows = np.asarray(rows)
        if rows.ndim != 2:
            raise ValueError("expected a 2-D array")
        if rows.size and (rows.min() < 0 or rows.max() > 255):
            raise ValueError("bulk evaluation supports byte symbols only")
        length = rows.shape[1]
        if length > 2048:
            raise ValueError("bulk evaluation is exact only up to length 2048")
        p = self.prime_modulus
        pows = [1] * length
        for k in range(1, length):
            pows[k] = pows[k - 1] * self.base % p
        lo = np.array([x & 0xFFFFFFFF for x in pows], dtype=np.float64)
        hi = np.array([x >> 32 for x in pows], dtype=np.float64)
        r = rows.astype(np.float64)
        s_lo = (r @ lo).astype(np.int64)
        s_hi = (r @ hi).astype(np.int64)
        return [(int(a) + (int(b) << 32)) % p for a, b in zip(s_lo, s_hi)]


def _symbols(s: Iterable[int] | str | bytes) -> Iterable[int]:
    if isinstance(s, str):
        return (ord(c) for c in s)
    return s


# Free functions over a shared default field, for callers that do not carry
# their own FieldParams.
DEFAULT_FIELD = FieldParams()


def fp_empty() -> Fingerprint:
    return EMPTY


def fp_of(s: Iterable[int] | str | bytes, field: FieldParams = DEFAULT_FIELD) -> Fingerprint:
    return field.of(s)


def fp_append(fp: Fingerprint, ch: int | str, field: FieldParams = DEFAULT_FIELD) -> Fingerprint:
    return field.append(fp, ord(ch) if isinstance(ch, str) else ch)


def fp_concat(u: Fingerprint, v: Fingerprint, field: FieldParams = DEFAULT_FIELD) -> Fingerprint:
    return field.concat(u, v)


def fp_remove_prefix(w: Fingerprint, u: Fingerprint, field: FieldParams = DEFAULT_FIELD) -> Fingerprint:
    return field.remove_prefix(w, u)


def fp_remove_suffix(w: Fingerprint, v: Fingerprint, field: FieldParams = DEFAULT_FIELD) -> Fingerprint:
    return field.remove_suffix(w, v)
