"""Decimal conversion for codes that outgrow CPython's int/str digit limit."""

from __future__ import annotations

import hashlib

import gmpy2

ABBREV_DIGITS = 80


def to_decimal(n: int) -> str:
    if n < 0:
        return "-" + to_decimal(-n)
    if n < 10**18:
        return str(n)
    return gmpy2.mpz(n).digits(10)


def from_decimal(s: str) -> int:
    s = s.strip()
    if not s or not (s.isdigit() or (s[0] == "-" and s[1:].isdigit())):
        raise ValueError(f"not a decimal integer: {s[:40]!r}")
    if len(s) <= 18:
        return int(s)
    return int(gmpy2.mpz(s, 10))


def digest(n: int) -> str:
    """Short sha256 fingerprint of the big-endian bytes of ``n``."""
    raw = n.to_bytes(max(1, (n.bit_length() + 7) // 8), "big")
    return hashlib.sha256(raw).hexdigest()[:16]


def abbreviate(n: int, limit: int = ABBREV_DIGITS) -> str:
    """Decimal form, or a bit-length+digest stand-in when longer than ``limit`` digits.

    The stand-in never converts ``n`` to decimal, which for codes of
    millions of bits would dominate the cost of printing a trace.
    """
    if n.bit_length() <= 3 * limit:
        text = to_decimal(n)
        if len(text) <= limit:
            return text
    return f"<{n.bit_length()} bits sha256:{digest(n)}>"
