"""Goedel numbering by node-tag Cantor pairing.

``code(node) = C(tag, payload)`` with ``C(x, y) = (x+y)(x+y+1)/2 + y``.
Numerals are coded atomically by value, so ``numeral_code(n) = C(1, n) > n``.
Argument and formula lists are folded right-to-left with ``C``. Small
fields share one header pair (``C(index, arity)`` for applications,
``C(var, bound)`` for bounded quantifiers, the length for sequences), so
the deepest child sits under only two pairings per node. Pairing runs on
gmpy2 integers; the public surface takes and returns plain ``int``.

Decoders are total: anything outside the image decodes to ``None``.
The arithmetized maps (``diag_code``, ``cc_code``, ...) return 0 off-image.
"""

from __future__ import annotations

from gmpy2 import isqrt_rem, mpz

from pradagger.syntax import (
    BOT, W, BoundedExists, CaptureError, Const, Eq, Falsum, FnApp, Formula, Implies,
    Less, Not, Numeral, Succ, Term, Var, curry_conditional, free_vars, negate, substitute,
)

TAG_NUMERAL = 1
TAG_VAR = 2
TAG_CONST = 3
TAG_FNAPP = 4
TAG_FALSUM = 5
TAG_LESS = 6
TAG_EQ = 7
TAG_NOT = 8
TAG_IMPLIES = 9
TAG_EXISTS = 10
TAG_SEQUENCE = 11
TAG_SUCC = 12


def pair(x, y):
    s = x + y
    return ((s * (s + 1)) >> 1) + y


def unpair(z):
    # with s = isqrt(8z+1) and w = (s-1)//2, the triangle T(w) = ((2w+1)^2 - 1)/8
    # is recovered from the square root remainder, saving a full-size product
    s, rem = isqrt_rem((mpz(z) << 3) + 1)
    y = (rem >> 3) if s & 1 else ((rem + 2 * s - 1) >> 3)
    return ((s - 1) >> 1) - y, y


def cantor_pair(x: int, y: int) -> int:
    return int(pair(mpz(x), mpz(y)))


def cantor_unpair(z: int) -> tuple[int, int]:
    x, y = unpair(z)
    return int(x), int(y)


def _fold(items: list) -> mpz:
    acc = items[-1]
    for item in reversed(items[:-1]):
        acc = pair(item, acc)
    return acc


def _unfold(z, count: int):
    for _ in range(count - 1):
        head, z = unpair(z)
        yield head
    yield z


# Encoding

def _enc_term(t: Term) -> mpz:
    match t:
        case Numeral(n):
            return pair(TAG_NUMERAL, mpz(n))
        case Var(i):
            return pair(TAG_VAR, mpz(i))
        case Const(i):
            return pair(TAG_CONST, mpz(i))
        case Succ(inner):
            return pair(TAG_SUCC, _enc_term(inner))
        case FnApp(index, arity, args):
            header = pair(mpz(index), mpz(arity))
            return pair(TAG_FNAPP, pair(header, _fold([_enc_term(a) for a in args])))
    raise TypeError(f"not a term: {t!r}")


def _enc_formula(f: Formula) -> mpz:
    match f:
        case Falsum():
            return pair(TAG_FALSUM, mpz(0))
        case Less(l, r):
            return pair(TAG_LESS, pair(_enc_term(l), _enc_term(r)))
        case Eq(l, r):
            return pair(TAG_EQ, pair(_enc_term(l), _enc_term(r)))
        case Not(g):
            return pair(TAG_NOT, _enc_formula(g))
        case Implies(a, c):
            return pair(TAG_IMPLIES, pair(_enc_formula(a), _enc_formula(c)))
        case BoundedExists(v, bound, body):
            header = pair(mpz(v), _enc_term(bound))
            return pair(TAG_EXISTS, pair(header, _enc_formula(body)))
    raise TypeError(f"not a formula: {f!r}")


def _enc_sequence(fs: list[Formula]) -> mpz:
    if not fs:
        return pair(TAG_SEQUENCE, pair(mpz(0), mpz(0)))
    return pair(TAG_SEQUENCE, pair(mpz(len(fs)), _fold([_enc_formula(f) for f in fs])))


def encode_term(t: Term) -> int:
    return int(_enc_term(t))


def encode_formula(f: Formula) -> int:
    return int(_enc_formula(f))


def encode_sequence(fs: list[Formula]) -> int:
    return int(_enc_sequence(list(fs)))


def numeral_code(n: int) -> int:
    """Code of the numeral for ``n``; always strictly greater than ``n``."""
    return int(pair(mpz(TAG_NUMERAL), mpz(n)))


# Decoding

def _dec_term(z) -> Term | None:
    tag, payload = unpair(z)
    if tag == TAG_NUMERAL:
        return Numeral(int(payload))
    if tag == TAG_VAR:
        return Var(int(payload))
    if tag == TAG_CONST:
        return Const(int(payload))
    if tag == TAG_SUCC:
        inner = _dec_term(payload)
        if inner is None or isinstance(inner, Numeral):
            return None
        return Succ(inner)
    if tag == TAG_FNAPP:
        header, rest = unpair(payload)
        index, arity = unpair(header)
        if arity < 1:
            return None
        args = []
        for part in _unfold(rest, int(arity)):
            a = _dec_term(part)
            if a is None:
                return None
            args.append(a)
        return FnApp(int(index), int(arity), tuple(args))
    return None


def _dec_formula(z) -> Formula | None:
    tag, payload = unpair(z)
    if tag == TAG_FALSUM:
        return BOT if payload == 0 else None
    if tag in (TAG_LESS, TAG_EQ):
        lz, rz = unpair(payload)
        l, r = _dec_term(lz), _dec_term(rz)
        if l is None or r is None:
            return None
        return Less(l, r) if tag == TAG_LESS else Eq(l, r)
    if tag == TAG_NOT:
        g = _dec_formula(payload)
        return None if g is None else Not(g)
    if tag == TAG_IMPLIES:
        az, cz = unpair(payload)
        a = _dec_formula(az)
        c = _dec_formula(cz) if a is not None else None
        return None if c is None else Implies(a, c)
    if tag == TAG_EXISTS:
        header, fz = unpair(payload)
        v, bz = unpair(header)
        bound = _dec_term(bz)
        body = _dec_formula(fz) if bound is not None else None
        return None if body is None else BoundedExists(int(v), bound, body)
    return None


def _dec_sequence(z) -> list[Formula] | None:
    tag, payload = unpair(z)
    if tag != TAG_SEQUENCE:
        return None
    count, rest = unpair(payload)
    if count == 0:
        return [] if rest == 0 else None
    out = []
    for part in _unfold(rest, int(count)):
        f = _dec_formula(part)
        if f is None:
            return None
        out.append(f)
    return out


def _total(decoder, c: int):
    if not isinstance(c, int) or c < 0:
        return None
    return decoder(mpz(c))


def decode_term(c: int) -> Term | None:
    return _total(_dec_term, c)


def decode_formula(c: int) -> Formula | None:
    return _total(_dec_formula, c)


def decode_sequence(c: int) -> list[Formula] | None:
    return _total(_dec_sequence, c)


# Arithmetized syntactic maps (0 off-image)

def diag_code(n: int) -> int:
    f = decode_formula(n)
    if f is None or free_vars(f) != {W}:
        return 0
    return encode_formula(substitute(f, W, Numeral(n)))


def cc_code(n: int) -> int:
    f = decode_formula(n)
    return 0 if f is None else encode_formula(curry_conditional(f))


def neg_code(n: int) -> int:
    f = decode_formula(n)
    return 0 if f is None else encode_formula(negate(f))


def subst_code(n: int, var: int, t: int) -> int:
    f, term = decode_formula(n), decode_term(t)
    if f is None or term is None:
        return 0
    try:
        return encode_formula(substitute(f, var, term))
    except CaptureError:
        return 0


def length(n: int) -> int:
    fs = decode_sequence(n)
    return 0 if fs is None else len(fs)


def line(n: int, i: int) -> int:
    """Code of the ``i``-th (1-based) formula of the sequence coded by ``n``."""
    fs = decode_sequence(n)
    if fs is None or not 1 <= i <= len(fs):
        return 0
    return encode_formula(fs[i - 1])
