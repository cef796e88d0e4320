import random

from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import FORMULA_CORPUS, formulas, random_asts, terms
from pradagger.coding import (
    cantor_pair, cantor_unpair, cc_code, decode_formula, decode_sequence, decode_term,
    diag_code, encode_formula, encode_sequence, encode_term, length, line, neg_code,
    numeral_code, subst_code,
)
from pradagger.syntax import (
    BOT, W, Eq, Implies, Not, Numeral, Term, Var, curry_conditional, free_vars,
    parse_formula, substitute,
)
from pradagger.tower import curry_sequence, e_formula


def _pair_by_hand(x, y):
    return (x + y) * (x + y + 1) // 2 + y


def test_numeral_zero_code():
    assert encode_term(Numeral(0)) == _pair_by_hand(1, 0) == 1
    assert numeral_code(0) == 1


def test_numeral_two_code():
    assert numeral_code(2) == _pair_by_hand(1, 2) == 8


def test_numeral_code_matches_encoder():
    for n in (0, 1, 7, 10**30, 2**300 + 5):
        assert numeral_code(n) == encode_term(Numeral(n))


def test_falsum_round_trip():
    assert decode_formula(encode_formula(BOT)) == BOT


def test_off_image_values_decode_to_none():
    # tag 0 is unused; C(0, y) for any y is outside the image of every decoder
    huge = cantor_pair(0, 10**400)
    assert decode_term(huge) is None
    assert decode_formula(huge) is None
    assert decode_sequence(huge) is None
    assert decode_formula(0) is None
    assert decode_term(-3) is None
    # a term code is not a formula code and vice versa
    assert decode_formula(encode_term(Var(1))) is None
    assert decode_term(encode_formula(BOT)) is None


def test_decoders_are_total_on_small_numbers():
    for n in range(20000):
        for dec in (decode_term, decode_formula, decode_sequence):
            out = dec(n)
            if out is not None:
                enc = {decode_term: encode_term, decode_formula: encode_formula,
                       decode_sequence: encode_sequence}[dec]
                assert enc(out) == n


def test_cantor_pair_inverse():
    rng = random.Random(3)
    for _ in range(500):
        x, y = rng.getrandbits(rng.randint(1, 400)), rng.getrandbits(rng.randint(1, 400))
        assert cantor_unpair(cantor_pair(x, y)) == (x, y)
        assert cantor_pair(x, y) == _pair_by_hand(x, y)


def test_diag_code_sentinel_and_value():
    assert diag_code(0) == 0
    f = Eq(Var(W), Var(W))
    n = encode_formula(f)
    assert diag_code(n) == encode_formula(Eq(Numeral(n), Numeral(n)))
    assert diag_code(encode_formula(Eq(Var(1), Var(1)))) == 0


def test_diag_code_of_enumerated_member_is_delta(p):
    e = e_formula(p)
    rec = curry_sequence(p)
    delta = rec.wffs[1].antecedent
    assert diag_code(encode_formula(e)) == encode_formula(delta)
    assert cc_code(diag_code(encode_formula(e))) == encode_formula(Implies(delta, BOT))


def test_cc_and_neg_codes():
    assert cc_code(encode_formula(BOT)) == encode_formula(Implies(BOT, BOT))
    assert decode_formula(0) is None and neg_code(0) == 0
    f = parse_formula("#1 < v2")
    assert neg_code(encode_formula(f)) == encode_formula(Not(f))
    assert cc_code(encode_formula(f)) == encode_formula(curry_conditional(f))


def test_line_length_subst():
    a, b = parse_formula("#0 = #0"), parse_formula("(bot => bot)")
    assert length(encode_sequence([BOT])) == 1
    n = encode_sequence([a, b])
    assert length(n) == 2
    assert line(n, 1) == encode_formula(a)
    assert line(n, 2) == encode_formula(b)
    assert line(n, 3) == 0 and line(n, 0) == 0
    assert length(encode_sequence([])) == 0
    assert length(encode_formula(a)) == 0
    expected = encode_formula(Eq(Numeral(2), Numeral(2)))
    assert subst_code(encode_formula(Eq(Var(3), Var(3))), 3, encode_term(Numeral(2))) == expected


def test_diag_code_agrees_with_substitution_on_corpus():
    checked = 0
    for s in FORMULA_CORPUS:
        f = parse_formula(s)
        if free_vars(f) != {W}:
            continue
        n = encode_formula(f)
        assert decode_formula(diag_code(n)) == substitute(f, W, Numeral(n))
        checked += 1
    assert checked >= 10


def test_injectivity_on_random_asts():
    seen = {}
    for ast in random_asts(3000, seed=5):
        is_term = isinstance(ast, Term)
        code = encode_term(ast) if is_term else encode_formula(ast)
        assert seen.setdefault((is_term, code), ast) == ast


def test_curry_sequences_are_fast(registry):
    import time
    for i in registry.binary_symbols():
        start = time.perf_counter()
        curry_sequence(i, registry)
        assert time.perf_counter() - start < 1.0


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_formula_round_trip(f):
    assert decode_formula(encode_formula(f)) == f


@settings(max_examples=300, deadline=None)
@given(terms)
def test_term_round_trip(t):
    assert decode_term(encode_term(t)) == t


@settings(max_examples=60, deadline=None)
@given(st.lists(formulas, max_size=3))
def test_sequence_round_trip_and_projections(fs):
    n = encode_sequence(fs)
    assert decode_sequence(n) == fs
    assert length(n) == len(fs)
    for i, f in enumerate(fs, start=1):
        assert line(n, i) == encode_formula(f)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**512))
def test_numeral_code_exceeds_value(n):
    assert numeral_code(n) > n
