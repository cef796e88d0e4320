import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pradagger.coding import (
    cc_code, decode_sequence, diag_code, encode_formula, encode_sequence,
)
from pradagger.fixed_point import build_delta
from pradagger.kernel import CoreOracle, check_proof
from pradagger.outcome import Budget, BudgetExceeded
from pradagger.syntax import (
    BOT, W, Const, Eq, FnApp, Implies, Not, Numeral, Var, cc, diag, diagonalize, free_vars,
    mentions_const, mentions_numeral, negate, parse_formula, replace_const,
)
from pradagger.tower import (
    KINDS, Query, TowerOracle, curry_sequence, e_formula, eliminate_constants, g_eval,
    in_S_m, is_m_bounded_proof, recognize_A_dagger, recognize_A_star, recognize_Aa,
)

from corpora import constant_derivations

F = parse_formula


def _total_binary(registry):
    return [i for i in registry.binary_symbols() if not registry.lookup(i, 2).is_oracle]


# the enumeration and Curry sequences

def test_e_formula_zero():
    assert e_formula(0) == F("f0^2(a0, #0) = cc(diag(w))")
    assert e_formula(0) == Eq(FnApp(0, 2, (Const(0), Numeral(0))), cc(diag(Var(W))))


def test_e_formula_has_one_free_variable(registry):
    for i in registry.binary_symbols():
        assert free_vars(e_formula(i)) == {W}


def test_e_formula_unregistered_index_is_error(registry):
    with pytest.raises(ValueError):
        e_formula(max(registry.binary_symbols()) + 1)


def test_e_formula_p_is_delta_precursor(p):
    e = e_formula(p)
    assert e == Eq(FnApp(p, 2, (Const(p), Numeral(p))), cc(diag(Var(W))))
    assert diagonalize(e, encode_formula(e)) == build_delta(p)


def test_curry_sequence_p_starts_with_neg_delta(p):
    rec = curry_sequence(p)
    delta = build_delta(p)
    assert rec.wffs[0] == negate(delta)
    assert rec.wffs[1] == Implies(delta, BOT)
    assert rec.constant_axiom == Eq(Const(p), Numeral(rec.c_i))


def test_self_reference_for_small_indices(registry):
    for i in range(9):
        rec = curry_sequence(i)
        assert rec.c_i == encode_sequence(list(rec.wffs))
        assert decode_sequence(rec.c_i) == list(rec.wffs)
        e = e_formula(i)
        assert rec.wffs[0] == negate(diagonalize(e, encode_formula(e)))
        assert rec.wffs[1] == Implies(rec.diagonal, BOT)
        for w in rec.wffs:
            assert mentions_const(w, i)
            assert not mentions_numeral(w, rec.c_i)


# Aa

def test_aa_examples():
    rec = curry_sequence(3)
    assert rec.c_i != 0
    assert recognize_Aa(encode_formula(Eq(Const(3), Numeral(rec.c_i)))).holds
    assert recognize_Aa(encode_formula(Eq(Const(3), Numeral(0)))).fails
    assert recognize_Aa(encode_formula(F("#0 = #0"))).holds
    assert recognize_Aa(0).fails


def test_aa_accepts_core_axioms_and_rejects_others():
    assert recognize_Aa(F("(S(v1) = S(v2) => v1 = v2)")).holds
    assert recognize_Aa(F("v1 = v2")).fails
    assert recognize_Aa(Eq(Const(999), Numeral(1))).fails


# S_m

def test_s_m_cc_diag_example():
    j = encode_formula(e_formula(3))
    k = cc_code(diag_code(j))
    assert in_S_m(Eq(cc(diag(Numeral(j))), Numeral(k)), 0).holds
    assert in_S_m(Not(Eq(cc(diag(Numeral(j))), Numeral(k))), 0).fails
    assert in_S_m(Not(Eq(cc(diag(Numeral(j))), Numeral(k + 1))), 0).holds


def test_s_m_binary_symbol_examples(registry):
    for i in _total_binary(registry):
        value = registry.evaluate(i, 2, [6, i])
        right = Eq(FnApp(i, 2, (Numeral(6), Numeral(i))), Numeral(value))
        wrong = Eq(FnApp(i, 2, (Numeral(6), Numeral(i))), Numeral(value + 1))
        assert in_S_m(right, i).holds
        assert in_S_m(wrong, i).fails
        assert in_S_m(Not(wrong), i).holds
        assert in_S_m(Not(right), i).fails
        # bound below the index, or second argument not the index: not an L-shape
        if i > 0:
            assert in_S_m(right, i - 1).fails
        other = Eq(FnApp(i, 2, (Numeral(6), Numeral(i + 1))),
                   Numeral(registry.evaluate(i, 2, [6, i + 1])))
        assert in_S_m(other, 20).fails


def test_s_m_rejects_non_l_shapes():
    assert in_S_m(F("#0 = #0"), 5).fails
    assert in_S_m(F("cc(diag(v1)) = #3"), 5).fails
    assert in_S_m(F("f0^2(a0, #0) = #3"), 5).fails


def test_s_p_query_on_h_is_ill_founded(p, tower):
    h = curry_sequence(p).c_i
    k = cc_code(encode_formula(build_delta(p)))
    q = Not(Eq(FnApp(p, 2, (Numeral(h), Numeral(p))), Numeral(k)))
    out = in_S_m(q, p)
    assert out.ill_founded
    assert out.cycle[0] == out.cycle[-1]
    assert {c.kind for c in out.cycle} >= {"S_m", "g-eval", "bounded-proof", "A†"}


# A* and A-dagger

def test_a_dagger_base_via_aa():
    rec = curry_sequence(2)
    for m in (0, 3, 9):
        assert recognize_A_dagger(rec.constant_axiom, m).holds
        assert recognize_A_star(rec.constant_axiom, m).holds


def test_clause_three_and_four(registry, tower):
    via_clause = 0
    for i in _total_binary(registry):
        c = tower.constant_value(i)
        k = registry.evaluate(i, 2, [c, i])
        pos = Eq(FnApp(i, 2, (Const(i), Numeral(i))), Numeral(k))
        neg = Not(Eq(FnApp(i, 2, (Const(i), Numeral(i))), Numeral(k + 1)))
        s = tower.session()
        assert s.recognize_A_dagger(pos, i).holds
        assert s.recognize_A_dagger(neg, i).holds
        assert recognize_A_dagger(Eq(pos.l, Numeral(k + 1)), i).fails
        assert recognize_A_dagger(Not(pos), i).fails
        if recognize_A_star(pos, i).fails:
            # not an axiom outright, so it must come from the constant clause
            labels = {label for (_, _, label) in s.edges}
            assert {"clause (3)", "clause (4)"} <= labels
            via_clause += 1
    assert via_clause >= 5


def test_a_dagger_of_neg_delta_is_ill_founded(p):
    out = recognize_A_dagger(negate(build_delta(p)), p)
    assert out.ill_founded
    assert out.cycle[0] == out.cycle[-1] == Query("A†", negate(build_delta(p)), p)
    assert all(q.kind in KINDS for q in out.cycle)


def test_proposition_seven(registry, tower):
    m = max(registry.binary_symbols())
    checked = 0
    for i in _total_binary(registry):
        if i > 8:
            continue
        for j in (encode_formula(e_formula(i)), encode_formula(F("w = #0")), 7):
            atom = Eq(FnApp(i, 2, (Const(i), Numeral(i))), cc(diag(Numeral(j))))
            outcomes = [recognize_A_dagger(atom, m), recognize_A_dagger(Not(atom), m)]
            assert not any(o.ill_founded for o in outcomes)
            assert sum(o.holds for o in outcomes) == 1, (i, j)
            checked += 1
    assert checked >= 20


def test_budget_exhaustion_is_distinct_from_ill_foundedness(p):
    with pytest.raises(BudgetExceeded):
        recognize_A_dagger(negate(build_delta(p)), p, budget=Budget(max_steps=2))


# bounded proofs and g

def test_g_eval_of_non_sequence_is_zero():
    assert g_eval(0, 0) == 0
    assert g_eval(encode_formula(F("#0 = #0")), 4) == 0


def test_g_eval_vacuously_bounded_one_line_proof():
    line = F("#0 = #0")
    assert g_eval(encode_sequence([line]), 0) == encode_formula(line)
    assert is_m_bounded_proof(encode_sequence([line]), 0).holds


def test_bounded_proof_threshold(registry):
    m = 3
    i = m + 1
    assert i in _total_binary(registry)
    value = registry.evaluate(i, 2, [7, i])
    axiom = Eq(FnApp(i, 2, (Numeral(7), Numeral(i))), Numeral(value))
    proof = encode_sequence([axiom, F("(#0 = #0 => #0 = #0)")])
    assert is_m_bounded_proof(proof, m).fails
    assert g_eval(proof, m) == 0
    assert is_m_bounded_proof(proof, m + 1).holds
    assert g_eval(proof, m + 1) == encode_formula(F("(#0 = #0 => #0 = #0)"))


def test_bounded_proof_rules():
    seq = [F("~#0 = #1"), F("(#0 = #1 => bot)")]
    assert is_m_bounded_proof(encode_sequence(seq), 0).holds
    bad = [F("#0 = #1")]
    assert is_m_bounded_proof(encode_sequence(bad), 9).fails


def test_h_certification_is_ill_founded(p):
    out = is_m_bounded_proof(curry_sequence(p).c_i, p)
    assert out.ill_founded


# conservativity

def test_conservativity_smoke(registry, tower):
    core = CoreOracle(registry)
    for i in range(9):
        for d in constant_derivations(i, tower):
            assert check_proof(d, TowerOracle(tower)).valid
            # plain PRA knows nothing of a_i
            assert not check_proof(d, core).valid
            plain = eliminate_constants(d, tower)
            c = tower.constant_value(i)
            for ln, orig in zip(plain.lines, d.lines):
                assert ln.formula == replace_const(orig.formula, i, c)
                assert not mentions_const(ln.formula, i)
            assert check_proof(plain, core).valid
            assert check_proof(plain, TowerOracle(tower)).valid


# memoization, monotonicity

def _random_query(rng, registry, tower):
    total = _total_binary(registry)
    kind = rng.choice(["A†", "A*", "S_m", "Aa"])
    i = rng.choice(total)
    m = rng.randrange(10)
    first = Const(i) if rng.random() < 0.4 else Numeral(rng.randrange(20))
    second = Numeral(i if rng.random() < 0.8 else rng.randrange(10))
    if rng.random() < 0.3:
        j = rng.choice([encode_formula(e_formula(i)), rng.randrange(50)])
        right = cc(diag(Numeral(j)))
        if rng.random() < 0.5:
            right = Numeral(cc_code(diag_code(j)))
    else:
        c = tower.constant_value(i) if isinstance(first, Const) else first.value
        exact = registry.evaluate(i, 2, [c, second.value])
        right = Numeral(exact if rng.random() < 0.5 else rng.randrange(20))
    lhs = FnApp(i, 2, (first, second))
    if rng.random() < 0.2:
        lhs = cc(diag(Numeral(rng.randrange(50))))
    f = Eq(lhs, right)
    if rng.random() < 0.5:
        f = Not(f)
    return Query(kind, f, m)


def test_memoized_and_unmemoized_agree(registry, tower):
    rng = random.Random(41)
    memo = tower.session(Budget(max_seconds=None))
    agreed = 0
    for _ in range(200):
        q = _random_query(rng, registry, tower)
        fresh = tower.session(Budget(max_seconds=None), memoize=False)
        a, b = memo.ask(q), fresh.ask(q)
        if not (a.ill_founded or b.ill_founded):
            assert a == b, q
            agreed += 1
    assert agreed >= 150
    assert memo.memo


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 9), st.integers(0, 30), st.integers(0, 40), st.booleans(),
       st.integers(0, 9))
def test_s_m_monotone_in_m(i, j, k, positive, m):
    f = Eq(FnApp(i, 2, (Numeral(j), Numeral(i))), Numeral(k))
    f = f if positive else Not(f)
    if in_S_m(f, m).holds:
        for bigger in range(m + 1, 11):
            assert in_S_m(f, bigger).holds


def test_bounded_proof_monotone_in_m(registry):
    rng = random.Random(5)
    total = _total_binary(registry)
    for _ in range(40):
        lines = []
        for _ in range(rng.randint(1, 3)):
            i = rng.choice(total)
            j = rng.randrange(12)
            v = registry.evaluate(i, 2, [j, i])
            lines.append(Eq(FnApp(i, 2, (Numeral(j), Numeral(i))),
                            Numeral(v if rng.random() < 0.8 else v + 1)))
        n = encode_sequence(lines)
        holds = [is_m_bounded_proof(n, m).holds for m in range(11)]
        first = holds.index(True) if True in holds else 11
        assert all(holds[first:])
