"""Random ASTs and small shared corpora for the test suite."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from pradagger.syntax import (
    BOT, BoundedExists, Const, Eq, FnApp, Implies, Less, Not, Numeral, Succ, Var,
    parse_formula, succ,
)


MAX_NODES = 12
MAX_ARITY = 2
BIG_NUMERALS = 0.02


class _Budget:
    """Node allowance shared by one tree; once spent, every position becomes a leaf."""

    def __init__(self, nodes: int):
        self.nodes = nodes

    def spend(self) -> bool:
        self.nodes -= 1
        return self.nodes >= 0


def _leaf_term(rng: random.Random):
    roll = rng.randrange(4)
    if roll == 0:
        big = rng.random() < BIG_NUMERALS
        return Numeral(rng.getrandbits(256) if big else rng.randrange(50))
    if roll == 1:
        return Var(rng.randrange(6))
    if roll == 2:
        return Const(rng.randrange(10))
    return Numeral(0)


def random_term(rng: random.Random, depth: int, budget: _Budget | None = None):
    budget = budget or _Budget(MAX_NODES)
    if depth <= 1 or rng.random() < 0.3 or not budget.spend():
        return _leaf_term(rng)
    if rng.random() < 0.3:
        return succ(random_term(rng, depth - 1, budget))
    arity = rng.randint(1, MAX_ARITY)
    return FnApp(rng.randrange(12), arity,
                 tuple(random_term(rng, depth - 1, budget) for _ in range(arity)))


def random_formula(rng: random.Random, depth: int, budget: _Budget | None = None):
    budget = budget or _Budget(MAX_NODES)
    roll = rng.randrange(5)
    if depth <= 1 or roll == 0:
        return BOT
    if rng.random() < 0.2 or not budget.spend():
        cls = Eq if roll < 4 else Less
        return cls(random_term(rng, depth - 1, budget), random_term(rng, depth - 1, budget))
    roll = rng.randrange(3)
    if roll == 0:
        return Not(random_formula(rng, depth - 1, budget))
    if roll == 1:
        return Implies(random_formula(rng, depth - 1, budget),
                       random_formula(rng, depth - 1, budget))
    return BoundedExists(rng.randrange(6), random_term(rng, depth - 1, budget),
                         random_formula(rng, depth - 1, budget))


def random_asts(n: int, seed: int, max_depth: int = 8):
    """n random terms and formulas of depth at most max_depth, each within MAX_NODES interior nodes."""
    rng = random.Random(seed)
    out = []
    for k in range(n):
        depth = rng.randint(1, max_depth)
        out.append(random_formula(rng, depth) if k % 3 else random_term(rng, depth))
    return out


def ast_depth(node) -> int:
    match node:
        case FnApp(_, _, args):
            return 1 + max(ast_depth(a) for a in args)
        case Succ(inner) | Not(inner):
            return 1 + ast_depth(inner)
        case Eq(l, r) | Less(l, r):
            return 1 + max(ast_depth(l), ast_depth(r))
        case Implies(a, c):
            return 1 + max(ast_depth(a), ast_depth(c))
        case BoundedExists(_, bound, body):
            return 1 + max(ast_depth(bound), ast_depth(body))
    return 1


# hypothesis strategies

naturals = st.one_of(st.integers(0, 60), st.integers(0, 2**256))

leaf_terms = st.one_of(
    naturals.map(Numeral),
    st.integers(0, 6).map(Var),
    st.integers(0, 10).map(Const),
)


def _extend_terms(children):
    return st.one_of(
        children.map(succ),
        st.integers(1, 3).flatmap(
            lambda k: st.tuples(st.integers(0, 12), st.lists(children, min_size=k, max_size=k))
            .map(lambda ia: FnApp(ia[0], k, tuple(ia[1])))),
    )


terms = st.recursive(leaf_terms, _extend_terms, max_leaves=5)

atoms = st.one_of(
    st.just(BOT),
    st.builds(Eq, terms, terms),
    st.builds(Less, terms, terms),
)


def _extend_formulas(children):
    return st.one_of(
        children.map(Not),
        st.builds(Implies, children, children),
        st.builds(BoundedExists, st.integers(0, 6), terms, children),
    )


formulas = st.recursive(atoms, _extend_formulas, max_leaves=5)


ONE_VAR_CORPUS = [
    "w = w",
    "S(w) = #3",
    "w < #10",
    "~w = #0",
    "(w = #1 => bot)",
    "f0^2(w, #2) = #7",
    "(exists v1 < w) f1^2(v1, v1) = w",
    "(w = #2 & S(w) = #3)",
    "f3^1(w) = f4^1(S(w))",
    "cc(diag(w)) = f7^2(w, a2)",
]
"""Ten formulas with exactly w free and no occurrence of the g symbol (index 5)."""


def one_var_corpus():
    return [parse_formula(s) for s in ONE_VAR_CORPUS]


FORMULA_CORPUS = ONE_VAR_CORPUS + [
    "bot",
    "#0 = #0",
    "~#0 = S(v1)",
    "(S(v1) = S(v2) => v1 = v2)",
    "(v1 = v2 => (f0^2(v1, #1) = #3 => f0^2(v2, #1) = #3))",
    "(exists v2 < #5) v2 < v1",
    "~~bot",
    "(bot => (bot => bot))",
    "((v1 = #0 => bot) => ~v1 = #0)",
    "f9^2(a1, #1) = cc(diag(w))",
    "diag(#12) = #99",
    "(v1 < v2 <=> ~v2 < S(v1))",
    "a3 = #123456789012345678901234567890",
    "f12^3(v1, v2, v3) = f0^1(S(S(v4)))",
    "(exists w < f2^2(#1, #2)) ~(exists v1 < w) v1 = w",
    "~(v1 = v1 => ~bot)",
    "(#1 < #2 => (#2 < #3 => #1 < #3))",
    "f1^1(f0^1(#0)) = #1",
    "((v3 = #1 => v3 = #2) => (v3 = #2 => v3 = #1))",
    "S(S(S(v9))) = #3",
    "~(exists v4 < a4) f4^2(v4, #4) = a4",
    "(a0 = a1 & (a1 = a2 & a2 = a0))",
    "f6^2(#0, #0) < f7^2(#1, #1)",
    "~~~w = #0",
    "((bot => bot) => bot)",
    "v0 = w",
    "f2^1(v2) = f2^1(v2)",
    "((exists v1 < #3) v1 = #1 => bot)",
    "#1000000000000000000000000 < S(#1)",
    "f8^2(v8, #0) = v8",
    "f10^2(a10, #10) = cc(diag(#4))",
    "(w = w <=> bot)",
    "~f5^2(a5, #5) = #0",
    "(exists v3 < S(v1)) (exists v2 < v3) v2 < v1",
    "cc(#5) = #7",
    "f3^2(v1, v2) = v1",
    "(~bot => (~~bot => bot))",
    "#7 = S(S(v1))",
    "(v5 = #1 => (exists v6 < #9) v6 = v5)",
    "(exists v1 < #2) (v1 = #0 & ~v1 = #1)",
]
"""Fifty formulas in surface syntax, used for print/parse and diag_code checks."""
