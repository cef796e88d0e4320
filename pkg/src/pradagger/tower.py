"""The extension ladder PRAa -> PRA* -> PRA-dagger and the bounded-proof function g.

Axiomhood queries are evaluated goal-directed inside a :class:`Session`:
each session keeps a memo table and the stack of queries in progress. A
query met again while it is still in progress yields an ill-founded
outcome carrying the loop. Results that depend on an in-progress ancestor
are not memoized, so every answer is context-free.

Queries about formulas are keyed by the formula rather than by its code.
The two are in bijection, but the codes involved in the central argument
run to tens of millions of bits and are never worth materializing.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Union

from pradagger._bignum import abbreviate, digest, to_decimal
from pradagger.coding import (
    cc_code, decode_formula, decode_sequence, diag_code, encode_formula, encode_sequence,
)
from pradagger.derivation import EI, VS, Axiom, Derivation, Line
from pradagger.kernel import (
    CORE_KINDS, CoreOracle, closed_term_value, core_recognizers, is_core_axiom, rule_derivable,
)
from pradagger.outcome import (
    FAILS, Budget, EvalOutcome, IllFoundedError, all_of, any_of, from_bool, ill_founded,
)
from pradagger.registry import CC, DIAG, Registry, RegistryError, default_registry
from pradagger.syntax import (
    BOT, W, BoundedExists, Const, Eq, FnApp, Formula, Implies, Less, Not, Numeral, Succ, Term,
    Var, cc, diag, diagonalize, formula_terms, subterms, succ, unparse,
)

KINDS = ("Aa", "A*", "A†", "S_m", "g-eval", "bounded-proof")
TRACE_LIMIT = 60
"""Digits shown for a numeral inside a trace before it is replaced by a digest."""

Subject = Union[Formula, int]


@dataclass(frozen=True)
class Query:
    kind: str
    subject: Subject
    """A formula for axiomhood kinds; a sequence code for g-eval and bounded-proof."""
    m: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown query kind {self.kind!r}")

    @property
    def code(self) -> int:
        if isinstance(self.subject, int):
            return self.subject
        return encode_formula(self.subject)

    def describe(self, limit: int = TRACE_LIMIT) -> str:
        if isinstance(self.subject, int):
            return f"{self.kind}({abbreviate(self.subject, limit)}, {self.m})"
        return f"{self.kind}({unparse(self.subject, limit)}, {self.m})"

    def to_json(self, limit: int = TRACE_LIMIT) -> dict:
        out: dict = {"kind": self.kind, "m": self.m}
        if isinstance(self.subject, int):
            out["code"] = abbreviate(self.subject, limit)
            out["code_sha256"] = digest(self.subject)
        else:
            out["formula"] = unparse(self.subject, limit)
        return out


@dataclass(frozen=True)
class CurrySequenceRecord:
    index: int
    wffs: tuple
    c_i: int
    constant_axiom: Formula

    @property
    def diagonal(self) -> Formula:
        return self.wffs[1].antecedent

    def to_json(self, limit: int | None = None) -> dict:
        return {
            "index": self.index,
            "wffs": [unparse(f, limit) for f in self.wffs],
            "c_i": abbreviate(self.c_i, limit) if limit else to_decimal(self.c_i),
            "c_i_bits": self.c_i.bit_length(),
            "c_i_sha256": digest(self.c_i),
            "constant_axiom": unparse(self.constant_axiom, limit),
        }


class Tower:
    """Constants, enumeration and Curry sequences over one frozen registry."""

    def __init__(self, registry: Registry):
        self.registry = registry
        self._records: dict[int, CurrySequenceRecord] = {}
        self._sequences: dict[int, list | None] = {}

    def e_formula(self, i: int) -> Formula:
        if i not in self.registry.binary_symbols():
            raise RegistryError(f"f{i}^2 is not a registered binary symbol")
        return Eq(FnApp(i, 2, (Const(i), Numeral(i))), cc(diag(Var(W))))

    def curry_sequence(self, i: int) -> CurrySequenceRecord:
        rec = self._records.get(i)
        if rec is None:
            e = self.e_formula(i)
            d = diagonalize(e, encode_formula(e))
            wffs = (Not(d), Implies(d, BOT))
            c = encode_sequence(list(wffs))
            rec = CurrySequenceRecord(i, wffs, c, Eq(Const(i), Numeral(c)))
            self._records[i] = rec
        return rec

    def constant_value(self, i: int) -> int:
        return self.curry_sequence(i).c_i

    def has_constant(self, i: int) -> bool:
        return i in self.registry.binary_symbols()

    def decode_sequence(self, n: int) -> list | None:
        # pure decoding cache; holds no evaluation state
        if n not in self._sequences:
            self._sequences[n] = decode_sequence(n)
        return self._sequences[n]

    def session(self, budget: Budget | None = None, **kw) -> "Session":
        return Session(self, budget, **kw)


_TOWERS: "weakref.WeakKeyDictionary[Registry, Tower]" = weakref.WeakKeyDictionary()
_DEFAULT: list = []


def tower_for(registry: Registry | None = None) -> Tower:
    if registry is None:
        if not _DEFAULT:
            _DEFAULT.append(default_registry())
        registry = _DEFAULT[0]
    t = _TOWERS.get(registry)
    if t is None:
        t = _TOWERS[registry] = Tower(registry)
    return t


def is_cc_diag(t: Term) -> bool:
    return (isinstance(t, FnApp) and (t.index, t.arity) == CC
            and isinstance(t.args[0], FnApp) and (t.args[0].index, t.args[0].arity) == DIAG)


def is_bounded_shape(f: Formula, m: int) -> bool:
    """An (in)equality whose left side is a saturated functor must be cc(diag(.)) or f_i^2, i <= m."""
    core = f.f if isinstance(f, Not) else f
    if not (isinstance(core, Eq) and isinstance(core.l, FnApp)):
        return True
    left = core.l
    return is_cc_diag(left) or (left.arity == 2 and left.index <= m)


def max_binary_index(f: Formula) -> int:
    """Largest index of an arity-2 symbol occurring in ``f`` (0 if none)."""
    best = 0
    for t in formula_terms(f):
        for s in subterms(t):
            if isinstance(s, FnApp) and s.arity == 2:
                best = max(best, s.index)
    return best


class Session:
    """One evaluation context: private memo, in-progress stack, dependency edges.

    ``valuation`` switches to revision mode: an in-progress query is answered
    from the given (previous-stage) valuation, defaulting to Fails, instead
    of being reported ill-founded. ``assumptions`` pins outcomes of chosen
    queries. ``shallow`` evaluates each child of the root in a fresh session
    of its own; it is used to replay a single dependency step.
    """

    def __init__(self, tower: Tower, budget: Budget | None = None, *,
                 valuation: dict | None = None, assumptions: dict | None = None,
                 memoize: bool = True, shallow: bool = False):
        self.tower = tower
        self.registry = tower.registry
        self.budget = budget if budget is not None else Budget()
        self.valuation = valuation
        self.assumptions = dict(assumptions or {})
        self.memoize = memoize
        self.shallow = shallow
        self.memo: dict[Query, EvalOutcome] = {}
        self.results: dict[Query, EvalOutcome] = {}
        self.stack: list[Query] = []
        self._position: dict[Query, int] = {}
        self._low: list[int] = []
        self.nodes: dict[Query, int] = {}
        self.edges: dict[tuple[int, int, str], None] = {}
        self.ill_founded_seen: list[EvalOutcome] = []

    # the evaluation driver

    def ask(self, q: Query, label: str = "root") -> EvalOutcome:
        node = self.nodes.setdefault(q, len(self.nodes))
        if self.stack:
            self.edges.setdefault((self.nodes[self.stack[-1]], node, label), None)
        if q in self.assumptions:
            return self.assumptions[q]
        if q in self.memo:
            return self.memo[q]
        pos = self._position.get(q)
        if pos is not None:
            if self._low:
                self._low[-1] = min(self._low[-1], pos)
            if self.valuation is not None:
                return self.valuation.get(q, FAILS)
            out = ill_founded(self.stack[pos:] + [q])
            self.ill_founded_seen.append(out)
            return out
        if self.shallow and self.stack:
            out = Session(self.tower, self.budget, assumptions=self.assumptions).ask(q)
            self.results[q] = out
            return out
        self.budget.tick()
        self.budget.check_depth(len(self.stack) + 1)
        depth = len(self.stack)
        self._position[q] = depth
        self.stack.append(q)
        self._low.append(depth)
        try:
            out = self._compute(q)
        finally:
            self.stack.pop()
            del self._position[q]
            low = self._low.pop()
        if low < depth and self._low:
            self._low[-1] = min(self._low[-1], low)
        if low >= depth and self.memoize:
            self.memo[q] = out
        self.results[q] = out
        if out.ill_founded:
            self.ill_founded_seen.append(out)
        return out

    def _compute(self, q: Query) -> EvalOutcome:
        match q.kind:
            case "Aa":
                return self._aa(q)
            case "S_m":
                return self._s_m(q)
            case "A*":
                return any_of([lambda: self.ask(Query("Aa", q.subject, q.m), "Aa"),
                               lambda: self.ask(Query("S_m", q.subject, q.m), "S_m")])
            case "A†":
                return self._dagger(q)
            case "g-eval":
                return self.ask(Query("bounded-proof", q.subject, q.m), "certify")
            case "bounded-proof":
                return self._bounded_proof(q)
        raise ValueError(q.kind)

    # convenience entry points

    def formula_of(self, subject: Subject) -> Formula | None:
        return subject if not isinstance(subject, int) else decode_formula(subject)

    def _formula_query(self, kind: str, subject: Subject, m: int) -> Query | None:
        f = self.formula_of(subject)
        return None if f is None else Query(kind, f, m)

    def recognize_Aa(self, subject: Subject) -> EvalOutcome:
        q = self._formula_query("Aa", subject, 0)
        return FAILS if q is None else self.ask(q)

    def in_S_m(self, subject: Subject, m: int) -> EvalOutcome:
        q = self._formula_query("S_m", subject, m)
        return FAILS if q is None else self.ask(q)

    def recognize_A_star(self, subject: Subject, m: int) -> EvalOutcome:
        q = self._formula_query("A*", subject, m)
        return FAILS if q is None else self.ask(q)

    def recognize_A_dagger(self, subject: Subject, m: int) -> EvalOutcome:
        q = self._formula_query("A†", subject, m)
        return FAILS if q is None else self.ask(q)

    def is_m_bounded_proof(self, n: int, m: int) -> EvalOutcome:
        return self.ask(Query("bounded-proof", n, m))

    def g_eval(self, n: int, m: int) -> int | EvalOutcome:
        out = self.ask(Query("g-eval", n, m))
        return self._g_from(out, n)

    def g_value(self, n: int, m: int) -> int:
        """Value of g for arithmetic; raises IllFoundedError on an ill-founded result."""
        out = self.ask(Query("g-eval", n, m), "g")
        value = self._g_from(out, n)
        if isinstance(value, EvalOutcome):
            raise IllFoundedError(value)
        return value

    def _g_from(self, out: EvalOutcome, n: int) -> int | EvalOutcome:
        if out.holds:
            return encode_formula(self.tower.decode_sequence(n)[-1])
        return 0 if out.fails else out

    # the recognizers

    def _aa(self, q: Query) -> EvalOutcome:
        f = q.subject
        match f:
            case Eq(Const(i), Numeral(c)) if self.tower.has_constant(i):
                return from_bool(c == self.tower.constant_value(i))
        return from_bool(is_core_axiom(f, self.registry))

    def _s_m(self, q: Query) -> EvalOutcome:
        f, m = q.subject, q.m
        positive = not isinstance(f, Not)
        core = f if positive else f.f
        match core:
            case Eq(FnApp() as left, Numeral(k)) if is_cc_diag(left):
                inner = left.args[0].args[0]
                if not isinstance(inner, Numeral):
                    return FAILS
                value = cc_code(diag_code(inner.value))
            case Eq(FnApp(i, 2, (Numeral(j), Numeral(i2))), Numeral(k)):
                b = self.registry.get(i, 2)
                if i2 != i or i > m or b is None or b.aux:
                    return FAILS
                try:
                    value = self.registry.evaluate(i, 2, [j, i], self.budget, ctx=self)
                except IllFoundedError as exc:
                    return exc.outcome
            case _:
                return FAILS
        return from_bool((value == k) == positive)

    def _dagger(self, q: Query) -> EvalOutcome:
        f, m = q.subject, q.m

        def sub(kind: str, g: Formula, label: str):
            return lambda: self.ask(Query(kind, g, m), label)

        alternatives = [sub("A*", f, "A*")]
        positive = not isinstance(f, Not)
        core = f if positive else f.f
        wrap = (lambda g: g) if positive else Not
        match core:
            case Eq(FnApp(k, 2, (Const(i), Numeral() as second)), Numeral() as n) \
                    if self.tower.has_constant(i):
                c = Numeral(self.tower.constant_value(i))
                label = "clause (3)" if positive else "clause (4)"
                alternatives.append(lambda: all_of([
                    sub("A†", Eq(Const(i), c), label),
                    sub("A†", wrap(Eq(FnApp(k, 2, (c, second)), n)), label),
                ]))
            case Eq(FnApp(k, 2, (Const(i), Numeral() as second)) as left, FnApp() as right) \
                    if is_cc_diag(right) and isinstance(right.args[0].args[0], Numeral):
                j = right.args[0].args[0].value
                target = Numeral(cc_code(diag_code(j)))
                label = "clause (5)" if positive else "clause (6)"
                alternatives.append(lambda: all_of([
                    sub("A†", Eq(right, target), label),
                    sub("A†", wrap(Eq(left, target)), label),
                ]))
        return any_of(alternatives)

    def _bounded_proof(self, q: Query) -> EvalOutcome:
        fs = self.tower.decode_sequence(q.subject)
        if not fs:
            return FAILS
        m = q.m

        def line_ok(i: int):
            def by_axiom() -> EvalOutcome:
                if not is_bounded_shape(fs[i], m):
                    return FAILS
                return self.ask(Query("A†", fs[i], m), f"line {i + 1}")
            return lambda: any_of([lambda: rule_derivable(fs, i, self.term_value), by_axiom])

        return all_of(line_ok(i) for i in range(len(fs)))

    def term_value(self, t: Term) -> int:
        return closed_term_value(t, self._fn_value, self._const_value)

    def _fn_value(self, index: int, arity: int, args: list[int]) -> int:
        try:
            return self.registry.evaluate(index, arity, args, self.budget, ctx=self)
        except RegistryError as exc:
            raise ValueError(str(exc)) from None

    def _const_value(self, i: int) -> int:
        if not self.tower.has_constant(i):
            raise ValueError(f"a{i} is not a Kripke constant of this registry")
        return self.tower.constant_value(i)

    # traces

    def trace_json(self, limit: int = TRACE_LIMIT) -> dict:
        order = sorted(self.nodes.items(), key=lambda kv: kv[1])
        nodes = []
        for q, idx in order:
            entry = {"id": idx, **q.to_json(limit)}
            out = self.results.get(q) or self.memo.get(q) or self.assumptions.get(q)
            if out is not None:
                entry["outcome"] = out.status.value
            nodes.append(entry)
        edges = [{"from": a, "to": b, "label": label} for (a, b, label) in self.edges]
        return {"nodes": nodes, "edges": edges}

    def cycle_ids(self, out: EvalOutcome) -> list[int]:
        return [self.nodes[q] for q in out.cycle]


class TowerOracle:
    """Axiom oracle for the kernel: core schemes plus Aa, L (S_m), A*, A-dagger.

    Kinds without an explicit bound are checked at ``m_F``, the largest
    arity-2 symbol index occurring in the formula.
    """

    def __init__(self, tower: Tower | None = None, budget: Budget | None = None,
                 assumptions: dict | None = None):
        self.tower = tower or tower_for()
        self.session = self.tower.session(budget, assumptions=assumptions)
        self._core = core_recognizers(self.tower.registry)

    def axiom(self, formula: Formula, kind: str | None = None) -> EvalOutcome:
        m = max_binary_index(formula)
        s = self.session
        match kind:
            case k if k in CORE_KINDS:
                return from_bool(self._core[k](formula))
            case "Aa":
                return s.recognize_Aa(formula)
            case "L":
                return s.in_S_m(formula, m)
            case "A*":
                return s.recognize_A_star(formula, m)
            case "A†" | None:
                return s.recognize_A_dagger(formula, m)
        return FAILS

    def term_value(self, t: Term) -> int:
        return self.session.term_value(t)

    @property
    def ill_founded_seen(self) -> list[EvalOutcome]:
        return self.session.ill_founded_seen


# module-level operations over the default (or a given) registry

def e_formula(i: int, registry: Registry | None = None) -> Formula:
    return tower_for(registry).e_formula(i)


def curry_sequence(i: int, registry: Registry | None = None) -> CurrySequenceRecord:
    return tower_for(registry).curry_sequence(i)


def _fresh(registry, budget) -> Session:
    return tower_for(registry).session(budget)


def recognize_Aa(n: Subject, registry: Registry | None = None, budget: Budget | None = None):
    return _fresh(registry, budget).recognize_Aa(n)


def in_S_m(n: Subject, m: int, registry: Registry | None = None, budget: Budget | None = None):
    return _fresh(registry, budget).in_S_m(n, m)


def recognize_A_star(n: Subject, m: int, registry: Registry | None = None,
                     budget: Budget | None = None):
    return _fresh(registry, budget).recognize_A_star(n, m)


def recognize_A_dagger(n: Subject, m: int, registry: Registry | None = None,
                       budget: Budget | None = None):
    return _fresh(registry, budget).recognize_A_dagger(n, m)


def is_m_bounded_proof(n: int, m: int, registry: Registry | None = None,
                       budget: Budget | None = None):
    return _fresh(registry, budget).is_m_bounded_proof(n, m)


def g_eval(n: int, m: int, registry: Registry | None = None, budget: Budget | None = None):
    return _fresh(registry, budget).g_eval(n, m)


# constant elimination (conservativity smoke test)

def _elim_term(t: Term, tower: Tower) -> Term:
    match t:
        case Const(i):
            return Numeral(tower.constant_value(i))
        case Succ(inner):
            return succ(_elim_term(inner, tower))
        case FnApp(index, arity, args):
            return FnApp(index, arity, tuple(_elim_term(a, tower) for a in args))
    return t


def _elim_formula(f: Formula, tower: Tower) -> Formula:
    match f:
        case Eq(l, r):
            return Eq(_elim_term(l, tower), _elim_term(r, tower))
        case Less(l, r):
            return Less(_elim_term(l, tower), _elim_term(r, tower))
        case Not(g):
            return Not(_elim_formula(g, tower))
        case Implies(a, c):
            return Implies(_elim_formula(a, tower), _elim_formula(c, tower))
        case BoundedExists(v, bound, body):
            return BoundedExists(v, _elim_term(bound, tower), _elim_formula(body, tower))
    return f


def eliminate_constants(d: Derivation, tower: Tower | None = None) -> Derivation:
    """Replace every a_i by the numeral of c_i; (Aa_i) axiom lines become LI instances."""
    tower = tower or tower_for()
    lines = []
    for ln in d.lines:
        f = _elim_formula(ln.formula, tower)
        j = ln.justification
        match j:
            case Axiom("Aa") if isinstance(ln.formula, Eq) and isinstance(ln.formula.l, Const):
                j = Axiom("LI")
            case VS(i, var, term):
                j = VS(i, var, _elim_term(term, tower))
            case EI(i, var, witness, bound):
                j = EI(i, var, _elim_term(witness, tower), _elim_term(bound, tower))
        lines.append(Line(f, j))
    return Derivation(tuple(_elim_formula(p, tower) for p in d.premises), tuple(lines))


def core_oracle(registry: Registry | None = None) -> CoreOracle:
    return CoreOracle(tower_for(registry).registry)
