"""Hilbert-style derivation checking for PRA and its extensions.

The checker is parameterized by an axiom oracle. :class:`CoreOracle`
recognizes the core schemes (tautologies, LI, II, A1, A2, MI and the
function-defining equations of a registry); the extension tower supplies
an oracle for the Kripke-constant and PRA-dagger axioms. Ill-founded oracle
answers are passed through as a verdict of their own.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

from pradagger.derivation import AXIOM_KINDS, CCI, EI, MP, VS, Axiom, Derivation, Premise
from pradagger.outcome import FAILS, HOLDS, EvalOutcome, IllFoundedError, any_of, from_bool
from pradagger.recursion import Oracle
from pradagger.registry import Registry, RegistryError
from pradagger.syntax import (
    BOT, BoundedExists, CaptureError, Const, Eq, Falsum, FnApp, Formula, Implies, Less, Not,
    Numeral, Succ, Term, Var, free_vars, instance_term, match_formula, substitute, succ,
    term_vars,
)

CORE_KINDS = ("TAUT", "LI", "II", "A1", "A2", "MI", "DEF")
MAX_TAUT_ATOMS = 24


class AxiomOracle(Protocol):
    def axiom(self, formula: Formula, kind: str | None) -> EvalOutcome: ...

    def term_value(self, term: Term) -> int: ...


# Tautologies

def _atoms(f: Formula, out: dict) -> None:
    match f:
        case Falsum():
            return
        case Not(g):
            _atoms(g, out)
        case Implies(a, c):
            _atoms(a, out)
            _atoms(c, out)
        case _:
            out.setdefault(f, len(out))


def _truth_mask(f: Formula, masks: dict, full: int) -> int:
    match f:
        case Falsum():
            return 0
        case Not(g):
            return full ^ _truth_mask(g, masks, full)
        case Implies(a, c):
            return (full ^ _truth_mask(a, masks, full)) | _truth_mask(c, masks, full)
    return masks[f]


def is_tautology(f: Formula) -> bool:
    """Truth-table check; atoms are maximal non-connective subformulas, bot is false."""
    atoms: dict = {}
    _atoms(f, atoms)
    n = len(atoms)
    if n > MAX_TAUT_ATOMS:
        return False
    rows = 1 << n
    full = (1 << rows) - 1
    masks = {}
    for atom, j in atoms.items():
        # row r assigns atom j the value of bit j of r
        block = (1 << (1 << j)) - 1
        period = 1 << (j + 1)
        pattern = 0
        for start in range(1 << j, rows, period):
            pattern |= block << start
        masks[atom] = pattern
    return _truth_mask(f, masks, full) == full


# Equality and arithmetic schemes

def is_li(f: Formula) -> bool:
    return isinstance(f, Eq) and f.l == f.r


def _terms_differ_by(x: Term, y: Term, t1: Term, t2: Term, bound: frozenset) -> bool:
    if x == y:
        return True
    if x == t1 and y == t2:
        return not ((term_vars(t1) | term_vars(t2)) & bound)
    match x, y:
        case Succ(a), Succ(b):
            return _terms_differ_by(a, b, t1, t2, bound)
        case Numeral(k), Succ(b) if k > 0:
            return _terms_differ_by(Numeral(k - 1), b, t1, t2, bound)
        case Succ(a), Numeral(k) if k > 0:
            return _terms_differ_by(a, Numeral(k - 1), t1, t2, bound)
        case Numeral(a), Numeral(b) if isinstance(t1, Numeral) and isinstance(t2, Numeral):
            return a - t1.value == b - t2.value >= 0
        case FnApp(i, k, xs), FnApp(j, l, ys) if (i, k) == (j, l):
            return all(_terms_differ_by(a, b, t1, t2, bound) for a, b in zip(xs, ys))
    return False


def _formulas_differ_by(b: Formula, c: Formula, t1: Term, t2: Term, bound: frozenset) -> bool:
    match b, c:
        case (Eq(l1, r1), Eq(l2, r2)) | (Less(l1, r1), Less(l2, r2)):
            return (_terms_differ_by(l1, l2, t1, t2, bound)
                    and _terms_differ_by(r1, r2, t1, t2, bound))
        case Not(g1), Not(g2):
            return _formulas_differ_by(g1, g2, t1, t2, bound)
        case Implies(a1, c1), Implies(a2, c2):
            return (_formulas_differ_by(a1, a2, t1, t2, bound)
                    and _formulas_differ_by(c1, c2, t1, t2, bound))
        case BoundedExists(v1, bd1, body1), BoundedExists(v2, bd2, body2) if v1 == v2:
            return (_terms_differ_by(bd1, bd2, t1, t2, bound)
                    and _formulas_differ_by(body1, body2, t1, t2, bound | {v1}))
        case Falsum(), Falsum():
            return True
    return False


def is_ii(f: Formula) -> bool:
    """``(t1 = t2 => (phi[x/t1] => phi[x/t2]))`` by anti-unification."""
    match f:
        case Implies(Eq(t1, t2), Implies(b, c)):
            return _formulas_differ_by(b, c, t1, t2, frozenset())
    return False


def is_a1(f: Formula) -> bool:
    match f:
        case Not(Eq(Numeral(0), Succ())):
            return True
        case Not(Eq(Numeral(0), Numeral(k))):
            return k > 0
    return False


def is_a2(f: Formula) -> bool:
    match f:
        case Implies(Eq(l1, r1), Eq(l2, r2)):
            return l1 == succ(l2) and r1 == succ(r2)
    return False


def is_mi(f: Formula) -> bool:
    """``((phi(0) & (phi(x) => phi(x'))) => phi(y))`` with ``&`` expanded."""
    match f:
        case Implies(Not(Implies(base, Not(Implies(phi, step)))), goal):
            pass
        case _:
            return False
    candidates = sorted(free_vars(phi))
    if not candidates:
        return base == phi == step == goal
    for x in candidates:
        try:
            if base != substitute(phi, x, Numeral(0)):
                continue
            if step != substitute(phi, x, succ(Var(x))):
                continue
        except CaptureError:
            continue
        y = instance_term(phi, goal, x)
        if isinstance(y, Var):
            return True
    return False


def is_defining(f: Formula, registry: Registry) -> bool:
    """Instance of a registered defining equation, or a true closed value of a grounded oracle."""
    if not (isinstance(f, Eq) and isinstance(f.l, FnApp)):
        return False
    b = registry.get(f.l.index, f.l.arity)
    if b is None:
        return False
    d = b.definition
    if isinstance(d, Oracle):
        if not d.grounded or not isinstance(f.r, Numeral):
            return False
        if not all(isinstance(a, Numeral) for a in f.l.args):
            return False
        return registry.evaluate(f.l.index, f.l.arity, [a.value for a in f.l.args]) == f.r.value
    open_vars = set(range(1, b.arity + 1))
    return any(match_formula(ax, f, {}, open_vars) for ax in registry.defining_axioms(*b.key))


def core_recognizers(registry: Registry) -> dict[str, Callable[[Formula], bool]]:
    return {
        "TAUT": is_tautology,
        "LI": is_li,
        "II": is_ii,
        "A1": is_a1,
        "A2": is_a2,
        "MI": is_mi,
        "DEF": lambda f: is_defining(f, registry),
    }


def core_axiom_kind(f: Formula, registry: Registry) -> str | None:
    for kind, recognize in core_recognizers(registry).items():
        if recognize(f):
            return kind
    return None


def is_core_axiom(f: Formula, registry: Registry) -> bool:
    return core_axiom_kind(f, registry) is not None


class CoreOracle:
    """Axioms of plain PRA over a registry (no constants, no extended axioms)."""

    def __init__(self, registry: Registry):
        self.registry = registry
        self._recognizers = core_recognizers(registry)

    def axiom(self, formula: Formula, kind: str | None = None) -> EvalOutcome:
        if kind is None:
            return from_bool(is_core_axiom(formula, self.registry))
        recognize = self._recognizers.get(kind)
        return from_bool(recognize is not None and recognize(formula))

    def term_value(self, term: Term) -> int:
        return closed_term_value(term, self._fn_value, None)

    def _fn_value(self, index: int, arity: int, args: list[int]) -> int:
        try:
            return self.registry.evaluate(index, arity, args)
        except RegistryError as exc:
            raise ValueError(str(exc)) from None


def closed_term_value(term: Term, fn_value, const_value) -> int:
    """Value of a closed term; ValueError for open or uninterpretable terms."""
    match term:
        case Numeral(n):
            return n
        case Succ(inner):
            return closed_term_value(inner, fn_value, const_value) + 1
        case FnApp(index, arity, args):
            vals = [closed_term_value(a, fn_value, const_value) for a in args]
            return fn_value(index, arity, vals)
        case Const(i):
            if const_value is None:
                raise ValueError(f"constant a{i} has no value here")
            return const_value(i)
        case Var(i):
            raise ValueError(f"open term: v{i} is free")
    raise TypeError(f"not a term: {term!r}")


# Verdicts

@dataclass(frozen=True)
class Verdict:
    status: str
    line: int | None = None
    reason: str = ""
    cycle: tuple = ()

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    @property
    def invalid(self) -> bool:
        return self.status == "invalid"

    @property
    def ill_founded(self) -> bool:
        return self.status == "ill-founded"

    def to_json(self, query_json=None) -> dict:
        out: dict = {"verdict": self.status}
        if self.line is not None:
            out["line"] = self.line
        if self.reason:
            out["reason"] = self.reason
        if self.cycle:
            out["cycle"] = [query_json(q) if query_json else str(q) for q in self.cycle]
        return out


VALID = Verdict("valid")


def _invalid(line: int, reason: str) -> Verdict:
    return Verdict("invalid", line, reason)


def _ei_side_condition(oracle: AxiomOracle, witness: Term, bound: Term) -> EvalOutcome | str:
    if term_vars(witness) or term_vars(bound):
        return "EI side condition uses an open term"
    try:
        lo, hi = oracle.term_value(witness), oracle.term_value(bound)
    except IllFoundedError as exc:
        return exc.outcome
    except ValueError as exc:
        return f"EI side condition not evaluable: {exc}"
    return HOLDS if lo < hi else "EI side condition fails: witness is not below the bound"


def _check_line(d: Derivation, n: int, oracle: AxiomOracle) -> EvalOutcome | str:
    """HOLDS/ill-founded outcome, or a string naming why line ``n`` is unjustified."""
    formula = d.lines[n - 1].formula
    j = d.lines[n - 1].justification

    def earlier(k: int) -> Formula | None:
        return d.lines[k - 1].formula if 1 <= k < n else None

    match j:
        case Premise(i):
            if n > len(d.premises) or i != n:
                return "premises must occupy the first lines, in order"
            return HOLDS if d.premises[i - 1] == formula else "line differs from its premise"
        case Axiom(kind):
            if kind not in AXIOM_KINDS:
                return f"unknown axiom kind {kind!r}"
            out = oracle.axiom(formula, kind)
            return out if not out.fails else f"not an axiom of kind {kind}"
        case MP(i, k):
            minor, major = earlier(i), earlier(k)
            if minor is None or major is None:
                return "MP cites a line that is not earlier"
            if major != Implies(minor, formula):
                return f"line {k} is not ({i} => this line)"
            return HOLDS
        case VS(i, var, term):
            src = earlier(i)
            if src is None:
                return "VS cites a line that is not earlier"
            try:
                if substitute(src, var, term) != formula:
                    return f"line is not line {i} with v{var} replaced"
            except CaptureError as exc:
                return f"VS capture: {exc}"
            return HOLDS
        case EI(i, var, witness, bound):
            src = earlier(i)
            if src is None:
                return "EI cites a line that is not earlier"
            if not (isinstance(formula, BoundedExists) and formula.var_index == var
                    and formula.bound == bound):
                return "line is not the cited bounded existential"
            try:
                if substitute(formula.body, var, witness) != src:
                    return f"line {i} is not the body instantiated at the witness"
            except CaptureError as exc:
                return f"EI capture: {exc}"
            return _ei_side_condition(oracle, witness, bound)
        case CCI(i):
            src = earlier(i)
            if src is None:
                return "CCI cites a line that is not earlier"
            if not (isinstance(src, Not) and formula == Implies(src.f, BOT)):
                return f"line is not the Curry conditional of the negation on line {i}"
            return HOLDS
    return f"unknown justification {j!r}"


def check_derivation(d: Derivation, oracle: AxiomOracle) -> Verdict:
    if not d.lines:
        return _invalid(0, "empty derivation")
    if len(d.lines) < len(d.premises):
        return _invalid(len(d.lines), "fewer lines than premises")
    pending: Verdict | None = None
    for n in range(1, len(d.lines) + 1):
        if n > len(d.premises) and isinstance(d.lines[n - 1].justification, Premise):
            return _invalid(n, "premise cited after the premise block")
        out = _check_line(d, n, oracle)
        if isinstance(out, str):
            return _invalid(n, out)
        if out.ill_founded and pending is None:
            pending = Verdict("ill-founded", n, "axiom query is ill-founded", out.cycle)
    return pending or VALID


def check_proof(d: Derivation, oracle: AxiomOracle) -> Verdict:
    if d.premises:
        raise ValueError("a proof has no premises; use check_derivation")
    return check_derivation(d, oracle)


# Rule search over bare formula sequences (no justifications given)

def rule_derivable(formulas: list[Formula], i: int, term_value) -> EvalOutcome:
    """Whether ``formulas[i]`` (0-based) follows from earlier members by MP, VS, EI or CCI."""
    target = formulas[i]
    before = formulas[:i]

    def by_cci() -> EvalOutcome:
        if isinstance(target, Implies) and target.consequent == BOT:
            return from_bool(Not(target.antecedent) in before)
        return FAILS

    def by_mp() -> EvalOutcome:
        return from_bool(any(Implies(a, target) in before for a in before))

    def by_vs() -> EvalOutcome:
        for src in before:
            if src == target:
                return HOLDS
            for x in sorted(free_vars(src)):
                if instance_term(src, target, x) is not None:
                    return HOLDS
        return FAILS

    def by_ei() -> EvalOutcome:
        if not isinstance(target, BoundedExists):
            return FAILS
        x, bound, body = target.var_index, target.bound, target.body

        def attempt(src: Formula):
            def run() -> EvalOutcome:
                if x in free_vars(body):
                    witness = instance_term(body, src, x)
                else:
                    witness = Numeral(0) if src == body else None
                if witness is None:
                    return FAILS
                side = _ei_side_condition(_Valuer(term_value), witness, bound)
                return FAILS if isinstance(side, str) else side
            return run

        return any_of(attempt(src) for src in before)

    return any_of([by_cci, by_mp, by_vs, by_ei])


class _Valuer:
    def __init__(self, term_value):
        self.term_value = term_value
