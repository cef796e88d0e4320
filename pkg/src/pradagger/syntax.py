"""Object language of PRA-dagger: terms, formulas, surface syntax, substitution.

Numerals are stored by value. ``Succ`` only ever wraps a non-numeral term;
use :func:`succ` to build successors so that normalization is kept.
Conjunction and the biconditional are expanded when parsed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from pradagger._bignum import abbreviate, from_decimal, to_decimal

W = 0
"""Index of the designated diagonalization variable ``w``."""

DIAG_INDEX = 0
CC_INDEX = 1


class CaptureError(ValueError):
    """A substituted term would have a free variable captured by a binder."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# Terms

@dataclass(frozen=True)
class Numeral:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("numerals denote natural numbers")


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    index: int


@dataclass(frozen=True)
class Succ:
    inner: "Term"

    def __post_init__(self):
        if isinstance(self.inner, Numeral):
            raise ValueError("Succ(Numeral) must be normalized; use succ()")


@dataclass(frozen=True)
class FnApp:
    index: int
    arity: int
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        if self.arity < 1 or len(self.args) != self.arity:
            raise ValueError(
                f"f{self.index}^{self.arity} applied to {len(self.args)} arguments")


Term = Union[Numeral, Var, Const, Succ, FnApp]


def succ(t: Term) -> Term:
    if isinstance(t, Numeral):
        return Numeral(t.value + 1)
    return Succ(t)


def diag(t: Term) -> FnApp:
    return FnApp(DIAG_INDEX, 1, (t,))


def cc(t: Term) -> FnApp:
    return FnApp(CC_INDEX, 1, (t,))


# Formulas

@dataclass(frozen=True)
class Falsum:
    pass


@dataclass(frozen=True)
class Less:
    l: Term
    r: Term


@dataclass(frozen=True)
class Eq:
    l: Term
    r: Term


@dataclass(frozen=True)
class Not:
    f: "Formula"


@dataclass(frozen=True)
class Implies:
    antecedent: "Formula"
    consequent: "Formula"


@dataclass(frozen=True)
class BoundedExists:
    var_index: int
    bound: Term
    body: "Formula"


Formula = Union[Falsum, Less, Eq, Not, Implies, BoundedExists]
TERM_TYPES = (Numeral, Var, Const, Succ, FnApp)
FORMULA_TYPES = (Falsum, Less, Eq, Not, Implies, BoundedExists)

BOT = Falsum()


def negate(f: Formula) -> Formula:
    return Not(f)


def curry_conditional(f: Formula) -> Formula:
    """The Curry conditional ``(f => bot)``."""
    return Implies(f, BOT)


def conj(a: Formula, b: Formula) -> Formula:
    return Not(Implies(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return conj(Implies(a, b), Implies(b, a))


# Variables and traversal

def term_vars(t: Term) -> set[int]:
    match t:
        case Var(i):
            return {i}
        case Succ(inner):
            return term_vars(inner)
        case FnApp(_, _, args):
            out: set[int] = set()
            for a in args:
                out |= term_vars(a)
            return out
    return set()


def free_vars(f: Formula) -> set[int]:
    match f:
        case Less(l, r) | Eq(l, r):
            return term_vars(l) | term_vars(r)
        case Not(g):
            return free_vars(g)
        case Implies(a, c):
            return free_vars(a) | free_vars(c)
        case BoundedExists(v, bound, body):
            return term_vars(bound) | (free_vars(body) - {v})
    return set()


def subterms(t: Term) -> Iterator[Term]:
    yield t
    match t:
        case Succ(inner):
            yield from subterms(inner)
        case FnApp(_, _, args):
            for a in args:
                yield from subterms(a)


def formula_terms(f: Formula) -> Iterator[Term]:
    """Every term occurrence (and its subterms) in ``f``."""
    match f:
        case Less(l, r) | Eq(l, r):
            yield from subterms(l)
            yield from subterms(r)
        case Not(g):
            yield from formula_terms(g)
        case Implies(a, c):
            yield from formula_terms(a)
            yield from formula_terms(c)
        case BoundedExists(_, bound, body):
            yield from subterms(bound)
            yield from formula_terms(body)


def mentions_symbol(f: Formula, index: int) -> bool:
    return any(isinstance(t, FnApp) and t.index == index for t in formula_terms(f))


def mentions_numeral(f: Formula, value: int) -> bool:
    return any(isinstance(t, Numeral) and t.value == value for t in formula_terms(f))


def mentions_const(f: Formula, index: int) -> bool:
    return any(isinstance(t, Const) and t.index == index for t in formula_terms(f))


# Substitution

def substitute_term(t: Term, var: int, new: Term) -> Term:
    match t:
        case Var(i) if i == var:
            return new
        case Succ(inner):
            return succ(substitute_term(inner, var, new))
        case FnApp(index, arity, args):
            return FnApp(index, arity, tuple(substitute_term(a, var, new) for a in args))
    return t


def substitute(f: Formula, var_index: int, t: Term) -> Formula:
    """Replace free occurrences of ``v<var_index>`` by ``t``.

    Raises CaptureError when a free variable of ``t`` would land inside the
    scope of a quantifier binding it. Bounds of quantifiers are outside the
    scope of their own variable.
    """
    tv = term_vars(t)

    def go(g: Formula) -> Formula:
        match g:
            case Less(l, r):
                return Less(substitute_term(l, var_index, t), substitute_term(r, var_index, t))
            case Eq(l, r):
                return Eq(substitute_term(l, var_index, t), substitute_term(r, var_index, t))
            case Not(h):
                return Not(go(h))
            case Implies(a, c):
                return Implies(go(a), go(c))
            case BoundedExists(v, bound, body):
                bound2 = substitute_term(bound, var_index, t)
                if v == var_index or var_index not in free_vars(body):
                    return BoundedExists(v, bound2, body)
                if v in tv:
                    raise CaptureError(
                        f"v{v} of the substituted term would be bound by (exists v{v} < ...)")
                return BoundedExists(v, bound2, go(body))
        return g

    return go(f)


def replace_term(f: Formula, old: Term, new: Term) -> Formula:
    """Replace every occurrence of the term ``old`` (closed terms only)."""

    def rt(t: Term) -> Term:
        if t == old:
            return new
        match t:
            case Succ(inner):
                return succ(rt(inner))
            case FnApp(index, arity, args):
                return FnApp(index, arity, tuple(rt(a) for a in args))
        return t

    match f:
        case Less(l, r):
            return Less(rt(l), rt(r))
        case Eq(l, r):
            return Eq(rt(l), rt(r))
        case Not(g):
            return Not(replace_term(g, old, new))
        case Implies(a, c):
            return Implies(replace_term(a, old, new), replace_term(c, old, new))
        case BoundedExists(v, bound, body):
            return BoundedExists(v, rt(bound), replace_term(body, old, new))
    return f


def replace_const(f: Formula, index: int, value: int) -> Formula:
    return replace_term(f, Const(index), Numeral(value))


def diagonalize(f: Formula, code_of_f: int) -> Formula:
    """``f[w / numeral(code_of_f)]``; ``f`` must have exactly ``w`` free."""
    fv = free_vars(f)
    if fv != {W}:
        raise ValueError(f"diagonalization needs exactly w free, got {sorted(fv)}")
    return substitute(f, W, Numeral(code_of_f))


# Matching instances of a pattern (used by axiom recognizers and rule search)

def match_term(pattern: Term, target: Term, env: dict[int, Term], open_vars: set[int]) -> bool:
    """Extend ``env`` so that pattern[env] == target, binding only ``open_vars``."""
    match pattern:
        case Var(i) if i in open_vars:
            if i in env:
                return env[i] == target
            env[i] = target
            return True
        case Succ(inner):
            if isinstance(target, Succ):
                return match_term(inner, target.inner, env, open_vars)
            if isinstance(target, Numeral) and target.value > 0:
                return match_term(inner, Numeral(target.value - 1), env, open_vars)
            return False
        case FnApp(index, arity, args):
            if not (isinstance(target, FnApp) and target.index == index and target.arity == arity):
                return False
            return all(match_term(a, b, env, open_vars) for a, b in zip(args, target.args))
    return pattern == target


def match_formula(pattern: Formula, target: Formula, env: dict[int, Term],
                  open_vars: set[int]) -> bool:
    match pattern, target:
        case (Less(l1, r1), Less(l2, r2)) | (Eq(l1, r1), Eq(l2, r2)):
            return match_term(l1, l2, env, open_vars) and match_term(r1, r2, env, open_vars)
        case Not(g1), Not(g2):
            return match_formula(g1, g2, env, open_vars)
        case Implies(a1, c1), Implies(a2, c2):
            return (match_formula(a1, a2, env, open_vars)
                    and match_formula(c1, c2, env, open_vars))
        case BoundedExists(v1, b1, body1), BoundedExists(v2, b2, body2):
            if v1 != v2 or not match_term(b1, b2, env, open_vars):
                return False
            return match_formula(body1, body2, env, open_vars - {v1})
        case Falsum(), Falsum():
            return True
    return False


def instance_term(pattern: Formula, target: Formula, var: int) -> Term | None:
    """The term ``t`` with ``substitute(pattern, var, t) == target``, if any."""
    env: dict[int, Term] = {}
    if not match_formula(pattern, target, env, {var}):
        return None
    t = env.get(var, Var(var))
    try:
        return t if substitute(pattern, var, t) == target else None
    except CaptureError:
        return None


# Printing

def unparse_term(t: Term, limit: int | None = None) -> str:
    """Surface syntax; numerals longer than ``limit`` digits print as a digest."""
    match t:
        case Numeral(n):
            return "#" + (to_decimal(n) if limit is None else abbreviate(n, limit))
        case Var(i):
            return "w" if i == W else f"v{i}"
        case Const(i):
            return f"a{i}"
        case Succ(inner):
            return f"S({unparse_term(inner, limit)})"
        case FnApp(index, arity, args):
            if arity == 1 and index == DIAG_INDEX:
                return f"diag({unparse_term(args[0], limit)})"
            if arity == 1 and index == CC_INDEX:
                return f"cc({unparse_term(args[0], limit)})"
            return f"f{index}^{arity}(" + ", ".join(unparse_term(a, limit) for a in args) + ")"
    raise TypeError(f"not a term: {t!r}")


def unparse(ast: Term | Formula, limit: int | None = None) -> str:
    """Canonical surface syntax for a term or formula (lossless unless ``limit`` is set)."""
    match ast:
        case Falsum():
            return "bot"
        case Eq(l, r):
            return f"{unparse_term(l, limit)} = {unparse_term(r, limit)}"
        case Less(l, r):
            return f"{unparse_term(l, limit)} < {unparse_term(r, limit)}"
        case Not(g):
            return "~" + unparse(g, limit)
        case Implies(a, c):
            return f"({unparse(a, limit)} => {unparse(c, limit)})"
        case BoundedExists(v, bound, body):
            name = "w" if v == W else f"v{v}"
            return f"(exists {name} < {unparse_term(bound, limit)}) {unparse(body, limit)}"
    return unparse_term(ast, limit)


# Parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\#\d+)
  | (?P<fn>f\d+\^\d+)
  | (?P<word>exists|bot|diag|cc|S|w|v\d+|a\d+)
  | (?P<op><=>|=>|[()=<~&,])
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0) -> tuple[str, str, int]:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def take(self, value: str | None = None) -> tuple[str, str, int]:
        tok = self.peek()
        if value is not None and tok[1] != value:
            shown = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {shown!r}", tok[2])
        self.i += 1
        return tok

    def done(self):
        kind, value, pos = self.peek()
        if kind != "eof":
            if value in ("&", "<=>", "=>"):
                raise ParseError(f"connective {value!r} must be enclosed in parentheses", pos)
            raise ParseError(f"trailing input {value!r}", pos)

    def var_index(self) -> int:
        kind, value, pos = self.take()
        if value == "w":
            return W
        if kind == "word" and value.startswith("v"):
            return int(value[1:])
        raise ParseError(f"expected a variable, found {value!r}", pos)

    def term(self) -> Term:
        kind, value, pos = self.take()
        if kind == "num":
            return Numeral(from_decimal(value[1:]))
        if kind == "fn":
            index, arity = (int(x) for x in value[1:].split("^"))
            args = self.args()
            if len(args) != arity:
                raise ParseError(f"{value} expects {arity} arguments, got {len(args)}", pos)
            return FnApp(index, arity, tuple(args))
        if value in ("diag", "cc", "S"):
            args = self.args()
            if len(args) != 1:
                raise ParseError(f"{value} expects 1 argument, got {len(args)}", pos)
            if value == "S":
                return succ(args[0])
            return diag(args[0]) if value == "diag" else cc(args[0])
        if value == "w":
            return Var(W)
        if kind == "word" and value[0] in "va" and value[1:].isdigit():
            cls = Var if value[0] == "v" else Const
            return cls(int(value[1:]))
        raise ParseError(f"expected a term, found {value or 'end of input'!r}", pos)

    def args(self) -> list[Term]:
        self.take("(")
        out = [self.term()]
        while self.peek()[1] == ",":
            self.take(",")
            out.append(self.term())
        self.take(")")
        return out

    def formula(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "~":
            self.take()
            return Not(self.formula())
        if value == "bot":
            self.take()
            return BOT
        if value == "(":
            if self.peek(1)[1] == "exists":
                self.take("(")
                self.take("exists")
                v = self.var_index()
                self.take("<")
                bound = self.term()
                self.take(")")
                return BoundedExists(v, bound, self.formula())
            self.take("(")
            left = self.formula()
            kind, op, pos = self.take()
            if op == ")":
                return left
            if op not in ("=>", "&", "<=>"):
                raise ParseError(f"expected a connective, found {op or 'end of input'!r}", pos)
            right = self.formula()
            self.take(")")
            if op == "=>":
                return Implies(left, right)
            return conj(left, right) if op == "&" else iff(left, right)
        left_t = self.term()
        kind, op, pos = self.take()
        if op == "=":
            return Eq(left_t, self.term())
        if op == "<":
            return Less(left_t, self.term())
        raise ParseError(f"expected '=' or '<', found {op or 'end of input'!r}", pos)


def parse(text: str, kind: str = "formula") -> Term | Formula:
    """Parse surface syntax into a normalized AST (``kind`` is term or formula)."""
    p = _Parser(text)
    if kind == "term":
        out = p.term()
    elif kind == "formula":
        out = p.formula()
    else:
        raise ValueError(f"kind must be 'term' or 'formula', not {kind!r}")
    p.done()
    return out


def parse_formula(text: str) -> Formula:
    return parse(text, "formula")


def parse_term(text: str) -> Term:
    return parse(text, "term")
