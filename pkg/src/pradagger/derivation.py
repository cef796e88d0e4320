"""Derivations: premises followed by justified lines, plus their JSON form.

Line numbers in justifications are 1-based and count premise lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Union

from pradagger.syntax import Formula, Term, parse_formula, parse_term, unparse, unparse_term

AXIOM_KINDS = ("TAUT", "LI", "II", "A1", "A2", "MI", "DEF", "Aa", "L", "A*", "A†")
"""Axiom tags. TAUT..DEF are the core schemes; Aa is a Kripke-constant axiom,
L a member of S_m, A* and A† the extended axiom sets."""


@dataclass(frozen=True)
class Premise:
    index: int


@dataclass(frozen=True)
class Axiom:
    kind: str


@dataclass(frozen=True)
class MP:
    minor: int
    major: int


@dataclass(frozen=True)
class VS:
    line: int
    var: int
    term: Term


@dataclass(frozen=True)
class EI:
    line: int
    var: int
    witness: Term
    bound: Term


@dataclass(frozen=True)
class CCI:
    line: int


Justification = Union[Premise, Axiom, MP, VS, EI, CCI]


@dataclass(frozen=True)
class Line:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Derivation:
    premises: tuple = ()
    lines: tuple = ()

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1].formula if self.lines else None

    def formulas(self) -> list[Formula]:
        return [ln.formula for ln in self.lines]


@dataclass
class DerivationBuilder:
    """Appends lines and hands back their 1-based numbers."""

    premises: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    _seen: dict = field(default_factory=dict, repr=False)

    def premise(self, f: Formula) -> int:
        if len(self.lines) != len(self.premises):
            raise ValueError("premises must come first")
        self.premises.append(f)
        return self.add(f, Premise(len(self.premises)))

    def add(self, f: Formula, j: Justification) -> int:
        self.lines.append(Line(f, j))
        n = len(self.lines)
        self._seen.setdefault(f, n)
        return n

    def have(self, f: Formula) -> int | None:
        return self._seen.get(f)

    def axiom(self, f: Formula, kind: str) -> int:
        known = self.have(f)
        return known if known is not None else self.add(f, Axiom(kind))

    def mp(self, minor: int, major: int) -> int:
        major_f = self.lines[major - 1].formula
        return self.add(major_f.consequent, MP(minor, major))

    def formula(self, n: int) -> Formula:
        return self.lines[n - 1].formula

    def build(self) -> Derivation:
        return Derivation(tuple(self.premises), tuple(self.lines))


# JSON form: {premises: [surface], lines: [{formula, rule, refs, aux}]}

def _line_to_json(ln: Line) -> dict:
    j = ln.justification
    out: dict = {"formula": unparse(ln.formula)}
    match j:
        case Premise(i):
            out.update(rule="premise", refs=[i], aux={})
        case Axiom(kind):
            out.update(rule="axiom", refs=[], aux={"kind": kind})
        case MP(a, b):
            out.update(rule="MP", refs=[a, b], aux={})
        case VS(i, var, term):
            out.update(rule="VS", refs=[i], aux={"var": var, "term": unparse_term(term)})
        case EI(i, var, witness, bound):
            out.update(rule="EI", refs=[i], aux={
                "var": var, "witness": unparse_term(witness), "bound": unparse_term(bound)})
        case CCI(i):
            out.update(rule="CCI", refs=[i], aux={})
    return out


def derivation_to_json(d: Derivation) -> dict:
    return {"premises": [unparse(p) for p in d.premises],
            "lines": [_line_to_json(ln) for ln in d.lines]}


def _line_from_json(obj: dict) -> Line:
    f = parse_formula(obj["formula"])
    rule, refs, aux = obj["rule"], obj.get("refs", []), obj.get("aux", {})
    if rule == "premise":
        j: Justification = Premise(refs[0])
    elif rule == "axiom":
        j = Axiom(aux["kind"])
    elif rule == "MP":
        j = MP(refs[0], refs[1])
    elif rule == "VS":
        j = VS(refs[0], int(aux["var"]), parse_term(aux["term"]))
    elif rule == "EI":
        j = EI(refs[0], int(aux["var"]), parse_term(aux["witness"]), parse_term(aux["bound"]))
    elif rule == "CCI":
        j = CCI(refs[0])
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return Line(f, j)


def derivation_from_json(obj: dict) -> Derivation:
    return Derivation(tuple(parse_formula(p) for p in obj.get("premises", [])),
                      tuple(_line_from_json(ln) for ln in obj["lines"]))


def dumps(d: Derivation) -> str:
    return json.dumps(derivation_to_json(d), indent=2, ensure_ascii=False)


def loads(text: str) -> Derivation:
    return derivation_from_json(json.loads(text))
