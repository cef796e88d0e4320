"""Binding of object-language function symbols to definitions.

Every structural definition is compiled into defining equations. A nested
composition or recursion node that is not itself registered gets an
auxiliary symbol with index >= ``AUX_BASE``; auxiliary symbols are real
symbols of the language but are left out of :meth:`Registry.binary_symbols`,
so they never shift the enumeration of one-variable formulas.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from pradagger import recursion as pr
from pradagger.coding import cc_code, diag_code, neg_code
from pradagger.derivation import MP, Derivation, DerivationBuilder
from pradagger.outcome import Budget
from pradagger.recursion import (
    Composition, Oracle, PrDefinition, PrimitiveRecursion, Projection, Successor, ZeroConst,
)
from pradagger.syntax import (
    Eq, FnApp, Formula, Implies, Numeral, Term, Var, replace_term, substitute, succ,
)

AUX_BASE = 1000
DIAG = (0, 1)
CC = (1, 1)


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class SymbolBinding:
    symbol_index: int
    arity: int
    definition: PrDefinition
    name: str = ""
    aux: bool = False

    @property
    def is_oracle(self) -> bool:
        return isinstance(self.definition, Oracle)

    @property
    def key(self) -> tuple[int, int]:
        return (self.symbol_index, self.arity)


def _g_via_session(args, ctx):
    if ctx is None or not hasattr(ctx, "g_value"):
        raise RegistryError("the g oracle can only be evaluated inside a tower session")
    return ctx.g_value(args[0], args[1])


def native_oracles() -> dict[str, Oracle]:
    return {
        "diag": Oracle("diag", 1, lambda a, ctx: diag_code(a[0])),
        "cc": Oracle("cc", 1, lambda a, ctx: cc_code(a[0])),
        "neg": Oracle("neg", 1, lambda a, ctx: neg_code(a[0])),
        "g": Oracle("g", 2, _g_via_session, grounded=False),
    }


class Registry:
    def __init__(self):
        self._bindings: dict[tuple[int, int], SymbolBinding] = {}
        self._symbol_of: dict[PrDefinition, tuple[int, int]] = {}
        self._axioms: dict[tuple[int, int], list[Formula]] = {}
        self._next_aux = AUX_BASE
        self._frozen = False
        self._manifest: list[dict] = []

    # registration

    def register(self, index: int, arity: int, d: PrDefinition, name: str = "") -> SymbolBinding:
        if self._frozen:
            raise RegistryError("registry is frozen")
        if index >= AUX_BASE:
            raise RegistryError(f"indices >= {AUX_BASE} are reserved for auxiliary symbols")
        if (index, arity) in self._bindings:
            raise RegistryError(f"f{index}^{arity} is already registered")
        if arity < 1 or d.arity != arity:
            raise RegistryError(f"definition has arity {d.arity}, symbol f{index}^{arity}")
        binding = SymbolBinding(index, arity, d, name or getattr(d, "name", ""))
        self._bindings[binding.key] = binding
        if not isinstance(d, Oracle):
            self._symbol_of.setdefault(d, binding.key)
            self._compile(binding)
        self._manifest.append({"index": index, "arity": arity,
                               "definition": definition_to_json(d), "name": binding.name})
        return binding

    def freeze(self) -> "Registry":
        self._frozen = True
        return self

    def lookup(self, index: int, arity: int) -> SymbolBinding:
        try:
            return self._bindings[(index, arity)]
        except KeyError:
            raise RegistryError(f"f{index}^{arity} is not registered") from None

    def get(self, index: int, arity: int) -> SymbolBinding | None:
        return self._bindings.get((index, arity))

    def bindings(self) -> list[SymbolBinding]:
        return sorted(self._bindings.values(), key=lambda b: (b.arity, b.symbol_index))

    def binary_symbols(self) -> list[int]:
        return sorted(i for (i, k), b in self._bindings.items() if k == 2 and not b.aux)

    @property
    def g_index(self) -> int:
        for i in self.binary_symbols():
            d = self._bindings[(i, 2)].definition
            if isinstance(d, Oracle) and not d.grounded:
                return i
        raise RegistryError("no g oracle is registered among the binary symbols")

    def manifest(self) -> list[dict]:
        return [dict(entry) for entry in self._manifest]

    # defining equations

    def _aux_symbol(self, node: PrDefinition) -> tuple[int, int]:
        key = self._symbol_of.get(node)
        if key is None:
            key = (self._next_aux, node.arity)
            self._next_aux += 1
            binding = SymbolBinding(key[0], key[1], node, aux=True)
            self._bindings[key] = binding
            self._symbol_of[node] = key
            self._compile(binding)
        return key

    def term_for(self, node: PrDefinition, args: list[Term]) -> Term:
        """Object-language term denoting ``node`` applied to ``args``."""
        match node:
            case ZeroConst():
                return Numeral(0)
            case Successor():
                return succ(args[0])
            case Projection(_, k):
                return args[k - 1]
            case Oracle():
                raise RegistryError("oracle functions cannot occur inside a p.r. definition")
        if node.arity == 0:
            return Numeral(pr.evaluate(node, []))
        index, arity = self._aux_symbol(node)
        return FnApp(index, arity, tuple(args))

    def _compile(self, b: SymbolBinding) -> None:
        n = b.arity
        vs = [Var(i) for i in range(1, n + 1)]

        def head(args):
            return FnApp(b.symbol_index, n, tuple(args))

        d = b.definition
        match d:
            case Composition(outer, inners):
                rhs = self.term_for(outer, [self.term_for(g, vs) for g in inners])
                axioms = [Eq(head(vs), rhs)]
            case PrimitiveRecursion(base_g, step_h):
                xs, y = vs[:-1], vs[-1]
                axioms = [
                    Eq(head(xs + [Numeral(0)]), self.term_for(base_g, xs)),
                    Eq(head(xs + [succ(y)]), self.term_for(step_h, xs + [y, head(vs)])),
                ]
            case _:
                axioms = [Eq(head(vs), self.term_for(d, vs))]
        self._axioms[b.key] = axioms

    def defining_axioms(self, index: int, arity: int) -> list[Formula]:
        """Schematic defining equations (free variables v1..vn); empty for oracles."""
        self.lookup(index, arity)
        return list(self._axioms.get((index, arity), []))

    # evaluation

    def evaluate(self, index: int, arity: int, args, budget: Budget | None = None, ctx=None) -> int:
        b = self.lookup(index, arity)
        return pr.evaluate(b.definition, args, budget, ctx)

    def emit_eval_derivation(self, index: int, arity: int, args,
                             budget: Budget | None = None) -> Derivation:
        """A proof of ``f(#args) = #value`` from the defining equations."""
        b = self.lookup(index, arity)
        if b.is_oracle:
            raise RegistryError(
                f"f{index}^{arity} is oracle-backed ({b.definition.name}); "
                "it has no defining equations to derive from")
        builder = DerivationBuilder()
        memo: dict = {}
        self._prove(builder, memo, index, arity, tuple(args), budget or Budget(max_seconds=None))
        return builder.build()

    def _prove(self, builder, memo, index, arity, args, budget) -> int:
        key = (index, arity, args)
        if key in memo:
            return memo[key]
        budget.tick()
        b = self.lookup(index, arity)
        if b.is_oracle:
            raise RegistryError(f"cannot derive values of oracle symbol f{index}^{arity}")
        if isinstance(b.definition, PrimitiveRecursion) and args[-1] > 1:
            *xs, y = args
            if (index, arity, (*xs, y - 1)) not in memo:
                # walk up from 0 so the stack stays shallow however large y is
                for k in range(y):
                    self._prove(builder, memo, index, arity, (*xs, k), budget)
        axioms = self._axioms[b.key]
        values = [Numeral(a) for a in args]
        if isinstance(b.definition, PrimitiveRecursion):
            *xs, y = args
            pattern = axioms[0] if y == 0 else axioms[1]
            values = [Numeral(a) for a in xs] + [Numeral(max(y - 1, 0))]
        else:
            pattern = axioms[0]
        current = pattern
        for i, v in enumerate(values, start=1):
            current = substitute(current, i, v)
        line = builder.axiom(current, "DEF")
        while not isinstance(current.r, Numeral):
            sub = _innermost_closed_app(current.r)
            sub_value = self.evaluate(sub.index, sub.arity, [a.value for a in sub.args], budget)
            sub_line = self._prove(builder, memo, sub.index, sub.arity,
                                   tuple(a.value for a in sub.args), budget)
            sub_eq = Eq(sub, Numeral(sub_value))
            rewritten = Eq(current.l, _replace_in_term(current.r, sub, Numeral(sub_value)))
            ii = builder.axiom(Implies(sub_eq, Implies(current, rewritten)), "II")
            step = builder.add(Implies(current, rewritten), MP(sub_line, ii))
            line = builder.add(rewritten, MP(line, step))
            current = rewritten
        memo[key] = line
        return line


def _innermost_closed_app(t: Term) -> FnApp:
    if isinstance(t, FnApp):
        for a in t.args:
            if not isinstance(a, Numeral):
                return _innermost_closed_app(a)
        return t
    if hasattr(t, "inner"):
        return _innermost_closed_app(t.inner)
    raise RegistryError(f"no function application left in {t!r}")


def _replace_in_term(t: Term, old: Term, new: Term) -> Term:
    return replace_term(Eq(t, t), old, new).l


# manifest (JSON)

def definition_to_json(d: PrDefinition):
    match d:
        case ZeroConst(arity):
            return {"op": "zero", "arity": arity}
        case Successor():
            return {"op": "succ"}
        case Projection(n, k):
            return {"op": "proj", "n": n, "k": k}
        case Composition(outer, inners):
            return {"op": "comp", "outer": definition_to_json(outer),
                    "inners": [definition_to_json(g) for g in inners]}
        case PrimitiveRecursion(base_g, step_h):
            return {"op": "rec", "base": definition_to_json(base_g),
                    "step": definition_to_json(step_h)}
        case Oracle(name=name):
            return f"oracle:{name}"
    raise TypeError(f"not a definition: {d!r}")


def definition_from_json(obj, oracles: dict[str, Oracle] | None = None) -> PrDefinition:
    if isinstance(obj, str):
        if not obj.startswith("oracle:"):
            raise RegistryError(f"unknown definition reference {obj!r}")
        table = oracles if oracles is not None else native_oracles()
        try:
            return table[obj.split(":", 1)[1]]
        except KeyError:
            raise RegistryError(f"unknown oracle {obj!r}") from None
    op = obj.get("op")
    if op == "zero":
        return ZeroConst(int(obj.get("arity", 0)))
    if op == "succ":
        return Successor()
    if op == "proj":
        return Projection(int(obj["n"]), int(obj["k"]))
    if op == "comp":
        return Composition(definition_from_json(obj["outer"], oracles),
                           tuple(definition_from_json(g, oracles) for g in obj["inners"]))
    if op == "rec":
        return PrimitiveRecursion(definition_from_json(obj["base"], oracles),
                                  definition_from_json(obj["step"], oracles))
    raise RegistryError(f"unknown definition node {obj!r}")


def from_manifest(entries: list[dict]) -> Registry:
    reg = Registry()
    for e in entries:
        reg.register(int(e["index"]), int(e["arity"]), definition_from_json(e["definition"]),
                     e.get("name", ""))
    _check_fixed_symbols(reg)
    return reg.freeze()


def load_manifest(path: str | Path) -> Registry:
    return from_manifest(json.loads(Path(path).read_text(encoding="utf-8")))


def _check_fixed_symbols(reg: Registry) -> None:
    for key, name in ((DIAG, "diag"), (CC, "cc")):
        b = reg.get(*key)
        if b is None or not (isinstance(b.definition, Oracle) and b.definition.name == name):
            raise RegistryError(f"f{key[0]}^{key[1]} must be bound to oracle:{name}")


DEFAULT_BINARY = [
    (0, pr.ADD, "add"),
    (1, pr.MUL, "mul"),
    (2, pr.MONUS, "monus"),
    (3, pr.LEFT, "left"),
    (4, pr.RIGHT, "right"),
    (5, None, "g"),
    (6, pr.ZERO2, "zero"),
    (7, pr.DOUBLE_ADD, "double_add"),
    (8, pr.COND, "cond"),
    (9, pr.SUCC_LEFT, "succ_left"),
]


def default_registry() -> Registry:
    """diag, cc, neg at arity 1; ten binary symbols with g at index 5."""
    oracles = native_oracles()
    reg = Registry()
    reg.register(0, 1, oracles["diag"], "diag")
    reg.register(1, 1, oracles["cc"], "cc")
    reg.register(2, 1, oracles["neg"], "neg")
    for index, d, name in DEFAULT_BINARY:
        reg.register(index, 2, oracles["g"] if d is None else d, name)
    reg.register(3, 1, pr.Successor(), "succ")
    reg.register(4, 1, pr.PRED, "pred")
    reg.register(5, 1, pr.FACTORIAL, "factorial")
    return reg.freeze()
