"""Primitive recursive definitions and their evaluator.

The evaluator is structural, with three shortcuts for recursion steps whose
shape fixes the result without unfolding (the step ignores the recursive
value, returns it unchanged, or returns its successor). Recursion in
this artifact always runs on the *last* argument; the other arguments may be
codes with millions of bits, so the shortcuts are what keep functions such
as addition usable on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

from pradagger.outcome import Budget, EvalOutcome, IllFoundedError


@dataclass(frozen=True)
class ZeroConst:
    arity: int = 0


@dataclass(frozen=True)
class Successor:
    @property
    def arity(self) -> int:
        return 1


@dataclass(frozen=True)
class Projection:
    n: int
    k: int

    def __post_init__(self):
        if not (self.n > 0 and 1 <= self.k <= self.n):
            raise ValueError(f"projection needs n > 0 and 1 <= k <= n, got ({self.n}, {self.k})")

    @property
    def arity(self) -> int:
        return self.n


@dataclass(frozen=True)
class Composition:
    outer: "PrDefinition"
    inners: tuple

    def __post_init__(self):
        if not isinstance(self.inners, tuple):
            object.__setattr__(self, "inners", tuple(self.inners))
        if not self.inners:
            raise ValueError("composition needs at least one inner function")
        if self.outer.arity != len(self.inners):
            raise ValueError(
                f"outer function has arity {self.outer.arity} but {len(self.inners)} inners")
        arities = {g.arity for g in self.inners}
        if len(arities) != 1:
            raise ValueError(f"inner functions disagree on arity: {sorted(arities)}")

    @property
    def arity(self) -> int:
        return self.inners[0].arity


@dataclass(frozen=True)
class PrimitiveRecursion:
    base_g: "PrDefinition"
    step_h: "PrDefinition"

    def __post_init__(self):
        if self.step_h.arity != self.base_g.arity + 2:
            raise ValueError(
                f"step arity {self.step_h.arity} should be base arity {self.base_g.arity} + 2")

    @property
    def arity(self) -> int:
        return self.base_g.arity + 1


@dataclass(frozen=True)
class Oracle:
    """A natively evaluated function. Not part of the p.r. calculus proper.

    ``grounded`` oracles (diag, cc, neg) compute pure syntax maps and never
    consult the axiom tower; the ``g`` oracle does. ``evaluator`` receives
    the argument list and an evaluation context (a tower session or None).
    """

    name: str
    arity: int
    evaluator: Callable = field(compare=False, repr=False)
    grounded: bool = True


PrDefinition = Union[ZeroConst, Successor, Projection, Composition, PrimitiveRecursion, Oracle]


def depends_on(d: PrDefinition, position: int) -> bool:
    """Whether ``d``'s value can depend on its argument at 1-based ``position``."""
    match d:
        case ZeroConst():
            return False
        case Successor():
            return position == 1
        case Projection(_, k):
            return k == position
        case Composition(outer, inners):
            return any(depends_on(outer, j + 1) and depends_on(g, position)
                       for j, g in enumerate(inners))
        case PrimitiveRecursion(base_g, step_h):
            n = d.arity
            if position == n:
                return True
            return depends_on(base_g, position) or depends_on(step_h, position)
    return True


def _is_last_projection(h: PrDefinition) -> bool:
    return isinstance(h, Projection) and h.k == h.n


def _is_succ_of_last(h: PrDefinition) -> bool:
    return (isinstance(h, Composition) and isinstance(h.outer, Successor)
            and _is_last_projection(h.inners[0]))


def evaluate(d: PrDefinition, args, budget: Budget | None = None, ctx=None) -> int:
    """Value of ``d`` at ``args``.

    Raises IllFoundedError if an oracle reports an ill-founded value and
    BudgetExceeded when the step budget runs out.
    """
    args = list(args)
    if len(args) != d.arity:
        raise ValueError(f"arity mismatch: definition takes {d.arity}, given {len(args)}")
    budget = budget if budget is not None else Budget(max_seconds=None, max_depth=None)
    return _eval(d, args, budget, ctx)


def _eval(d: PrDefinition, args: list, budget: Budget, ctx) -> int:
    budget.tick()
    match d:
        case ZeroConst():
            return 0
        case Successor():
            return args[0] + 1
        case Projection(_, k):
            return args[k - 1]
        case Composition(outer, inners):
            vals = [_eval(g, args, budget, ctx) if depends_on(outer, j + 1) else 0
                    for j, g in enumerate(inners)]
            return _eval(outer, vals, budget, ctx)
        case PrimitiveRecursion(base_g, step_h):
            *xs, y = args
            if y == 0:
                return _eval(base_g, xs, budget, ctx)
            last = step_h.arity
            if not depends_on(step_h, last):
                return _eval(step_h, xs + [y - 1, 0], budget, ctx)
            if _is_last_projection(step_h):
                return _eval(base_g, xs, budget, ctx)
            if _is_succ_of_last(step_h):
                return _eval(base_g, xs, budget, ctx) + y
            acc = _eval(base_g, xs, budget, ctx)
            for k in range(y):
                acc = _eval(step_h, xs + [k, acc], budget, ctx)
            return acc
        case Oracle(evaluator=fn):
            value = fn(args, ctx)
            if isinstance(value, EvalOutcome):
                raise IllFoundedError(value)
            return value
    raise TypeError(f"not a definition: {d!r}")


# A small library, all recursing on the last argument.

def proj(n: int, k: int) -> Projection:
    return Projection(n, k)


def comp(outer: PrDefinition, *inners: PrDefinition) -> Composition:
    return Composition(outer, tuple(inners))


def rec(base: PrDefinition, step: PrDefinition) -> PrimitiveRecursion:
    return PrimitiveRecursion(base, step)


ADD = rec(proj(1, 1), comp(Successor(), proj(3, 3)))
"""add(x, y): add(x, 0) = x; add(x, k+1) = S(add(x, k))."""

MUL = rec(ZeroConst(1), comp(ADD, proj(3, 3), proj(3, 1)))
"""mul(x, y): mul(x, 0) = 0; mul(x, k+1) = add(mul(x, k), x)."""

PRED = rec(ZeroConst(0), proj(2, 1))
MONUS = rec(proj(1, 1), comp(PRED, proj(3, 3)))
"""Truncated subtraction x - y."""

ONE = comp(Successor(), ZeroConst(0))
FACTORIAL = rec(ONE, comp(MUL, proj(2, 2), comp(Successor(), proj(2, 1))))
"""fact(0) = 1; fact(k+1) = mul(fact(k), S(k))."""

LEFT = proj(2, 1)
RIGHT = proj(2, 2)
ZERO2 = ZeroConst(2)
DOUBLE_ADD = comp(ADD, ADD, proj(2, 2))
"""x + 2y."""
COND = rec(proj(1, 1), ZeroConst(3))
"""x when y = 0, else 0."""
SUCC_LEFT = comp(Successor(), proj(2, 1))
