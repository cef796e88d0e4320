"""Three-valued evaluation outcomes and the resource budget."""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable


class Status(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    ILL_FOUNDED = "ill-founded"


@dataclass(frozen=True)
class EvalOutcome:
    status: Status
    cycle: tuple = ()
    """For ILL_FOUNDED: the dependency loop, first and last entries equal."""

    def __post_init__(self):
        if self.status is Status.ILL_FOUNDED:
            if len(self.cycle) < 2 or self.cycle[0] != self.cycle[-1]:
                raise ValueError("an ill-founded outcome needs a closed cycle")

    @property
    def holds(self) -> bool:
        return self.status is Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status is Status.FAILS

    @property
    def ill_founded(self) -> bool:
        return self.status is Status.ILL_FOUNDED

    def __str__(self) -> str:
        if self.ill_founded:
            return f"ill-founded(cycle of {len(self.cycle) - 1})"
        return self.status.value


HOLDS = EvalOutcome(Status.HOLDS)
FAILS = EvalOutcome(Status.FAILS)


def ill_founded(cycle) -> EvalOutcome:
    return EvalOutcome(Status.ILL_FOUNDED, tuple(cycle))


def from_bool(b: bool) -> EvalOutcome:
    return HOLDS if b else FAILS


def any_of(alternatives: Iterable[Callable[[], EvalOutcome]]) -> EvalOutcome:
    """Strong Kleene disjunction, evaluated left to right; stops at the first Holds."""
    pending = None
    for alt in alternatives:
        out = alt()
        if out.holds:
            return out
        if out.ill_founded and pending is None:
            pending = out
    return pending or FAILS


def all_of(conjuncts: Iterable[Callable[[], EvalOutcome]]) -> EvalOutcome:
    """Strong Kleene conjunction; stops at the first Fails."""
    pending = None
    for c in conjuncts:
        out = c()
        if out.fails:
            return out
        if out.ill_founded and pending is None:
            pending = out
    return pending or HOLDS


class IllFoundedError(Exception):
    """Raised through arithmetic evaluation when an oracle value is ill-founded."""

    def __init__(self, outcome: EvalOutcome):
        super().__init__(str(outcome))
        self.outcome = outcome


class BudgetExceeded(Exception):
    def __init__(self, resource: str, limit):
        super().__init__(f"{resource} budget of {limit} exhausted")
        self.resource = resource
        self.limit = limit


@dataclass
class Budget:
    """Shared step/depth/time allowance. ``None`` means unlimited."""

    max_steps: int | None = 2_000_000
    max_depth: int | None = 400
    max_seconds: float | None = 60.0
    steps: int = 0
    _started: float | None = field(default=None, repr=False)

    def tick(self, n: int = 1) -> None:
        if self._started is None:
            self._started = time.monotonic()
        self.steps += n
        if self.max_steps is not None and self.steps > self.max_steps:
            raise BudgetExceeded("step", self.max_steps)
        if self.max_seconds is not None and self.steps % 256 == 0:
            if time.monotonic() - self._started > self.max_seconds:
                raise BudgetExceeded("time", self.max_seconds)

    def check_depth(self, depth: int) -> None:
        if self.max_depth is not None and depth > self.max_depth:
            raise BudgetExceeded("depth", self.max_depth)

    def fresh(self) -> "Budget":
        return Budget(self.max_steps, self.max_depth, self.max_seconds)


def unlimited() -> Budget:
    return Budget(None, None, None)
