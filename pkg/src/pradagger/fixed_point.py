"""The diagonal fixed-point construction and the specific sentence Delta.

For a formula phi(w) the construction takes theta(w) = phi[w/diag(w)] and
sigma = theta[w/#t] with t the code of theta, so that the code of sigma is
diag_code(t). Both directions of sigma <=> phi(#code(sigma)) are emitted as
kernel-checkable derivations from the closed evaluation axiom for diag,
the indiscernibility scheme and modus ponens.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from pradagger.coding import cc_code, diag_code, encode_formula
from pradagger.derivation import Derivation, DerivationBuilder, derivation_to_json
from pradagger.registry import Registry
from pradagger.syntax import (
    W, Eq, Formula, Implies, Numeral, Var, cc, diag, free_vars, mentions_symbol, substitute,
    unparse,
)
from pradagger.tower import tower_for

MODES = ("unrestricted", "restricted")


class FixedPointError(ValueError):
    pass


class RestrictedModeRejection(FixedPointError):
    """phi uses the symbol of g, which the restricted lemma excludes."""


@dataclass(frozen=True)
class FixedPointResult:
    sigma: Formula
    phi: Formula
    theta: Formula
    derivation_fwd: Derivation
    derivation_bwd: Derivation
    mode: str

    @property
    def sigma_code(self) -> int:
        return encode_formula(self.sigma)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "phi": unparse(self.phi),
            "theta": unparse(self.theta),
            "sigma": unparse(self.sigma),
            "derivation_fwd": derivation_to_json(self.derivation_fwd),
            "derivation_bwd": derivation_to_json(self.derivation_bwd),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


def _symmetry(b: DerivationBuilder, eq_line: int) -> int:
    """From a line ``l = r`` derive ``r = l`` (II instance plus LI)."""
    eq = b.formula(eq_line)
    l, r = eq.l, eq.r
    refl = Eq(l, l)
    ii = b.axiom(Implies(eq, Implies(refl, Eq(r, l))), "II")
    step = b.mp(eq_line, ii)
    return b.mp(b.axiom(refl, "LI"), step)


def _rewrite(b: DerivationBuilder, eq_line: int, source: Formula, target: Formula) -> int:
    """From ``t1 = t2`` (at eq_line) obtain the line ``source => target`` by II."""
    ii = b.axiom(Implies(b.formula(eq_line), Implies(source, target)), "II")
    return b.mp(eq_line, ii)


def _chain(b: DerivationBuilder, first: int, second: int) -> int:
    """From ``A => B`` and ``B => C`` derive ``A => C`` through a tautology."""
    ab, bc = b.formula(first), b.formula(second)
    a, c = ab.antecedent, bc.consequent
    taut = b.axiom(Implies(ab, Implies(bc, Implies(a, c))), "TAUT")
    return b.mp(second, b.mp(first, taut))


def fixed_point(phi: Formula, mode: str = "unrestricted",
                registry: Registry | None = None) -> FixedPointResult:
    if mode not in MODES:
        raise FixedPointError(f"unknown mode {mode!r}; expected one of {MODES}")
    if free_vars(phi) != {W}:
        raise FixedPointError(f"phi must have exactly w free, has {sorted(free_vars(phi))}")
    if mode == "restricted":
        p = tower_for(registry).registry.g_index
        if mentions_symbol(phi, p):
            raise RestrictedModeRejection(
                f"phi mentions f{p}, the symbol of g; restricted mode excludes it")
    theta = substitute(phi, W, diag(Var(W)))
    t = encode_formula(theta)
    sigma = substitute(theta, W, Numeral(t))
    s = diag_code(t)
    target = substitute(phi, W, Numeral(s))
    evaluation = Eq(diag(Numeral(t)), Numeral(s))

    fwd = DerivationBuilder()
    _rewrite(fwd, fwd.axiom(evaluation, "DEF"), sigma, target)

    bwd = DerivationBuilder()
    flipped = _symmetry(bwd, bwd.axiom(evaluation, "DEF"))
    _rewrite(bwd, flipped, target, sigma)
    return FixedPointResult(sigma, phi, theta, fwd.build(), bwd.build(), mode)


def build_delta(p: int | None = None, registry: Registry | None = None) -> Formula:
    """Diagonalization of the p-th enumerated formula f_p(a_p, #p) = cc(diag(w))."""
    tower = tower_for(registry)
    if p is None:
        p = tower.registry.g_index
    return tower.curry_sequence(p).diagonal


def emit_fp_delta_derivations(p: int | None = None,
                              registry: Registry | None = None) -> tuple[Derivation, Derivation]:
    """Derivations of Delta => f_p(a_p, #p) = cc(#d) and its converse, d the code of Delta.

    The equality used is the L-form axiom cc(diag(#e)) = #K (K the code of
    Delta => bot), together with the closed evaluation cc(#d) = #K.
    """
    delta = build_delta(p, registry)
    left, right = delta.l, delta.r
    e = right.args[0].args[0].value
    d = diag_code(e)
    k = Numeral(cc_code(d))
    via_code = Eq(left, cc(Numeral(d)))
    via_value = Eq(left, k)

    l_form = Eq(right, k)
    cc_eval = Eq(cc(Numeral(d)), k)

    fwd = DerivationBuilder()
    l_axiom = fwd.axiom(l_form, "L")
    k_is_cc = _symmetry(fwd, fwd.axiom(cc_eval, "DEF"))
    first = _rewrite(fwd, l_axiom, delta, via_value)
    second = _rewrite(fwd, k_is_cc, via_value, via_code)
    _chain(fwd, first, second)

    bwd = DerivationBuilder()
    first = _rewrite(bwd, bwd.axiom(cc_eval, "DEF"), via_code, via_value)
    k_is_right = _symmetry(bwd, bwd.axiom(l_form, "L"))
    second = _rewrite(bwd, k_is_right, via_value, delta)
    _chain(bwd, first, second)
    return fwd.build(), bwd.build()
