"""Mechanical replay of the Curry-style argument against the unrestricted fixed-point lemma.

The auditor builds Delta and h, runs the structural checks on the coding,
asks the tower whether Delta and ~Delta are PRA-dagger axioms at bound p and
whether h codes a p-bounded proof, and classifies what it finds. It never
assumes that ~Delta is an axiom; ``assume_mt`` pins that one query to Holds
so the inconsistency branch can be exercised and inspected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from pradagger._bignum import abbreviate, digest
from pradagger.coding import cc_code, decode_sequence, diag_code, encode_formula, numeral_code
from pradagger.derivation import Axiom, Derivation, DerivationBuilder, derivation_to_json
from pradagger.fixed_point import _rewrite, _symmetry, build_delta, emit_fp_delta_derivations
from pradagger.kernel import check_proof
from pradagger.outcome import HOLDS, Budget, BudgetExceeded, EvalOutcome
from pradagger.registry import Registry
from pradagger.syntax import (
    Eq, FnApp, Numeral, cc, curry_conditional, free_vars, mentions_numeral, negate, unparse,
)
from pradagger.tower import TRACE_LIMIT, Query, Session, Tower, TowerOracle, is_cc_diag, tower_for

INCONSISTENCY = "InconsistencyWitnessed"
ILL_FOUNDED = "IllFoundedDependency"
BLOCKED = "Blocked"
DEFAULT_STAGES = 8


@dataclass(frozen=True)
class Classification:
    kind: str
    reason: str = ""
    cycle: tuple = ()
    cycle_source: str = ""

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.reason:
            out["reason"] = self.reason
        if self.cycle:
            out["cycle_source"] = self.cycle_source
            out["cycle"] = [q.to_json(TRACE_LIMIT) for q in self.cycle]
        return out


@dataclass
class AuditReport:
    p: int
    delta: object
    h: int
    structural_checks: list
    ml_query: dict
    h_certification: EvalOutcome | None
    classification: Classification
    trace: dict
    registry_manifest: list
    assume_mt: bool = False
    proofs: dict = field(default_factory=dict)
    revision: list | None = None

    def to_json(self) -> dict:
        def outcome(o):
            return None if o is None else o.status.value
        out = {
            "format": "pradagger-audit/1",
            "p": self.p,
            "assume_mt": self.assume_mt,
            "delta": unparse(self.delta, TRACE_LIMIT),
            "h": {"bits": self.h.bit_length(), "sha256": digest(self.h),
                  "abbrev": abbreviate(self.h, TRACE_LIMIT)},
            "structural_checks": [{"name": n, "pass": ok} for n, ok in self.structural_checks],
            "ml_query": {k: outcome(v) for k, v in self.ml_query.items()},
            "h_certification": outcome(self.h_certification),
            "classification": self.classification.to_json(),
            "proofs": {k: derivation_to_json(d) for k, d in self.proofs.items()},
            "trace": self.trace,
            "registry_manifest": self.registry_manifest,
        }
        if self.revision is not None:
            out["revision"] = self.revision
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False, sort_keys=True)

    def summary(self) -> str:
        lines = [f"p = {self.p}", f"Delta: {unparse(self.delta, 24)}",
                 f"h: {self.h.bit_length()} bits, sha256 {digest(self.h)}"]
        for name, ok in self.structural_checks:
            lines.append(f"  check {name}: {'pass' if ok else 'FAIL'}")
        for name, o in self.ml_query.items():
            lines.append(f"  {name}: {o if o is not None else 'not evaluated'}")
        lines.append(f"  h certification: {self.h_certification or 'not evaluated'}")
        c = self.classification
        lines.append(f"classification: {c.kind}" + (f" ({c.reason})" if c.reason else ""))
        for q in c.cycle:
            lines.append(f"    {q.describe(24)}")
        return "\n".join(lines)


def structural_checks(p: int, tower: Tower) -> list[tuple[str, bool]]:
    rec = tower.curry_sequence(p)
    delta = build_delta(p, tower.registry)
    h = rec.c_i
    e = encode_formula(tower.e_formula(p))
    right = delta.r
    fwd, bwd = emit_fp_delta_derivations(p, tower.registry)
    oracle = TowerOracle(tower, Budget(max_seconds=None))
    fp_ok = all(check_proof(d, oracle).valid for d in (fwd, bwd)) and not oracle.ill_founded_seen
    return [
        ("decode_round_trip", decode_sequence(h) == list(rec.wffs)),
        ("delta_is_sentence", not free_vars(delta)),
        ("delta_shape", isinstance(delta.l, FnApp) and is_cc_diag(right)
         and right.args[0].args[0] == Numeral(e)),
        ("neg_delta_is_first_member", rec.wffs[0] == negate(delta)),
        ("second_member_is_curry_conditional", rec.wffs[1] == curry_conditional(delta)),
        ("numeral_h_absent", not any(mentions_numeral(w, h) for w in rec.wffs)),
        ("numeral_code_exceeds_h", numeral_code(h) > h),
        ("fp_delta_derivations_verify", fp_ok),
    ]


def _proof_of_delta(p: int, tower: Tower) -> Derivation:
    """Delta from the PRA-dagger axiom f_p(a_p, #p) = #K and the converse FP_Delta derivation."""
    delta = build_delta(p, tower.registry)
    d = diag_code(delta.r.args[0].args[0].value)
    k = Numeral(cc_code(d))
    via_code = Eq(delta.l, cc(Numeral(d)))
    via_value = Eq(delta.l, k)
    _, bwd = emit_fp_delta_derivations(p, tower.registry)
    b = DerivationBuilder()
    for ln in bwd.lines:
        b.add(ln.formula, ln.justification)
    conditional = len(bwd.lines)
    value_line = b.axiom(via_value, "A†")
    k_is_cc = _symmetry(b, b.axiom(Eq(cc(Numeral(d)), k), "DEF"))
    code_line = b.mp(value_line, _rewrite(b, k_is_cc, via_value, via_code))
    b.mp(code_line, conditional)
    return b.build()


def _proof_of_neg_delta(p: int, tower: Tower) -> Derivation:
    b = DerivationBuilder()
    b.add(negate(build_delta(p, tower.registry)), Axiom("A†"))
    return b.build()


def audit(p: int | None = None, budget: Budget | None = None, *, assume_mt: bool = False,
          registry: Registry | None = None, stages: int | None = None) -> AuditReport:
    tower = tower_for(registry)
    reg = tower.registry
    if p is None:
        p = reg.g_index
    elif p != reg.g_index:
        raise ValueError(f"p = {p} but the registry binds g at index {reg.g_index}")
    budget = budget if budget is not None else Budget()
    delta = build_delta(p, reg)
    h = tower.curry_sequence(p).c_i
    neg_key = Query("A†", negate(delta), p)
    assumptions = {neg_key: HOLDS} if assume_mt else {}

    checks = structural_checks(p, tower)
    ml: dict = {"A†(Delta, p)": None, "A†(~Delta, p)": None}
    cert = None
    sessions: dict[str, Session] = {}
    report = AuditReport(p, delta, h, checks, ml, None, Classification(BLOCKED), {},
                         reg.manifest(), assume_mt)

    def run(name: str, thunk):
        s = tower.session(budget, assumptions=assumptions)
        sessions[name] = s
        return thunk(s)

    try:
        ml["A†(~Delta, p)"] = run("neg_delta", lambda s: s.recognize_A_dagger(negate(delta), p))
        ml["A†(Delta, p)"] = run("delta", lambda s: s.recognize_A_dagger(delta, p))
        cert = run("h_certification", lambda s: s.is_m_bounded_proof(h, p))
    except BudgetExceeded as exc:
        report.classification = Classification(BLOCKED, f"budget: {exc}")
    else:
        report.classification = _classify(p, tower, ml, cert, assumptions, report)
    report.h_certification = cert
    report.trace = {name: s.trace_json() for name, s in sessions.items()}
    if stages:
        report.revision = revision_iterate(Query("A†", negate(delta), p), stages, tower,
                                           budget.fresh())
    return report


def _classify(p, tower, ml, cert, assumptions, report) -> Classification:
    neg = ml["A†(~Delta, p)"]
    if neg.holds and cert.holds:
        proofs = {"delta": _proof_of_delta(p, tower), "neg_delta": _proof_of_neg_delta(p, tower)}
        verdicts = {k: check_proof(d, TowerOracle(tower, Budget(), assumptions))
                    for k, d in proofs.items()}
        if all(v.valid for v in verdicts.values()):
            report.proofs = proofs
            return Classification(INCONSISTENCY, "kernel-valid proofs of Delta and ~Delta")
        bad = next(k for k, v in verdicts.items() if not v.valid)
        v = verdicts[bad]
        if v.ill_founded:
            return Classification(ILL_FOUNDED, f"proof of {bad} rests on an ill-founded axiom",
                                  v.cycle, f"proof:{bad}")
        return Classification(BLOCKED, f"proof of {bad} rejected at line {v.line}: {v.reason}")
    for name, out in (("A†(~Delta, p)", neg), ("A†(Delta, p)", ml["A†(Delta, p)"]),
                      ("h_certification", cert)):
        if out.ill_founded:
            return Classification(ILL_FOUNDED, f"{name} is ill-founded", out.cycle, name)
    if not neg.holds:
        return Classification(BLOCKED, "A†(~Delta, p) fails: ~Delta is not a PRA-dagger axiom")
    return Classification(BLOCKED, "h does not code a p-bounded proof")


def replay_cycle(cycle, tower: Tower | None = None,
                 budget: Budget | None = None) -> list[dict]:
    """Re-derive each edge of a cycle: evaluating the source in a fresh session must ask the target."""
    tower = tower or tower_for()
    steps = []
    for src, dst in zip(cycle, cycle[1:]):
        s = tower.session(budget.fresh() if budget else None, shallow=True)
        s.ask(src)
        root = s.nodes[src]
        target = s.nodes.get(dst)
        labels = [label for (a, b, label) in s.edges if a == root and b == target]
        steps.append({"from": src.describe(), "to": dst.describe(),
                      "reproduced": bool(labels), "label": labels[0] if labels else None})
    return steps


def revision_iterate(query: Query, stages: int = DEFAULT_STAGES, tower: Tower | None = None,
                     budget: Budget | None = None) -> list[bool]:
    """Stage 0 answers in-progress queries with Fails; stage k+1 with stage k's values."""
    if stages < 1:
        raise ValueError("stages must be at least 1")
    tower = tower or tower_for()
    valuation: dict = {}
    values = []
    for _ in range(stages):
        s = tower.session(budget.fresh() if budget else None, valuation=valuation)
        out = s.ask(query)
        values.append(out.holds)
        valuation = dict(s.results)
    return values
