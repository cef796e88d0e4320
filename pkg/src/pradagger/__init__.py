"""PRA-dagger: syntax, Goedel coding, a proof kernel and the Kripke-constant extension tower,
with an auditor for the Curry-style argument against the unrestricted fixed-point lemma."""

from pradagger.audit import AuditReport, audit, replay_cycle, revision_iterate
from pradagger.coding import (
    cc_code, decode_formula, decode_sequence, decode_term, diag_code, encode_formula,
    encode_sequence, encode_term, numeral_code,
)
from pradagger.derivation import Derivation, DerivationBuilder
from pradagger.fixed_point import (
    FixedPointResult, build_delta, emit_fp_delta_derivations, fixed_point,
)
from pradagger.kernel import CoreOracle, Verdict, check_derivation, check_proof
from pradagger.outcome import Budget, EvalOutcome
from pradagger.registry import Registry, default_registry
from pradagger.syntax import parse, parse_formula, parse_term, unparse
from pradagger.tower import (
    CurrySequenceRecord, Query, Session, TowerOracle, curry_sequence, e_formula, g_eval,
    in_S_m, is_m_bounded_proof, recognize_A_dagger, recognize_A_star, recognize_Aa, tower_for,
)

__version__ = "0.1.0"

__all__ = [
    "audit",
    "AuditReport",
    "Budget",
    "build_delta",
    "cc_code",
    "check_derivation",
    "check_proof",
    "CoreOracle",
    "curry_sequence",
    "CurrySequenceRecord",
    "decode_formula",
    "decode_sequence",
    "decode_term",
    "default_registry",
    "Derivation",
    "DerivationBuilder",
    "diag_code",
    "e_formula",
    "emit_fp_delta_derivations",
    "encode_formula",
    "encode_sequence",
    "encode_term",
    "EvalOutcome",
    "fixed_point",
    "FixedPointResult",
    "g_eval",
    "in_S_m",
    "is_m_bounded_proof",
    "numeral_code",
    "parse",
    "parse_formula",
    "parse_term",
    "Query",
    "recognize_A_dagger",
    "recognize_A_star",
    "recognize_Aa",
    "Registry",
    "replay_cycle",
    "revision_iterate",
    "Session",
    "tower_for",
    "TowerOracle",
    "unparse",
    "Verdict",
]
