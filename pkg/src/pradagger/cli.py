"""Command-line interface: ``pradagger <command> ...``.

Exit codes: 0 success; 1 domain error (JSON on stderr); 2 usage error.
``check`` exits 0 for a valid derivation, 1 for an invalid one and 4 for an
ill-founded one. ``audit`` exits 3 for InconsistencyWitnessed, 4 for
IllFoundedDependency and 5 for Blocked.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from pradagger import coding
from pradagger._bignum import abbreviate, from_decimal, to_decimal
from pradagger.audit import BLOCKED, DEFAULT_STAGES, ILL_FOUNDED, INCONSISTENCY, audit
from pradagger.derivation import derivation_to_json, loads
from pradagger.fixed_point import MODES, build_delta, emit_fp_delta_derivations, fixed_point
from pradagger.kernel import CoreOracle, check_derivation
from pradagger.outcome import Budget, BudgetExceeded, IllFoundedError
from pradagger.registry import Registry, RegistryError, load_manifest
from pradagger.syntax import Numeral, ParseError, parse, unparse
from pradagger.tower import TowerOracle, tower_for

AUDIT_EXIT = {INCONSISTENCY: 3, ILL_FOUNDED: 4, BLOCKED: 5}
CHECK_EXIT = {"valid": 0, "invalid": 1, "ill-founded": 4}


class DomainError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    registry_path: str | None = None
    max_steps: int = 2_000_000
    max_depth: int = 400
    max_seconds: float = 60.0
    mode: str = "unrestricted"
    stages: int = DEFAULT_STAGES
    out: str | None = None
    abbrev: int | None = None

    def budget(self) -> Budget:
        return Budget(self.max_steps, self.max_depth, self.max_seconds)

    def registry(self) -> Registry:
        if self.registry_path is None:
            return tower_for().registry
        return load_manifest(self.registry_path)


def ast_to_json(node) -> dict:
    out: dict = {"type": type(node).__name__}
    for f in dataclasses.fields(node):
        v = getattr(node, f.name)
        if isinstance(v, tuple):
            out[f.name] = [ast_to_json(a) for a in v]
        elif dataclasses.is_dataclass(v):
            out[f.name] = ast_to_json(v)
        elif isinstance(node, Numeral):
            out[f.name] = to_decimal(v)
        else:
            out[f.name] = v
    return out


def _code(text: str) -> int:
    try:
        return from_decimal(text)
    except ValueError as exc:
        raise DomainError(str(exc)) from None


def _code_text(n: int, cfg: Config) -> str:
    return to_decimal(n) if cfg.abbrev is None else abbreviate(n, cfg.abbrev)


def _subject_code(args) -> int:
    if getattr(args, "formula", None) is not None:
        return coding.encode_formula(parse(args.formula, "formula"))
    if getattr(args, "code", None) is None:
        raise DomainError("give a code or --formula")
    return _code(args.code)


def _decode_any(n: int):
    tag = coding.cantor_unpair(n)[0] if n > 0 else None
    if tag == coding.TAG_SEQUENCE:
        return "sequence", coding.decode_sequence(n)
    f = coding.decode_formula(n)
    if f is not None:
        return "formula", f
    t = coding.decode_term(n)
    if t is not None:
        return "term", t
    return None, None


_SYMBOL = re.compile(r"f(\d+)\^(\d+)$")


# commands

def cmd_parse(args, cfg: Config) -> tuple[int, str]:
    ast = parse(args.text, args.kind)
    return 0, json.dumps({"kind": args.kind, "canonical": unparse(ast, cfg.abbrev),
                          "ast": ast_to_json(ast)}, indent=2, ensure_ascii=False)


def cmd_print(args, cfg: Config) -> tuple[int, str]:
    kind, obj = _decode_any(_code(args.code))
    if kind is None:
        raise DomainError("not the code of a term, formula or sequence")
    if kind == "sequence":
        return 0, "\n".join(unparse(f, cfg.abbrev) for f in obj)
    return 0, unparse(obj, cfg.abbrev)


def cmd_encode(args, cfg: Config) -> tuple[int, str]:
    if args.formula is not None:
        n = coding.encode_formula(parse(args.formula, "formula"))
    elif args.term is not None:
        n = coding.encode_term(parse(args.term, "term"))
    else:
        n = coding.encode_sequence([parse(s, "formula") for s in args.sequence])
    return 0, _code_text(n, cfg)


def cmd_decode(args, cfg: Config) -> tuple[int, str]:
    kind, obj = _decode_any(_code(args.code))
    if kind is None:
        raise DomainError("not the code of a term, formula or sequence")
    text = [unparse(f, cfg.abbrev) for f in obj] if kind == "sequence" else unparse(obj, cfg.abbrev)
    return 0, json.dumps({"kind": kind, "value": text}, indent=2, ensure_ascii=False)


def cmd_diag(args, cfg: Config) -> tuple[int, str]:
    return 0, _code_text(coding.diag_code(_subject_code(args)), cfg)


def cmd_cc(args, cfg: Config) -> tuple[int, str]:
    return 0, _code_text(coding.cc_code(_subject_code(args)), cfg)


def cmd_eval(args, cfg: Config) -> tuple[int, str]:
    m = _SYMBOL.match(args.symbol)
    if not m:
        raise DomainError(f"symbol must look like f<index>^<arity>, got {args.symbol!r}")
    index, arity = int(m[1]), int(m[2])
    values = [_code(a) for a in args.args]
    reg = cfg.registry()
    if args.derive:
        d = reg.emit_eval_derivation(index, arity, values, cfg.budget())
        return 0, json.dumps(derivation_to_json(d), indent=2, ensure_ascii=False)
    session = tower_for(reg).session(cfg.budget())
    try:
        value = reg.evaluate(index, arity, values, session.budget, ctx=session)
    except IllFoundedError as exc:
        return 4, json.dumps({"outcome": "ill-founded",
                              "cycle": [q.describe() for q in exc.outcome.cycle]}, indent=2)
    return 0, _code_text(value, cfg)


def cmd_check(args, cfg: Config) -> tuple[int, str]:
    d = loads(Path(args.file).read_text(encoding="utf-8"))
    reg = cfg.registry()
    oracle = CoreOracle(reg) if args.oracle == "core" else TowerOracle(tower_for(reg), cfg.budget())
    v = check_derivation(d, oracle)
    return CHECK_EXIT[v.status], json.dumps(v.to_json(lambda q: q.describe()), indent=2,
                                            ensure_ascii=False)


def _resolve_p(text: str, reg: Registry) -> int:
    return reg.g_index if text == "auto" else int(text)


def cmd_curry_seq(args, cfg: Config) -> tuple[int, str]:
    rec = tower_for(cfg.registry()).curry_sequence(args.index)
    return 0, json.dumps(rec.to_json(cfg.abbrev), indent=2, ensure_ascii=False)


def cmd_delta(args, cfg: Config) -> tuple[int, str]:
    reg = cfg.registry()
    p = _resolve_p(args.p, reg)
    out: dict = {"p": p, "delta": unparse(build_delta(p, reg), cfg.abbrev)}
    if args.derivations:
        fwd, bwd = emit_fp_delta_derivations(p, reg)
        out["derivation_fwd"] = derivation_to_json(fwd)
        out["derivation_bwd"] = derivation_to_json(bwd)
    return 0, json.dumps(out, indent=2, ensure_ascii=False)


def cmd_fixed_point(args, cfg: Config) -> tuple[int, str]:
    result = fixed_point(parse(args.formula, "formula"), cfg.mode, cfg.registry())
    return 0, result.dumps()


def cmd_audit(args, cfg: Config) -> tuple[int, str]:
    reg = cfg.registry()
    report = audit(_resolve_p(args.p, reg), cfg.budget(), assume_mt=args.assume_mt,
                   registry=reg, stages=cfg.stages if args.revision else None)
    if args.summary:
        print(report.summary(), file=sys.stderr)
    return AUDIT_EXIT[report.classification.kind], report.dumps()


COMMANDS = {
    "parse": cmd_parse, "print": cmd_print, "encode": cmd_encode, "decode": cmd_decode,
    "diag": cmd_diag, "cc": cmd_cc, "eval": cmd_eval, "check": cmd_check,
    "curry-seq": cmd_curry_seq, "delta": cmd_delta, "fixed-point": cmd_fixed_point,
    "audit": cmd_audit,
}


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _add_common(ap: argparse.ArgumentParser, suppress: bool) -> None:
    def d(value):
        return argparse.SUPPRESS if suppress else value
    ap.add_argument("--registry", default=d(None),
                    help="registry manifest JSON (default: built-in registry)")
    ap.add_argument("--max-steps", type=_nonneg_int, default=d(2_000_000))
    ap.add_argument("--max-depth", type=_nonneg_int, default=d(400))
    ap.add_argument("--max-seconds", type=_nonneg_float, default=d(60.0))
    ap.add_argument("--mode", choices=MODES, default=d("unrestricted"))
    ap.add_argument("--stages", type=_nonneg_int, default=d(DEFAULT_STAGES))
    ap.add_argument("--out", default=d(None),
                    help="write the main output to this file instead of stdout")
    ap.add_argument("--abbrev", type=_nonneg_int, default=d(None),
                    help="print numerals longer than this many digits as a digest")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pradagger", description=__doc__.splitlines()[0])
    _add_common(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add("parse", help="parse surface syntax and show the AST")
    p.add_argument("text")
    p.add_argument("--kind", choices=("formula", "term"), default="formula")

    p = add("print", help="print the object coded by a number")
    p.add_argument("code")

    p = add("encode", help="Goedel code of a formula, term or sequence")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula")
    g.add_argument("--term")
    g.add_argument("--sequence", nargs="+", metavar="FORMULA")

    p = add("decode", help="decode a number as JSON")
    p.add_argument("code")

    for name in ("diag", "cc"):
        p = add(name, help=f"the arithmetized {name} map")
        p.add_argument("code", nargs="?")
        p.add_argument("--formula")

    p = add("eval", help="evaluate a registered function symbol")
    p.add_argument("symbol", help="f<index>^<arity>, e.g. f0^2")
    p.add_argument("args", nargs="*")
    p.add_argument("--derive", action="store_true", help="emit a derivation of the value")

    p = add("check", help="check a derivation file")
    p.add_argument("file")
    p.add_argument("--oracle", choices=("core", "dagger"), default="dagger")

    p = add("curry-seq", help="the i-th Curry sequence and its code")
    p.add_argument("index", type=_nonneg_int)

    p = add("delta", help="the sentence Delta for the g symbol")
    p.add_argument("--p", default="auto")
    p.add_argument("--derivations", action="store_true")

    p = add("fixed-point", help="diagonal fixed point of a one-variable formula")
    p.add_argument("--formula", required=True)

    p = add("audit", help="audit the central argument and classify it")
    p.add_argument("--p", default="auto")
    p.add_argument("--assume-mt", action="store_true",
                   help="pin A-dagger(~Delta, p) to Holds (exploratory)")
    p.add_argument("--revision", action="store_true", help="add a revision-iteration run")
    p.add_argument("--summary", action="store_true", help="human-readable summary on stderr")
    return ap


def run(argv: list[str] | None = None) -> tuple[int, str, Config]:
    args = build_parser().parse_args(argv)
    cfg = Config(args.registry, args.max_steps, args.max_depth, args.max_seconds, args.mode,
                 args.stages, args.out, args.abbrev)
    code, text = COMMANDS[args.command](args, cfg)
    return code, text, cfg


def main(argv: list[str] | None = None) -> int:
    try:
        code, text, cfg = run(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (DomainError, ParseError, RegistryError, ValueError, BudgetExceeded, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError):
            err["position"] = exc.position
        print(json.dumps(err), file=sys.stderr)
        return 1
    if cfg.out:
        Path(cfg.out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
