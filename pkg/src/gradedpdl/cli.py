"""Batch command-line front end.

Exit codes follow one convention across all subcommands: 0 when the
checked property holds, 1 when a counterexample or rejection is the
result, 2 on usage, parse, or validation errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .audit import (
    SamplerConfig,
    all_schemata,
    audit_all,
    equiv_check,
)
from .chain import ChainContext, ChainMismatchError, NotAChainElement
from .filtration import NotClosedError, check_preservation, quotient
from .modelio import ModelFormatError, dumps, load_model, model_to_dict
from .proofcheck import DerivationFormatError, check_derivation, load_derivation
from .semantics import Evaluator, Model, valid_in_model
from .syntax import ClosureBudgetExceeded, ParseError, fl_closure, format_formula, parse_formula
from .chain import ChainValue

STATE_CAP = 4
STATE_CAP_FORCED = 6


class CliError(Exception):
    """Usage-level failure; prints to stderr, exits 2."""


def _state_cap(force: bool) -> int:
    return STATE_CAP_FORCED if force else STATE_CAP


def _check_model_size(model: Model, force: bool) -> None:
    cap = _state_cap(force)
    if model.space.size > cap:
        hint = "" if force else " (pass --force-states to allow up to 6)"
        raise CliError(
            f"model has {model.space.size} states; the cap is {cap}{hint}"
        )
    if force and model.space.size > STATE_CAP:
        print(
            f"warning: {model.space.size} states; set operations are "
            "doubly exponential and may be slow",
            file=sys.stderr,
        )


def _sampler_config(args, num_programs=2, num_propvars=2) -> SamplerConfig:
    states = getattr(args, "states", 3)
    force = getattr(args, "force_states", False)
    cap = _state_cap(force)
    if states > cap:
        raise CliError(f"--states {states} exceeds the cap {cap}")
    return SamplerConfig(
        n=args.n,
        max_states=states,
        samples=args.samples,
        seed=args.seed,
        num_programs=num_programs,
        num_propvars=num_propvars,
        allow_large=force,
    )


def _write_out(args, document) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(dumps(document) + "\n", encoding="utf-8")


# -- subcommands ------------------------------------------------------------------


def cmd_eval(args) -> int:
    model = load_model(args.model)
    _check_model_size(model, args.force_states)
    formula = parse_formula(args.formula, model.context)
    evaluator = Evaluator(model)
    all_top = True
    for s in model.space.states():
        value = ChainValue(evaluator.value_num(formula, s), model.context)
        print(f"{model.state_names[s]}: {value}")
        all_top = all_top and value.is_top
    return 0 if all_top else 1


def cmd_valid(args) -> int:
    from .audit import PROGRAM_NAMES, PROP_NAMES, derive_seed, sample_model
    from .syntax import collect_names
    import random

    cfg = _sampler_config(args)
    formula = parse_formula(args.formula, cfg.context)
    props, progs = collect_names(formula)
    prop_names = sorted(props | set(PROP_NAMES[: cfg.num_propvars]))
    prog_names = sorted(progs | set(PROGRAM_NAMES[: cfg.num_programs]))
    rng = random.Random(derive_seed(cfg.seed, "valid", format_formula(formula), cfg.n))
    for trial in range(1, cfg.samples + 1):
        model = sample_model(cfg, rng, prop_names, prog_names)
        ok, refutation = valid_in_model(model, formula)
        if not ok:
            print(
                f"counterexample after {trial} models: value {refutation.value} "
                f"at state {refutation.state_name}"
            )
            print(dumps(model_to_dict(model)))
            return 1
    print(f"no counterexample in {cfg.samples} sampled models")
    return 0


def cmd_audit(args) -> int:
    cfg = _sampler_config(args)
    selected = all_schemata("DL")
    if args.inter_box != "both":
        selected = [
            s for s in selected if s.id != "D7" or s.variant == args.inter_box
        ]
    report = audit_all(cfg, selected, include_rules=not args.no_rules)
    for entry in report.schemas:
        if entry.verdict == "counterexample":
            w = entry.witness
            print(
                f"{entry.label}: counterexample after {entry.models_tested} models "
                f"(value {w.value} at state {w.model.state_names[w.state]})"
            )
        else:
            print(f"{entry.label}: no counterexample in {entry.models_tested} models")
    for rule in report.rules:
        if rule.verdict == "counterexample":
            print(f"{rule.rule_id}: validity not preserved (see report)")
        else:
            print(
                f"{rule.rule_id}: validity preserved on {rule.premises_valid} "
                f"valid-premise models"
            )
    _write_out(args, report.to_json())
    return 1 if report.has_counterexample else 0


def cmd_closure(args) -> int:
    ctx = ChainContext(args.n)
    formula = parse_formula(args.formula, ctx)
    members = fl_closure(formula, ctx, cap=args.cap)
    for text in sorted(format_formula(f) for f in members):
        print(text)
    print(f"-- {len(members)} formulas")
    return 0


def cmd_check_proof(args) -> int:
    derivation = load_derivation(args.path)
    verdict = check_derivation(
        derivation,
        system=args.system.upper(),
        any_schema=args.any_schema,
        allow_mon=args.allow_mon,
    )
    if verdict.accepted:
        print(f"accepted: {len(derivation.steps)} steps")
        return 0
    print(f"rejected at step {verdict.failed_step}: {verdict.message}")
    return 1


def cmd_filtrate(args) -> int:
    model = load_model(args.model)
    _check_model_size(model, args.force_states)
    formula = parse_formula(args.formula, model.context)
    gamma = fl_closure(formula, model.context)
    result = quotient(model, gamma)
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"closed set: {len(gamma)} formulas")
    print(f"classes: {len(result.classes)}")
    names = model.state_names
    for c, members in enumerate(result.classes):
        print(f"  c{c}: {', '.join(names[m] for m in members)}")
    preservation = check_preservation(model, gamma)
    agree = sum(row["agreements"] for row in preservation.rows)
    total = sum(row["states"] for row in preservation.rows)
    print(f"value preservation: {agree}/{total} (formula, state) pairs agree")
    document = {
        "model": model_to_dict(result.quotient),
        "classes": {
            f"c{c}": [names[m] for m in members]
            for c, members in enumerate(result.classes)
        },
        "preservation": preservation.to_json(),
        "warnings": list(result.warnings),
    }
    _write_out(args, document)
    if args.dot:
        Path(args.dot).write_text(_class_graph_dot(result), encoding="utf-8")
    return 0


def _class_graph_dot(result) -> str:
    from .relations import mask_states

    lines = ["digraph filtration {"]
    qnames = result.quotient.state_names
    for c in range(len(result.classes)):
        members = ",".join(f"s{m}" for m in result.classes[c])
        lines.append(f'  {qnames[c]} [label="{qnames[c]}: {{{members}}}"];')
    seen = set()
    for prog, rel in sorted(result.quotient.atomics.items()):
        for (c, mask), num in sorted(rel.entries.items()):
            value = ChainValue(num, result.quotient.context)
            for d in mask_states(mask):
                key = (prog, c, d)
                if key in seen:
                    continue
                seen.add(key)
                lines.append(f'  {qnames[c]} -> {qnames[d]} [label="{prog}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_equiv(args) -> int:
    cfg = _sampler_config(args)
    left = parse_formula(args.left, cfg.context)
    right = parse_formula(args.right, cfg.context)
    report = equiv_check(left, right, cfg)
    _write_out(args, report.to_json())
    if report.difference_found:
        print(
            f"difference after {report.models_tested} models: "
            f"{format_formula(left)} = {report.left_value}, "
            f"{format_formula(right)} = {report.right_value} "
            f"at state {report.model.state_names[report.state]}"
        )
        print(dumps(model_to_dict(report.model)))
        return 1
    print(f"no difference in {report.models_tested} sampled models")
    return 0


# -- wiring -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradedpdl",
        description="Workbench for concurrent dynamic logic graded over finite chains",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a formula at every state of a model")
    p.add_argument("model", help="model JSON path")
    p.add_argument("formula")
    p.add_argument("--force-states", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("valid", help="search sampled models for a validity counterexample")
    p.add_argument("formula")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force-states", action="store_true")
    p.set_defaults(func=cmd_valid)

    p = sub.add_parser("audit", help="soundness audit of the axiom schemata")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--samples", type=int, default=1000, help="trial budget per schema")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--inter-box",
        choices=["printed", "corrected", "both"],
        default="both",
        help="which intersection-box variant(s) to audit",
    )
    p.add_argument("--no-rules", action="store_true", help="skip the rule audits")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--force-states", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("closure", help="list the closure of a formula")
    p.add_argument("formula")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--cap", type=int, default=10_000)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("check-proof", help="verify a derivation file")
    p.add_argument("path")
    p.add_argument("--system", choices=["pl", "dl"], default="dl")
    p.add_argument("--any-schema", action="store_true",
                   help="accept an axiom step when any schema matches")
    p.add_argument("--allow-mon", action="store_true",
                   help="accept monotonicity steps")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("filtrate", help="quotient a model through a formula's closure")
    p.add_argument("model", help="model JSON path")
    p.add_argument("formula")
    p.add_argument("--out", help="write the quotient JSON here")
    p.add_argument("--dot", help="write a DOT class graph here")
    p.add_argument("--force-states", action="store_true")
    p.set_defaults(func=cmd_filtrate)

    p = sub.add_parser("equiv", help="search for a state separating two formulas")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--force-states", action="store_true")
    p.set_defaults(func=cmd_equiv)

    return parser


_EXPECTED_ERRORS = (
    CliError,
    ParseError,
    NotAChainElement,
    ChainMismatchError,
    ModelFormatError,
    NotClosedError,
    DerivationFormatError,
    ClosureBudgetExceeded,
    FileNotFoundError,
    ValueError,
)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _EXPECTED_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
