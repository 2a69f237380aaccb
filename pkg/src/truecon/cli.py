"""Command-line interface.

Structure arguments accept a file path or an inline value; file contents
and inline text are sniffed the same way (a leading ``events:`` means the
structure file format, anything else is a process term).  Exit status 0
means the computation ran (whatever the verdict), 1 an input problem, and
2 an internal verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .equivalences import KINDS, build_state_space, check_equivalence
from .errors import (
    InternalVerificationFailed,
    RenderGuardExceeded,
    TrueconError,
)
from .formulas import char_formula, dag_stats, distinguishing_formula
from .frontend import (
    parse_formula,
    parse_structure,
    render_formula,
    render_structure_file,
)
from .harness import EnumBudget, cross_validate
from .logic import Formula, satisfies
from .structures import ConfigStructure, members


def _load_text(arg: str) -> str:
    if os.path.exists(arg) and os.path.isfile(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load_structure(arg: str) -> ConfigStructure:
    return parse_structure(_load_text(arg))


def _load_formula(arg: str) -> Formula:
    return parse_formula(_load_text(arg).strip())


def _parse_config(s: ConfigStructure, text: str | None) -> int:
    if not text:
        return 0
    inner = text.strip()
    if inner.startswith("{") and inner.endswith("}"):
        inner = inner[1:-1]
    names = [tok for tok in inner.replace(",", " ").split() if tok]
    return s.require_config(s.mask(names))


def _parse_env(s: ConfigStructure, text: str | None) -> dict[str, int]:
    env: dict[str, int] = {}
    if not text:
        return env
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise TrueconError(f"environment entry {item!r} is not ident=event")
        ident, name = item.split("=", 1)
        env[ident.strip()] = s.event_id(name.strip())
    return env


def _emit(report: dict, text_lines: list[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _cmd_check(args) -> int:
    s = _load_structure(args.structure)
    phi = _load_formula(args.formula)
    config = _parse_config(s, args.config)
    env = _parse_env(s, args.env)
    result = satisfies(s, config, env, phi)
    report = {
        "command": "check",
        "config": list(s.config_names(config)),
        "env": {k: s.names[v] for k, v in env.items()},
        "result": result,
    }
    _emit(report, [f"satisfied: {str(result).lower()}"], args.format)
    return 0


def _cmd_validate(args) -> int:
    s = _load_structure(args.structure)
    report = {
        "command": "validate",
        "valid": True,
        "events": s.n_events,
        "configurations": len(s.configs),
        "alphabet": list(s.alphabet),
        "canonical": render_structure_file(s),
    }
    _emit(
        report,
        [
            f"valid: {s.n_events} events, {len(s.configs)} configurations, "
            f"alphabet {{{', '.join(s.alphabet)}}}"
        ],
        args.format,
    )
    return 0


def _cmd_equiv(args) -> int:
    lhs = _load_structure(args.lhs)
    rhs = _load_structure(args.rhs)
    verdict = check_equivalence(lhs, rhs, args.kind)
    report = {"command": "equiv", **verdict.to_json()}
    lines = [
        f"{args.kind}-equivalent: {str(verdict.equivalent).lower()} "
        f"(s={verdict.s}, c={verdict.c}, rounds={verdict.rounds})"
    ]
    if verdict.counterexample is not None:
        phi, side = verdict.counterexample
        lines.append(f"distinguishing formula (holds on {side}): {render_formula(phi)}")
    _emit(report, lines, args.format)
    return 0


def _cmd_distinguish(args) -> int:
    lhs = _load_structure(args.lhs)
    rhs = _load_structure(args.rhs)
    got = distinguishing_formula(lhs, rhs, args.kind)
    if got is None:
        report = {"command": "distinguish", "kind": args.kind, "equivalent": True}
        _emit(report, ["structures are equivalent; nothing to distinguish"], args.format)
        return 0
    phi, side = got
    text = render_formula(phi)
    report = {
        "command": "distinguish",
        "kind": args.kind,
        "equivalent": False,
        "formula": text,
        "holds_on": side,
        "verified": True,
    }
    _emit(report, [f"holds on {side}: {text}"], args.format)
    return 0


def _cmd_charform(args) -> int:
    s = _load_structure(args.structure)
    act = None
    rhs = _load_structure(args.rhs) if args.rhs else None
    if rhs is not None:
        act = sorted(set(s.alphabet) | set(rhs.alphabet))
    if args.act:
        act = sorted(set(act or s.alphabet) | {a.strip() for a in args.act.split(",")})
    depth = None
    if args.kind == "hh":
        if args.depth == "auto" or args.depth is None:
            space = build_state_space(s, rhs if rhs is not None else s)
            depth = space.s
        else:
            depth = int(args.depth)
    chi = char_formula(s, args.kind, depth=depth, act=act)
    stats = dag_stats(chi)
    report = {
        "command": "charform",
        "kind": args.kind,
        "depth": depth,
        "stats": stats.to_json(),
    }
    try:
        text = render_formula(chi, guard=args.render_guard)
        report["formula"] = text
        lines = [text]
    except RenderGuardExceeded:
        report["formula"] = None
        lines = [
            f"formula too large to render ({stats.nodes} dag nodes, "
            f"modal depth {stats.depth})"
        ]
    _emit(report, lines, args.format)
    return 0


def _cmd_crossval(args) -> int:
    budget = EnumBudget(max_events=args.events, max_labels=args.labels)
    rep = cross_validate(budget, differential_cases=args.cases)
    report = {"command": "crossval", **rep.to_json()}
    _emit(report, [rep.to_text()], args.format)
    return 0 if rep.ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="truecon",
        description=(
            "Model checking of event-identifier logic over stable configuration "
            "structures, and history-preserving equivalence checking."
        ),
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="model-check a formula on a structure")
    p.add_argument("--structure", required=True, help="file path, term, or structure text")
    p.add_argument("--formula", required=True, help="file path or formula text")
    p.add_argument("--config", help="configuration, e.g. '{e1 e2}' (default empty)")
    p.add_argument("--env", help="environment, e.g. 'x=e1,y=e2'")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("validate", help="check the stability axioms")
    p.add_argument("--structure", required=True)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("equiv", help="decide an equivalence between two structures")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("distinguish", help="synthesize a separating formula")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.set_defaults(func=_cmd_distinguish)

    p = sub.add_parser("charform", help="characteristic formula of a structure")
    p.add_argument("--kind", required=True, choices=("wh", "h", "hh"))
    p.add_argument("--structure", required=True)
    p.add_argument("--depth", help="recursion depth for hh, or 'auto'")
    p.add_argument("--rhs", help="other structure: fixes auto depth and widens the alphabet")
    p.add_argument("--act", help="extra labels for box conjuncts, comma separated")
    p.add_argument("--render-guard", type=int, default=100_000)
    p.set_defaults(func=_cmd_charform)

    p = sub.add_parser("crossval", help="run the cross-validation harness")
    p.add_argument("--events", type=int, default=3)
    p.add_argument("--labels", type=int, default=2)
    p.add_argument("--cases", type=int, default=2000)
    p.set_defaults(func=_cmd_crossval)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalVerificationFailed as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return 2
    except TrueconError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
