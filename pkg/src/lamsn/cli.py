"""Command-line front end: ``lamsn <subcommand> ...``.

Exit codes: 0 success, 1 property counterexample, 2 input error,
3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .enumeration import EnumSpec, enumerate_terms
from .inference import NotBetaSN, infer
from .normalization import (
    DEFAULT_FUEL,
    Exhausted,
    NotSN,
    decide_sn,
    explore,
    graph_to_dot,
    graph_to_json,
)
from .properties import PROPERTIES, run_property
from .reduction import contract, find_redexes, rules_from_name
from .terms import ParseError, Term, parse_term, print_term, term_from_json, term_to_json
from .typesys import derivation_to_json, print_type

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_term(text: str | None) -> Term:
    if text is None or text == "-":
        text = sys.stdin.read()
    text = text.strip()
    if text.startswith("{"):
        try:
            return term_from_json(json.loads(text))
        except (ValueError, KeyError, TypeError) as e:
            raise InputError(f"bad JSON term: {e}") from None
    return parse_term(text)


def _rules(name: str):
    try:
        return rules_from_name(name)
    except ValueError as e:
        raise InputError(str(e)) from None


def _pool(text: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in text.split(",") if p.strip())


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def cmd_parse(args) -> int:
    print(_dump(term_to_json(_read_term(args.term))))
    return EXIT_OK


def cmd_print(args) -> int:
    t = _read_term(args.term)
    print(_dump(term_to_json(t)) if args.format == "json" else print_term(t))
    return EXIT_OK


def cmd_reduce(args) -> int:
    t = _read_term(args.term)
    rules = _rules(args.rules)
    print(f"0: {print_term(t)}")
    for i in range(1, args.steps + 1):
        redexes = find_redexes(t, rules)
        if not redexes:
            print("normal form")
            break
        r = redexes[0]
        t = contract(t, r)
        where = ".".join(r.path) or "root"
        print(f"{i}: {print_term(t)}    [{r.rule} at {where}]")
    return EXIT_OK


def cmd_graph(args) -> int:
    g = explore(_read_term(args.term), _rules(args.rules), args.fuel)
    if args.format == "json":
        print(_dump(graph_to_json(g)))
    else:
        sys.stdout.write(graph_to_dot(g))
    return EXIT_OK if g.complete else EXIT_BUDGET


def cmd_sn(args) -> int:
    v = decide_sn(_read_term(args.term), _rules(args.rules), args.fuel)
    print(v)
    return EXIT_BUDGET if isinstance(v, Exhausted) else EXIT_OK


def cmd_eta(args) -> int:
    v = decide_sn(_read_term(args.term), _rules(args.rules), args.fuel)
    if isinstance(v, Exhausted):
        print(v, file=sys.stderr)
        return EXIT_BUDGET
    if isinstance(v, NotSN):
        raise InputError(f"not strongly normalizing: {v}")
    print(v.eta)
    return EXIT_OK


def cmd_type_infer(args) -> int:
    t = _read_term(args.term)
    try:
        res = infer(t, args.fuel)
    except NotBetaSN as e:
        raise InputError(str(e)) from None
    ctx = {x: print_type(a) for x, a in sorted(res.ctx.items())}
    if args.format == "json":
        print(
            _dump(
                {
                    "term": print_term(t),
                    "context": ctx,
                    "type": print_type(res.ty),
                    "derivation": derivation_to_json(res.deriv),
                }
            )
        )
    else:
        gamma = ", ".join(f"{x}: {a}" for x, a in ctx.items())
        print(f"{gamma} |- {print_term(t)} : {print_type(res.ty)}")
        print(res.deriv)
    return EXIT_OK


def cmd_check(args) -> int:
    spec = EnumSpec(args.max_size, _pool(args.pool), args.closed)
    rep = run_property(
        args.property,
        spec,
        args.fuel,
        arg_size=args.arg_size,
        arg_pool=_pool(args.arg_pool) if args.arg_pool else None,
        budget=args.budget,
    )
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(_dump(rep.to_json()) + "\n")
    status = "PASS" if rep.passed else "FAIL"
    print(
        f"{status} {rep.property}: tested={rep.tested} skipped={rep.skipped} "
        f"vacuous={rep.vacuous} counterexamples={len(rep.counterexamples)} ({rep.seconds}s)"
    )
    for c in rep.counterexamples[:5]:
        print("  counterexample:", c.get("term"), c.get("substitution", ""))
    if not rep.passed:
        return EXIT_COUNTEREXAMPLE
    if rep.tested == 0 and rep.skipped > 0:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_enumerate(args) -> int:
    spec = EnumSpec(args.max_size, _pool(args.pool), args.closed)
    out = sys.stdout
    for t in enumerate_terms(spec):
        out.write(print_term(t) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lamsn", description="Strong normalization lab for the lambda calculus.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def term_cmd(name, fn, help, term_optional=False):
        sp = sub.add_parser(name, help=help)
        if term_optional:
            sp.add_argument("term", nargs="?", help="term text or JSON; stdin when omitted")
        else:
            sp.add_argument("term", help="term text or JSON, '-' for stdin")
        sp.set_defaults(fn=fn)
        return sp

    term_cmd("parse", cmd_parse, "parse a term and show its JSON form")
    sp = term_cmd("print", cmd_print, "pretty-print a term", term_optional=True)
    sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = term_cmd("reduce", cmd_reduce, "leftmost-outermost reduction trace")
    sp.add_argument("--rules", default="beta")
    sp.add_argument("--steps", type=int, default=20)

    sp = term_cmd("graph", cmd_graph, "reachable reduction graph")
    sp.add_argument("--rules", default="all")
    sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    sp.add_argument("--format", choices=("dot", "json"), default="dot")

    for name, fn, help in (("sn", cmd_sn, "decide strong normalization"), ("eta", cmd_eta, "longest reduction length")):
        sp = term_cmd(name, fn, help)
        sp.add_argument("--rules", default="all")
        sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)

    sp = term_cmd("type-infer", cmd_type_infer, "infer an intersection typing")
    sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("check", help="run a property over an enumerated corpus")
    sp.add_argument("property", choices=sorted(PROPERTIES))
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    sp.add_argument("--pool", default="x,y")
    sp.add_argument("--closed", action="store_true")
    sp.add_argument("--arg-size", type=int)
    sp.add_argument("--arg-pool")
    sp.add_argument("--budget", type=int)
    sp.add_argument("--report", help="write the JSON report here")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("enumerate", help="list every term up to a size")
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--pool", default="x,y")
    sp.add_argument("--closed", action="store_true")
    sp.set_defaults(fn=cmd_enumerate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.fn(args)
    except (ParseError, InputError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
