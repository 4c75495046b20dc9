"""``pgl`` command line: check, query and saturate ``.pgl`` programs.

Exit status: 0 success, 1 usage or input error, 2 interpretation space above
``--max-space``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional

from .degrees import DegreeError, degree_to_json, format_degree, parse_rational
from .engine import UnknownAtomError, saturate
from .oracle import least_specific_model, semantic_degree
from .semantics import DEFAULT_MAX_SPACE, SemanticsError, SpaceTooLarge, default_truth_grid, enumerate_interpretations
from .syntax import ContextError, ParseError
from .validation import load_program

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DegreeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pgl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("query", help="maximum degree of a goal")
    q.add_argument("file")
    q.add_argument("--goal", help="atom to query (default: the file's single query)")
    q.add_argument("--trace", action="store_true", help="include the proof")
    q.add_argument("--oracle", action="store_true", help="also compute the semantic degree")
    q.add_argument("--grid-step", type=_rational, default=None, metavar="R",
                   help="add multiples of R to the oracle's truth grid")
    q.add_argument("--max-space", type=int, default=DEFAULT_MAX_SPACE, metavar="N")
    q.add_argument("--strategy", choices=["semi-naive", "naive"], default="semi-naive")
    q.add_argument("--json", action="store_true")
    q.add_argument("--timings", action="store_true", help="report per-phase wall time (ms)")

    c = sub.add_parser("check", help="parse and validate the context only")
    c.add_argument("file")

    s = sub.add_parser("saturate", help="degrees of every atom")
    s.add_argument("file")
    s.add_argument("--strategy", choices=["semi-naive", "naive"], default="semi-naive")
    s.add_argument("--json", action="store_true")
    return parser


def _load(path: str):
    program = load_program(path)
    if program.context is not None:
        program.context.validate()
    return program


def _cmd_check(args) -> int:
    program = _load(args.file)
    sorts = len(program.context.domains) if program.context else 0
    print(f"ok: {len(program.clauses)} clauses, {len(program.atoms())} atoms, {sorts} sorts")
    return EXIT_OK


def _cmd_saturate(args) -> int:
    program = _load(args.file)
    state = saturate(program, strategy=args.strategy)
    if args.json:
        payload = {"degrees": {a: degree_to_json(d) for a, d in state.best.items()}}
        print(json.dumps(payload, indent=2))
    else:
        for a, d in state.best.items():
            print(f"{a} {format_degree(d)}")
    return EXIT_OK


def _cmd_query(args) -> int:
    timings = {}
    t0 = time.perf_counter()
    program = _load(args.file)
    timings["parse"] = time.perf_counter() - t0
    goal = args.goal
    if goal is None:
        if len(program.queries) != 1:
            raise _UsageError("--goal is required unless the file has exactly one query statement")
        goal = program.queries[0]
    if goal not in program.atoms():
        raise UnknownAtomError(goal)

    t0 = time.perf_counter()
    state = saturate(program, strategy=args.strategy)
    timings["saturate"] = time.perf_counter() - t0
    degree = state.best[goal]

    result = {
        "goal": goal,
        "degree": degree_to_json(degree),
        "trace": state.trace[goal].to_json() if args.trace else None,
        "oracle_degree": None,
        "satisfiable": None,
        "divergence": None,
    }
    oracle = None
    if args.oracle:
        t0 = time.perf_counter()
        grid = default_truth_grid(program, step=args.grid_step)
        space = enumerate_interpretations(program, grid, args.max_space)
        oracle = semantic_degree(program, goal, model=least_specific_model(program, space))
        timings["oracle"] = time.perf_counter() - t0
        result["oracle_degree"] = degree_to_json(oracle.degree)
        result["satisfiable"] = oracle.satisfiable
        result["divergence"] = degree_to_json(oracle.degree - degree)
    if args.timings:
        result["timings_ms"] = {k: round(v * 1000, 3) for k, v in timings.items()}

    if args.json:
        print(json.dumps(result, indent=2))
        return EXIT_OK
    print(format_degree(degree))
    if oracle is not None:
        print(f"oracle {format_degree(oracle.degree)}")
        print(f"satisfiable {'yes' if oracle.satisfiable else 'no'}")
        print(f"divergence {format_degree(oracle.degree - degree)}")
    if args.trace:
        print(state.trace[goal].pretty())
    if args.timings:
        for k, v in result["timings_ms"].items():
            print(f"time.{k} {v} ms")
    return EXIT_OK


class _UsageError(Exception):
    pass


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"check": _cmd_check, "saturate": _cmd_saturate, "query": _cmd_query}[args.command]
    try:
        return handler(args)
    except ParseError as exc:
        print(f"{args.file}:{exc.line}:{exc.column}: error: {exc.message}", file=sys.stderr)
    except SpaceTooLarge as exc:
        print(f"pgl: error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ContextError, SemanticsError, UnknownAtomError, _UsageError) as exc:
        print(f"pgl: error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"pgl: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
