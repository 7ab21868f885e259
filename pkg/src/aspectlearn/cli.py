"""Command-line front end.

Exit codes: 0 success, 1 unrealizable (or oracle disagreement), 2 input
error, 3 resource limit reached.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import __version__
from .evaluators import LANGUAGES, NonProductiveGrammarError, infer_params, make_evaluator, unproductive_checker
from .facet import EvaluatorError, build_twata
from .learn import CONSISTENT, RESOURCE_EXHAUSTED, ProblemError, learn, load_problem
from .nfta import LazyProduct, ResourceExhausted, grammar_to_nfta, min_witness, to_dot
from .term import GrammarError, TermSyntaxError, parse_grammar, parse_term
from .twata import accepts, to_nfta

EXIT_OK, EXIT_UNREALIZABLE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

# stats printed on stdout; everything here is deterministic
_STAT_KEYS = ("examples", "twata_states", "max_twata_states", "summaries", "product_states", "tuples_explored")


def _fail(msg: str, code: int = EXIT_INPUT) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _params_arg(text: str | None):
    if text is None:
        return None
    try:
        val = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"--params: invalid JSON ({exc.msg})") from None
    if not isinstance(val, dict):
        raise ProblemError("--params must be a JSON object")
    return val


def cmd_learn(args) -> int:
    try:
        problem = load_problem(args.problem)
    except (ProblemError, ValueError) as exc:
        return _fail(str(exc))
    try:
        sol = learn(problem, max_states=args.max_states, timeout=args.timeout, keep_trace=bool(args.emit_dot))
    except EvaluatorError as exc:
        return _fail(str(exc))
    if args.emit_dot and sol.trace is not None:
        with open(args.emit_dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(sol.trace, sol.final.__contains__))
    if sol.verdict == RESOURCE_EXHAUSTED:
        print(f"resource-exhausted: {sol.stats.get('reason', '')}")
        code = EXIT_RESOURCE
    elif sol.verdict == CONSISTENT:
        print(sol.term)
        print(f"size {sol.size}")
        code = EXIT_OK
    else:
        print("unrealizable")
        code = EXIT_UNREALIZABLE
    for key in _STAT_KEYS:
        if key in sol.stats:
            print(f"{key} {sol.stats[key]}")
    if args.stats:
        print(f"wall_time {sol.stats.get('wall_time', 0.0):.3f}s", file=sys.stderr)
    if args.oracle and sol.verdict == CONSISTENT:
        ev = problem.evaluator
        for i, (m, positive) in enumerate(problem.examples()):
            game = accepts(build_twata(ev, m, True), sol.term)
            ref = ev.reference(m, sol.term)
            if game != ref or ref != positive:
                print(f"error: oracle disagreement on example {i}: automaton={game} reference={ref} label={positive}", file=sys.stderr)
                return EXIT_UNREALIZABLE
    return code


def cmd_eval(args) -> int:
    try:
        data = _read_json(args.structure)
        params = _params_arg(args.params)
        if params is None:
            params = infer_params(args.language, [data], args.term)
        ev = make_evaluator(args.language, params)
        m = ev.parse_structure(data)
        t = parse_term(args.term, ev.alphabet)
    except (ProblemError, TermSyntaxError, ValueError, TypeError) as exc:
        return _fail(str(exc))
    a = build_twata(ev, m, True)
    result = accepts(a, t)
    if args.oracle:
        via_nfta = to_nfta(a).accepts(t)
        negative = accepts(build_twata(ev, m, False), t)
        try:
            ref = ev.reference(m, t)
        except NonProductiveGrammarError as exc:
            return _fail(f"reference semantics undefined: {exc}")
        if not (result == via_nfta == ref == (not negative)):
            print(
                f"error: oracle disagreement: game={result} nfta={via_nfta} reference={ref} dual={negative}",
                file=sys.stderr,
            )
            return EXIT_UNREALIZABLE
    print("true" if result else "false")
    return EXIT_OK


_LHS = re.compile(r"(?:^|[\n;|])\s*([\w][\w'.]*)\s*->")


def cmd_check_grammar(args) -> int:
    try:
        with open(args.grammar, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail(f"cannot read {args.grammar}: {exc.strerror}")
    try:
        params = _params_arg(args.params)
        if params is None:
            uncommented = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
            nts = set(_LHS.findall(uncommented))
            symbols = " ".join(n for n in re.findall(r"[\w][\w'.]*", uncommented) if n not in nts)
            params = infer_params(args.language, [], symbols)
        ev = make_evaluator(args.language, params)
        g = parse_grammar(text, ev.alphabet)
    except (ProblemError, GrammarError, ValueError, TypeError) as exc:
        return _fail(str(exc))
    if args.language == "cfg":
        bad = LazyProduct(grammar_to_nfta(g), unproductive_checker(ev.nonterminals, ev.terminals))
        try:
            res = min_witness(bad, max_states=args.max_states)
        except ResourceExhausted as exc:
            return _fail(str(exc), EXIT_RESOURCE)
        if res.term is not None:
            print(f"grammar admits a non-productive or malformed encoding: {res.term}")
            return EXIT_INPUT
    print("ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="aspectlearn", description="Learn smallest expressions consistent with labeled examples.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    pl = sub.add_parser("learn", help="learn a smallest consistent expression")
    pl.add_argument("problem")
    pl.add_argument("--max-states", type=int, default=None)
    pl.add_argument("--timeout", type=float, default=None, help="seconds")
    pl.add_argument("--stats", action="store_true", help="also report wall time on stderr")
    pl.add_argument("--oracle", action="store_true", help="cross-check the witness with the game semantics")
    pl.add_argument("--emit-dot", metavar="PATH", default=None)
    pl.set_defaults(func=cmd_learn)

    pe = sub.add_parser("eval", help="evaluate a term on a structure")
    pe.add_argument("language", choices=LANGUAGES)
    pe.add_argument("structure")
    pe.add_argument("term")
    pe.add_argument("--params", default=None, help="language parameters as JSON")
    pe.add_argument("--oracle", action="store_true")
    pe.set_defaults(func=cmd_eval)

    pc = sub.add_parser("check-grammar", help="validate a grammar file")
    pc.add_argument("grammar")
    pc.add_argument("language", choices=LANGUAGES)
    pc.add_argument("--params", default=None)
    pc.add_argument("--max-states", type=int, default=100_000)
    pc.set_defaults(func=cmd_check_grammar)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
