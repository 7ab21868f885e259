"""Learning pipeline: intersect the grammar with one automaton per example
and extract a smallest term from the product."""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from typing import Any

from .evaluators import NonProductiveGrammarError, make_evaluator
from .evaluators.cfg import EncodingError
from .facet import Evaluator, build_twata
from .nfta import LazyProduct, ResourceExhausted, accepts, grammar_to_nfta, min_witness
from .term import GrammarError, RegularTreeGrammar, Term, parse_grammar
from .twata import to_nfta

__all__ = [
    "Problem",
    "Solution",
    "ProblemError",
    "CONSISTENT",
    "UNREALIZABLE",
    "RESOURCE_EXHAUSTED",
    "learn",
    "verify",
    "load_problem",
]

CONSISTENT = "consistent"
UNREALIZABLE = "unrealizable"
RESOURCE_EXHAUSTED = "resource-exhausted"


class ProblemError(ValueError):
    """Malformed problem description."""


@dataclass
class Problem:
    language: str
    positives: list
    negatives: list
    grammar: RegularTreeGrammar
    params: dict = field(default_factory=dict)
    evaluator: Evaluator | None = None

    def __post_init__(self):
        if self.evaluator is None:
            self.evaluator = make_evaluator(self.language, self.params)
        if self.grammar.alphabet != self.evaluator.alphabet:
            raise ProblemError("grammar alphabet differs from the language alphabet")
        if not self.positives and not self.negatives:
            raise ProblemError("a problem needs at least one example")

    def examples(self) -> list[tuple[Any, bool]]:
        return [(m, True) for m in self.positives] + [(m, False) for m in self.negatives]

    @classmethod
    def from_json(cls, data: dict, base_dir: str = ".") -> "Problem":
        if not isinstance(data, dict):
            raise ProblemError("problem file must contain a JSON object")
        for key in ("language", "grammar"):
            if key not in data:
                raise ProblemError(f"missing field {key!r}")
        language = data["language"]
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise ProblemError("field 'params' must be an object")
        try:
            ev = make_evaluator(language, params)
        except (ValueError, TypeError) as exc:
            raise ProblemError(str(exc)) from None
        grammar_text = data["grammar"]
        if not isinstance(grammar_text, str):
            raise ProblemError("field 'grammar' must be a string")
        if "->" not in grammar_text:
            path = os.path.join(base_dir, grammar_text)
            try:
                with open(path, encoding="utf-8") as fh:
                    grammar_text = fh.read()
            except OSError as exc:
                raise ProblemError(f"cannot read grammar file {path}: {exc.strerror}") from None
        try:
            grammar = parse_grammar(grammar_text, ev.alphabet)
        except GrammarError as exc:
            raise ProblemError(f"grammar: {exc}") from None
        parsed = {}
        for key in ("positives", "negatives"):
            items = data.get(key, [])
            if not isinstance(items, list):
                raise ProblemError(f"field {key!r} must be a list")
            out = []
            for i, item in enumerate(items):
                try:
                    out.append(ev.parse_structure(item))
                except (ValueError, TypeError, KeyError) as exc:
                    raise ProblemError(f"{key}[{i}]: {exc}") from None
            parsed[key] = out
        return cls(language, parsed["positives"], parsed["negatives"], grammar, params, ev)


def load_problem(path: str) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return Problem.from_json(data, os.path.dirname(os.path.abspath(path)))


@dataclass
class Solution:
    verdict: str
    term: Term | None = None
    size: int | None = None
    stats: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    # accepting product states among those in the trace
    final: frozenset = frozenset()

    @property
    def consistent(self) -> bool:
        return self.verdict == CONSISTENT


def _grammar_symbols(g: RegularTreeGrammar) -> list:
    used = set()
    for _, rhs in g.productions:
        for node in rhs.subterms():
            if not g.is_nonterminal(node):
                used.add(node.symbol)
    return sorted(used)


def learn(p: Problem, max_states: int | None = None, timeout: float | None = None, keep_trace: bool = False) -> Solution:
    started = time.monotonic()
    deadline = started + timeout if timeout is not None else None
    ev = p.evaluator
    examples = p.examples()
    # smaller structures first; sorted() is stable so ties keep input order
    examples = sorted(examples, key=lambda ex: ev.structure_size(ex[0]))
    symbols = _grammar_symbols(p.grammar)
    factors = [grammar_to_nfta(p.grammar)] + list(ev.extra_automata())
    twata_states = []
    for m, positive in examples:
        a = build_twata(ev, m, positive)
        twata_states.append(len(a.states))
        factors.append(to_nfta(a, symbols))
    stats = {
        "examples": len(examples),
        "twata_states": sum(twata_states),
        "max_twata_states": max(twata_states),
    }
    prod = LazyProduct(*factors)
    try:
        res = min_witness(prod, max_states=max_states, deadline=deadline, keep_trace=keep_trace)
    except ResourceExhausted as exc:
        stats.update(exc.stats)
        stats["wall_time"] = time.monotonic() - started
        stats["reason"] = str(exc)
        return Solution(RESOURCE_EXHAUSTED, stats=stats)
    stats["product_states"] = res.states_explored
    stats["tuples_explored"] = res.tuples_explored
    stats["summaries"] = sum(f.num_states for f in factors if hasattr(f, "num_states"))
    stats["wall_time"] = time.monotonic() - started
    final = frozenset(q for q, _, _ in res.trace if prod.is_final(q))
    if res.term is None:
        return Solution(UNREALIZABLE, stats=stats, trace=res.trace, final=final)
    if not verify(p, res.term):
        raise AssertionError(f"learned term {res.term} failed independent verification")
    return Solution(CONSISTENT, res.term, res.size, stats, res.trace, final)


def verify(p: Problem, t: Term) -> bool:
    """Reference semantics on every example plus grammar membership."""
    ev = p.evaluator
    try:
        if not accepts(grammar_to_nfta(p.grammar), t):
            return False
    except ValueError:
        return False
    try:
        for m, positive in p.examples():
            if ev.reference(m, t) != positive:
                return False
    except (NonProductiveGrammarError, EncodingError):
        return False
    return True
