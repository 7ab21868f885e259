"""Context-free grammars encoded as syntax trees, checked against words.

Encoding of a grammar with productions ``A1 -> rhs1, ..., An -> rhsn``::

    top_A1(rhs1, lhs_A2(rhs2, ... lhs_An(rhsn, end)))

A right-hand side is a ``concat`` tree whose leaves are ``term_a`` for a
terminal and ``rhs_A`` for a nonterminal.  The start nonterminal is the first
declared one.
"""

from __future__ import annotations

from typing import NamedTuple

from ..facet import Evaluator, any_of, boolean, call
from ..nfta import Nfta
from ..term import Symbol, Term
from ..twata import FALSE, UP, PosBool, conj, disj
from ._common import StructureError, check_names, make_alphabet, single_characters
from .regex import WordStructure, parse_word

SPAN, FIND, RESET = "span", "find", "reset"


class NonProductiveGrammarError(ValueError):
    """The encoded grammar has a production without any terminal."""


class EncodingError(ValueError):
    """The tree does not encode a grammar."""


class CfgAspect(NamedTuple):
    l: int
    r: int
    mode: str
    nt: str | None = None

    def __str__(self):
        if self.mode == SPAN:
            return f"({self.l},{self.r})"
        return f"(({self.l},{self.r}),{self.mode}({self.nt}))"


def cfg_alphabet(nonterminals, terminals):
    ops = {"concat": 2, "end": 0}
    for a in nonterminals:
        ops[f"top_{a}"] = 2
        ops[f"lhs_{a}"] = 2
        ops[f"rhs_{a}"] = 0
    for t in terminals:
        ops[f"term_{t}"] = 0
    return make_alphabet(ops, [])


def _classify(name: str):
    for prefix in ("top_", "lhs_", "rhs_", "term_"):
        if name.startswith(prefix):
            return prefix[:-1], name[len(prefix):]
    return name, None


class CfgEvaluator(Evaluator):
    language = "cfg"

    def __init__(self, nonterminals, terminals):
        self.nonterminals = check_names("nonterminal", nonterminals, ())
        self.terminals = check_names("terminal", terminals, ())
        single_characters(self.terminals)
        if not self.nonterminals:
            raise ValueError("at least one nonterminal is required")
        self.start = self.nonterminals[0]
        self.alphabet = cfg_alphabet(self.nonterminals, self.terminals)

    def params(self):
        return {"nonterminals": list(self.nonterminals), "terminals": list(self.terminals)}

    def parse_structure(self, data):
        w = parse_word(data)
        bad = sorted(set(w.letters) - set(self.terminals))
        if bad:
            raise StructureError(f"word uses letters outside the terminals: {bad}")
        return w

    def structure_to_json(self, M):
        return M.to_json()

    def enumerate_aspects(self, M):
        out = []
        for l, r in M.spans():
            out.append(CfgAspect(l, r, SPAN))
            for a in self.nonterminals:
                out.append(CfgAspect(l, r, FIND, a))
                out.append(CfgAspect(l, r, RESET, a))
        return out

    def initial_payload(self, M):
        return CfgAspect(1, len(M) + 1, RESET, self.start)

    def transition(self, M, p: CfgAspect, symbol: Symbol) -> PosBool:
        kind, arg = _classify(symbol.name)
        l, r = p.l, p.r
        span = CfgAspect(l, r, SPAN)
        if p.mode == SPAN:
            if kind == "concat":
                return any_of(range(l, r + 1), lambda x: conj(call(CfgAspect(l, x, SPAN), 1), call(CfgAspect(x, r, SPAN), 2)))
            if kind == "rhs":
                return call(CfgAspect(l, r, RESET, arg), UP)
            if kind == "term":
                return boolean(r == l + 1 and M.letters[l - 1] == arg)
            return FALSE
        z = p.nt
        if p.mode == RESET:
            if kind == "top":
                if arg == z:
                    return disj(call(span, 1), call(CfgAspect(l, r, FIND, z), 2))
                return call(CfgAspect(l, r, FIND, z), 2)
            return call(p, UP)
        # FIND
        if kind == "lhs":
            if arg == z:
                return disj(call(span, 1), call(p, 2))
            return call(p, 2)
        return FALSE

    def extra_automata(self):
        return [productive_checker(self.nonterminals, self.terminals)]

    def reference(self, M, term: Term) -> bool:
        for node in term.subterms():
            if node.symbol not in self.alphabet:
                raise ValueError(f"foreign symbol {node.symbol.name!r} for grammar encodings")
        prods = decode(term)
        for lhs, rhs in prods:
            if not any(kind == "T" for kind, _ in rhs):
                raise NonProductiveGrammarError(f"production {lhs} -> {format_rhs(rhs)} has no terminal")
        return cyk_member(prods, self.start, M.letters)

    # helpers for fixtures and the CLI
    def encode(self, productions) -> Term:
        return encode(self.alphabet, productions)

    def parse_cfg(self, text: str):
        return parse_cfg_text(text, self.nonterminals, self.terminals)


def format_rhs(rhs) -> str:
    return " ".join(x for _, x in rhs)


def decode(t: Term) -> list[tuple[str, tuple]]:
    """Grammar productions encoded by ``t``; raises EncodingError otherwise."""

    def rhs_of(node: Term) -> tuple:
        kind, arg = _classify(node.symbol.name)
        if kind == "concat":
            return rhs_of(node.children[0]) + rhs_of(node.children[1])
        if kind == "term":
            return (("T", arg),)
        if kind == "rhs":
            return (("N", arg),)
        raise EncodingError(f"{node.symbol.name} cannot occur inside a right-hand side")

    kind, arg = _classify(t.symbol.name)
    if kind != "top":
        raise EncodingError("the root of a grammar encoding must be a top_ symbol")
    prods = [(arg, rhs_of(t.children[0]))]
    node = t.children[1]
    while True:
        kind, arg = _classify(node.symbol.name)
        if kind == "end":
            return prods
        if kind != "lhs":
            raise EncodingError(f"expected lhs_ or end on the production spine, found {node.symbol.name}")
        prods.append((arg, rhs_of(node.children[0])))
        node = node.children[1]


def encode(alphabet, productions) -> Term:
    """Inverse of ``decode``; ``productions`` is a list of (lhs, rhs items)."""
    if not productions:
        raise EncodingError("a grammar needs at least one production")

    def rhs_term(items) -> Term:
        if not items:
            raise EncodingError("empty right-hand sides cannot be encoded")
        kind, x = items[0]
        leaf = Term(alphabet[f"term_{x}" if kind == "T" else f"rhs_{x}"])
        if len(items) == 1:
            return leaf
        return Term(alphabet["concat"], [leaf, rhs_term(items[1:])])

    spine = Term(alphabet["end"])
    for lhs, rhs in reversed(productions[1:]):
        spine = Term(alphabet[f"lhs_{lhs}"], [rhs_term(rhs), spine])
    lhs, rhs = productions[0]
    return Term(alphabet[f"top_{lhs}"], [rhs_term(rhs), spine])


def parse_cfg_text(text: str, nonterminals, terminals) -> list:
    """``S -> a S b | c`` style text; items are separated by whitespace."""
    nts, ts = set(nonterminals), set(terminals)
    prods = []
    for line in text.replace(";", "\n").splitlines():
        line = line.strip()
        if not line:
            continue
        lhs, _, rhs = line.partition("->")
        lhs = lhs.strip()
        if lhs not in nts:
            raise ValueError(f"unknown nonterminal {lhs!r}")
        for alt in rhs.split("|"):
            items = []
            for tok in alt.split():
                if tok in nts:
                    items.append(("N", tok))
                elif tok in ts:
                    items.append(("T", tok))
                else:
                    raise ValueError(f"unknown grammar symbol {tok!r}")
            prods.append((lhs, tuple(items)))
    return prods


def cyk_member(prods, start: str, word: str) -> bool:
    """Chart parsing over all spans, saturated to a fixpoint."""
    n = len(word)
    derives: dict[str, set] = {a: set() for a, _ in prods}
    derives.setdefault(start, set())

    def splits(items, i: int, j: int) -> bool:
        # can items derive word[i:j]?
        if not items:
            return i == j
        kind, x = items[0]
        if kind == "T":
            return i < j and word[i] == x and splits(items[1:], i + 1, j)
        return any((i, k) in derives.get(x, ()) and splits(items[1:], k, j) for k in range(i, j + 1))

    changed = True
    while changed:
        changed = False
        for a, rhs in prods:
            for i in range(n + 1):
                for j in range(i, n + 1):
                    if (i, j) not in derives[a] and splits(rhs, i, j):
                        derives[a].add((i, j))
                        changed = True
    return (0, n) in derives[start]


# productivity classifier states
RHS_P, RHS_0, SPINE_P, SPINE_0, ROOT_P, ROOT_0, BAD = "rhs+", "rhs0", "spine+", "spine0", "root+", "root0", "bad"
_CLASSIFIER_STATES = (RHS_P, RHS_0, SPINE_P, SPINE_0, ROOT_P, ROOT_0, BAD)


def _classifier_rules(alphabet):
    rules = []
    rhs = (RHS_P, RHS_0)
    spine = (SPINE_P, SPINE_0)
    for s in alphabet:
        kind, _ = _classify(s.name)
        if s.arity == 0:
            r = {"term": RHS_P, "rhs": RHS_0, "end": SPINE_P}.get(kind, BAD)
            rules.append((s, (), r))
            continue
        for a in _CLASSIFIER_STATES:
            for b in _CLASSIFIER_STATES:
                if kind == "concat" and a in rhs and b in rhs:
                    r = RHS_P if RHS_P in (a, b) else RHS_0
                elif kind in ("lhs", "top") and a in rhs and b in spine:
                    good = a == RHS_P and b == SPINE_P
                    if kind == "lhs":
                        r = SPINE_P if good else SPINE_0
                    else:
                        r = ROOT_P if good else ROOT_0
                else:
                    r = BAD
                rules.append((s, (a, b), r))
    return rules


def productive_checker(nonterminals, terminals) -> Nfta:
    """Deterministic automaton accepting exactly the encodings of grammars
    whose every production has a terminal."""
    alphabet = cfg_alphabet(nonterminals, terminals)
    return Nfta(alphabet, _CLASSIFIER_STATES, _classifier_rules(alphabet), {ROOT_P})


def unproductive_checker(nonterminals, terminals) -> Nfta:
    """Complement of ``productive_checker``: every other tree."""
    alphabet = cfg_alphabet(nonterminals, terminals)
    return Nfta(alphabet, _CLASSIFIER_STATES, _classifier_rules(alphabet), set(_CLASSIFIER_STATES) - {ROOT_P})
