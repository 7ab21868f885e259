"""Extended regular expressions over finite words.

Aspects are spans ``(l, r)`` with ``1 <= l <= r <= |w|+1`` denoting the
subword ``w[l-1:r-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..facet import Evaluator, any_of, boolean, call, call_dual
from ..term import Symbol, Term
from ..twata import FALSE, STAY, TRUE, PosBool, conj, disj
from ._common import StructureError, check_names, make_alphabet, require, single_characters

OPS = {"concat": 2, "union": 2, "inter": 2, "star": 1, "neg": 1}


@dataclass(frozen=True)
class WordStructure:
    letters: str

    def __len__(self):
        return len(self.letters)

    def spans(self) -> list:
        n = len(self.letters)
        return [(l, r) for l in range(1, n + 2) for r in range(l, n + 2)]

    def to_json(self):
        return {"word": self.letters}


def parse_word(data) -> WordStructure:
    w = require(data, "word", str)
    return WordStructure(w)


class RegexEvaluator(Evaluator):
    language = "regex"

    def __init__(self, letters):
        self.letters = check_names("letter", letters, OPS)
        single_characters(self.letters)
        self.alphabet = make_alphabet(OPS, self.letters)

    def params(self):
        return {"letters": list(self.letters)}

    def parse_structure(self, data):
        w = parse_word(data)
        bad = sorted(set(w.letters) - set(self.letters))
        if bad:
            raise StructureError(f"word uses letters outside the alphabet: {bad}")
        return w

    def structure_to_json(self, M):
        return M.to_json()

    def enumerate_aspects(self, M):
        return M.spans()

    def initial_payload(self, M):
        return (1, len(M) + 1)

    def transition(self, M, span, symbol: Symbol) -> PosBool:
        l, r = span
        n = symbol.name
        if n == "star":
            if l == r:
                return TRUE
            return any_of(range(l + 1, r + 1), lambda x: conj(call((l, x), 1), call((x, r), STAY)))
        if n == "concat":
            return any_of(range(l, r + 1), lambda x: conj(call((l, x), 1), call((x, r), 2)))
        if n == "union":
            return disj(call(span, 1), call(span, 2))
        if n == "neg":
            return call_dual(span, 1)
        if n == "inter":
            return conj(call(span, 1), call(span, 2))
        if symbol.arity == 0:
            return boolean(r == l + 1 and M.letters[l - 1] == n)
        return FALSE

    def reference(self, M, term: Term) -> bool:
        for node in term.subterms():
            if node.symbol not in self.alphabet:
                raise ValueError(f"foreign symbol {node.symbol.name!r} for regular expressions")
        return member(term, M.letters)


def member(e: Term, word: str) -> bool:
    """Membership of ``word`` in L(e) by recursion on (subexpression, subword)."""

    @lru_cache(maxsize=None)
    def m(t: Term, s: str) -> bool:
        n = t.symbol.name
        if n == "concat":
            return any(m(t.children[0], s[:i]) and m(t.children[1], s[i:]) for i in range(len(s) + 1))
        if n == "union":
            return m(t.children[0], s) or m(t.children[1], s)
        if n == "inter":
            return m(t.children[0], s) and m(t.children[1], s)
        if n == "neg":
            return not m(t.children[0], s)
        if n == "star":
            if s == "":
                return True
            # first factor nonempty
            return any(m(t.children[0], s[:i]) and m(t, s[i:]) for i in range(1, len(s) + 1))
        return s == n

    return m(e, word)
