"""CTL over pointed Kripke structures.

Aspects are worlds ``Node(w)`` and counter stages ``Stage(w, i)`` with
``0 <= i <= |W|``.  A stage unrolls EG (a greatest fixpoint) or EU (a least
fixpoint) a bounded number of times, so every obligation is finite.
"""

from __future__ import annotations

from typing import NamedTuple

from ..facet import Evaluator, any_of, boolean, call, call_dual
from ..term import Symbol, Term
from ..twata import FALSE, TRUE, STAY, PosBool, conj, disj
from ._common import check_names, make_alphabet
from .modal import parse_kripke

OPS = {"or": 2, "not": 1, "EX": 1, "EG": 1, "EU": 2}


class Node(NamedTuple):
    world: str

    def __str__(self):
        return self.world


class Stage(NamedTuple):
    world: str
    i: int

    def __str__(self):
        return f"({self.world},{self.i})"


class CtlEvaluator(Evaluator):
    language = "ctl"

    def __init__(self, props):
        self.props = check_names("proposition", props, OPS)
        self.alphabet = make_alphabet(OPS, self.props)

    def params(self):
        return {"props": list(self.props)}

    def parse_structure(self, data):
        return parse_kripke(data)

    def structure_to_json(self, M):
        return M.to_json()

    def enumerate_aspects(self, M):
        n = len(M.worlds)
        return [Node(w) for w in M.worlds] + [Stage(w, i) for w in M.worlds for i in range(n + 1)]

    def initial_payload(self, M):
        return Node(M.start)

    def transition(self, M, p, symbol: Symbol) -> PosBool:
        name = symbol.name
        if isinstance(p, Stage):
            w, i = p
            last = i == len(M.worlds)
            if name == "EG":
                if last:
                    return TRUE
                return conj(call(Node(w), 1), any_of(M.succ(w), lambda z: call(Stage(z, i + 1), STAY)))
            if name == "EU":
                if last:
                    return FALSE
                return disj(
                    call(Node(w), 2),
                    conj(call(Node(w), 1), any_of(M.succ(w), lambda z: call(Stage(z, i + 1), STAY))),
                )
            return FALSE
        w = p.world
        if name in ("EG", "EU"):
            return call(Stage(w, 0), STAY)
        if name == "EX":
            return any_of(M.succ(w), lambda z: call(Node(z), 1))
        if name == "or":
            return disj(call(p, 1), call(p, 2))
        if name == "not":
            return call_dual(p, 1)
        if symbol.arity == 0:
            return boolean(name in M.label(w))
        return FALSE

    def reference(self, M, term: Term) -> bool:
        worlds = frozenset(M.worlds)
        memo: dict = {}

        def pre_exists(x: frozenset) -> frozenset:
            return frozenset(w for w in M.worlds if any(z in x for z in M.succ(w)))

        def sat(t: Term) -> frozenset:
            r = memo.get(t)
            if r is not None:
                return r
            n = t.symbol.name
            if n == "or":
                r = sat(t.children[0]) | sat(t.children[1])
            elif n == "not":
                r = worlds - sat(t.children[0])
            elif n == "EX":
                r = pre_exists(sat(t.children[0]))
            elif n == "EG":
                phi = sat(t.children[0])
                x = worlds
                while True:
                    nx = phi & pre_exists(x)
                    if nx == x:
                        break
                    x = nx
                r = x
            elif n == "EU":
                phi, psi = sat(t.children[0]), sat(t.children[1])
                x = frozenset()
                while True:
                    nx = psi | (phi & pre_exists(x))
                    if nx == x:
                        break
                    x = nx
                r = x
            elif t.symbol.arity == 0 and t.symbol in self.alphabet:
                r = frozenset(w for w in M.worlds if n in M.label(w))
            else:
                raise ValueError(f"foreign symbol {n!r} for CTL")
            memo[t] = r
            return r

        return M.start in sat(term)
