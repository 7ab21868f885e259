"""Modal logic over pointed Kripke structures."""

from __future__ import annotations

from dataclasses import dataclass

from ..facet import Evaluator, all_of, any_of, boolean, call, call_dual
from ..term import Symbol, Term
from ..twata import FALSE, PosBool, conj, disj
from ._common import StructureError, check_names, make_alphabet, require

OPS = {"and": 2, "or": 2, "not": 1, "box": 1, "dia": 1}


@dataclass(frozen=True)
class KripkeStructure:
    worlds: tuple
    start: str
    edges: frozenset
    labels: tuple  # ((world, frozenset of props), ...) in world order

    def __post_init__(self):
        ws = set(self.worlds)
        if len(ws) != len(self.worlds):
            raise StructureError("duplicate world names")
        if self.start not in ws:
            raise StructureError(f"start world {self.start!r} is not a world")
        for a, b in self.edges:
            if a not in ws or b not in ws:
                raise StructureError(f"edge ({a!r}, {b!r}) has an endpoint outside the worlds")
        object.__setattr__(self, "_succ", {w: tuple(sorted(b for a, b in self.edges if a == w)) for w in self.worlds})
        object.__setattr__(self, "_label", dict(self.labels))

    def succ(self, w) -> tuple:
        return self._succ[w]

    def label(self, w) -> frozenset:
        return self._label[w]

    def props(self) -> set:
        return set().union(*self._label.values()) if self.worlds else set()

    def to_json(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "start": self.start,
            "edges": sorted([a, b] for a, b in self.edges),
            "labels": {w: sorted(ps) for w, ps in self.labels if ps},
        }


def parse_kripke(data) -> KripkeStructure:
    worlds = require(data, "worlds", list)
    if not worlds:
        raise StructureError("a Kripke structure needs at least one world")
    worlds = tuple(str(w) for w in worlds)
    start = str(require(data, "start"))
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        raise StructureError("field 'edges' must be a list")
    es = set()
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise StructureError(f"edge {e!r} is not a pair")
        es.add((str(e[0]), str(e[1])))
    labels = data.get("labels", {})
    if not isinstance(labels, dict):
        raise StructureError("field 'labels' must be an object")
    for w in labels:
        if w not in worlds:
            raise StructureError(f"label for unknown world {w!r}")
    lab = tuple((w, frozenset(str(p) for p in labels.get(w, []))) for w in worlds)
    return KripkeStructure(worlds, start, frozenset(es), lab)


class ModalEvaluator(Evaluator):
    language = "modal"

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
        return list(M.worlds)

    def initial_payload(self, M):
        return M.start

    def transition(self, M, w, symbol: Symbol) -> PosBool:
        n = symbol.name
        if n == "and":
            return conj(call(w, 1), call(w, 2))
        if n == "or":
            return disj(call(w, 1), call(w, 2))
        if n == "not":
            return call_dual(w, 1)
        if n == "box":
            return all_of(M.succ(w), lambda z: call(z, 1))
        if n == "dia":
            return any_of(M.succ(w), lambda z: call(z, 1))
        if symbol.arity == 0:
            return boolean(n in M.label(w))
        return FALSE

    def reference(self, M, term: Term) -> bool:
        memo: dict = {}

        def sat(t: Term) -> frozenset:
            r = memo.get(t)
            if r is not None:
                return r
            n = t.symbol.name
            if n == "and":
                r = sat(t.children[0]) & sat(t.children[1])
            elif n == "or":
                r = sat(t.children[0]) | sat(t.children[1])
            elif n == "not":
                r = frozenset(M.worlds) - sat(t.children[0])
            elif n == "box":
                s = sat(t.children[0])
                r = frozenset(w for w in M.worlds if all(z in s for z in M.succ(w)))
            elif n == "dia":
                s = sat(t.children[0])
                r = frozenset(w for w in M.worlds if any(z in s for z in M.succ(w)))
            elif t.symbol.arity == 0 and t.symbol in self.alphabet:
                r = frozenset(w for w in M.worlds if n in M.label(w))
            else:
                raise ValueError(f"foreign symbol {n!r} for modal logic")
            memo[t] = r
            return r

        return M.start in sat(term)
