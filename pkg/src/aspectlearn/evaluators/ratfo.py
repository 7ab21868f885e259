"""First-order logic with k variables over the rationals with ``<``.

Aspects are total preorders on the variables, represented as a tuple of
blocks (tuples of variable names) in strictly increasing order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from ..facet import Evaluator, all_of, any_of, boolean, call, call_dual
from ..term import Symbol, Term
from ..twata import FALSE, PosBool, conj, disj
from ._common import StructureError, make_alphabet, require


def variable_names(k: int) -> list[str]:
    if k < 1:
        raise ValueError("k must be at least 1")
    if k <= 3:
        return ["x", "y", "z"][:k]
    return [f"x{i}" for i in range(1, k + 1)]


class Preorder(tuple):
    """Ordered blocks of equal variables; printed like ``x<z=y``."""

    def __str__(self):
        return "<".join("=".join(b) for b in self)

    def rank(self) -> dict:
        return {v: i for i, b in enumerate(self) for v in b}


def make_preorder(blocks, order) -> Preorder:
    pos = {v: i for i, v in enumerate(order)}
    return Preorder(tuple(sorted(b, key=pos.__getitem__)) for b in blocks if b)


def all_preorders(variables) -> list[Preorder]:
    """Every total preorder (ordered set partition) of ``variables``."""
    variables = list(variables)
    out = []

    def rec(remaining: list, acc: list):
        if not remaining:
            out.append(make_preorder(acc, variables))
            return
        # the lowest block is any nonempty subset of what remains
        for size in range(1, len(remaining) + 1):
            for block in combinations(remaining, size):
                left = [v for v in remaining if v not in block]
                rec(left, acc + [block])

    rec(variables, [])
    return out


def place(x: str, p: Preorder, order) -> list[Preorder]:
    """Preorders that agree with ``p`` on every variable except ``x``."""
    rest = [tuple(v for v in b if v != x) for b in p]
    rest = [b for b in rest if b]
    out = []
    m = len(rest)
    for g in range(m + 1):
        out.append(make_preorder(rest[:g] + [(x,)] + rest[g:], order))
        if g < m:
            merged = rest[:g] + [rest[g] + (x,)] + rest[g + 1:]
            out.append(make_preorder(merged, order))
    return out


def preorder_of(values, order) -> Preorder:
    distinct = sorted(set(values))
    blocks = [tuple(v for v, val in zip(order, values) if val == d) for d in distinct]
    return make_preorder(blocks, order)


@dataclass(frozen=True)
class RatTuple:
    values: tuple  # of Fraction

    def to_json(self):
        return {"values": [str(v) for v in self.values]}


def parse_fraction(s) -> Fraction:
    if isinstance(s, bool):
        raise StructureError(f"not a rational: {s!r}")
    try:
        return Fraction(s) if isinstance(s, (int, str)) else Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise StructureError(f"not a rational: {s!r} ({exc})") from None


class RatFoEvaluator(Evaluator):
    language = "ratfo"

    def __init__(self, k: int):
        self.k = int(k)
        self.variables = variable_names(self.k)
        ops = {"and": 2, "or": 2, "not": 1}
        for v in self.variables:
            ops[f"forall_{v}"] = 1
            ops[f"exists_{v}"] = 1
        for a in self.variables:
            for b in self.variables:
                if a != b:
                    ops[f"lt_{a}_{b}"] = 0
        for a, b in combinations(self.variables, 2):
            ops[f"eq_{a}_{b}"] = 0
        self.alphabet = make_alphabet(ops, [])
        self._preorders = all_preorders(self.variables)

    def params(self):
        return {"k": self.k}

    def parse_structure(self, data):
        vals = require(data, "values", list)
        if len(vals) != self.k:
            raise StructureError(f"expected {self.k} values, got {len(vals)}")
        return RatTuple(tuple(parse_fraction(v) for v in vals))

    def structure_to_json(self, M):
        return M.to_json()

    def enumerate_aspects(self, M):
        return list(self._preorders)

    def initial_payload(self, M):
        return preorder_of(M.values, self.variables)

    def place(self, x: str, p: Preorder) -> list[Preorder]:
        return place(x, p, self.variables)

    def transition(self, M, p: Preorder, symbol: Symbol) -> PosBool:
        name = symbol.name
        if name == "and":
            return conj(call(p, 1), call(p, 2))
        if name == "or":
            return disj(call(p, 1), call(p, 2))
        if name == "not":
            return call_dual(p, 1)
        head, _, rest = name.partition("_")
        if head == "forall":
            return all_of(self.place(rest, p), lambda q: call(q, 1))
        if head == "exists":
            return any_of(self.place(rest, p), lambda q: call(q, 1))
        if head in ("lt", "eq"):
            a, b = rest.split("_")
            rank = p.rank()
            return boolean(rank[a] < rank[b] if head == "lt" else rank[a] == rank[b])
        return FALSE

    def reference(self, M, term: Term) -> bool:
        for node in term.subterms():
            if node.symbol not in self.alphabet:
                raise ValueError(f"foreign symbol {node.symbol.name!r} for FO over the rationals")
        return _holds(term, tuple(M.values), tuple(self.variables))


def _candidates(vals: tuple, skip: int) -> list[Fraction]:
    """One witness per point and per gap among the values other than ``skip``."""
    others = sorted({v for i, v in enumerate(vals) if i != skip})
    if not others:
        return [Fraction(0)]
    out = set(others)
    out.add(others[0] - 1)
    out.add(others[-1] + 1)
    for a, b in zip(others, others[1:]):
        out.add((a + b) / 2)
    return sorted(out)


@lru_cache(maxsize=1 << 17)
def _holds(t: Term, vals: tuple, variables: tuple) -> bool:
    name = t.symbol.name
    if name == "and":
        return _holds(t.children[0], vals, variables) and _holds(t.children[1], vals, variables)
    if name == "or":
        return _holds(t.children[0], vals, variables) or _holds(t.children[1], vals, variables)
    if name == "not":
        return not _holds(t.children[0], vals, variables)
    head, _, rest = name.partition("_")
    if head in ("forall", "exists"):
        i = variables.index(rest)
        test = all if head == "forall" else any
        return test(_holds(t.children[0], vals[:i] + (c,) + vals[i + 1:], variables) for c in _candidates(vals, i))
    a, b = (vals[variables.index(v)] for v in rest.split("_"))
    return a < b if head == "lt" else a == b
