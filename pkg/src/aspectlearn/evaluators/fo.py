"""First-order logic with k variables over finite relational structures.

Aspects are partial assignments, stored as a tuple with one entry per
variable (an element name, or None when unassigned).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from ..facet import Evaluator, all_of, any_of, boolean, call, call_dual
from ..term import Symbol, Term
from ..twata import FALSE, PosBool, conj, disj
from ._common import StructureError, check_names, make_alphabet, require
from .ratfo import variable_names

BASE_OPS = {"and": 2, "or": 2, "not": 1}


@dataclass(frozen=True)
class RelStructure:
    universe: tuple
    relations: tuple  # ((name, frozenset of tuples), ...)

    def rel(self, name: str) -> frozenset:
        return dict(self.relations).get(name, frozenset())

    def to_json(self):
        return {"universe": list(self.universe), "relations": {n: sorted(map(list, ts)) for n, ts in self.relations}}


class FoEvaluator(Evaluator):
    language = "fo"

    def __init__(self, relations: dict, k: int):
        self.k = int(k)
        self.variables = variable_names(self.k)
        names = check_names("relation", list(relations), set(BASE_OPS) | {"forall", "exists"})
        for n in names:
            if "_" in n:
                raise ValueError(f"relation name {n!r} may not contain '_'")
        self.relations = {n: int(relations[n]) for n in names}
        ops = dict(BASE_OPS)
        for v in self.variables:
            ops[f"forall_{v}"] = 1
            ops[f"exists_{v}"] = 1
        self._atoms = {}
        for n, arity in self.relations.items():
            for args in product(self.variables, repeat=arity):
                sym = "_".join((n,) + args)
                ops[sym] = 0
                self._atoms[sym] = (n, args)
        self.alphabet = make_alphabet(ops, [])
        self._index = {v: i for i, v in enumerate(self.variables)}

    def params(self):
        return {"relations": dict(self.relations), "k": self.k}

    def parse_structure(self, data):
        uni = require(data, "universe", list)
        if not uni:
            raise StructureError("universe must be nonempty")
        uni = tuple(str(a) for a in uni)
        if len(set(uni)) != len(uni):
            raise StructureError("duplicate universe elements")
        rels = data.get("relations", {})
        if not isinstance(rels, dict):
            raise StructureError("field 'relations' must be an object")
        out = []
        for name, arity in self.relations.items():
            ts = set()
            for tup in rels.get(name, []):
                if not isinstance(tup, list) or len(tup) != arity:
                    raise StructureError(f"tuple {tup!r} of {name} does not have arity {arity}")
                tup = tuple(str(a) for a in tup)
                for a in tup:
                    if a not in uni:
                        raise StructureError(f"element {a!r} of {name} is not in the universe")
                ts.add(tup)
            out.append((name, frozenset(ts)))
        for name in rels:
            if name not in self.relations:
                raise StructureError(f"relation {name!r} is not in the signature")
        return RelStructure(uni, tuple(out))

    def structure_to_json(self, M):
        return M.to_json()

    def enumerate_aspects(self, M):
        return list(product((None,) + M.universe, repeat=self.k))

    def initial_payload(self, M):
        return (None,) * self.k

    def transition(self, M, g: tuple, symbol: Symbol) -> PosBool:
        name = symbol.name
        if name == "and":
            return conj(call(g, 1), call(g, 2))
        if name == "or":
            return disj(call(g, 1), call(g, 2))
        if name == "not":
            return call_dual(g, 1)
        head, _, var = name.partition("_")
        if head in ("forall", "exists") and var in self._index:
            i = self._index[var]
            updates = [g[:i] + (a,) + g[i + 1:] for a in M.universe]
            if head == "forall":
                return all_of(updates, lambda h: call(h, 1))
            return any_of(updates, lambda h: call(h, 1))
        atom = self._atoms.get(name)
        if atom is not None:
            rel, args = atom
            vals = tuple(g[self._index[v]] for v in args)
            return boolean(None not in vals and vals in M.rel(rel))
        return FALSE

    def reference(self, M, term: Term) -> bool:
        def holds(t: Term, env: dict) -> bool:
            if t.symbol not in self.alphabet:
                raise ValueError(f"foreign symbol {t.symbol.name!r} for this signature")
            name = t.symbol.name
            if name == "and":
                return holds(t.children[0], env) and holds(t.children[1], env)
            if name == "or":
                return holds(t.children[0], env) or holds(t.children[1], env)
            if name == "not":
                return not holds(t.children[0], env)
            if name in self._atoms:
                rel, args = self._atoms[name]
                if any(v not in env for v in args):
                    return False
                return tuple(env[v] for v in args) in M.rel(rel)
            head, _, var = name.partition("_")
            test = all if head == "forall" else any
            return test(holds(t.children[0], {**env, var: a}) for a in M.universe)

        return holds(term, {})
