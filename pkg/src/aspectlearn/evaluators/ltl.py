"""LTL over lassos ``u v^omega``.

Aspects are prefix positions ``Pre(i)`` (1 <= i <= |u|) and loop positions
``Loop(j)`` (1 <= j <= |v|).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..facet import Evaluator, all_of, any_of, boolean, call, call_dual
from ..term import Symbol, Term
from ..twata import FALSE, PosBool, conj, disj
from ._common import StructureError, check_names, make_alphabet, require, single_characters

OPS = {"and": 2, "or": 2, "not": 1, "X": 1, "U": 2}


@dataclass(frozen=True, order=True)
class Pre:
    i: int

    def __str__(self):
        return f"({self.i},_)"


@dataclass(frozen=True, order=True)
class Loop:
    j: int

    def __str__(self):
        return f"(_,{self.j})"


@dataclass(frozen=True)
class Lasso:
    u: str
    v: str

    def __post_init__(self):
        if not self.u or not self.v:
            raise StructureError("both u and v of a lasso must be nonempty")

    def to_json(self):
        return {"u": self.u, "v": self.v}

    def positions(self) -> list:
        return [Pre(i) for i in range(1, len(self.u) + 1)] + [Loop(j) for j in range(1, len(self.v) + 1)]

    def succ(self, p):
        if isinstance(p, Pre):
            return Pre(p.i + 1) if p.i < len(self.u) else Loop(1)
        return Loop(p.j + 1 if p.j < len(self.v) else 1)

    def letter(self, p) -> str:
        return self.u[p.i - 1] if isinstance(p, Pre) else self.v[p.j - 1]


def parse_lasso(data) -> Lasso:
    return Lasso(require(data, "u", str), require(data, "v", str))


def cyclic_range(j: int, j2: int, n: int) -> list[int]:
    """Loop positions from j up to but excluding j2, wrapping past n."""
    if j <= j2:
        return list(range(j, j2))
    return list(range(j, n + 1)) + list(range(1, j2))


class LtlEvaluator(Evaluator):
    language = "ltl"

    def __init__(self, letters):
        self.letters = check_names("letter", letters, OPS)
        single_characters(self.letters)
        self.alphabet = make_alphabet(OPS, self.letters)

    def params(self):
        return {"letters": list(self.letters)}

    def parse_structure(self, data):
        m = parse_lasso(data)
        bad = sorted(set(m.u + m.v) - set(self.letters))
        if bad:
            raise StructureError(f"lasso uses letters outside the alphabet: {bad}")
        return m

    def structure_to_json(self, M):
        return M.to_json()

    def enumerate_aspects(self, M):
        return M.positions()

    def initial_payload(self, M):
        return Pre(1)

    def transition(self, M, p, symbol: Symbol) -> PosBool:
        n = symbol.name
        nu, nv = len(M.u), len(M.v)
        if n == "and":
            return conj(call(p, 1), call(p, 2))
        if n == "or":
            return disj(call(p, 1), call(p, 2))
        if n == "not":
            return call_dual(p, 1)
        if n == "X":
            return call(M.succ(p), 1)
        if n == "U":
            if isinstance(p, Pre):
                i = p.i
                reach_in_prefix = any_of(
                    range(i, nu + 1),
                    lambda i2: conj(call(Pre(i2), 2), all_of(range(i, i2), lambda i3: call(Pre(i3), 1))),
                )
                reach_in_loop = conj(
                    all_of(range(i, nu + 1), lambda i2: call(Pre(i2), 1)),
                    any_of(
                        range(1, nv + 1),
                        lambda j: conj(all_of(range(1, j), lambda j2: call(Loop(j2), 1)), call(Loop(j), 2)),
                    ),
                )
                return disj(reach_in_prefix, reach_in_loop)
            j = p.j
            return any_of(
                range(1, nv + 1),
                lambda j2: conj(call(Loop(j2), 2), all_of(cyclic_range(j, j2, nv), lambda j3: call(Loop(j3), 1))),
            )
        if symbol.arity == 0:
            return boolean(M.letter(p) == n)
        return FALSE

    def reference(self, M, term: Term) -> bool:
        """Fixpoint semantics on the finite successor graph of the lasso."""
        positions = M.positions()
        pre = {q: [p for p in positions if M.succ(p) == q] for q in positions}
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
                r = frozenset(positions) - sat(t.children[0])
            elif n == "X":
                s = sat(t.children[0])
                r = frozenset(p for p in positions if M.succ(p) in s)
            elif n == "U":
                phi, psi = sat(t.children[0]), sat(t.children[1])
                x = set(psi)
                stack = list(psi)
                while stack:
                    q = stack.pop()
                    for p in pre[q]:
                        if p in phi and p not in x:
                            x.add(p)
                            stack.append(p)
                r = frozenset(x)
            elif t.symbol.arity == 0 and t.symbol in self.alphabet:
                r = frozenset(p for p in positions if M.letter(p) == n)
            else:
                raise ValueError(f"foreign symbol {n!r} for LTL")
            memo[t] = r
            return r

        return Pre(1) in sat(term)


def unrolled_eval(M: Lasso, term: Term) -> bool:
    """Second oracle: semantics on integer positions of the infinite word.

    Position p >= |u| is identified with |u| + (p - |u|) mod |v|; an Until
    only has to look one full period past the later of p and |u|, because
    every later position repeats an earlier one.
    """
    u, v = M.u, M.v
    nu, nv = len(u), len(v)

    def canon(p: int) -> int:
        return p if p < nu else nu + (p - nu) % nv

    def letter(p: int) -> str:
        p = canon(p)
        return u[p] if p < nu else v[p - nu]

    memo: dict = {}

    def holds(t: Term, p: int) -> bool:
        p = canon(p)
        key = (t, p)
        if key in memo:
            return memo[key]
        n = t.symbol.name
        if n == "and":
            r = holds(t.children[0], p) and holds(t.children[1], p)
        elif n == "or":
            r = holds(t.children[0], p) or holds(t.children[1], p)
        elif n == "not":
            r = not holds(t.children[0], p)
        elif n == "X":
            r = holds(t.children[0], p + 1)
        elif n == "U":
            r = False
            for q in range(p, max(p, nu) + nv):
                if holds(t.children[1], q):
                    r = True
                    break
                if not holds(t.children[0], q):
                    break
        else:
            r = letter(p) == n
        memo[key] = r
        return r

    return holds(term, 0)
