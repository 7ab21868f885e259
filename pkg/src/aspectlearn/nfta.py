"""Bottom-up nondeterministic tree automata.

Every automaton here exposes the same small protocol so that explicit,
lazily generated and product automata can be mixed:

* ``alphabet``
* ``step(symbol, children) -> tuple of result states``
* ``is_final(state) -> bool``
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .term import RankedAlphabet, RegularTreeGrammar, Symbol, Term

__all__ = [
    "Nfta",
    "LazyProduct",
    "ResourceExhausted",
    "WitnessResult",
    "grammar_to_nfta",
    "product",
    "accepts",
    "run",
    "min_witness",
    "universal_nfta",
    "to_dot",
]


class ResourceExhausted(RuntimeError):
    def __init__(self, message: str, stats: dict | None = None):
        super().__init__(message)
        self.stats = stats or {}


class Nfta:
    """Explicit NFTA with rules ``(symbol, child states, result)``."""

    def __init__(self, alphabet: RankedAlphabet, states: Iterable[Hashable], rules: Iterable[tuple], final: Iterable[Hashable]):
        self.alphabet = alphabet
        self.states = frozenset(states)
        self.rules = frozenset((s, tuple(kids), r) for s, kids, r in rules)
        self.final = frozenset(final)
        for s, kids, r in self.rules:
            if s not in alphabet:
                raise ValueError(f"rule uses symbol {s.name!r} outside the alphabet")
            if len(kids) != s.arity:
                raise ValueError(f"rule for {s.name} has {len(kids)} children, arity is {s.arity}")
            for q in kids + (r,):
                if q not in self.states:
                    raise ValueError(f"rule references undeclared state {q!r}")
        for q in self.final:
            if q not in self.states:
                raise ValueError(f"final state {q!r} not declared")
        index: dict[tuple, list] = {}
        for s, kids, r in self.rules:
            index.setdefault((s, kids), []).append(r)
        self._index = {k: tuple(sorted(v, key=repr)) for k, v in index.items()}

    def step(self, symbol: Symbol, children: tuple) -> tuple:
        return self._index.get((symbol, children), ())

    def is_final(self, state) -> bool:
        return state in self.final

    def dump(self) -> str:
        lines = []
        for s, kids, r in sorted(self.rules, key=repr):
            args = f"({','.join(map(str, kids))})" if kids else ""
            mark = " final" if r in self.final else ""
            lines.append(f"{s.name}{args} -> {r}{mark}")
        return "\n".join(lines)

    def __repr__(self):
        return f"Nfta(|Q|={len(self.states)}, |rules|={len(self.rules)})"


def grammar_to_nfta(g: RegularTreeGrammar) -> Nfta:
    """States: the nonterminals plus one per internal right-hand-side position."""
    states: set = set(g.nonterminals)
    rules: set = set()
    # direct rules to a state; unit productions handled by closure afterwards
    for idx, (lhs, rhs) in enumerate(g.productions):
        if g.is_nonterminal(rhs):
            continue

        def walk(node: Term, path: tuple):
            if g.is_nonterminal(node):
                return node.symbol.name
            if path:
                q = ("_p", idx, path)
                states.add(q)
            else:
                q = lhs
            kids = tuple(walk(c, path + (i + 1,)) for i, c in enumerate(node.children))
            rules.add((node.symbol, kids, q))
            return q

        walk(rhs, ())

    # A -> B unit productions: anything reaching B also reaches A
    unit = {}
    for lhs, rhs in g.productions:
        if g.is_nonterminal(rhs):
            unit.setdefault(rhs.symbol.name, set()).add(lhs)
    if unit:
        def closure(nt):
            seen = {nt}
            stack = [nt]
            while stack:
                x = stack.pop()
                for y in unit.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            return seen

        extra = set()
        for s, kids, r in rules:
            if r in unit:
                for r2 in closure(r):
                    extra.add((s, kids, r2))
        rules |= extra
    return Nfta(g.alphabet, states, rules, {g.start})


def universal_nfta(alphabet: RankedAlphabet) -> Nfta:
    rules = [(s, ("*",) * s.arity, "*") for s in alphabet]
    return Nfta(alphabet, {"*"}, rules, {"*"})


class LazyProduct:
    """Synchronous product; states are tuples of component states."""

    def __init__(self, *components):
        if not components:
            raise ValueError("product of zero automata")
        alpha = components[0].alphabet
        for c in components[1:]:
            if c.alphabet != alpha:
                raise ValueError("alphabet mismatch in product")
        self.alphabet = alpha
        self.components = components

    def step(self, symbol: Symbol, children: tuple) -> tuple:
        per = []
        for i, comp in enumerate(self.components):
            res = comp.step(symbol, tuple(c[i] for c in children))
            if not res:
                return ()
            per.append(res)
        return tuple(itertools.product(*per))

    def is_final(self, state: tuple) -> bool:
        return all(c.is_final(s) for c, s in zip(self.components, state))


def _reachable_rules(a) -> tuple[set, set]:
    """Saturate the reachable states and rules of any protocol automaton."""
    symbols = sorted(a.alphabet, key=lambda s: (s.arity, s.name))
    states: list = []
    seen: set = set()
    rules: set = set()
    changed = True
    while changed:
        changed = False
        snapshot = list(states)
        for s in symbols:
            for kids in itertools.product(snapshot, repeat=s.arity):
                for r in a.step(s, kids):
                    if (s, kids, r) not in rules:
                        rules.add((s, kids, r))
                    if r not in seen:
                        seen.add(r)
                        states.append(r)
                        changed = True
    return seen, rules


def product(a, b) -> Nfta:
    """Materialized product over reachable pairs."""
    lazy = LazyProduct(a, b)
    states, rules = _reachable_rules(lazy)
    final = {q for q in states if lazy.is_final(q)}
    return Nfta(lazy.alphabet, states, rules, final)


def materialize(a) -> Nfta:
    states, rules = _reachable_rules(a)
    return Nfta(a.alphabet, states, rules, {q for q in states if a.is_final(q)})


def run(a, t: Term) -> frozenset:
    """All states some run can assign to the root of ``t``."""
    memo: dict[Term, frozenset] = {}

    def go(node: Term) -> frozenset:
        r = memo.get(node)
        if r is not None:
            return r
        if node.symbol not in a.alphabet:
            raise ValueError(f"symbol {node.symbol.name!r} not in the automaton alphabet")
        kid_sets = [go(c) for c in node.children]
        out = set()
        for kids in itertools.product(*kid_sets):
            out.update(a.step(node.symbol, kids))
        r = frozenset(out)
        memo[node] = r
        return r

    return go(t)


def accepts(a, t: Term) -> bool:
    return any(a.is_final(q) for q in run(a, t))


@dataclass
class WitnessResult:
    term: Term | None
    size: int | None
    states_explored: int
    tuples_explored: int
    trace: list = field(default_factory=list)

    def __bool__(self):
        return self.term is not None


def min_witness(
    a,
    max_states: int | None = None,
    deadline: float | None = None,
    keep_trace: bool = False,
) -> WitnessResult:
    """Smallest accepted term, ties broken by ``Term.sort_key``.

    Knuth's generalization of Dijkstra's algorithm: states are settled in
    increasing order of their best term, and every rule tuple is examined
    once, at the moment its last child becomes settled.  ``deadline`` is an
    absolute ``time.monotonic()`` value.
    """
    symbols = sorted(a.alphabet, key=lambda s: (s.arity, s.name))
    leaves = [s for s in symbols if s.arity == 0]
    inner = [s for s in symbols if s.arity > 0]
    heap: list = []
    counter = itertools.count()
    best: dict = {}
    settled: dict = {}
    order: list = []
    trace: list = []
    tuples = 0

    def offer(state, term: Term, rule):
        known = best.get(state)
        if known is None or term.sort_key < known.sort_key:
            best[state] = term
            if max_states is not None and len(best) > max_states:
                raise ResourceExhausted(
                    f"explored more than {max_states} product states",
                    {"states_explored": len(best), "tuples_explored": tuples},
                )
            heapq.heappush(heap, (term.sort_key, next(counter), state, term, rule))

    for s in leaves:
        tuples += 1
        for r in a.step(s, ()):
            offer(r, Term(s), (s, ()))

    while heap:
        key, _, q, term, rule = heapq.heappop(heap)
        if q in settled:
            continue
        settled[q] = term
        if keep_trace:
            trace.append((q, term, rule))
        if a.is_final(q):
            return WitnessResult(term, term.size, len(best), tuples, trace)
        if deadline is not None and time.monotonic() > deadline:
            raise ResourceExhausted("time limit reached", {"states_explored": len(best), "tuples_explored": tuples})
        pos = len(order)
        order.append(q)
        before = order[:pos]
        upto = order  # includes q
        for s in inner:
            k = s.arity
            for j in range(k):
                # q sits at position j and nowhere earlier
                pools = [before] * j + [[q]] + [upto] * (k - j - 1)
                for kids in itertools.product(*pools):
                    tuples += 1
                    res = a.step(s, kids)
                    if not res:
                        continue
                    t = Term(s, [settled[c] for c in kids])
                    for r in res:
                        if r not in settled:
                            offer(r, t, (s, kids))
    return WitnessResult(None, None, len(best), tuples, trace)


def to_dot(trace: list, final_check=None) -> str:
    """Render a min_witness trace: settled states and the rules that built them."""
    ids = {}
    lines = ["digraph witness {", "  rankdir=BT;"]
    for i, (q, term, _rule) in enumerate(trace):
        ids[q] = f"n{i}"
        shape = "doublecircle" if final_check is not None and final_check(q) else "ellipse"
        label = str(term).replace('"', '\\"')
        lines.append(f'  n{i} [label="{label}", shape={shape}];')
    for q, _term, rule in trace:
        s, kids = rule
        for pos, c in enumerate(kids, 1):
            if c in ids:
                lines.append(f'  {ids[c]} -> {ids[q]} [label="{s.name}:{pos}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
