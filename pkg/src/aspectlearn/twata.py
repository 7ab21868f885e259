"""Two-way alternating tree automata with reachability acceptance.

Transitions are positive Boolean formulas over ``(state, move)`` atoms.  A
move is an int: ``UP`` (-1), ``STAY`` (0) or a 1-based child index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .term import RankedAlphabet, Symbol, Term

__all__ = [
    "UP",
    "STAY",
    "PosBool",
    "Atom",
    "And",
    "Or",
    "Const",
    "TRUE",
    "FALSE",
    "conj",
    "disj",
    "dualize_pbf",
    "minimal_models",
    "satisfied_by",
    "atoms_of",
    "format_pbf",
    "normalize_pbf",
    "Twata",
    "TwataError",
    "TwataNfta",
    "accepts",
    "to_nfta",
    "count_reachable",
]

UP = -1
STAY = 0


def move_name(m: int) -> str:
    if m == UP:
        return "up"
    if m == STAY:
        return "stay"
    return str(m)


class PosBool:
    __slots__ = ()

    def __and__(self, other):
        return conj(self, other)

    def __or__(self, other):
        return disj(self, other)


@dataclass(frozen=True)
class Const(PosBool):
    value: bool

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class Atom(PosBool):
    state: Hashable
    move: int

    def __post_init__(self):
        if not isinstance(self.move, int) or self.move < UP:
            raise ValueError(f"bad move {self.move!r}")

    def __repr__(self):
        return f"Atom({self.state!r}, {move_name(self.move)})"


@dataclass(frozen=True)
class And(PosBool):
    args: tuple

    def __repr__(self):
        return "And(" + ", ".join(map(repr, self.args)) + ")"


@dataclass(frozen=True)
class Or(PosBool):
    args: tuple

    def __repr__(self):
        return "Or(" + ", ".join(map(repr, self.args)) + ")"


def conj(*fs: PosBool) -> PosBool:
    """Conjunction with flattening and constant folding."""
    out = []
    for f in fs:
        if f is TRUE or f == TRUE:
            continue
        if f == FALSE:
            return FALSE
        if isinstance(f, And):
            out.extend(f.args)
        else:
            out.append(f)
    if not out:
        return TRUE
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*fs: PosBool) -> PosBool:
    out = []
    for f in fs:
        if f == FALSE:
            continue
        if f == TRUE:
            return TRUE
        if isinstance(f, Or):
            out.extend(f.args)
        else:
            out.append(f)
    if not out:
        return FALSE
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def dualize_pbf(f: PosBool, flip: Callable[[Hashable], Hashable]) -> PosBool:
    """De Morgan dual: swap the constants, swap And/Or, rename atom states."""
    if isinstance(f, Const):
        return FALSE if f.value else TRUE
    if isinstance(f, Atom):
        return Atom(flip(f.state), f.move)
    if isinstance(f, And):
        return Or(tuple(dualize_pbf(g, flip) for g in f.args))
    if isinstance(f, Or):
        return And(tuple(dualize_pbf(g, flip) for g in f.args))
    raise TypeError(f"not a PosBool: {f!r}")


def atoms_of(f: PosBool) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, (And, Or)):
        for g in f.args:
            yield from atoms_of(g)


def satisfied_by(f: PosBool, assignment: Callable[[Atom], bool] | set) -> bool:
    if isinstance(assignment, (set, frozenset)):
        chosen = assignment
        assignment = lambda a: a in chosen  # noqa: E731
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Atom):
        return bool(assignment(f))
    if isinstance(f, And):
        return all(satisfied_by(g, assignment) for g in f.args)
    if isinstance(f, Or):
        return any(satisfied_by(g, assignment) for g in f.args)
    raise TypeError(f"not a PosBool: {f!r}")


def _minimize(sets: Iterable[frozenset]) -> frozenset:
    items = sorted(set(sets), key=len)
    kept: list[frozenset] = []
    for s in items:
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


def minimal_models(f: PosBool) -> frozenset:
    """Minimal satisfying atom sets (the prime implicants of a monotone formula)."""
    if isinstance(f, Const):
        return frozenset([frozenset()]) if f.value else frozenset()
    if isinstance(f, Atom):
        return frozenset([frozenset([f])])
    if isinstance(f, Or):
        return _minimize(m for g in f.args for m in minimal_models(g))
    if isinstance(f, And):
        acc = frozenset([frozenset()])
        for g in f.args:
            sub = minimal_models(g)
            acc = _minimize(a | b for a in acc for b in sub)
            if not acc:
                break
        return acc
    raise TypeError(f"not a PosBool: {f!r}")


def format_pbf(f: PosBool, show_state: Callable[[Hashable], str] = str) -> str:
    """Prefix notation, e.g. ``or(and(<(1,1),1>,<(1,4),2>),true)``."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"<{show_state(f.state)},{move_name(f.move)}>"
    name = "and" if isinstance(f, And) else "or"
    return f"{name}(" + ",".join(format_pbf(g, show_state) for g in f.args) + ")"


def normalize_pbf(f: PosBool):
    """Canonical form up to associativity, commutativity and idempotence."""
    if isinstance(f, (Const, Atom)):
        return f
    kind = And if isinstance(f, And) else Or
    parts = set()
    for g in f.args:
        n = normalize_pbf(g)
        if isinstance(n, tuple) and n[0] is kind:
            parts.update(n[1])
        else:
            parts.add(n)
    if len(parts) == 1:
        return next(iter(parts))
    return (kind, frozenset(parts))


class TwataError(ValueError):
    pass


class Twata:
    """A 2ATA ``(states, alphabet, initial, delta, final)``.

    ``delta`` maps ``(state, symbol name)`` to a PosBool and must be total.
    """

    def __init__(
        self,
        states: Iterable[Hashable],
        alphabet: RankedAlphabet,
        initial: Hashable,
        delta: Mapping[tuple, PosBool],
        final: Iterable[Hashable] = (),
        validate: bool = True,
    ):
        self.states = tuple(states)
        self.alphabet = alphabet
        self.initial = initial
        self.delta = dict(delta)
        self.final = frozenset(final)
        if validate:
            problems = self.violations()
            if problems:
                raise TwataError("; ".join(problems[:5]) + (" ..." if len(problems) > 5 else ""))

    def violations(self) -> list[str]:
        out = []
        declared = set(self.states)
        if len(declared) != len(self.states):
            out.append("duplicate states")
        if self.initial not in declared:
            out.append(f"initial state {self.initial!r} not declared")
        for q in self.final - declared:
            out.append(f"final state {q!r} not declared")
        for q in self.states:
            for s in self.alphabet:
                f = self.delta.get((q, s.name))
                if f is None:
                    out.append(f"delta undefined on ({q!r}, {s.name})")
                    continue
                for a in atoms_of(f):
                    if a.state not in declared:
                        out.append(f"delta({q!r}, {s.name}) uses undeclared state {a.state!r}")
                    if a.move > s.arity:
                        out.append(f"delta({q!r}, {s.name}) moves to child {a.move} of an arity-{s.arity} symbol")
        return out

    def with_initial(self, q: Hashable) -> "Twata":
        t = Twata.__new__(Twata)
        t.states, t.alphabet, t.delta, t.final = self.states, self.alphabet, self.delta, self.final
        if q not in set(self.states):
            raise TwataError(f"initial state {q!r} not declared")
        t.initial = q
        return t

    def transition(self, q: Hashable, symbol: Symbol | str) -> PosBool:
        name = symbol.name if isinstance(symbol, Symbol) else symbol
        return self.delta[(q, name)]

    def reachable_states(self, symbols: Iterable[Symbol] | None = None) -> list:
        """States reachable from the initial one through atoms of delta."""
        names = [s.name for s in (symbols if symbols is not None else self.alphabet)]
        seen = {self.initial}
        order = [self.initial]
        i = 0
        while i < len(order):
            q = order[i]
            i += 1
            for n in names:
                for a in atoms_of(self.delta[(q, n)]):
                    if a.state not in seen:
                        seen.add(a.state)
                        order.append(a.state)
        return order

    def dump(self, show_state: Callable[[Hashable], str] = str) -> str:
        """One line per (state, symbol): ``state symbol formula``."""
        lines = []
        for q in self.states:
            for s in self.alphabet:
                lines.append(f"{show_state(q)} {s.name} {format_pbf(self.delta[(q, s.name)], show_state)}")
        return "\n".join(lines)

    def __repr__(self):
        return f"Twata(|Q|={len(self.states)}, initial={self.initial!r}, |alphabet|={len(self.alphabet)})"


def _check_term(a: Twata, t: Term):
    for node in t.subterms():
        if node.symbol not in a.alphabet:
            raise TwataError(f"symbol {node.symbol.name}/{node.symbol.arity} not in the automaton alphabet")


def accepts(a: Twata, t: Term) -> bool:
    """Solve the reachability game on the fixed tree ``t``.

    Positions are (node, state) pairs.  Only positions reachable from
    (root, initial) are built; the winning region is then computed as a
    least fixpoint with a dependency worklist.
    """
    _check_term(a, t)
    # nodes are indexed in pre-order; parent[-] and children ids
    nodes: list[Term] = []
    parent: list[int] = []
    kids: list[tuple[int, ...]] = []

    def build(node: Term, par: int) -> int:
        idx = len(nodes)
        nodes.append(node)
        parent.append(par)
        kids.append(())
        kids[idx] = tuple(build(c, idx) for c in node.children)
        return idx

    build(t, -1)

    def target(v: int, move: int) -> int:
        if move == STAY:
            return v
        if move == UP:
            return parent[v]
        return kids[v][move - 1]

    start = (0, a.initial)
    formulas: dict[tuple, PosBool] = {}
    dependents: dict[tuple, list] = {}
    stack = [start]
    formulas[start] = None
    while stack:
        pos = stack.pop()
        v, q = pos
        f = TRUE if q in a.final else a.delta[(q, nodes[v].symbol.name)]
        formulas[pos] = f
        for at in atoms_of(f):
            u = target(v, at.move)
            if u < 0:
                continue
            nxt = (u, at.state)
            dependents.setdefault(nxt, []).append(pos)
            if nxt not in formulas:
                formulas[nxt] = None
                stack.append(nxt)

    win: set = set()

    def holds(pos, f) -> bool:
        v = pos[0]

        def atom_val(at: Atom) -> bool:
            u = target(v, at.move)
            return u >= 0 and (u, at.state) in win

        return satisfied_by(f, atom_val)

    work = list(formulas)
    queued = set(work)
    while work:
        pos = work.pop()
        queued.discard(pos)
        if pos in win:
            continue
        if holds(pos, formulas[pos]):
            win.add(pos)
            if pos == start:
                return True
            for d in dependents.get(pos, ()):
                if d not in win and d not in queued:
                    queued.add(d)
                    work.append(d)
    return start in win


# -- conversion to a bottom-up automaton ---------------------------------------

# compiled formula nodes
_T, _F, _UPA, _STAYA, _CHILDA, _AND, _OR = range(7)
_UNIT = frozenset([0])
_ZERO = frozenset()


def _minimal(sets) -> frozenset:
    items = sorted(set(sets), key=lambda m: bin(m).count("1"))
    kept: list[int] = []
    for s in items:
        if not any(k & s == k for k in kept):
            kept.append(s)
    return frozenset(kept)


def _otimes(x: frozenset, y: frozenset) -> frozenset:
    if not x or not y:
        return _ZERO
    if x == _UNIT:
        return y
    if y == _UNIT:
        return x
    return _minimal(a | b for a in x for b in y)


def _oplus(x: frozenset, y: frozenset) -> frozenset:
    if not x:
        return y
    if not y:
        return x
    return _minimal(x | y)


class TwataNfta:
    """Lazily materialized bottom-up NFTA equivalent to a 2ATA.

    A state is an int naming a *summary*: for every relevant 2ATA state q an
    antichain of minimal exit sets (bitmasks over the states that occur in
    Up atoms).  The automaton is deterministic and total.
    """

    def __init__(self, a: Twata, symbols: Iterable[Symbol] | None = None):
        self.twata = a
        self.alphabet = a.alphabet
        relevant = a.reachable_states(symbols)
        self.relevant = relevant
        index = {q: i for i, q in enumerate(relevant)}
        self._index = index
        up_states = sorted(
            {index[at.state] for q in relevant for s in a.alphabet for at in atoms_of(a.delta[(q, s.name)]) if at.move == UP}
        )
        self.up_states = [relevant[i] for i in up_states]
        self._bit = {i: 1 << b for b, i in enumerate(up_states)}
        self._bit_owner = {1 << b: i for b, i in enumerate(up_states)}
        self._final_ids = frozenset(index[q] for q in a.final if q in index)
        self._init = index[a.initial]
        self._compiled: dict[str, list] = {}
        self._summaries: list[tuple] = []
        self._summary_ids: dict[tuple, int] = {}
        self._cache: dict[tuple, int] = {}
        self.transitions_explored = 0

    # formulas over int ids
    def _compile(self, f: PosBool):
        if isinstance(f, Const):
            return (_T,) if f.value else (_F,)
        if isinstance(f, Atom):
            i = self._index[f.state]
            if f.move == UP:
                return (_UPA, self._bit[i])
            if f.move == STAY:
                return (_STAYA, i)
            return (_CHILDA, f.move - 1, i)
        kind = _AND if isinstance(f, And) else _OR
        return (kind, tuple(self._compile(g) for g in f.args))

    def _compiled_for(self, name: str) -> list:
        c = self._compiled.get(name)
        if c is None:
            c = [self._compile(self.twata.delta[(q, name)]) for q in self.relevant]
            self._compiled[name] = c
        return c

    def _bits(self, mask: int) -> Iterator[int]:
        while mask:
            low = mask & -mask
            yield self._bit_owner[low]
            mask ^= low

    def _eval(self, node, derived: list, kids: list) -> frozenset:
        tag = node[0]
        if tag == _T:
            return _UNIT
        if tag == _F:
            return _ZERO
        if tag == _UPA:
            return frozenset([node[1]])
        if tag == _STAYA:
            return derived[node[1]]
        if tag == _CHILDA:
            child = kids[node[1]][node[2]]
            out = _ZERO
            for exit_mask in child:
                acc = _UNIT
                for p in self._bits(exit_mask):
                    acc = _otimes(acc, derived[p])
                    if not acc:
                        break
                out = _oplus(out, acc)
            return out
        if tag == _AND:
            acc = _UNIT
            for g in node[1]:
                acc = _otimes(acc, self._eval(g, derived, kids))
                if not acc:
                    break
            return acc
        out = _ZERO
        for g in node[1]:
            out = _oplus(out, self._eval(g, derived, kids))
        return out

    def _deps(self, node, kids, out: set):
        tag = node[0]
        if tag == _STAYA:
            out.add(node[1])
        elif tag == _CHILDA:
            for m in kids[node[1]][node[2]]:
                out.update(self._bits(m))
        elif tag in (_AND, _OR):
            for g in node[1]:
                self._deps(g, kids, out)

    def _summarize(self, name: str, child_ids: tuple) -> tuple:
        compiled = self._compiled_for(name)
        kids = [self._summaries[c] for c in child_ids]
        n = len(self.relevant)
        derived = [_ZERO] * n
        readers: list[list[int]] = [[] for _ in range(n)]
        for q in range(n):
            deps: set = set()
            self._deps(compiled[q], kids, deps)
            for p in deps:
                readers[p].append(q)
        work = list(range(n - 1, -1, -1))
        queued = [True] * n
        while work:
            q = work.pop()
            queued[q] = False
            val = _UNIT if q in self._final_ids else self._eval(compiled[q], derived, kids)
            new = _oplus(derived[q], val)
            if new != derived[q]:
                derived[q] = new
                for r in readers[q]:
                    if not queued[r]:
                        queued[r] = True
                        work.append(r)
        return tuple(derived)

    def _intern(self, summary: tuple) -> int:
        i = self._summary_ids.get(summary)
        if i is None:
            i = len(self._summaries)
            self._summaries.append(summary)
            self._summary_ids[summary] = i
        return i

    def step(self, symbol: Symbol, children: tuple) -> tuple:
        key = (symbol.name, children)
        r = self._cache.get(key)
        if r is None:
            self.transitions_explored += 1
            r = self._intern(self._summarize(symbol.name, children))
            self._cache[key] = r
        return (r,)

    def is_final(self, state: int) -> bool:
        return 0 in self._summaries[state][self._init]

    def summary(self, state: int) -> dict:
        """Readable form: 2ATA state -> list of exit sets."""
        out = {}
        for i, anti in enumerate(self._summaries[state]):
            if anti:
                out[self.relevant[i]] = sorted(
                    (sorted(map(repr, (self.relevant[p] for p in self._bits(m)))) for m in anti)
                )
        return out

    def antichain(self, state: int, q) -> frozenset:
        return self._summaries[state][self._index[q]]

    def run(self, t: Term) -> int:
        memo: dict[Term, int] = {}

        def go(node: Term) -> int:
            r = memo.get(node)
            if r is None:
                r = self.step(node.symbol, tuple(go(c) for c in node.children))[0]
                memo[node] = r
            return r

        _check_term(self.twata, t)
        return go(t)

    def accepts(self, t: Term) -> bool:
        return self.is_final(self.run(t))

    @property
    def num_states(self) -> int:
        return len(self._summaries)


def to_nfta(a: Twata, symbols: Iterable[Symbol] | None = None) -> TwataNfta:
    return TwataNfta(a, symbols)


def count_reachable(a: Twata, max_summaries: int = 100_000) -> dict:
    """Explore every summary reachable bottom-up over the full alphabet."""
    n = to_nfta(a)
    symbols = sorted(a.alphabet, key=lambda s: (s.arity, s.name))
    known: list[int] = []
    seen: set[int] = set()
    frontier = True
    while frontier:
        frontier = False
        snapshot = list(known)
        for s in symbols:
            for kids in itertools.product(snapshot, repeat=s.arity):
                (r,) = n.step(s, kids)
                if r not in seen:
                    seen.add(r)
                    known.append(r)
                    frontier = True
                    if len(known) > max_summaries:
                        raise RuntimeError("summary exploration exceeded its cap")
    return {
        "twata_states": len(a.states),
        "relevant_states": len(n.relevant),
        "summaries": len(known),
        "transitions": n.transitions_explored,
    }
