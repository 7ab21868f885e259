"""Evaluator framework: aspects, transition builders and compilation to 2ATA.

An evaluator describes, for one fixed structure M, how to check a term by
walking its syntax tree.  Each transition is written for a plain aspect;
the transition of the dual aspect is derived mechanically.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable

from .term import RankedAlphabet, Symbol, Term
from .twata import (
    FALSE,
    TRUE,
    UP,
    STAY,
    Atom,
    PosBool,
    Twata,
    atoms_of,
    conj,
    disj,
    dualize_pbf,
)

__all__ = [
    "Aspect",
    "Evaluator",
    "EvaluatorError",
    "call",
    "call_dual",
    "all_of",
    "any_of",
    "boolean",
    "transition_pbf",
    "build_twata",
    "check_well_formed",
    "Violation",
    "UP",
    "STAY",
]


class EvaluatorError(ValueError):
    pass


@dataclass(frozen=True)
class Aspect:
    payload: Any
    dual: bool = False

    def flip(self) -> "Aspect":
        return Aspect(self.payload, not self.dual)

    def __str__(self):
        p = _show(self.payload)
        return f"dual({p})" if self.dual else p

    def sort_key(self):
        return (self.dual, repr(self.payload))


def _show(p) -> str:
    # subclasses such as preorders bring their own __str__
    if type(p) is tuple:
        return "(" + ",".join(_show(x) for x in p) + ")"
    return str(p)


def call(payload, move: int) -> Atom:
    """Recursive call on a plain aspect; ``move`` is UP, STAY or a child index."""
    return Atom(Aspect(payload), move)


def call_dual(payload, move: int) -> Atom:
    return Atom(Aspect(payload, True), move)


def all_of(items: Iterable, body: Callable[[Any], PosBool]) -> PosBool:
    return conj(*(body(x) for x in items))


def any_of(items: Iterable, body: Callable[[Any], PosBool]) -> PosBool:
    return disj(*(body(x) for x in items))


def boolean(b: bool) -> PosBool:
    return TRUE if b else FALSE


class Evaluator(ABC):
    """Per-language semantics over aspects.

    Subclasses fix ``language`` and ``alphabet`` at construction and implement
    the abstract methods.  ``transition`` receives a *plain* payload and
    returns a PosBool whose atoms carry Aspect states (see ``call``).
    """

    language: str = ""
    alphabet: RankedAlphabet

    @abstractmethod
    def enumerate_aspects(self, M) -> list:
        """Plain payloads of Asp(M) in a fixed order."""

    @abstractmethod
    def initial_payload(self, M):
        ...

    @abstractmethod
    def transition(self, M, payload, symbol: Symbol) -> PosBool:
        ...

    @abstractmethod
    def reference(self, M, term: Term) -> bool:
        """Direct semantics, independent of all automaton code."""

    @abstractmethod
    def parse_structure(self, data) -> Any:
        ...

    def structure_to_json(self, M) -> Any:
        raise NotImplementedError

    def initial(self, M, positive: bool = True) -> Aspect:
        return Aspect(self.initial_payload(M), not positive)

    def structure_size(self, M) -> int:
        return len(self.enumerate_aspects(M))

    def extra_automata(self) -> list:
        """Additional NFTA factors the learner must intersect with."""
        return []

    def params(self) -> dict:
        return {}

    def __repr__(self):
        return f"{type(self).__name__}({self.params()})"


def transition_pbf(ev: Evaluator, M, sigma: Aspect, symbol: Symbol, _known: set | None = None) -> PosBool:
    if _known is not None and sigma.payload not in _known:
        raise EvaluatorError(f"aspect {sigma} is not enumerated for this structure")
    f = ev.transition(M, sigma.payload, symbol)
    if sigma.dual:
        return dualize_pbf(f, Aspect.flip)
    return f


def build_twata(ev: Evaluator, M, positive: bool = True, check: bool = True) -> Twata:
    payloads = ev.enumerate_aspects(M)
    if not payloads:
        raise EvaluatorError("structure has no aspects")
    delta = {}
    for p in payloads:
        for s in ev.alphabet:
            plain = ev.transition(M, p, s)
            delta[(Aspect(p), s.name)] = plain
            delta[(Aspect(p, True), s.name)] = dualize_pbf(plain, Aspect.flip)
    states = [Aspect(p) for p in payloads] + [Aspect(p, True) for p in payloads]
    initial = ev.initial(M, positive)
    if check:
        problems = _violations(ev, payloads, delta, initial)
        if problems:
            raise EvaluatorError("ill-formed evaluator: " + "; ".join(str(v) for v in problems[:5]))
    return Twata(states, ev.alphabet, initial, delta, final=(), validate=False)


@dataclass(frozen=True)
class Violation:
    kind: str  # "totality", "closure" or "arity"
    aspect: Aspect
    symbol: str
    atom: Atom | None = None

    def __str__(self):
        extra = f" atom {self.atom.state}@{self.atom.move}" if self.atom is not None else ""
        return f"{self.kind}: ({self.aspect}, {self.symbol}){extra}"


def _violations(ev, payloads, delta, initial) -> list[Violation]:
    known = set(payloads)
    out = []
    if initial.payload not in known:
        out.append(Violation("closure", initial, "<initial>"))
    # dual transitions keep payloads and moves, so plain ones are enough
    for p in payloads:
        for s in ev.alphabet:
            sigma = Aspect(p)
            f = delta.get((sigma, s.name))
            if not isinstance(f, PosBool):
                out.append(Violation("totality", sigma, s.name))
                continue
            for a in atoms_of(f):
                st = a.state
                if not isinstance(st, Aspect) or st.payload not in known:
                    out.append(Violation("closure", sigma, s.name, a))
                if a.move > s.arity:
                    out.append(Violation("arity", sigma, s.name, a))
    return out


def check_well_formed(ev: Evaluator, M) -> list[Violation]:
    payloads = ev.enumerate_aspects(M)
    delta = {}
    out = []
    for p in payloads:
        for s in ev.alphabet:
            try:
                f = ev.transition(M, p, s)
            except Exception as exc:  # a crash is a totality failure
                out.append(Violation("totality", Aspect(p), f"{s.name} ({type(exc).__name__}: {exc})"))
                delta[(Aspect(p), s.name)] = FALSE  # already reported
                continue
            if f is None:
                continue
            delta[(Aspect(p), s.name)] = f
    return out + _violations(ev, payloads, delta, ev.initial(M, True))
