"""Ranked alphabets, hash-consed syntax trees and regular tree grammars."""

from __future__ import annotations

import itertools
import re
import weakref
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Symbol",
    "RankedAlphabet",
    "Term",
    "RegularTreeGrammar",
    "TermSyntaxError",
    "GrammarError",
    "parse_term",
    "print_term",
    "parse_grammar",
    "generate_upto",
    "count_upto",
]

_IDENT = re.compile(r"[\w][\w'.]*")


class TermSyntaxError(ValueError):
    """Raised for malformed term text; ``offset`` is a UTF-8 byte offset."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"{message} (at byte offset {self.offset})")


class GrammarError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class Symbol:
    name: str
    arity: int = 0

    def __post_init__(self):
        if not self.name:
            raise ValueError("symbol name must be nonempty")
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name!r}")

    def __str__(self):
        return self.name


class RankedAlphabet:
    """A finite set of symbols with unique names."""

    def __init__(self, symbols: Iterable[Symbol]):
        by_name: dict[str, Symbol] = {}
        for s in symbols:
            old = by_name.get(s.name)
            if old is not None and old != s:
                raise ValueError(f"symbol {s.name!r} declared with arities {old.arity} and {s.arity}")
            by_name[s.name] = s
        if not any(s.arity == 0 for s in by_name.values()):
            raise ValueError("alphabet needs at least one symbol of arity 0")
        self._by_name = dict(sorted(by_name.items()))

    @classmethod
    def of(cls, spec: Mapping[str, int]) -> "RankedAlphabet":
        return cls(Symbol(n, a) for n, a in spec.items())

    def __getitem__(self, name: str) -> Symbol:
        return self._by_name[name]

    def get(self, name: str) -> Symbol | None:
        return self._by_name.get(name)

    def __contains__(self, item) -> bool:
        if isinstance(item, Symbol):
            return self._by_name.get(item.name) == item
        return item in self._by_name

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._by_name.values())

    def __len__(self):
        return len(self._by_name)

    def __eq__(self, other):
        return isinstance(other, RankedAlphabet) and self._by_name == other._by_name

    def __hash__(self):
        return hash(tuple(self._by_name.values()))

    def names(self) -> list[str]:
        return list(self._by_name)

    def restrict(self, names: Iterable[str]) -> "RankedAlphabet":
        return RankedAlphabet(self._by_name[n] for n in names)

    def __repr__(self):
        inner = ", ".join(f"{s.name}/{s.arity}" for s in self)
        return f"RankedAlphabet({inner})"


class Term:
    """Immutable syntax tree node.

    Terms are hash-consed: building the same tree twice returns the same
    object, so equality and hashing are by identity.
    """

    __slots__ = ("symbol", "children", "size", "_key", "__weakref__")
    _table: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()

    def __new__(cls, symbol: Symbol, children: Iterable["Term"] = ()):
        children = tuple(children)
        if len(children) != symbol.arity:
            raise ValueError(f"{symbol.name} expects {symbol.arity} children, got {len(children)}")
        k = (symbol, children)
        t = cls._table.get(k)
        if t is not None:
            return t
        t = object.__new__(cls)
        object.__setattr__(t, "symbol", symbol)
        object.__setattr__(t, "children", children)
        object.__setattr__(t, "size", 1 + sum(c.size for c in children))
        object.__setattr__(t, "_key", None)
        cls._table[k] = t
        return t

    def __setattr__(self, name, value):
        raise AttributeError("Term is immutable")

    def __reduce__(self):
        return (Term, (self.symbol, self.children))

    @property
    def sort_key(self) -> tuple:
        """Total order: size, then symbol name, then children by the same order."""
        k = self._key
        if k is None:
            k = (self.size, self.symbol.name, tuple(c.sort_key for c in self.children))
            object.__setattr__(self, "_key", k)
        return k

    def __lt__(self, other: "Term"):
        return self.sort_key < other.sort_key

    def __le__(self, other: "Term"):
        return self.sort_key <= other.sort_key

    def subterms(self) -> Iterator["Term"]:
        """Pre-order traversal."""
        stack = [self]
        while stack:
            t = stack.pop()
            yield t
            stack.extend(reversed(t.children))

    def symbols(self) -> set[Symbol]:
        return {t.symbol for t in self.subterms()}

    def __str__(self):
        return print_term(self)

    def __repr__(self):
        return f"Term({print_term(self)})"


def leaf(name: str) -> Term:
    return Term(Symbol(name, 0))


def print_term(t: Term) -> str:
    if not t.children:
        return t.symbol.name
    return f"{t.symbol.name}({','.join(print_term(c) for c in t.children)})"


class _Parser:
    def __init__(self, text: str, resolve):
        self.text = text
        self.pos = 0
        self.resolve = resolve

    def error(self, msg, pos=None):
        return TermSyntaxError(msg, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def term(self) -> Term:
        self.skip_ws()
        start = self.pos
        m = _IDENT.match(self.text, self.pos)
        if not m:
            found = self.peek() or "end of input"
            raise self.error(f"expected a symbol name, found {found!r}")
        name = m.group()
        self.pos = m.end()
        children = []
        if self.peek() == "(":
            self.pos += 1
            children.append(self.term())
            while self.peek() == ",":
                self.pos += 1
                children.append(self.term())
            self.expect(")")
        symbol = self.resolve(name, start)
        if symbol is None:
            raise self.error(f"unknown symbol {name!r}", start)
        if symbol.arity != len(children):
            raise self.error(
                f"arity mismatch: {name} has arity {symbol.arity} but was given {len(children)} argument(s)",
                start,
            )
        return Term(symbol, children)

    def parse(self) -> Term:
        t = self.term()
        if self.peek():
            raise self.error(f"trailing input {self.text[self.pos:]!r}")
        return t


def parse_term(text: str, alphabet: RankedAlphabet) -> Term:
    """Parse prefix notation ``name(child,...)``; leaves may omit parentheses."""
    return _Parser(text, lambda name, _pos: alphabet.get(name)).parse()


@dataclass(frozen=True)
class RegularTreeGrammar:
    """Productions map a nonterminal to a term over the alphabet in which
    nonterminals occur as extra arity-0 leaves."""

    nonterminals: tuple[str, ...]
    alphabet: RankedAlphabet
    start: str
    productions: tuple[tuple[str, Term], ...]
    _nt_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nts = frozenset(self.nonterminals)
        object.__setattr__(self, "_nt_set", nts)
        if self.start not in nts:
            raise GrammarError(f"start nonterminal {self.start!r} is not declared")
        if not self.productions:
            raise GrammarError("grammar has no productions")
        for nt in nts:
            if nt in self.alphabet:
                raise GrammarError(f"nonterminal {nt!r} clashes with an alphabet symbol")
        for lhs, rhs in self.productions:
            if lhs not in nts:
                raise GrammarError(f"undeclared nonterminal {lhs!r}")
            for node in rhs.subterms():
                s = node.symbol
                if s.name in nts:
                    if s.arity:
                        raise GrammarError(f"nonterminal {s.name!r} used with arguments")
                elif s not in self.alphabet:
                    known = self.alphabet.get(s.name)
                    if known is None:
                        raise GrammarError(f"undeclared nonterminal or unknown symbol {s.name!r}")
                    raise GrammarError(f"arity violation: {s.name} has arity {known.arity}")

    def is_nonterminal(self, node: Term) -> bool:
        return not node.children and node.symbol.name in self._nt_set

    @classmethod
    def universal(cls, alphabet: RankedAlphabet, only: Iterable[str] | None = None, nonterminal: str = "F") -> "RegularTreeGrammar":
        """Grammar generating every term over ``alphabet``, or over the
        symbols named in ``only`` while keeping the full alphabet."""
        hole = Term(Symbol(nonterminal, 0))
        chosen = list(alphabet) if only is None else [alphabet[n] for n in only]
        prods = tuple((nonterminal, Term(s, [hole] * s.arity)) for s in chosen)
        return cls((nonterminal,), alphabet, nonterminal, prods)

    def to_text(self) -> str:
        return "\n".join(f"{lhs} -> {print_term(rhs)}" for lhs, rhs in self.productions)

    def __str__(self):
        return self.to_text()


def parse_grammar(text: str, alphabet: RankedAlphabet) -> RegularTreeGrammar:
    """Parse line-oriented productions ``NT -> rhs``.

    ``#`` starts a comment.  Alternatives may also be separated by ``|`` or
    ``;``.  The first left-hand side is the start nonterminal.
    """
    raw: list[tuple[int, str, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        for chunk in line.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "->" not in chunk:
                raise GrammarError(f"expected 'NT -> rhs', got {chunk!r}", lineno)
            lhs, rhs = (p.strip() for p in chunk.split("->", 1))
            if not _IDENT.fullmatch(lhs):
                raise GrammarError(f"bad nonterminal name {lhs!r}", lineno)
            for alt in rhs.split("|"):
                raw.append((lineno, lhs, alt.strip()))
    if not raw:
        raise GrammarError("grammar has no productions")

    nts: list[str] = []
    for _, lhs, _ in raw:
        if lhs not in nts:
            nts.append(lhs)
    for nt in nts:
        if nt in alphabet:
            raise GrammarError(f"nonterminal {nt!r} clashes with an alphabet symbol")
    nt_symbols = {nt: Symbol(nt, 0) for nt in nts}

    def resolve(name, _pos):
        return nt_symbols.get(name) or alphabet.get(name)

    productions = []
    for lineno, lhs, rhs in raw:
        try:
            productions.append((lhs, _Parser(rhs, resolve).parse()))
        except TermSyntaxError as exc:
            msg = str(exc)
            if "unknown symbol" in msg:
                msg = msg.replace("unknown symbol", "undeclared nonterminal or unknown symbol")
            raise GrammarError(msg, lineno) from None
    return RegularTreeGrammar(tuple(nts), alphabet, nts[0], tuple(productions))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def generate_upto(grammar: RegularTreeGrammar, max_size: int) -> set[Term]:
    """All terms of L(grammar) with at most ``max_size`` nodes."""
    by_size = _generate_table(grammar, max_size)
    out: set[Term] = set()
    for s in range(1, max_size + 1):
        out.update(by_size[grammar.start][s])
    return out


def count_upto(grammar: RegularTreeGrammar, max_size: int) -> int:
    return len(generate_upto(grammar, max_size))


def _generate_table(grammar: RegularTreeGrammar, max_size: int) -> dict[str, list[set[Term]]]:
    if max_size < 1:
        raise ValueError("max_size must be positive")
    table: dict[str, list[set[Term]]] = {nt: [set() for _ in range(max_size + 1)] for nt in grammar.nonterminals}
    units = [(lhs, rhs.symbol.name) for lhs, rhs in grammar.productions if grammar.is_nonterminal(rhs)]
    structured = [(lhs, rhs) for lhs, rhs in grammar.productions if not grammar.is_nonterminal(rhs)]

    def gen(p: Term, size: int) -> list[Term]:
        # holes inside a symbol node always get strictly smaller sizes
        if grammar.is_nonterminal(p):
            return list(table[p.symbol.name][size]) if 1 <= size <= max_size else []
        if p.symbol.arity == 0:
            return [p] if size == 1 else []
        out = []
        for split in _compositions(size - 1, p.symbol.arity):
            options = [gen(c, s) for c, s in zip(p.children, split)]
            if all(options):
                out.extend(Term(p.symbol, combo) for combo in itertools.product(*options))
        return out

    for size in range(1, max_size + 1):
        for lhs, rhs in structured:
            table[lhs][size].update(gen(rhs, size))
        changed = True
        while changed:
            changed = False
            for lhs, target in units:
                before = len(table[lhs][size])
                table[lhs][size] |= table[target][size]
                changed |= len(table[lhs][size]) != before
    return table
