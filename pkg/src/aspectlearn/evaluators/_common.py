from __future__ import annotations

import re
from typing import Iterable

from ..term import RankedAlphabet, Symbol


class StructureError(ValueError):
    """Malformed structure record."""


_NAME = re.compile(r"[\w][\w'.]*")


def check_names(kind: str, names: Iterable[str], reserved: Iterable[str]) -> list[str]:
    names = list(names)
    reserved = set(reserved)
    seen = set()
    for n in names:
        if not isinstance(n, str) or not _NAME.fullmatch(n):
            raise ValueError(f"invalid {kind} name {n!r}")
        if n in reserved:
            raise ValueError(f"{kind} {n!r} clashes with an operator symbol")
        if n in seen:
            raise ValueError(f"duplicate {kind} {n!r}")
        seen.add(n)
    return names


def make_alphabet(ops: dict[str, int], leaves: Iterable[str]) -> RankedAlphabet:
    symbols = [Symbol(n, a) for n, a in ops.items()] + [Symbol(n, 0) for n in leaves]
    return RankedAlphabet(symbols)


def require(data, key: str, kind=None):
    if not isinstance(data, dict):
        raise StructureError(f"expected a JSON object, got {type(data).__name__}")
    if key not in data:
        raise StructureError(f"missing field {key!r}")
    v = data[key]
    if kind is not None and not isinstance(v, kind):
        raise StructureError(f"field {key!r} has the wrong type ({type(v).__name__})")
    return v


def single_characters(letters):
    for x in letters:
        if len(x) != 1:
            raise ValueError(f"letter {x!r} must be a single character")
