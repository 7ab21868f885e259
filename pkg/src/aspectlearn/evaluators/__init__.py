"""Built-in languages and a registry keyed by language tag."""

from __future__ import annotations

import re
from typing import Iterable

from ..term import Term
from ._common import StructureError
from .cfg import CfgEvaluator, NonProductiveGrammarError, productive_checker, unproductive_checker
from .ctl import CtlEvaluator
from .fo import FoEvaluator
from .ltl import LtlEvaluator
from .modal import ModalEvaluator
from .ratfo import RatFoEvaluator
from .regex import RegexEvaluator

__all__ = [
    "LANGUAGES",
    "StructureError",
    "NonProductiveGrammarError",
    "make_evaluator",
    "reference_eval",
    "infer_params",
    "productive_checker",
    "unproductive_checker",
    "ModalEvaluator",
    "CtlEvaluator",
    "RegexEvaluator",
    "LtlEvaluator",
    "CfgEvaluator",
    "RatFoEvaluator",
    "FoEvaluator",
]

LANGUAGES = ("modal", "ctl", "regex", "ltl", "cfg", "ratfo", "fo")


def _need(params: dict, key: str, language: str):
    if key not in params:
        raise ValueError(f"language {language!r} needs parameter {key!r}")
    return params[key]


def make_evaluator(language: str, params: dict):
    params = params or {}
    if language == "modal":
        return ModalEvaluator(_need(params, "props", language))
    if language == "ctl":
        return CtlEvaluator(_need(params, "props", language))
    if language == "regex":
        return RegexEvaluator(_need(params, "letters", language))
    if language == "ltl":
        return LtlEvaluator(_need(params, "letters", language))
    if language == "cfg":
        return CfgEvaluator(_need(params, "nonterminals", language), _need(params, "terminals", language))
    if language == "ratfo":
        return RatFoEvaluator(_need(params, "k", language))
    if language == "fo":
        return FoEvaluator(_need(params, "relations", language), _need(params, "k", language))
    raise ValueError(f"unknown language {language!r}; expected one of {', '.join(LANGUAGES)}")


def reference_eval(language: str, M, e: Term, params: dict | None = None, evaluator=None) -> bool:
    """Direct semantics of ``e`` on the parsed structure ``M``."""
    ev = evaluator if evaluator is not None else make_evaluator(language, params)
    return ev.reference(M, e)


_IDENT = re.compile(r"[\w][\w'.]*")


def _ordered(items: Iterable[str]) -> list[str]:
    out = []
    for x in items:
        if x not in out:
            out.append(x)
    return out


def infer_params(language: str, structures: list, term_text: str = "") -> dict:
    """Smallest parameter record covering the given structures and term."""
    names = _IDENT.findall(term_text)
    if language in ("modal", "ctl"):
        from .ctl import OPS as CTL_OPS
        from .modal import OPS as MODAL_OPS

        ops = MODAL_OPS if language == "modal" else CTL_OPS
        props = []
        for d in structures:
            for ps in (d.get("labels") or {}).values():
                props.extend(map(str, ps))
        props.extend(n for n in names if n not in ops)
        return {"props": sorted(set(props))}
    if language in ("regex", "ltl"):
        from .ltl import OPS as LTL_OPS
        from .regex import OPS as REGEX_OPS

        ops = REGEX_OPS if language == "regex" else LTL_OPS
        letters = set(n for n in names if n not in ops)
        for d in structures:
            for key in ("word", "u", "v"):
                letters.update(d.get(key, ""))
        return {"letters": sorted(letters) or ["a"]}
    if language == "cfg":
        nts = [n.split("_", 1)[1] for n in names if n.startswith("top_")]
        nts += [n.split("_", 1)[1] for n in names if n.startswith(("lhs_", "rhs_"))]
        terms = set(n.split("_", 1)[1] for n in names if n.startswith("term_"))
        for d in structures:
            terms.update(d.get("word", ""))
        return {"nonterminals": _ordered(nts) or ["S"], "terminals": sorted(terms) or ["a"]}
    if language == "ratfo":
        ks = [len(d.get("values", [])) for d in structures]
        return {"k": max(ks) if ks else 1}
    if language == "fo":
        rels: dict = {}
        for d in structures:
            for name, tuples in (d.get("relations") or {}).items():
                for t in tuples:
                    rels[name] = len(t)
        k = 1
        for n in names:
            head, _, var = n.partition("_")
            for v in ([var] if head in ("forall", "exists") else n.split("_")[1:]):
                if v in ("x", "y", "z"):
                    k = max(k, "xyz".index(v) + 1)
                elif re.fullmatch(r"x\d+", v):
                    k = max(k, int(v[1:]))
            if head not in ("forall", "exists", "and", "or", "not") and "_" in n and head not in rels:
                rels[head] = len(n.split("_")) - 1
        return {"relations": rels, "k": k}
    raise ValueError(f"unknown language {language!r}")
