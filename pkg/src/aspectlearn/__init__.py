"""Exact learning of smallest expressions from labeled structures via tree automata."""

__version__ = "0.1.0"

from .learn import Problem, Solution, learn, load_problem, verify  # noqa: E402
from .term import RankedAlphabet, RegularTreeGrammar, Symbol, Term, parse_grammar, parse_term  # noqa: E402

__all__ = [
    "Problem",
    "Solution",
    "learn",
    "load_problem",
    "verify",
    "RankedAlphabet",
    "RegularTreeGrammar",
    "Symbol",
    "Term",
    "parse_grammar",
    "parse_term",
]
