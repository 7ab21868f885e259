import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aspectlearn.evaluators import make_evaluator
from aspectlearn.nfta import accepts, grammar_to_nfta, universal_nfta
from aspectlearn.term import (
    GrammarError,
    RankedAlphabet,
    RegularTreeGrammar,
    Symbol,
    Term,
    TermSyntaxError,
    count_upto,
    generate_upto,
    parse_grammar,
    parse_term,
    print_term,
)

MODAL = make_evaluator("modal", {"props": ["a", "c", "v"]}).alphabet
SMALL = RankedAlphabet.of({"f": 1, "g": 2, "a": 0, "b": 0})


def terms_over(alphabet, max_leaves=12):
    leaves = [Term(s) for s in alphabet if s.arity == 0]
    inner = [s for s in alphabet if s.arity > 0]

    def extend(children):
        return st.one_of(*[st.tuples(*([children] * s.arity)).map(lambda kids, s=s: Term(s, kids)) for s in inner])

    return st.recursive(st.sampled_from(leaves), extend, max_leaves=max_leaves)


def test_parse_fig1_formula():
    t = parse_term("box(dia(or(a,v)))", MODAL)
    assert t.size == 5
    assert print_term(t) == "box(dia(or(a,v)))"


def test_parse_leaf():
    t = parse_term("a", MODAL)
    assert t.children == () and t.size == 1


def test_arity_mismatch_is_rejected():
    with pytest.raises(TermSyntaxError):
        parse_term("and(a)", MODAL)


def test_syntax_error_reports_offset():
    with pytest.raises(TermSyntaxError) as info:
        parse_term("box(a,", MODAL)
    assert info.value.offset is not None


def test_unknown_symbol():
    with pytest.raises(TermSyntaxError):
        parse_term("diamond(a)", MODAL)


def test_whitespace_is_ignored():
    assert parse_term(" or( a , v ) ", MODAL) is parse_term("or(a,v)", MODAL)


def test_terms_are_interned():
    a = Symbol("a")
    f = Symbol("f", 1)
    assert Term(f, [Term(a)]) is Term(f, [Term(a)])


def test_term_is_immutable():
    with pytest.raises(AttributeError):
        Term(Symbol("a")).size = 3


def test_alphabet_rejects_conflicting_arity():
    with pytest.raises(ValueError):
        RankedAlphabet([Symbol("f", 1), Symbol("f", 2), Symbol("a")])


def test_alphabet_needs_a_leaf():
    with pytest.raises(ValueError):
        RankedAlphabet([Symbol("f", 1)])


@given(terms_over(SMALL))
def test_print_parse_round_trip(t):
    assert parse_term(print_term(t), SMALL) is t


@given(terms_over(SMALL), terms_over(SMALL))
def test_sort_key_orders_by_size_first(s, t):
    if s.size < t.size:
        assert s.sort_key < t.sort_key
    assert (s.sort_key == t.sort_key) == (s is t)


def test_parse_simple_grammar():
    g = parse_grammar("F -> and(F,F)\nF -> a", MODAL)
    assert g.nonterminals == ("F",)
    assert g.start == "F"
    assert len(g.productions) == 2


def test_fig1_grammar_generates_fig1_formula():
    g = parse_grammar("F -> box(F)\nF -> a\nF -> v\nF -> or(F,F)\nF -> dia(F)", MODAL)
    assert parse_term("box(dia(or(a,v)))", MODAL) in generate_upto(g, 5)


def test_undeclared_nonterminal():
    with pytest.raises(GrammarError):
        parse_grammar("F -> and(G,G)", MODAL)


def test_grammar_arity_violation_names_line():
    with pytest.raises(GrammarError) as info:
        parse_grammar("F -> a\nF -> box(F, F)", MODAL)
    assert "line 2" in str(info.value)


def test_grammar_comments_and_separators():
    g = parse_grammar("# modal fragment\nF -> box(F) | a ; F -> v  # trailing", MODAL)
    assert len(g.productions) == 3


def test_grammar_with_unit_rules():
    g = parse_grammar("F -> G | box(F)\nG -> a", MODAL)
    assert {print_term(t) for t in generate_upto(g, 2)} == {"a", "box(a)"}


def test_generate_single_leaf():
    g = parse_grammar("F -> a", MODAL)
    assert {print_term(t) for t in generate_upto(g, 3)} == {"a"}


def test_generate_unary_chain():
    g = parse_grammar("F -> f(F); F -> a", SMALL)
    assert {print_term(t) for t in generate_upto(g, 3)} == {"a", "f(a)", "f(f(a))"}


def test_generate_fig1_grammar_to_size_two():
    g = parse_grammar("F -> box(F) | a | v | or(F,F) | dia(F)", MODAL)
    got = {print_term(t) for t in generate_upto(g, 2)}
    assert got == {"a", "v", "box(a)", "box(v)", "dia(a)", "dia(v)"}


def _all_terms(alphabet, max_size):
    by_size = {1: [Term(s) for s in alphabet if s.arity == 0]}
    for n in range(2, max_size + 1):
        out = []
        for s in alphabet:
            if s.arity == 1:
                out += [Term(s, [c]) for c in by_size[n - 1]]
            elif s.arity == 2:
                for i in range(1, n - 1):
                    out += [Term(s, [x, y]) for x in by_size[i] for y in by_size[n - 1 - i]]
        by_size[n] = out
    return [t for ts in by_size.values() for t in ts]


@pytest.mark.parametrize(
    "text",
    [
        "F -> f(F) | g(F, G) | a\nG -> b | f(G)",
        "F -> g(a, F) | b",
        "F -> G | f(F)\nG -> g(G, G) | a",
    ],
)
def test_generation_matches_grammar_automaton(text):
    g = parse_grammar(text, SMALL)
    nfta = grammar_to_nfta(g)
    generated = generate_upto(g, 6)
    for t in _all_terms(SMALL, 6):
        assert accepts(nfta, t) == (t in generated)


def test_universal_grammar_counts():
    g = RegularTreeGrammar.universal(SMALL)
    assert count_upto(g, 6) == len(_all_terms(SMALL, 6))
    assert all(accepts(universal_nfta(SMALL), t) for t in generate_upto(g, 4))


@settings(max_examples=30)
@given(terms_over(SMALL, max_leaves=6))
def test_universal_grammar_contains_every_term(t):
    assert t in generate_upto(RegularTreeGrammar.universal(SMALL), t.size)
