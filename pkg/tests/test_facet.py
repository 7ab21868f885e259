import pytest

from aspectlearn.evaluators import LANGUAGES, make_evaluator
from aspectlearn.facet import (
    Aspect,
    Evaluator,
    EvaluatorError,
    all_of,
    any_of,
    boolean,
    build_twata,
    call,
    call_dual,
    check_well_formed,
    transition_pbf,
)
from aspectlearn.term import RankedAlphabet, parse_term
from aspectlearn.twata import FALSE, TRUE, And, Atom, Or, accepts
from oracle import CASES, load_json

MODAL = make_evaluator("modal", {"props": ["a", "c", "v"]})
TWO_WORLDS = MODAL.parse_structure(
    {"worlds": ["w", "u"], "start": "w", "edges": [["w", "u"]], "labels": {"w": ["a"]}}
)


def test_modal_and_plain():
    f = transition_pbf(MODAL, TWO_WORLDS, Aspect("w"), MODAL.alphabet["and"])
    assert f == And((Atom(Aspect("w"), 1), Atom(Aspect("w"), 2)))


def test_modal_and_dual():
    f = transition_pbf(MODAL, TWO_WORLDS, Aspect("w", True), MODAL.alphabet["and"])
    assert f == Or((Atom(Aspect("w", True), 1), Atom(Aspect("w", True), 2)))


def test_modal_proposition():
    assert transition_pbf(MODAL, TWO_WORLDS, Aspect("w"), MODAL.alphabet["a"]) == TRUE
    assert transition_pbf(MODAL, TWO_WORLDS, Aspect("u"), MODAL.alphabet["a"]) == FALSE
    assert transition_pbf(MODAL, TWO_WORLDS, Aspect("u", True), MODAL.alphabet["a"]) == TRUE


def test_aspect_flip_and_display():
    s = Aspect((1, 4))
    assert s.flip().flip() == s
    assert str(s) == "(1,4)"
    assert str(s.flip()) == "dual((1,4))"


def test_dsl_helpers():
    assert all_of([], lambda x: call(x, 1)) == TRUE
    assert any_of([], lambda x: call(x, 1)) == FALSE
    assert boolean(True) == TRUE
    assert call_dual("w", 2) == Atom(Aspect("w", True), 2)


def test_negative_automaton_on_fig1_cycle():
    M = MODAL.parse_structure(load_json("fig1_neg_cycle.json"))
    t = parse_term("box(dia(or(a,v)))", MODAL.alphabet)
    assert accepts(build_twata(MODAL, M, positive=False), t)
    assert not accepts(build_twata(MODAL, M, positive=True), t)


def test_regex_initial_aspect():
    ev = make_evaluator("regex", {"letters": ["a", "b"]})
    M = ev.parse_structure({"word": "abb"})
    assert build_twata(ev, M).initial == Aspect((1, 4))
    assert build_twata(ev, M, positive=False).initial == Aspect((1, 4), True)


@pytest.mark.parametrize("language", LANGUAGES)
def test_builtin_evaluators_are_well_formed(language):
    params, structures, _, _ = CASES[language]
    ev = make_evaluator(language, params)
    for d in structures:
        assert check_well_formed(ev, ev.parse_structure(d)) == []


def test_fig1_structures_are_well_formed():
    for name in ("fig1_left.json", "fig1_tree.json", "fig1_neg_pair.json", "fig1_neg_cycle.json"):
        assert check_well_formed(MODAL, MODAL.parse_structure(load_json(name))) == []


class Toy(Evaluator):
    """One aspect per integer below n; ``emit`` supplies the f transition."""

    language = "toy"

    def __init__(self, emit):
        self.alphabet = RankedAlphabet.of({"f": 1, "a": 0})
        self.emit = emit

    def enumerate_aspects(self, M):
        return list(range(M))

    def initial_payload(self, M):
        return 0

    def transition(self, M, p, symbol):
        if symbol.name == "a":
            return TRUE
        return self.emit(p)

    def reference(self, M, term):
        return True

    def parse_structure(self, data):
        return int(data)


def test_arity_violation_is_reported_once():
    ev = Toy(lambda p: call(p, 2))
    problems = check_well_formed(ev, 1)
    assert [v.kind for v in problems] == ["arity"]


def test_closure_violation_is_reported_once():
    ev = Toy(lambda p: call(p + 1, 1))
    problems = check_well_formed(ev, 1)
    assert [v.kind for v in problems] == ["closure"]
    assert problems[0].atom == Atom(Aspect(1), 1)


def test_crash_is_a_totality_violation():
    def boom(p):
        raise KeyError(p)

    assert [v.kind for v in check_well_formed(Toy(boom), 2)] == ["totality", "totality"]


def test_build_refuses_ill_formed_evaluator():
    with pytest.raises(EvaluatorError):
        build_twata(Toy(lambda p: call(p, 2)), 1)


def test_toy_dual_rejects():
    ev = Toy(lambda p: call(p, 1))
    t = parse_term("f(f(a))", ev.alphabet)
    assert accepts(build_twata(ev, 1), t)
    assert not accepts(build_twata(ev, 1, positive=False), t)
