"""End-to-end acceptance checks.

Each test carries a ``criterion`` marker; the summary hook in conftest.py
prints one PASS or FAIL line per criterion after the run.  Run with
``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import itertools
import time

import numpy as np
import pytest

from aspectlearn.cli import main
from aspectlearn.evaluators import LANGUAGES, make_evaluator, unproductive_checker
from aspectlearn.evaluators.cfg import productive_checker
from aspectlearn.evaluators.ratfo import make_preorder, place
from aspectlearn.facet import Aspect, build_twata
from aspectlearn.learn import CONSISTENT, UNREALIZABLE, Problem, learn, load_problem, verify
from aspectlearn.nfta import LazyProduct, accepts as nfta_accepts, grammar_to_nfta, materialize
from aspectlearn.term import parse_term
from aspectlearn.twata import STAY, And, Atom, Or, TRUE, accepts, normalize_pbf, to_nfta
from oracle import brute_force, case_setup, case_terms, fixture, random_problem

criterion = pytest.mark.criterion

# time budgets in seconds
FIG1_BUDGET = 10.0
ORACLE_BUDGET = 300.0
OVERLAP_BUDGET = 1.0
BISIMILAR_BUDGET = 60.0

FIG1_EXPECTED_SIZE = 5
UNREALIZABLE_SEARCH_SIZE = 8
RANDOM_PROBLEMS = 50


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- 1 ------------------------------------------------------------------------------


@criterion(1, "four-structure modal instance learns a verified formula of minimum size 5")
def test_fig1_end_to_end(capsys):
    started = time.monotonic()
    code, out, _ = run_cli(capsys, "learn", fixture("fig1.json"), "--oracle")
    p = load_problem(str(fixture("fig1.json")))
    text, size_line = out.splitlines()[:2]
    learned = parse_term(text, p.evaluator.alphabet)
    smallest = brute_force(p, FIG1_EXPECTED_SIZE)
    elapsed = time.monotonic() - started
    assert code == 0
    assert verify(p, learned)
    assert size_line == f"size {learned.size}"
    assert elapsed < FIG1_BUDGET
    assert smallest is not None and learned.size == smallest.size
    assert learned.size == FIG1_EXPECTED_SIZE, f"learned {learned} of size {learned.size}; enumeration minimum is {smallest}"


# -- 2 and 3 --------------------------------------------------------------------------

_oracle_seconds = {}


@criterion(2, "automaton acceptance (game and NFTA) equals reference evaluation")
@pytest.mark.parametrize("language", LANGUAGES)
def test_oracle_equivalence(language):
    started = time.monotonic()
    ev, structures = case_setup(language)
    terms = case_terms(language)
    bad = []
    for m in structures:
        a = build_twata(ev, m)
        n = to_nfta(a)
        for t in terms:
            ref = ev.reference(m, t)
            if accepts(a, t) != ref or n.accepts(t) != ref:
                bad.append((m, str(t)))
    _oracle_seconds[language] = time.monotonic() - started
    assert len(terms) > 100
    assert bad == []


@criterion(2, "automaton acceptance (game and NFTA) equals reference evaluation")
def test_oracle_equivalence_budget():
    assert set(_oracle_seconds) == set(LANGUAGES)
    assert sum(_oracle_seconds.values()) < ORACLE_BUDGET


@criterion(3, "exactly one of the positive and negative automata accepts")
@pytest.mark.parametrize("language", LANGUAGES)
def test_dual_soundness(language):
    ev, structures = case_setup(language)
    terms = case_terms(language)
    for m in structures:
        pos, neg = build_twata(ev, m, True), build_twata(ev, m, False)
        for t in terms:
            assert accepts(pos, t) != accepts(neg, t), (m, str(t))


# -- 4 ------------------------------------------------------------------------------


def split_disjunction(spans, second_move):
    def atom(span, move):
        return Atom(Aspect(span), move)

    return Or(tuple(And((atom(l, 1), atom(r, second_move))) for l, r in spans))


@criterion(4, "regex automaton for abb matches the worked example")
def test_worked_regex_example():
    ev = make_evaluator("regex", {"letters": ["a", "b"]})
    a = build_twata(ev, ev.parse_structure({"word": "abb"}))
    d = a.delta
    assert a.initial == Aspect((1, 4))
    assert len(a.states) == 20
    assert d[(Aspect((1, 2)), "a")] == TRUE
    assert d[(Aspect((2, 3)), "b")] == TRUE
    assert d[(Aspect((3, 4)), "b")] == TRUE
    concat = split_disjunction([((1, 1), (1, 4)), ((1, 2), (2, 4)), ((1, 3), (3, 4)), ((1, 4), (4, 4))], 2)
    assert normalize_pbf(d[(Aspect((1, 4)), "concat")]) == normalize_pbf(concat)
    star = split_disjunction([((1, 2), (2, 4)), ((1, 3), (3, 4)), ((1, 4), (4, 4))], STAY)
    assert normalize_pbf(d[(Aspect((1, 4)), "star")]) == normalize_pbf(star)
    assert normalize_pbf(d[(Aspect((1, 1)), "concat")]) == normalize_pbf(split_disjunction([((1, 1), (1, 1))], 2))
    for i in range(1, 5):
        assert d[(Aspect((i, i)), "star")] == TRUE


# -- 5 ------------------------------------------------------------------------------


@criterion(5, "overlapping and bisimilar examples are unrealizable in time")
def test_overlapping_regex_examples():
    p = load_problem(str(fixture("regex_overlap.json")))
    started = time.monotonic()
    sol = learn(p)
    assert sol.verdict == UNREALIZABLE
    assert time.monotonic() - started < OVERLAP_BUDGET


@criterion(5, "overlapping and bisimilar examples are unrealizable in time")
def test_bisimilar_kripke_structures():
    p = load_problem(str(fixture("bisimilar.json")))
    started = time.monotonic()
    sol = learn(p)
    assert sol.verdict == UNREALIZABLE
    assert time.monotonic() - started < BISIMILAR_BUDGET
    assert brute_force(p, UNREALIZABLE_SEARCH_SIZE) is None


# -- 6 ------------------------------------------------------------------------------


@criterion(6, "placing x into x<z<y gives the five listed preorders")
def test_placements():
    order = ["x", "y", "z"]
    got = place("x", make_preorder([("x",), ("z",), ("y",)], order), order)
    assert len(got) == 5
    assert {str(q) for q in got} == {"x<z<y", "x=z<y", "z<x<y", "z<x=y", "z<y<x"}


# -- 7 ------------------------------------------------------------------------------


@criterion(7, "CFG membership, productivity check and grammar check")
def test_cfg_aba(capsys):
    ev = make_evaluator("cfg", {"nonterminals": ["S"], "terminals": ["a", "b"]})
    g = ev.encode(ev.parse_cfg("S -> a S | b"))
    m = ev.parse_structure({"word": "aba"})
    assert not ev.reference(m, g)
    assert not accepts(build_twata(ev, m), g)
    assert not to_nfta(build_twata(ev, m)).accepts(g)
    assert ev.reference(ev.parse_structure({"word": "aab"}), g)


@criterion(7, "CFG membership, productivity check and grammar check")
def test_cfg_productivity(capsys):
    ev = make_evaluator("cfg", {"nonterminals": ["S"], "terminals": ["a"]})
    check = productive_checker(["S"], ["a"])
    assert not nfta_accepts(check, ev.encode(ev.parse_cfg("S -> S S | a")))
    assert nfta_accepts(unproductive_checker(["S"], ["a"]), ev.encode(ev.parse_cfg("S -> S S | a")))
    code, out, _ = run_cli(capsys, "check-grammar", fixture("cfg_admits_SS.grammar"), "cfg")
    assert code == 2
    assert "rhs_S" in out
    code, out, _ = run_cli(capsys, "check-grammar", fixture("cfg_productive.grammar"), "cfg")
    assert (code, out) == (0, "ok\n")


# -- 8 ------------------------------------------------------------------------------


def product_of(p):
    ev = p.evaluator
    factors = [grammar_to_nfta(p.grammar)] + list(ev.extra_automata())
    factors += [to_nfta(build_twata(ev, m, lab)) for m, lab in p.examples()]
    return LazyProduct(*factors)


@criterion(8, "learned witnesses are minimum size; unrealizable verdicts confirmed")
@pytest.mark.parametrize("language", LANGUAGES)
def test_random_minimality(language):
    for seed in range(RANDOM_PROBLEMS):
        p = random_problem(language, seed)
        sol = learn(p)
        if sol.verdict == CONSISTENT:
            smallest = brute_force(p, sol.size)
            assert smallest is not None and smallest.size == sol.size, (seed, str(sol.term))
        else:
            assert sol.verdict == UNREALIZABLE, seed
            assert brute_force(p, UNREALIZABLE_SEARCH_SIZE) is None, seed
            assert not materialize(product_of(p)).final, seed


# -- 9 ------------------------------------------------------------------------------


@criterion(9, "output is deterministic and independent of example order")
@pytest.mark.parametrize("name", ["fig1.json", "regex_small.json", "ltl_small.json", "bisimilar.json"])
def test_byte_identical_output(capsys, name):
    runs = {run_cli(capsys, "learn", fixture(name)) for _ in range(3)}
    assert len(runs) == 1


def shuffled(p, rng):
    pos = list(p.positives)
    neg = list(p.negatives)
    rng.shuffle(pos)
    rng.shuffle(neg)
    return Problem(p.language, pos, neg, p.grammar, p.params, p.evaluator)


@criterion(9, "output is deterministic and independent of example order")
def test_fig1_every_order():
    p = load_problem(str(fixture("fig1.json")))
    want = learn(p)
    for pos in itertools.permutations(p.positives):
        for neg in itertools.permutations(p.negatives):
            sol = learn(Problem(p.language, list(pos), list(neg), p.grammar, p.params, p.evaluator))
            assert (sol.verdict, sol.size) == (want.verdict, want.size)


@criterion(9, "output is deterministic and independent of example order")
@pytest.mark.parametrize("language", LANGUAGES)
def test_reordering_random_problems(language):
    rng = np.random.default_rng(9)
    for seed in range(10):
        p = random_problem(language, seed)
        want = learn(p)
        for _ in range(3):
            sol = learn(shuffled(p, rng))
            assert (sol.verdict, sol.size) == (want.verdict, want.size), seed


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
