import pytest

from aspectlearn.cli import main
from oracle import fixture


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_learn_fig1(capsys):
    code, out, _ = run(capsys, "learn", fixture("fig1.json"))
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "dia(dia(a))"
    assert lines[1] == "size 3"
    assert "examples 4" in lines


def test_learn_bisimilar_is_unrealizable(capsys):
    code, out, _ = run(capsys, "learn", fixture("bisimilar.json"))
    assert code == 1
    assert out.splitlines()[0] == "unrealizable"


def test_learn_without_grammar_is_an_input_error(capsys):
    code, out, err = run(capsys, "learn", fixture("missing_grammar.json"))
    assert code == 2
    assert out == ""
    assert "grammar" in err


def test_learn_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "learn", tmp_path / "nope.json")
    assert code == 2
    assert err.startswith("error:")


def test_learn_state_cap(capsys):
    code, out, _ = run(capsys, "learn", fixture("regex_small.json"), "--max-states", "3")
    assert code == 3
    assert out.startswith("resource-exhausted")


def test_overlapping_examples_are_unrealizable(capsys):
    code, out, _ = run(capsys, "learn", fixture("regex_overlap.json"), "--oracle")
    assert code == 1
    assert out.startswith("unrealizable\n")


def test_learn_output_is_byte_identical(capsys):
    first = run(capsys, "learn", fixture("regex_small.json"))
    second = run(capsys, "learn", fixture("regex_small.json"))
    assert first == second


def test_wall_time_goes_to_stderr(capsys):
    code, out, err = run(capsys, "learn", fixture("fig1.json"), "--stats")
    assert code == 0
    assert "wall_time" in err
    assert "wall_time" not in out


def test_emit_dot(capsys, tmp_path):
    path = tmp_path / "trace.dot"
    code, _, _ = run(capsys, "learn", fixture("fig1.json"), "--emit-dot", path)
    assert code == 0
    text = path.read_text()
    assert text.startswith("digraph")
    assert "doublecircle" in text


@pytest.mark.parametrize("name", ["fig1.json", "regex_small.json", "ltl_small.json"])
def test_learn_oracle_agrees(capsys, name):
    code, _, err = run(capsys, "learn", fixture(name), "--oracle")
    assert code == 0, err


def test_learn_cfg_anbn(capsys):
    code, out, _ = run(capsys, "learn", fixture("cfg_anbn.json"), "--oracle")
    assert code == 0
    assert out.splitlines()[:2] == ["top_S(term_c,lhs_S(concat(term_a,concat(rhs_S,term_b)),end))", "size 9"]


@pytest.mark.parametrize(
    "language, structure, term, want",
    [
        ("modal", "fig1_left.json", "box(dia(or(a,v)))", "true"),
        ("modal", "fig1_neg_cycle.json", "box(dia(or(a,v)))", "false"),
        ("regex", "word_empty.json", "star(a)", "true"),
        ("regex", "word_abb.json", "concat(a,star(b))", "true"),
        ("regex", "word_abb.json", "star(a)", "false"),
        ("ltl", "lasso_ab.json", "X(b)", "true"),
    ],
)
def test_eval_vectors(capsys, language, structure, term, want):
    code, out, err = run(capsys, "eval", language, fixture(structure), term, "--oracle")
    assert code == 0, err
    assert out == want + "\n"


def test_eval_ratfo_with_params(capsys):
    code, out, _ = run(
        capsys, "eval", "ratfo", fixture("rat_tuple.json"), "exists_x(forall_y(lt_x_y))", "--params", '{"k": 3}', "--oracle"
    )
    assert code == 0
    assert out == "false\n"


def test_eval_arity_error(capsys):
    code, out, err = run(capsys, "eval", "modal", fixture("fig1_left.json"), "and(a)")
    assert code == 2
    assert out == ""
    assert "arity" in err


def test_eval_bad_params(capsys):
    code, _, err = run(capsys, "eval", "modal", fixture("fig1_left.json"), "a", "--params", "[1]")
    assert code == 2
    assert "--params" in err


def test_unknown_language_is_an_input_error(capsys):
    code, _, _ = run(capsys, "eval", "prolog", fixture("fig1_left.json"), "a")
    assert code == 2


def test_check_grammar_modal(capsys):
    code, out, _ = run(capsys, "check-grammar", fixture("modal_fig1.grammar"), "modal")
    assert (code, out) == (0, "ok\n")


def test_check_grammar_productive_cfg(capsys):
    code, out, _ = run(capsys, "check-grammar", fixture("cfg_productive.grammar"), "cfg")
    assert (code, out) == (0, "ok\n")


def test_check_grammar_reports_non_productive_encoding(capsys):
    code, out, _ = run(capsys, "check-grammar", fixture("cfg_admits_SS.grammar"), "cfg")
    assert code == 2
    assert "non-productive" in out
    assert "rhs_S" in out


def test_check_grammar_arity_violation(capsys):
    code, _, err = run(capsys, "check-grammar", fixture("arity_violation.grammar"), "modal")
    assert code == 2
    assert "and" in err
