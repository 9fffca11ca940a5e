import io
import subprocess
import sys

import pytest

from nomlog.cli import Session, repl, run

from oracles import PROGRAMS


def nomlog(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), Session(out, err))
    return code, out.getvalue(), err.getvalue()


def prog(name):
    return str(PROGRAMS / name)


@pytest.mark.parametrize(
    "argv, code, text",
    [
        (("eq", "<a>f(a,b)", "<c>f(c,b)"), 0, "true\n"),
        (("eq", "<a>f(a,b)", "<b>f(b,a)"), 1, "false\n"),
        (("fresh", "a", "<a>var(a)"), 0, "true\n"),
        (("fresh", "a", "var(a)"), 1, "false\n"),
        (("unify", "<a>X", "<b>b"), 0, "X = a\n"),
        (("unify", "<a>X", "<b>X"), 0, "X = X\na # X\nb # X\n"),
        (("unify", "f(a, X)", "f(b, X)"), 1, "fail: clash: a # b (distinct names)\n"),
        (("norm", r"(\x. x) (\y. y)"), 0, "\\x. x\n"),
        (("norm", r"(\x. x) (\y. y)", "--raw"), 0, "lam(<x>var(x))\n"),
        (("norm", r"\x. f x", "--eta"), 0, "f\n"),
        (("norm", r"\x. \y. (\z. z) x y", "--strategy", "nbe"), 0, "\\x. \\y. x y\n"),
    ],
)
def test_commands(argv, code, text):
    got, out, _ = nomlog(*argv)
    assert (got, out) == (code, text)


def test_occurs_check_message():
    code, out, _ = nomlog("unify", "X", "f(X)")
    assert code == 1
    assert out.startswith("fail: occurs check: X = f(X)")


def test_fresh_on_open_terms_reports_residual_constraints():
    code, out, _ = nomlog("fresh", "a", "(a b).X")
    assert code == 0
    assert out.splitlines() == ["true given:", "b # X"]


def test_check_summarizes_a_program():
    code, out, _ = nomlog("check", prog("typ.nl"))
    assert code == 0 and out == "ok: 5 clauses, 2 predicates\n"


def test_query_modes():
    assert nomlog("query", prog("subst_fig.nl"), "subst(var(a), var(c), a, X)")[:2] == (1, "no\n")
    code, out, _ = nomlog("query", prog("subst_fig.nl"), "subst(var(a), var(c), a, X)", "--equivariant")
    assert (code, out) == (0, "X = var(c)\n")
    code, out, _ = nomlog("query", prog("subst.nl"), "subst(var(a), var(c), a, X)")
    assert (code, out) == (0, "X = var(c)\n")


def test_query_with_sugar_and_several_answers():
    code, out, _ = nomlog("query", prog("typ.nl"), r"typ([], \x. \y. x y, T)", "--sugar")
    assert (code, out) == (0, "T = arr(arr(_1, _2), arr(_1, _2))\n")
    code, out, _ = nomlog("query", prog("typ.nl"), "mem(X, [(a, o), (b, arr(o, o))])", "--max-answers", "0")
    assert code == 0
    assert out == "X = (a, o)\n;\nX = (b, arr(o, o))\n"


def test_ground_query_prints_yes():
    code, out, _ = nomlog("query", prog("p_ab.nl"), "p(b)", "--equivariant")
    assert (code, out) == (0, "yes\n")


def test_resource_exhaustion_exit_codes():
    code, out, _ = nomlog("query", prog("typ.nl"), "mem((a, o), L), L = []", "--depth", "4")
    assert code == 3 and "no answer within depth 4" in out
    code, out, _ = nomlog("norm", r"(\x. x x) (\x. x x)", "--fuel", "20")
    assert code == 3 and "no normal form within fuel" in out
    code, out, _ = nomlog("eval", prog("subst_fig.nl"), "forall X:exp. X = X")
    assert (code, out) == (3, "unknown(term-depth)\n")


def test_floundering_is_a_usage_error():
    code, _, err = nomlog("query", prog("subst.nl"), "subst(var(c), var(c), A, R)", "--max-answers", "0")
    assert code == 2 and "freshness goals" in err


def test_usage_errors():
    code, _, err = nomlog("eq", "<a", "a")
    assert code == 2 and err.startswith("error: line 1, col 3")
    assert nomlog("frobnicate")[0] == 2
    assert nomlog("check", "/nonexistent/file.nl")[0] == 2
    assert nomlog("query", prog("typ.nl"), "nope(X)")[0] == 2


def test_model_and_eval():
    code, out, _ = nomlog("model", prog("typ.nl"))
    assert (code, out) == (0, "7 atoms\n")
    code, out, _ = nomlog("model", prog("p_ab.nl"), "--show")
    assert code == 0 and out.splitlines()[0] == "3 atoms"
    code, out, _ = nomlog("eval", prog("subst_fig.nl"), "new c:var. subst(var(c), var(b), c, var(b))")
    assert (code, out) == (0, "true\n")
    code, out, _ = nomlog("eval", prog("subst_fig.nl"), "subst(var(b), var(a), a, var(a))")
    assert (code, out) == (1, "false\n")


def test_repl_session():
    script = "\n".join(
        [
            "% a comment",
            f"load {prog('p_ab.nl')}",
            "p(b)",
            "set equivariant on",
            "p(b)",
            'eq "<a>var(a)" "<b>var(b)"',
            "quit",
        ]
    )
    out, err = io.StringIO(), io.StringIO()
    assert repl(Session(out, err), stdin=io.StringIO(script + "\n")) == 0
    assert out.getvalue().splitlines() == [f"loaded {prog('p_ab.nl')}", "no", "equivariant = on", "yes", "true"]


def test_installed_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "nomlog", "unify", "<a>X", "<b>b"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert (r.returncode, r.stdout) == (0, "X = a\n")
