import pytest

from nomlog.engine import Floundered, answer_key, freshen_clause, solve
from nomlog.names import NameSupply
from nomlog.syntax import parse_program, parse_term, show
from nomlog.terms import alpha_eq_ground, names_in

from oracles import program_text


def load(name):
    return parse_program(program_text(name))


def test_type_of_application_combinator():
    p = load("typ.nl")
    (ans,) = solve(p, r"typ([], \x. \y. x y, T)", max_answers=None).all()
    assert show(ans["T"]) == "arr(arr(_1, _2), arr(_1, _2))"


def test_freshness_side_condition_blocks_a_reused_name():
    p = load("typ.nl")
    # the context mentions a, so the lam clause must pick a binder fresh for it
    ok = solve(p, "typ([(a, o)], lam(<a>var(a)), T)").first()
    assert ok is not None and show(ok["T"]) == "arr(_1, _1)"
    # asking for a's context type as the argument type is still fine, but a
    # result that would need the inner a to be the outer one is not derivable
    assert solve(p, "typ([(a, o)], lam(<a>var(a)), arr(arr(o, o), o))").first() is None
    assert solve(p, "typ([(a, o)], lam(<a>var(a)), arr(arr(o, o), o))", equivariant=True).first() is None


def test_nominal_and_equivariant_modes_differ():
    p = load("p_ab.nl")
    assert solve(p, "p(b)").all() == []
    assert solve(p, "p(b)", equivariant=True).first() is not None


def test_subst_with_global_names_needs_renaming():
    p = load("subst_fig.nl")
    assert solve(p, "subst(var(a), var(c), a, X)").all() == []
    (ans,) = solve(p, "subst(var(a), var(c), a, X)", equivariant=True, max_answers=None).all()
    assert show(ans["X"]) == "var(c)"


def test_subst_with_name_variables_works_nominally():
    p = load("subst.nl")
    (ans,) = solve(p, r"subst(lam(<b>app(var(a), var(b))), var(b), a, X)", max_answers=None).all()
    sig = p.signature.copy()
    expected = parse_term(r"lam(<c>app(var(b), var(c)))", sig)
    got = ans["X"]
    # c here is any name other than b
    assert got.symbol.name == "lam"
    assert alpha_eq_ground(got, expected)


def test_depth_limit_is_reported():
    p = load("typ.nl")
    s = solve(p, "mem(X, L)", depth_limit=3, max_answers=None)
    answers = s.all()
    assert len(answers) == 3
    assert s.exhausted


def test_finite_failure_is_not_exhaustion():
    p = load("p_ab.nl")
    s = solve(p, "p(b)")
    assert s.all() == []
    assert s.complete and not s.exhausted


def test_floundering_is_raised():
    p = load("subst.nl")
    with pytest.raises(Floundered):
        solve(p, "subst(var(c), var(c), A, R)", max_answers=None).all()


def test_equivariant_answers_are_deduplicated():
    p = load("p_ab.nl")
    answers = solve(p, "p(X)", equivariant=True, max_answers=None).all()
    keys = [answer_key(a) for a in answers]
    assert len(keys) == len(set(keys))


def test_freshening_renames_clause_names_apart():
    p = load("p_ab.nl")
    (clause,) = p.clauses
    supply = NameSupply(start=500)
    one, two = freshen_clause(clause, (), supply), freshen_clause(clause, (), supply)
    n1, n2 = names_in(one.head.args[0]), names_in(two.head.args[0])
    assert n1 and n2 and not (n1 & n2)
    assert not (n1 & set(p.signature.names.values()))


def test_answer_lines_list_constraints():
    src = "nametype n. type d. func g(n) -> d. func k(<n>d) -> d. name a : n. pred q(d). q(X) :- a # X.\n"
    p = parse_program(src)
    (ans,) = solve(p, "q(Y)", max_answers=None).all()
    # Y is left open but must avoid the clause's own fresh name
    first, constraint = ans.lines()
    assert first == "Y = _1"
    assert constraint.endswith(" # _1") and not constraint.startswith("a ")


def test_constraints_on_name_free_sorts_are_dropped():
    p = parse_program("nametype n. type d. func k(<n>d) -> d. func z -> d. name a : n. pred q(d). q(X) :- a # X.\n")
    (ans,) = solve(p, "q(Y)", max_answers=None).all()
    assert ans.lines() == ["Y = _1"]
