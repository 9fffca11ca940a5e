import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nomlog.lam import EXP, LAMBDA_SIG, VAR_TYPE, app, lam, v
from nomlog.names import IDENTITY, Name, NameSupply, NameType, Perm, perm_compose, perm_disagreement, perm_inverse, transposition
from nomlog.terms import (
    Abs,
    AbsSort,
    App,
    Const,
    DataSort,
    NameSort,
    OpenTermError,
    Signature,
    SortContext,
    SortError,
    Susp,
    Var,
    alpha_eq_ground,
    fresh_ground,
    fresh_name,
    permute,
    support,
    swap_term,
    well_sorted,
)

from oracles import LAM_NAMES

a, b, c = LAM_NAMES
nu = VAR_TYPE


@pytest.fixture
def fsig():
    sig = Signature()
    nt = sig.nametype("var")
    d = sig.datatype("term")
    return sig, sig.declare_func("f", [NameSort(nt), NameSort(nt)], d), sig.declare_func("k", [], d)


def f_of(fsig, x, y):
    return App(fsig[1], (x, y))


# -- permutations


def test_perm_apply_swaps():
    pi = transposition(a, b)
    assert pi(a) == b
    assert pi(b) == a
    assert pi(c) == c
    assert IDENTITY(a) == a


def test_perm_compose_applies_right_first():
    pi, rho = transposition(a, b), transposition(b, c)
    both = perm_compose(pi, rho)
    for x in (a, b, c):
        assert both(x) == pi(rho(x))


def test_perm_inverse_and_disagreement():
    pi = perm_compose(transposition(a, b), transposition(b, c))
    inv = perm_inverse(pi)
    for x in (a, b, c):
        assert inv(pi(x)) == x
    assert perm_disagreement(pi, IDENTITY, {a, b, c}) == {x for x in (a, b, c) if pi(x) != x}
    assert perm_disagreement(transposition(a, b), transposition(b, a), {a, b, c}) == set()


def test_swapping_names_of_different_types_is_rejected():
    other = Name(NameType("tag"), 99, "t")
    with pytest.raises(TypeError):
        transposition(a, other)
    with pytest.raises(SortError):
        swap_term((a, other), v(a))


perms = st.lists(st.tuples(st.sampled_from(LAM_NAMES), st.sampled_from(LAM_NAMES)), max_size=4).map(
    lambda xs: Perm(tuple(xs))
)


@given(perms, perms)
def test_perm_group_laws(pi, rho):
    inv = perm_inverse(pi)
    for x in LAM_NAMES:
        assert inv(pi(x)) == x
        assert perm_compose(pi, rho)(x) == pi(rho(x))
    assert pi.normalized().mapping() == pi.mapping()


# -- swapping, freshness, alpha-equality on the examples


def test_swap_through_abstraction():
    t = Abs(a, b)
    assert swap_term((a, b), t) == Abs(b, a)


def test_swap_pushes_through_function_symbols(fsig):
    t = f_of(fsig, a, c)
    assert swap_term((a, b), t) == f_of(fsig, b, c)
    k = Const(fsig[2])
    assert swap_term((a, b), k) == k


def test_freshness_examples(fsig):
    assert fresh_ground(a, Abs(a, f_of(fsig, a, b)))
    assert fresh_ground(a, b)
    assert not fresh_ground(a, f_of(fsig, a, b))
    assert not fresh_ground(a, a)


def test_alpha_equality_examples(fsig):
    assert alpha_eq_ground(Abs(a, f_of(fsig, a, b)), Abs(c, f_of(fsig, c, b)))
    assert not alpha_eq_ground(Abs(a, f_of(fsig, a, b)), Abs(b, f_of(fsig, b, a)))
    t = Abs(a, f_of(fsig, a, b))
    assert alpha_eq_ground(t, t)


def test_support_examples(fsig):
    assert support(Abs(a, f_of(fsig, a, b))) == {b}
    assert support(Const(fsig[2])) == set()
    assert support(f_of(fsig, a, b)) == {a, b}


def test_open_terms_are_refused():
    x = Susp(IDENTITY, Var("X", EXP))
    with pytest.raises(OpenTermError):
        fresh_ground(a, x)
    with pytest.raises(OpenTermError):
        support(lam(a, x))


def test_comparing_terms_of_different_sorts_is_an_error():
    with pytest.raises(SortError):
        alpha_eq_ground(a, v(a))


# -- sorts


def test_well_sorted_lambda_terms():
    ctx = SortContext().declare(a)
    assert well_sorted(ctx, LAMBDA_SIG, v(a)) == EXP
    assert well_sorted(ctx, LAMBDA_SIG, lam(a, v(a))) == EXP
    assert well_sorted(ctx, LAMBDA_SIG, Abs(a, v(a))) == AbsSort(nu, EXP)


def test_well_sorted_rejects_unbound_idents():
    with pytest.raises(SortError):
        well_sorted(SortContext(), LAMBDA_SIG, v(a))
    x = Susp(IDENTITY, Var("X", EXP))
    with pytest.raises(SortError):
        well_sorted(SortContext().declare(a), LAMBDA_SIG, lam(a, x))
    assert well_sorted(SortContext().declare(a).bind(Var("X", EXP)), LAMBDA_SIG, lam(a, x)) == EXP


def test_arity_errors_at_construction():
    with pytest.raises(SortError):
        App(LAMBDA_SIG.funcs["app"], (v(a),))
    with pytest.raises(SortError):
        App(LAMBDA_SIG.funcs["var"], (v(a),))


def test_constant_must_be_nullary():
    with pytest.raises(SortError):
        Const(LAMBDA_SIG.funcs["var"])


def test_suspensions_keep_a_canonical_permutation():
    x = Var("X", EXP)
    s1 = Susp(Perm(((a, b), (a, b))), x)
    assert s1 == Susp(IDENTITY, x)
    s2 = Susp(Perm(((a, b),)), x)
    assert s2 == Susp(Perm(((b, a),)), x)


def test_permute_composes_onto_suspensions():
    x = Var("X", EXP)
    t = permute(transposition(a, b), Susp(transposition(b, c), x))
    assert isinstance(t, Susp)
    assert t.perm(c) == a


# -- fresh names


def test_fresh_name_avoids_support(fsig):
    supply = NameSupply(start=10)
    x = fresh_name(nu, [f_of(fsig, a, b)], supply)
    assert x not in (a, b)
    assert fresh_ground(x, f_of(fsig, a, b))
    assert fresh_name(nu, (), supply) != x


def test_fresh_name_skips_names_taken_from_the_counter():
    supply = NameSupply(start=5)
    taken = Name(nu, 5, "x5")
    assert fresh_name(nu, [v(taken)], supply).id == 6


def test_name_supply_is_safe_across_threads():
    supply = NameSupply()
    seen = []
    lock = threading.Lock()

    def grab():
        got = [supply.next_id() for _ in range(500)]
        with lock:
            seen.extend(got)

    threads = [threading.Thread(target=grab) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(seen)) == 2000


# -- ground-theory properties over random lambda-terms


def lam_terms():
    names = st.sampled_from(LAM_NAMES)
    return st.recursive(
        names.map(v),
        lambda sub: st.one_of(st.tuples(names, sub).map(lambda p: lam(*p)), st.tuples(sub, sub).map(lambda p: app(*p))),
        max_leaves=12,
    )


@given(lam_terms(), st.sampled_from(LAM_NAMES), st.sampled_from(LAM_NAMES))
def test_swap_is_an_involution(t, x, y):
    assert swap_term((x, y), swap_term((x, y), t)) == t


@given(lam_terms(), perms, st.sampled_from(LAM_NAMES))
def test_freshness_is_equivariant(t, pi, x):
    assert fresh_ground(x, t) == fresh_ground(pi(x), permute(pi, t))


@given(lam_terms(), st.sampled_from(LAM_NAMES), st.sampled_from(LAM_NAMES))
def test_swapping_two_fresh_names_fixes_a_term(t, x, y):
    if fresh_ground(x, t) and fresh_ground(y, t):
        assert alpha_eq_ground(swap_term((x, y), t), t)


@given(lam_terms(), lam_terms(), lam_terms())
@settings(max_examples=200)
def test_alpha_equality_is_an_equivalence(t, u, w):
    assert alpha_eq_ground(t, t)
    assert alpha_eq_ground(t, u) == alpha_eq_ground(u, t)
    if alpha_eq_ground(t, u) and alpha_eq_ground(u, w):
        assert alpha_eq_ground(t, w)


@given(lam_terms(), st.sampled_from(LAM_NAMES), st.sampled_from(LAM_NAMES))
def test_renaming_a_binder_to_a_fresh_name_preserves_alpha_class(body, x, y):
    t = lam(x, body)
    if fresh_ground(y, t):
        renamed = lam(y, swap_term((x, y), body))
        assert alpha_eq_ground(t, renamed)


@given(lam_terms(), lam_terms(), st.sampled_from(LAM_NAMES), st.sampled_from(LAM_NAMES))
def test_symmetric_freshness_check_is_redundant(t, u, x, y):
    # whenever a # u and t ~ (a b).u, also b # t
    if fresh_ground(x, u) and alpha_eq_ground(t, swap_term((x, y), u)):
        assert fresh_ground(y, t)


@given(lam_terms(), lam_terms(), st.sampled_from(LAM_NAMES))
def test_alpha_equality_is_a_congruence(t, u, x):
    if alpha_eq_ground(t, u):
        assert alpha_eq_ground(lam(x, t), lam(x, u))
        assert alpha_eq_ground(app(t, u), app(u, t))


@given(lam_terms())
def test_support_is_the_complement_of_freshness(t):
    for x in LAM_NAMES:
        assert (x in support(t)) == (not fresh_ground(x, t))


def test_data_sorts_are_compared_structurally():
    assert DataSort("list", (EXP,)) == DataSort("list", (EXP,))
    assert DataSort("exp") == EXP
