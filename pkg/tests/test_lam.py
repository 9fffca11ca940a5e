import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nomlog.enumerate import count_lambda_terms, lambda_terms
from nomlog.lam import (
    Apply,
    Free,
    Index,
    Lambda,
    NbeExhausted,
    app,
    beta_normalize,
    beta_step,
    eta_step,
    lam,
    lam_size,
    nbe_normalize,
    normalize,
    subst_fun,
    to_debruijn,
    v,
)
from nomlog.names import transposition
from nomlog.terms import SortError, alpha_eq_ground, fresh_ground, permute

from oracles import LAM_NAMES, db_skeleton, skeleton

a, b, c = LAM_NAMES
I = lam(a, v(a))
OMEGA = app(lam(a, app(v(a), v(a))), lam(a, app(v(a), v(a))))


def test_substitution_examples():
    assert subst_fun(v(a), a, v(b)) == v(b)
    assert subst_fun(v(c), a, v(b)) == v(c)
    # the binder b would capture the incoming b, so it is renamed
    out = subst_fun(lam(b, app(v(a), v(b))), a, v(b))
    (ab,) = out.args
    assert ab.name not in (a, b)
    assert alpha_eq_ground(out, lam(c, app(v(b), v(c))))
    # a bound a is left alone
    assert alpha_eq_ground(subst_fun(lam(a, v(a)), a, v(b)), I)


def test_substitution_needs_expressions():
    with pytest.raises(SortError):
        subst_fun(v(a), a, a)


def test_beta_and_eta_steps():
    assert beta_step(app(I, v(b))) == v(b)
    assert beta_step(v(a)) is None
    assert eta_step(lam(a, app(v(b), v(a)))) == v(b)
    assert eta_step(lam(a, app(v(a), v(a)))) is None
    assert normalize(lam(a, app(app(I, v(b)), v(a)))) == v(b)
    assert alpha_eq_ground(beta_normalize(lam(a, app(app(I, v(b)), v(a)))), lam(a, app(v(b), v(a))))


def test_fuel_runs_out_on_omega():
    assert beta_normalize(OMEGA, fuel=50) is None
    with pytest.raises(NbeExhausted):
        nbe_normalize(OMEGA, budget=1000)


def test_nbe_on_a_neutral_head():
    t = app(v(c), lam(a, v(a)))
    assert alpha_eq_ground(nbe_normalize(t), t)


def test_nbe_church_arithmetic():
    from nomlog.names import Name

    m, n, f, x = (Name(a.type, 50 + i, label) for i, label in enumerate("mnfx"))

    def church(k):
        body = v(x)
        for _ in range(k):
            body = app(v(f), body)
        return lam(f, lam(x, body))

    plus = lam(m, lam(n, lam(f, lam(x, app(app(v(m), v(f)), app(app(v(n), v(f)), v(x)))))))
    two_plus_two = app(app(plus, church(2)), church(2))
    assert alpha_eq_ground(nbe_normalize(two_plus_two), church(4))
    assert alpha_eq_ground(beta_normalize(two_plus_two), church(4))


def test_de_bruijn_examples():
    x, y, z = a, b, c
    one = lam(x, lam(y, app(v(x), v(y))))
    two = lam(z, lam(b, app(v(z), v(b))))
    expected = Lambda(Lambda(Apply(Index(2), Index(1))))
    assert to_debruijn(one) == expected
    assert to_debruijn(two) == expected
    assert str(expected) == "λλ(2 1)"
    assert to_debruijn(app(v(c), I)) == Apply(Free(c), Lambda(Index(1)))


def test_enumeration_counts():
    assert len(lambda_terms(4, LAM_NAMES)) == count_lambda_terms(4, 3)
    assert count_lambda_terms(6, 3) == 4962
    assert all(lam_size(t) <= 5 for t in lambda_terms(5, LAM_NAMES))


SMALL = lambda_terms(5, LAM_NAMES)


def test_alpha_equality_matches_de_bruijn_on_size_five():
    buckets = {}
    for t in SMALL:
        buckets.setdefault(skeleton(t), []).append(t)
    for group in buckets.values():
        images = [to_debruijn(t) for t in group]
        for (t, dt), (u, du) in itertools.combinations(zip(group, images), 2):
            assert alpha_eq_ground(t, u) == (dt == du)
    for t in SMALL:
        assert db_skeleton(to_debruijn(t)) == skeleton(t)


def test_nbe_agrees_with_beta_on_size_five():
    for t in SMALL:
        nf = beta_normalize(t, fuel=200)
        if nf is not None:
            assert alpha_eq_ground(nf, nbe_normalize(t))


lam_terms = st.sampled_from(lambda_terms(6, LAM_NAMES))


@given(lam_terms, lam_terms, st.sampled_from(LAM_NAMES), st.sampled_from(LAM_NAMES), st.sampled_from(LAM_NAMES))
@settings(max_examples=300, deadline=None)
def test_substitution_is_equivariant(m, n, x, p, q):
    pi = transposition(p, q)
    lhs = permute(pi, subst_fun(m, x, n))
    rhs = subst_fun(permute(pi, m), pi(x), permute(pi, n))
    assert alpha_eq_ground(lhs, rhs)


@given(lam_terms, lam_terms, st.sampled_from(LAM_NAMES))
@settings(max_examples=300, deadline=None)
def test_substitution_respects_alpha_classes(m, n, x):
    # renaming the bound names of m first gives the same result
    if m.symbol.name == "lam":
        ab = m.args[0]
        for y in LAM_NAMES:
            if fresh_ground(y, m):
                renamed = lam(y, permute(transposition(ab.name, y), ab.body))
                assert alpha_eq_ground(subst_fun(m, x, n), subst_fun(renamed, x, n))


@given(lam_terms, st.sampled_from(LAM_NAMES))
@settings(max_examples=200, deadline=None)
def test_substituting_a_name_for_itself_is_identity(m, x):
    assert alpha_eq_ground(subst_fun(m, x, v(x)), m)
