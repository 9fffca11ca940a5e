"""Freshness and alpha-equality over open terms, and nominal unification.

A solution is a pair (substitution, freshness context). The substitution
is idempotent; the context is a set of atomic constraints ``a # X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .names import IDENTITY, Name, perm_disagreement, perm_inverse, transposition
from .terms import (
    Abs,
    App,
    Const,
    SortError,
    Susp,
    Term,
    Var,
    _permute,
    _raw_app,
    permute,
    sort_of,
    variables,
)


@dataclass(frozen=True, slots=True)
class Freshness:
    """A constraint ``name # target``; atomic when the target is a variable."""

    name: Name
    target: "Term | Var"

    def __str__(self) -> str:
        from .syntax import show

        tgt = self.target.ident if isinstance(self.target, Var) else show(self.target)
        return f"{self.name} # {tgt}"


FreshnessContext = frozenset  # of atomic Freshness constraints
Substitution = dict  # Var -> Term


class Solution(NamedTuple):
    subst: dict
    context: frozenset


class UnificationFailure(Exception):
    """Base class; ``equation`` holds the offending sub-problem."""

    reason = "fail"

    def __init__(self, equation, detail: str = ""):
        self.equation = equation
        self.detail = detail
        super().__init__(equation, detail)

    def __str__(self) -> str:
        return self.describe()

    def describe(self) -> str:
        from .syntax import show

        eq = self.equation
        if isinstance(eq, tuple) and len(eq) == 2:
            left, right = eq
            if isinstance(left, Name):
                text = f"{left} # {show(right)}"
            else:
                text = f"{show(left)} = {show(right)}"
        else:
            text = str(eq)
        return f"{self.reason}: {text}" + (f" ({self.detail})" if self.detail else "")


class ClashFailure(UnificationFailure):
    reason = "clash"


class OccursCheckFailure(UnificationFailure):
    reason = "occurs check"


class FreshnessFailure(UnificationFailure):
    reason = "freshness"


# ---------------------------------------------------------------------------
# Substitution


def apply_subst(theta: Mapping[Var, Term], t: Term) -> Term:
    if not theta:
        return t
    return _apply(theta, t)


def _apply(theta: Mapping[Var, Term], t: Term) -> Term:
    if isinstance(t, Susp):
        image = theta.get(t.var)
        if image is None:
            return t
        return permute(t.perm, image)
    if isinstance(t, App):
        return _raw_app(t.symbol, tuple(_apply(theta, a) for a in t.args))
    if isinstance(t, Abs):
        return Abs(t.name, _apply(theta, t.body))
    return t


def compose_subst(theta: Mapping[Var, Term], sigma: Mapping[Var, Term]) -> dict:
    """Substitution applying ``theta`` then ``sigma`` (both idempotent, disjoint domains)."""
    out = {x: apply_subst(sigma, t) for x, t in theta.items()}
    for x, t in sigma.items():
        if x not in out:
            out[x] = t
    return out


def occurs(x: Var, t: Term) -> bool:
    return any(v == x for v in variables(t))


# ---------------------------------------------------------------------------
# Freshness over open terms


def fresh_open(nabla: Iterable[Freshness], a: Name, t: Term) -> frozenset:
    """Reduce a # t to atomic constraints and add them to ``nabla``.

    Raises FreshnessFailure when a # t is refutable.
    """
    out = set(nabla)
    _fresh(a, t, out, (a, t))
    return frozenset(out)


def _fresh(a: Name, t: Term, out: set, goal) -> None:
    if isinstance(t, Name):
        if t == a:
            raise FreshnessFailure(goal, f"{a} occurs free")
    elif isinstance(t, App):
        for u in t.args:
            _fresh(a, u, out, goal)
    elif isinstance(t, Abs):
        if t.name != a:
            _fresh(a, t.body, out, goal)
    elif isinstance(t, Susp):
        out.add(Freshness(perm_inverse(t.perm)(a), t.var))


def solve_freshness(goals: Iterable[Freshness], theta: Mapping[Var, Term] | None = None) -> frozenset:
    """Apply ``theta`` to each goal and reduce; returns the residual atomic context."""
    theta = theta or {}
    out: set = set()
    for g in goals:
        target = g.target
        if isinstance(target, Var):
            target = Susp(IDENTITY, target)
        _fresh(g.name, apply_subst(theta, target), out, (g.name, target))
    return frozenset(out)


def entails(nabla: frozenset, a: Name, t: Term) -> bool:
    """Whether ``nabla`` entails a # t."""
    try:
        residual = fresh_open((), a, t)
    except FreshnessFailure:
        return False
    return residual <= nabla


# ---------------------------------------------------------------------------
# Alpha-equality over open terms


def alpha_eq_open(nabla: Iterable[Freshness], t: Term, u: Term) -> bool:
    """Whether ``nabla`` entails t = u for every respecting ground instance."""
    if sort_of(t) != sort_of(u):
        raise SortError(f"cannot compare sorts {sort_of(t)} and {sort_of(u)}")
    return _aeq_open(frozenset(nabla), t, u)


def _aeq_open(nabla: frozenset, t: Term, u: Term) -> bool:
    if isinstance(t, Name):
        return t == u
    if isinstance(t, Const):
        return isinstance(u, Const) and t.symbol == u.symbol
    if isinstance(t, App):
        if not isinstance(u, App) or t.symbol != u.symbol:
            return False
        return all(_aeq_open(nabla, x, y) for x, y in zip(t.args, u.args))
    if isinstance(t, Abs):
        if not isinstance(u, Abs):
            return False
        if t.name == u.name:
            return _aeq_open(nabla, t.body, u.body)
        return entails(nabla, t.name, u.body) and _aeq_open(
            nabla, t.body, _permute(transposition(t.name, u.name), u.body)
        )
    if isinstance(t, Susp):
        if not isinstance(u, Susp) or u.var != t.var:
            return False
        return all(Freshness(c, t.var) in nabla for c in perm_disagreement(t.perm, u.perm))
    return False


# ---------------------------------------------------------------------------
# Nominal unification


def _rank(eq: tuple[Term, Term]) -> int:
    flex_l, flex_r = isinstance(eq[0], Susp), isinstance(eq[1], Susp)
    return int(flex_l) + int(flex_r)


def unify(t: Term, u: Term, nabla: Iterable[Freshness] = ()) -> Solution:
    """Most general nominal unifier of t and u under ``nabla``."""
    if sort_of(t) != sort_of(u):
        raise SortError(f"cannot unify sorts {sort_of(t)} and {sort_of(u)}")
    return unify_problem([(t, u)], (), nabla)


def unify_problem(
    equations: Iterable[tuple[Term, Term]],
    fresh_goals: Iterable[tuple[Name, Term]] = (),
    nabla: Iterable[Freshness] = (),
) -> Solution:
    """Solve a set of equations and freshness goals together.

    Equations are processed before freshness goals; among equations,
    rigid-rigid before flex-rigid before flex-flex.
    """
    eqs = list(equations)
    fresh: list[tuple[Name, Term]] = list(fresh_goals)
    for c in nabla:
        fresh.append((c.name, Susp(IDENTITY, c.target)))
    theta: dict = {}

    while eqs:
        best, rank = 0, 3
        for i, eq in enumerate(eqs):
            r = _rank(eq)
            if r < rank:
                best, rank = i, r
                if r == 0:
                    break
        t, u = eqs.pop(best)
        if isinstance(t, Susp) and isinstance(u, Susp) and t.var == u.var:
            for c in perm_disagreement(t.perm, u.perm):
                fresh.append((c, Susp(IDENTITY, t.var)))
            continue
        if isinstance(u, Susp) and not isinstance(t, Susp):
            t, u = u, t
        if isinstance(t, Susp):
            x = t.var
            if occurs(x, u):
                raise OccursCheckFailure((t, u), f"{x.ident} occurs in the other side")
            image = permute(perm_inverse(t.perm), u)
            binding = {x: image}
            theta = compose_subst(theta, binding)
            eqs = [(_apply(binding, l), _apply(binding, r)) for l, r in eqs]
            fresh = [(a, _apply(binding, s)) for a, s in fresh]
            continue
        if isinstance(t, Name):
            if t != u:
                raise ClashFailure((t, u), "distinct names")
            continue
        if isinstance(t, Const):
            if not isinstance(u, Const) or u.symbol != t.symbol:
                raise ClashFailure((t, u), "symbol clash")
            continue
        if isinstance(t, App):
            if not isinstance(u, App) or u.symbol != t.symbol:
                raise ClashFailure((t, u), "symbol clash")
            eqs.extend(zip(t.args, u.args))
            continue
        if isinstance(t, Abs):
            if not isinstance(u, Abs):
                raise ClashFailure((t, u), "abstraction against non-abstraction")
            if t.name == u.name:
                eqs.append((t.body, u.body))
            else:
                eqs.append((t.body, _permute(transposition(t.name, u.name), u.body)))
                fresh.append((t.name, u.body))
            continue
        raise ClashFailure((t, u))

    out: set = set()
    for a, s in fresh:
        _fresh(a, s, out, (a, s))
    return Solution(theta, frozenset(out))


def unify_all(pairs: Iterable[tuple[Term, Term]], nabla: Iterable[Freshness] = ()) -> Solution:
    pairs = list(pairs)
    for t, u in pairs:
        if sort_of(t) != sort_of(u):
            raise SortError(f"cannot unify sorts {sort_of(t)} and {sort_of(u)}")
    return unify_problem(pairs, (), nabla)


def restrict_context(nabla: Iterable[Freshness], keep: Iterable[Var]) -> frozenset:
    keep = set(keep)
    return frozenset(c for c in nabla if c.target in keep)
