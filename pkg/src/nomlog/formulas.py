"""First-order formulas with the new-quantifier.

The primitive connectives are atoms, implication, falsity, the universal
quantifier and the new-quantifier; the rest are derived and kept as their
own nodes only so they print the way they were written.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .clauses import Atom, Equation, FreshGoal, goal_terms
from .names import Name, Perm
from .terms import Sort, Var, names_in, permute, variables


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class New:
    """The new-quantifier; binds a name directly, so it may appear in swaps and binders."""

    name: Name
    body: "Formula"


Formula = Union[Atom, Equation, FreshGoal, Bot, Top, Implies, Not, And, Or, Iff, Forall, Exists, New]
_ATOMIC = (Atom, Equation, FreshGoal)
_BINARY = (Implies, And, Or, Iff)


def map_terms(phi: Formula, f) -> Formula:
    """Apply ``f`` to every term of every atomic subformula."""
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(f(t) for t in phi.args))
    if isinstance(phi, Equation):
        return Equation(f(phi.left), f(phi.right))
    if isinstance(phi, FreshGoal):
        return FreshGoal(f(phi.name), f(phi.term))
    if isinstance(phi, (Bot, Top)):
        return phi
    if isinstance(phi, Not):
        return Not(map_terms(phi.body, f))
    if isinstance(phi, _BINARY):
        return type(phi)(map_terms(phi.left, f), map_terms(phi.right, f))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, map_terms(phi.body, f))
    if isinstance(phi, New):
        return New(phi.name, map_terms(phi.body, f))
    raise TypeError(f"not a formula: {phi!r}")


def permute_formula(pi: Perm, phi: Formula) -> Formula:
    if not pi.swaps:
        return phi
    if isinstance(phi, New):
        return New(pi(phi.name), permute_formula(pi, phi.body))
    if isinstance(phi, Not):
        return Not(permute_formula(pi, phi.body))
    if isinstance(phi, _BINARY):
        return type(phi)(permute_formula(pi, phi.left), permute_formula(pi, phi.right))
    if isinstance(phi, (Forall, Exists)):
        return type(phi)(phi.var, permute_formula(pi, phi.body))
    return map_terms(phi, lambda t: permute(pi, t))


def subformulas(phi: Formula):
    yield phi
    if isinstance(phi, (Not, Forall, Exists, New)):
        yield from subformulas(phi.body)
    elif isinstance(phi, _BINARY):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)


def formula_names(phi: Formula) -> set[Name]:
    """Every name mentioned in ``phi``, including names bound by new."""
    out: set[Name] = set()
    for sub in subformulas(phi):
        if isinstance(sub, _ATOMIC):
            for t in goal_terms(sub):
                out |= names_in(t)
        elif isinstance(sub, New):
            out.add(sub.name)
    return out


def free_vars(phi: Formula) -> set[Var]:
    if isinstance(phi, _ATOMIC):
        out: set[Var] = set()
        for t in goal_terms(phi):
            out.update(variables(t))
        return out
    if isinstance(phi, (Bot, Top)):
        return set()
    if isinstance(phi, (Not, New)):
        return free_vars(phi.body)
    if isinstance(phi, _BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def is_closed(phi: Formula) -> bool:
    return not free_vars(phi)


def quantifier_sort(phi: Union[Forall, Exists]) -> Sort:
    return phi.var.sort


__all__ = [
    "Atom",
    "Equation",
    "FreshGoal",
    "Bot",
    "Top",
    "Implies",
    "Not",
    "And",
    "Or",
    "Iff",
    "Forall",
    "Exists",
    "New",
    "Formula",
    "map_terms",
    "permute_formula",
    "formula_names",
    "free_vars",
    "is_closed",
]
