"""Goals, nominal Horn clauses and programs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .names import Name, NameType
from .terms import (
    NameSort,
    PredSymbol,
    Signature,
    SortError,
    Susp,
    Term,
    Var,
    names_in,
    sort_of,
    variables,
)


@dataclass(frozen=True, slots=True)
class Atom:
    pred: PredSymbol
    args: tuple

    def __post_init__(self) -> None:
        want = self.pred.args
        if len(want) != len(self.args):
            raise SortError(f"{self.pred} expects {len(want)} arguments, got {len(self.args)}")
        for i, (arg, s) in enumerate(zip(self.args, want)):
            got = sort_of(arg)
            if got != s:
                raise SortError(f"argument {i + 1} of {self.pred}: expected sort {s}, got {got}")


@dataclass(frozen=True, slots=True)
class Equation:
    left: Term
    right: Term

    def __post_init__(self) -> None:
        if sort_of(self.left) != sort_of(self.right):
            raise SortError(f"equation between sorts {sort_of(self.left)} and {sort_of(self.right)}")


@dataclass(frozen=True, slots=True)
class FreshGoal:
    """``name # term``; the name side is a name or a name-sorted variable."""

    name: Term
    term: Term

    def __post_init__(self) -> None:
        if not isinstance(sort_of(self.name), NameSort) or not isinstance(self.name, (Name, Susp)):
            raise SortError(f"left side of # must be a name, got sort {sort_of(self.name)}")


Goal = Union[Atom, Equation, FreshGoal]


def goal_terms(g: Goal) -> tuple:
    if isinstance(g, Atom):
        return g.args
    if isinstance(g, Equation):
        return (g.left, g.right)
    return (g.name, g.term)


def goal_vars(goals) -> list[Var]:
    seen: dict[Var, None] = {}
    for g in goals:
        for t in goal_terms(g):
            for v in variables(t):
                seen.setdefault(v, None)
    return list(seen)


def goal_names(goals) -> set[Name]:
    out: set[Name] = set()
    for g in goals:
        for t in goal_terms(g):
            out |= names_in(t)
    return out


@dataclass(frozen=True)
class HornClause:
    """``new_names`` are read as new-quantified, ``vars`` as universally quantified."""

    new_names: tuple
    vars: tuple
    head: Atom
    body: tuple = ()

    @staticmethod
    def build(head: Atom, body=()) -> "HornClause":
        body = tuple(body)
        names = sorted(goal_names((head,) + body), key=Name.sort_key)
        return HornClause(tuple(names), tuple(goal_vars((head,) + body)), head, body)


@dataclass
class Program:
    signature: Signature
    clauses: list = field(default_factory=list)

    def clauses_for(self, pred: PredSymbol) -> list[HornClause]:
        return [c for c in self.clauses if c.head.pred == pred]

    def nametypes(self) -> list[NameType]:
        return list(self.signature.nametypes.values())

    def __len__(self) -> int:
        return len(self.clauses)
