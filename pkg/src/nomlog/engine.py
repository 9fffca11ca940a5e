"""Depth-first resolution over nominal Horn clauses.

Clause names are new-quantified, so every use of a clause first replaces
them by fresh names. Names in a query are global constants. In the
default (nominal) mode a clause name therefore never unifies with a query
name; the opt-in equivariant mode retries a failed head unification under
injective renamings of the clause names into the names of the goal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Iterable, Iterator, Optional

from .clauses import Atom, Equation, FreshGoal, Goal, HornClause, Program, goal_vars
from .names import DEFAULT_SUPPLY, IDENTITY, Name, NameSupply, Perm
from .terms import Abs, App, Susp, Term, Var, fresh_name, names_in, variables
from .unify import (
    Freshness,
    FreshnessFailure,
    UnificationFailure,
    apply_subst,
    fresh_open,
    unify_problem,
)


class Floundered(RuntimeError):
    """Only freshness goals with an unbound name variable on the left remain."""


# ---------------------------------------------------------------------------
# Renaming clause names and variables


def rename_names(mapping: dict, t: Term) -> Term:
    """Replace names by names everywhere, including binders and suspended swaps."""
    if not mapping:
        return t
    if isinstance(t, Name):
        return mapping.get(t, t)
    if isinstance(t, App):
        return App(t.symbol, tuple(rename_names(mapping, a) for a in t.args))
    if isinstance(t, Abs):
        return Abs(mapping.get(t.name, t.name), rename_names(mapping, t.body))
    if isinstance(t, Susp):
        if not t.perm.swaps:
            return t
        swaps = tuple((mapping.get(a, a), mapping.get(b, b)) for a, b in t.perm.swaps)
        return Susp(Perm(swaps), t.var)
    return t


def rename_vars(mapping: dict, t: Term) -> Term:
    if isinstance(t, Susp):
        new = mapping.get(t.var)
        return t if new is None else Susp(t.perm, new)
    if isinstance(t, App):
        return App(t.symbol, tuple(rename_vars(mapping, a) for a in t.args))
    if isinstance(t, Abs):
        return Abs(t.name, rename_vars(mapping, t.body))
    return t


def map_goal(g: Goal, f) -> Goal:
    if isinstance(g, Atom):
        return Atom(g.pred, tuple(f(a) for a in g.args))
    if isinstance(g, Equation):
        return Equation(f(g.left), f(g.right))
    return FreshGoal(f(g.name), f(g.term))


def rename_clause(c: HornClause, names: dict, vars_: dict) -> HornClause:
    def f(t):
        return rename_names(names, rename_vars(vars_, t))

    return HornClause(
        tuple(names.get(a, a) for a in c.new_names),
        tuple(vars_.get(x, x) for x in c.vars),
        map_goal(c.head, f),
        tuple(map_goal(g, f) for g in c.body),
    )


def freshen_clause(
    c: HornClause,
    avoid: Iterable = (),
    supply: NameSupply = DEFAULT_SUPPLY,
    var_counter=None,
) -> HornClause:
    """Rename every variable apart and replace every clause name by a fresh one."""
    counter = var_counter if var_counter is not None else count(supply.next_id())
    avoid = list(avoid)
    names = {a: fresh_name(a.type, avoid, supply) for a in c.new_names}
    vars_ = {x: Var(f"_G{next(counter)}", x.sort) for x in c.vars}
    return rename_clause(c, names, vars_)


# ---------------------------------------------------------------------------
# Answers


@dataclass(frozen=True)
class Answer:
    """Bindings for the query variables plus the freshness constraints on them."""

    bindings: tuple  # ((Var, Term), ...) in query-variable order
    context: frozenset

    @property
    def subst(self) -> dict:
        return dict(self.bindings)

    def __getitem__(self, ident: str) -> Term:
        for x, t in self.bindings:
            if x.ident == ident:
                return t
        raise KeyError(ident)

    def lines(self, sugar: bool = False) -> list[str]:
        from .syntax import show

        out = [f"{x.ident} = {show(t, sugar)}" for x, t in self.bindings]
        for c in sorted(self.context, key=lambda c: (c.target.ident, c.name.sort_key())):
            out.append(f"{c.name} # {c.target.ident}")
        return out

    def __str__(self) -> str:
        return ", ".join(self.lines()) or "yes"


def _tidy(template: list, answer_terms: list, nabla: frozenset, sig=None) -> Answer:
    """Rename internal variables to _1, _2, ... and keep the relevant constraints."""
    order: dict[Var, None] = {}
    for t in answer_terms:
        for x in variables(t):
            order.setdefault(x, None)
    query_vars = set(template)
    ren: dict[Var, Var] = {}
    k = 1
    for x in order:
        if x in query_vars:
            continue
        ren[x] = Var(f"_{k}", x.sort)
        k += 1
    terms = [rename_vars(ren, t) for t in answer_terms]
    ctx = frozenset(
        Freshness(c.name, ren.get(c.target, c.target))
        for c in nabla
        if c.target in order and (sig is None or sig.may_contain(c.target.sort, c.name.type))
    )
    return Answer(tuple(zip(template, terms)), ctx)


def answer_key(ans: Answer):
    """Identifies answers equal up to alpha-renaming and renaming of variables."""
    from .enumerate import alpha_key

    ren: dict[Var, str] = {}
    for _, t in ans.bindings:
        for x in variables(t):
            ren.setdefault(x, f"v{len(ren)}")
    terms = tuple(alpha_key(rename_vars({x: Var(n, x.sort) for x, n in ren.items()}, t)) for _, t in ans.bindings)
    ctx = frozenset((c.name, ren.get(c.target, c.target.ident)) for c in ans.context)
    return terms, ctx


# ---------------------------------------------------------------------------
# Search


@dataclass
class _State:
    goals: tuple  # ((goal, depth), ...)
    answers: tuple  # current images of the query variables
    nabla: frozenset


class Search:
    """A lazy stream of answers.

    After iteration, ``exhausted`` tells whether some branch was cut by the
    depth limit; an empty stream with ``exhausted`` unset is a finite failure.
    """

    def __init__(
        self,
        program: Program,
        goals: list,
        depth_limit: int = 50,
        equivariant: bool = False,
        max_answers: Optional[int] = None,
        supply: NameSupply = DEFAULT_SUPPLY,
    ):
        self.program = program
        self.goals = list(goals)
        self.depth_limit = depth_limit
        self.equivariant = equivariant
        self.max_answers = max_answers
        self.supply = supply
        self.exhausted = False
        self.complete = False
        self.steps = 0
        self._vars = count()
        self._template = goal_vars(self.goals)
        self._iter: Optional[Iterator[Answer]] = None

    def __iter__(self) -> Iterator[Answer]:
        if self._iter is None:
            self._iter = self._run()
        return self._iter

    def all(self) -> list[Answer]:
        return list(self)

    def first(self) -> Optional[Answer]:
        return next(iter(self), None)

    def _run(self) -> Iterator[Answer]:
        seen = set()
        produced = 0
        start = _State(
            tuple((g, 0) for g in self.goals),
            tuple(Susp(IDENTITY, x) for x in self._template),
            frozenset(),
        )
        for st in self._solve(start):
            ans = _tidy(self._template, list(st.answers), st.nabla, self.program.signature)
            if self.equivariant:
                key = answer_key(ans)
                if key in seen:
                    continue
                seen.add(key)
            yield ans
            produced += 1
            if self.max_answers is not None and produced >= self.max_answers:
                return
        self.complete = True

    # the search proper, as an explicit stack so deep proofs do not hit recursion limits
    def _solve(self, start: _State) -> Iterator[_State]:
        stack: list[Iterator[_State]] = [iter((start,))]
        while stack:
            st = next(stack[-1], None)
            if st is None:
                stack.pop()
                continue
            if not st.goals:
                yield st
                continue
            stack.append(self._expand(st))

    def _expand(self, st: _State) -> Iterator[_State]:
        self.steps += 1
        idx = self._select(st.goals)
        if idx is None:
            raise Floundered(
                "freshness goals with an unbound name variable on the left: "
                + ", ".join(_show_goal(g) for g, _ in st.goals)
            )
        (goal, depth) = st.goals[idx]
        rest = st.goals[:idx] + st.goals[idx + 1 :]
        if isinstance(goal, Atom):
            yield from self._resolve(goal, depth, rest, st)
            return
        if isinstance(goal, Equation):
            try:
                sol = unify_problem([(goal.left, goal.right)], (), st.nabla)
            except UnificationFailure:
                return
            yield self._commit(sol.subst, sol.context, (), rest, st)
            return
        try:
            nabla = fresh_open(st.nabla, goal.name, goal.term)
        except FreshnessFailure:
            return
        yield _State(rest, st.answers, nabla)

    @staticmethod
    def _select(goals) -> Optional[int]:
        for i, (g, _) in enumerate(goals):
            if isinstance(g, FreshGoal) and not isinstance(g.name, Name):
                continue
            return i
        return None

    def _commit(self, theta, nabla, new_goals, rest, st: _State) -> _State:
        def sub(t):
            return apply_subst(theta, t)

        goals = tuple(new_goals) + tuple((map_goal(g, sub), d) for g, d in rest)
        return _State(goals, tuple(sub(t) for t in st.answers), nabla)

    def _resolve(self, goal: Atom, depth: int, rest, st: _State) -> Iterator[_State]:
        if depth >= self.depth_limit:
            self.exhausted = True
            return
        for clause in self.program.clauses_for(goal.pred):
            c = freshen_clause(clause, (), self.supply, self._vars)
            sol = self._unify_head(goal, c, st.nabla)
            if sol is not None:
                body = tuple((g, depth + 1) for g in c.body)
                yield self._commit(sol[0], sol[1], tuple((map_goal(g, lambda t: apply_subst(sol[0], t)), d) for g, d in body), rest, st)
                continue
            if not self.equivariant or not c.new_names:
                continue
            for mapping in _renamings(c.new_names, goal):
                rc = rename_clause(c, mapping, {})
                sol = self._unify_head(goal, rc, st.nabla)
                if sol is None:
                    continue
                body = tuple((map_goal(g, lambda t, th=sol[0]: apply_subst(th, t)), depth + 1) for g in rc.body)
                yield self._commit(sol[0], sol[1], body, rest, st)

    @staticmethod
    def _unify_head(goal: Atom, c: HornClause, nabla):
        try:
            sol = unify_problem(list(zip(goal.args, c.head.args)), (), nabla)
        except UnificationFailure:
            return None
        return sol.subst, sol.context


def _renamings(clause_names, goal: Atom) -> Iterator[dict]:
    """Injective maps from clause names into the goal's names, each name possibly kept.

    The all-keep map is skipped since plain unification already tried it.
    """
    support = set()
    for t in goal.args:
        support |= names_in(t)
    targets = sorted(support, key=Name.sort_key)
    names = list(clause_names)
    k = len(names)
    options = [[None] + [b for b in targets if b.type == a.type] for a in names]

    def rec(i: int, used: set, acc: dict):
        if i == k:
            if acc:
                yield dict(acc)
            return
        for b in options[i]:
            if b is None:
                yield from rec(i + 1, used, acc)
            elif b not in used:
                acc[names[i]] = b
                used.add(b)
                yield from rec(i + 1, used, acc)
                used.discard(b)
                del acc[names[i]]

    yield from rec(0, set(), {})


def _show_goal(g) -> str:
    from .syntax import show_goal

    return show_goal(g)


def solve(
    program: Program,
    goals,
    depth_limit: int = 50,
    equivariant: bool = False,
    max_answers: Optional[int] = None,
    supply: NameSupply = DEFAULT_SUPPLY,
) -> Search:
    """Answers to a conjunction of goals, in depth-first clause order.

    ``goals`` may be a goal, a list of goals, or query text.
    """
    if isinstance(goals, str):
        from .syntax import parse_goals

        goals = parse_goals(goals, program.signature, warn=False, supply=supply)
    elif isinstance(goals, (Atom, Equation, FreshGoal)):
        goals = [goals]
    return Search(program, goals, depth_limit, equivariant, max_answers, supply)


def ground_answer_atoms(goals, answer: Answer) -> list:
    """Instantiate the query goals with an answer (variables may remain)."""
    theta = {x: t for x, t in answer.bindings}
    return [map_goal(g, lambda t: apply_subst(theta, t)) for g in goals]


__all__ = [
    "Answer",
    "Floundered",
    "Search",
    "answer_key",
    "freshen_clause",
    "ground_answer_atoms",
    "rename_clause",
    "rename_names",
    "rename_vars",
    "solve",
]
