"""Independent checkers and generators shared by the test modules."""

from __future__ import annotations

import random
from itertools import product
from pathlib import Path

from nomlog.enumerate import GroundTerms, alpha_key
from nomlog.lam import VAR_TYPE
from nomlog.names import IDENTITY, Name, Perm
from nomlog.terms import Abs, AbsSort, App, Const, NameSort, Signature, Susp, Var, alpha_eq_ground, fresh_ground
from nomlog.unify import apply_subst

PROGRAMS = Path(__file__).resolve().parent.parent / "programs"

LAM_NAMES = [Name(VAR_TYPE, i, label) for i, label in enumerate("abc", start=1)]


def program_text(name: str) -> str:
    return (PROGRAMS / name).read_text()


def skeleton(t):
    """Shape of a term with every name forgotten."""
    if isinstance(t, App):
        return (t.symbol.name,) + tuple(skeleton(a) for a in t.args)
    if isinstance(t, Abs):
        return ("<>", skeleton(t.body))
    if isinstance(t, Const):
        return t.symbol.name
    return "."


def db_skeleton(d):
    from nomlog.lam import Apply, Lambda

    if isinstance(d, Lambda):
        return ("lam", ("<>", db_skeleton(d.body)))
    if isinstance(d, Apply):
        return ("app", db_skeleton(d.fun), db_skeleton(d.arg))
    return ("var", ".")  # an index or a free name


# ---------------------------------------------------------------------------
# A small signature for random unification problems


class Small:
    """nametype n; d ::= k | v(n) | f(d, d) | l(<n>d)."""

    def __init__(self):
        sig = Signature()
        self.nt = sig.nametype("n")
        self.d = sig.datatype("d")
        self.k = sig.declare_func("k", [], self.d)
        self.v = sig.declare_func("v", [NameSort(self.nt)], self.d)
        self.f = sig.declare_func("f", [self.d, self.d], self.d)
        self.l = sig.declare_func("l", [AbsSort(self.nt, self.d)], self.d)
        self.sig = sig
        self.names = [Name(self.nt, i, label) for i, label in enumerate("abc", start=1)]
        self.vars = [Var("X", self.d), Var("Y", self.d)]
        self.ground = GroundTerms(sig, {self.nt: self.names})

    def name(self, a):
        return App(self.v, (a,))

    def lam(self, a, body):
        return App(self.l, (Abs(a, body),))

    def universe(self, depth: int):
        return self.ground.terms(self.d, depth)

    def random_perm(self, rnd: random.Random) -> Perm:
        swaps = []
        for _ in range(rnd.randint(0, 2)):
            a, b = rnd.sample(self.names, 2)
            swaps.append((a, b))
        return Perm(tuple(swaps))

    def random_term(self, rnd: random.Random, depth: int, var_weight: float = 0.3):
        if depth == 0 or rnd.random() < 0.2:
            r = rnd.random()
            if r < var_weight:
                return Susp(self.random_perm(rnd), rnd.choice(self.vars))
            if r < var_weight + 0.2:
                return Const(self.k)
            return App(self.v, (rnd.choice(self.names),))
        r = rnd.random()
        if r < 0.45:
            return App(self.f, (self.random_term(rnd, depth - 1, var_weight), self.random_term(rnd, depth - 1, var_weight)))
        return App(self.l, (Abs(rnd.choice(self.names), self.random_term(rnd, depth - 1, var_weight)),))

    def mutate(self, rnd: random.Random, t):
        """A nearby term: names swapped, subterms replaced by suspensions or kept."""
        if isinstance(t, App) and rnd.random() < 0.8:
            if t.symbol == self.l:
                ab = t.args[0]
                name = ab.name if rnd.random() < 0.5 else rnd.choice(self.names)
                return App(self.l, (Abs(name, self.mutate(rnd, ab.body)),))
            if t.symbol == self.f:
                return App(self.f, tuple(self.mutate(rnd, a) for a in t.args))
        r = rnd.random()
        if r < 0.35:
            return Susp(self.random_perm(rnd), rnd.choice(self.vars))
        if r < 0.5:
            return self.random_term(rnd, 1)
        return t

    def problem(self, rnd: random.Random, depth: int = 3):
        t = self.random_term(rnd, depth)
        u = self.mutate(rnd, t) if rnd.random() < 0.7 else self.random_term(rnd, depth)
        return t, u


def vars_of(*terms) -> list:
    from nomlog.terms import variables

    out = []
    for t in terms:
        for x in variables(t):
            if x not in out:
                out.append(x)
    return out


def valuations(xs, pool):
    for values in product(pool, repeat=len(xs)):
        yield {x: v for x, v in zip(xs, values)}


def respects(rho: dict, nabla) -> bool:
    return all(c.target not in rho or fresh_ground(c.name, rho[c.target]) for c in nabla)


def ground_solutions(t, u, pool):
    """Every valuation from ``pool`` that makes t and u alpha-equal."""
    xs = vars_of(t, u)
    return [rho for rho in valuations(xs, pool) if alpha_eq_ground(apply_subst(rho, t), apply_subst(rho, u))]


def check_unifier(t, u, sol, pool):
    """Soundness over ``pool`` and the alpha-keys of every ground instance of the answer.

    Returns (counterexample or None, keys); keys are tuples over the variables of t, u.
    """
    xs = vars_of(t, u)
    images = [apply_subst(sol.subst, Susp(IDENTITY, x)) for x in xs]
    lhs, rhs = apply_subst(sol.subst, t), apply_subst(sol.subst, u)
    rest = vars_of(*images, lhs, rhs)
    keys = set()
    for rho in valuations(rest, pool):
        if not respects(rho, sol.context):
            continue
        if not alpha_eq_ground(apply_subst(rho, lhs), apply_subst(rho, rhs)):
            return rho, keys
        keys.add(tuple(alpha_key(apply_subst(rho, im)) for im in images))
    return None, keys


def solution_key(rho: dict, xs) -> tuple:
    return tuple(alpha_key(rho[x]) for x in xs)


def all_perms(names) -> list[Perm]:
    """One permutation for each bijection of ``names``."""
    from itertools import permutations

    from nomlog.names import perm_compose, transposition

    out = []
    for image in permutations(names):
        pi = IDENTITY
        for src, dst in zip(names, image):
            if pi(src) != dst:
                pi = perm_compose(transposition(pi(src), dst), pi)
        out.append(pi)
    return out
