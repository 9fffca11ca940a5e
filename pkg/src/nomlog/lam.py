"""Untyped lambda-terms as nominal terms over var/lam/app.

Capture-avoiding substitution, beta and eta steps, fueled normalization,
normalization by evaluation, and conversion to de Bruijn form.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .names import DEFAULT_SUPPLY, Name, NameSupply, NameType, transposition
from .terms import (
    Abs,
    AbsSort,
    App,
    DataSort,
    NameSort,
    Signature,
    SortError,
    Term,
    _raw_app,
    fresh_ground,
    fresh_name,
    permute,
    sort_of,
)


def lambda_signature() -> Signature:
    """Name-type var; data types exp and ty; var, lam, app, arr and the base type o."""
    sig = Signature()
    var_t = sig.nametype("var")
    exp = sig.datatype("exp")
    ty = sig.datatype("ty")
    sig.declare_func("var", [NameSort(var_t)], exp)
    sig.declare_func("lam", [AbsSort(var_t, exp)], exp)
    sig.declare_func("app", [exp, exp], exp)
    sig.declare_func("arr", [ty, ty], ty)
    sig.declare_func("o", [], ty)
    return sig


LAMBDA_SIG = lambda_signature()
VAR_TYPE: NameType = LAMBDA_SIG.nametypes["var"]
EXP = DataSort("exp")
VAR = LAMBDA_SIG.funcs["var"]
LAM = LAMBDA_SIG.funcs["lam"]
APP = LAMBDA_SIG.funcs["app"]


def v(a: Name) -> App:
    return App(VAR, (a,))


def lam(a: Name, body: Term) -> App:
    return App(LAM, (Abs(a, body),))


def app(f: Term, x: Term) -> App:
    return App(APP, (f, x))


def _kind(t: Term) -> str:
    if isinstance(t, App):
        name = t.symbol.name
        if name in ("var", "lam", "app"):
            return name
    raise TypeError(f"not a ground lambda-term: {t!r}")


# ---------------------------------------------------------------------------
# Substitution


def subst_fun(m: Term, a: Name, n: Term, supply: NameSupply = DEFAULT_SUPPLY) -> Term:
    """m{a := n}. A binder is renamed only when it is a or not fresh for n."""
    if sort_of(n) != EXP or sort_of(m) != EXP:
        raise SortError("subst_fun needs two exp terms")
    return _subst(m, a, n, supply)


def _subst(m: Term, a: Name, n: Term, supply: NameSupply) -> Term:
    k = _kind(m)
    if k == "var":
        return n if m.args[0] == a else m
    if k == "app":
        return _raw_app(m.symbol, (_subst(m.args[0], a, n, supply), _subst(m.args[1], a, n, supply)))
    ab = m.args[0]
    b, body = ab.name, ab.body
    if b == a or not fresh_ground(b, n):
        b2 = fresh_name(b.type, (m, n, a), supply)
        body = permute(transposition(b, b2), body)
        b = b2
    return _raw_app(m.symbol, (Abs(b, _subst(body, a, n, supply)),))


# ---------------------------------------------------------------------------
# Reduction


def beta_step(t: Term, supply: NameSupply = DEFAULT_SUPPLY) -> Optional[Term]:
    """Contract the leftmost-outermost beta-redex, or None if t is beta-normal."""
    k = _kind(t)
    if k == "var":
        return None
    if k == "lam":
        ab = t.args[0]
        body = beta_step(ab.body, supply)
        return None if body is None else App(t.symbol, (Abs(ab.name, body),))
    f, x = t.args
    if _kind(f) == "lam":
        ab = f.args[0]
        return subst_fun(ab.body, ab.name, x, supply)
    f2 = beta_step(f, supply)
    if f2 is not None:
        return App(t.symbol, (f2, x))
    x2 = beta_step(x, supply)
    return None if x2 is None else App(t.symbol, (f, x2))


def eta_step(t: Term) -> Optional[Term]:
    """Contract the leftmost-outermost eta-redex lam(<a>app(M, var(a))) with a # M."""
    k = _kind(t)
    if k == "var":
        return None
    if k == "lam":
        ab = t.args[0]
        a, body = ab.name, ab.body
        if _kind(body) == "app":
            m, arg = body.args
            if _kind(arg) == "var" and arg.args[0] == a and fresh_ground(a, m):
                return m
        inner = eta_step(body)
        return None if inner is None else App(t.symbol, (Abs(a, inner),))
    f, x = t.args
    f2 = eta_step(f)
    if f2 is not None:
        return App(t.symbol, (f2, x))
    x2 = eta_step(x)
    return None if x2 is None else App(t.symbol, (f, x2))


def normalize(t: Term, fuel: int = 1000, eta: bool = True, supply: NameSupply = DEFAULT_SUPPLY) -> Optional[Term]:
    """Beta steps to beta-normal form, then eta steps; None if ``fuel`` steps do not suffice."""
    while fuel >= 0:
        nxt = beta_step(t, supply)
        if nxt is None and eta:
            nxt = eta_step(t)
        if nxt is None:
            return t
        t = nxt
        fuel -= 1
    return None


def beta_normalize(t: Term, fuel: int = 1000, supply: NameSupply = DEFAULT_SUPPLY) -> Optional[Term]:
    return normalize(t, fuel, eta=False, supply=supply)


# ---------------------------------------------------------------------------
# Normalization by evaluation


class NbeExhausted(RuntimeError):
    """The evaluator ran past its step budget; the term is probably not normalizing."""


@dataclass(frozen=True, slots=True)
class Fun:
    f: Callable[[Callable[[], "Sem"]], "Sem"]


@dataclass(frozen=True, slots=True)
class Neu:
    n: "Neutral"


@dataclass(frozen=True, slots=True)
class NVar:
    name: Name


@dataclass(frozen=True, slots=True)
class NApp:
    head: "Neutral"
    arg: "Sem"


Sem = Union[Fun, Neu]
Neutral = Union[NVar, NApp]


class _Nbe:
    def __init__(self, budget: int, supply: NameSupply):
        self.budget = budget
        self.supply = supply

    def tick(self) -> None:
        self.budget -= 1
        if self.budget < 0:
            raise NbeExhausted("evaluation budget exhausted")

    def reify(self, d: Sem) -> Term:
        self.tick()
        if isinstance(d, Fun):
            x = fresh_name(VAR_TYPE, (), self.supply)
            return lam(x, self.reify(d.f(lambda: Neu(NVar(x)))))
        return self.reifyn(d.n)

    def reifyn(self, n: Neutral) -> Term:
        if isinstance(n, NVar):
            return v(n.name)
        return app(self.reifyn(n.head), self.reify(n.arg))

    def evals(self, env, t: Term) -> Sem:
        self.tick()
        k = _kind(t)
        if k == "var":
            y = t.args[0]
            while env is not None:
                (x, thunk), env = env
                if x == y:
                    return thunk()
            return Neu(NVar(y))
        if k == "lam":
            ab = t.args[0]
            x, body = ab.name, ab.body
            return Fun(lambda th, env=env: self.evals(((x, th), env), body))
        t1, t2 = t.args
        d = self.evals(env, t1)
        if isinstance(d, Fun):
            return d.f(lambda: self.evals(env, t2))
        return Neu(NApp(d.n, self.evals(env, t2)))


def nbe_normalize(t: Term, budget: int = 200_000, supply: NameSupply = DEFAULT_SUPPLY) -> Term:
    """Evaluate into semantic values and reify back, generating fresh binder names.

    Raises NbeExhausted when the step budget (or the interpreter stack) runs out.
    """
    nbe = _Nbe(budget, supply)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20_000))
    try:
        return nbe.reify(nbe.evals(None, t))
    except RecursionError:
        raise NbeExhausted("evaluation nested too deeply") from None
    finally:
        sys.setrecursionlimit(limit)


# ---------------------------------------------------------------------------
# de Bruijn form


@dataclass(frozen=True, slots=True)
class Index:
    n: int

    def __str__(self) -> str:
        return str(self.n)


@dataclass(frozen=True, slots=True)
class Lambda:
    body: "DeBruijn"

    def __str__(self) -> str:
        return f"λ{self.body}"


@dataclass(frozen=True, slots=True)
class Apply:
    fun: "DeBruijn"
    arg: "DeBruijn"

    def __str__(self) -> str:
        return f"({self.fun} {self.arg})"


@dataclass(frozen=True, slots=True)
class Free:
    name: Name

    def __str__(self) -> str:
        return str(self.name)


DeBruijn = Union[Index, Lambda, Apply, Free]


def to_debruijn(t: Term, _env: tuple = ()) -> DeBruijn:
    """Bound occurrences become 1-based indices counting enclosing lambdas."""
    k = _kind(t)
    if k == "var":
        a = t.args[0]
        for i, b in enumerate(_env):
            if a == b:
                return Index(i + 1)
        return Free(a)
    if k == "lam":
        ab = t.args[0]
        return Lambda(to_debruijn(ab.body, (ab.name,) + _env))
    return Apply(to_debruijn(t.args[0], _env), to_debruijn(t.args[1], _env))


def lam_size(t: Term) -> int:
    """Number of var, lam and app nodes."""
    k = _kind(t)
    if k == "var":
        return 1
    if k == "lam":
        return 1 + lam_size(t.args[0].body)
    return 1 + lam_size(t.args[0]) + lam_size(t.args[1])
