"""Sorts, signatures and nominal terms, with the ground judgments.

Terms are immutable trees built from names, suspended variables ``pi.X``,
constants, function applications and single-name abstractions ``<a>t``.
Every constructor checks sorts, so an ill-sorted term cannot exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .names import (
    DEFAULT_SUPPLY,
    IDENTITY,
    Name,
    NameSupply,
    NameType,
    Perm,
    perm_compose,
    transposition,
)


class SortError(TypeError):
    pass


class OpenTermError(ValueError):
    """A ground-only judgment received a term with variables."""

    def __init__(self, what: str = "open term"):
        super().__init__(f"{what} - use the constraint solver for open terms")


# ---------------------------------------------------------------------------
# Sorts


@dataclass(frozen=True, slots=True)
class NameSort:
    nametype: NameType

    def __str__(self) -> str:
        return self.nametype.ident


@dataclass(frozen=True, slots=True)
class DataSort:
    ident: str
    params: tuple = ()

    def __str__(self) -> str:
        if self.ident == "*" and len(self.params) == 2:
            left, right = self.params
            ls = f"({left})" if _is_product(left) else str(left)
            return f"{ls} * {right}"
        if self.params:
            return f"{self.ident}({', '.join(map(str, self.params))})"
        return self.ident


@dataclass(frozen=True, slots=True)
class AbsSort:
    nametype: NameType
    body: "Sort"

    def __str__(self) -> str:
        return f"<{self.nametype}>{self.body}"


Sort = Union[NameSort, DataSort, AbsSort]


def _is_product(s: Sort) -> bool:
    return isinstance(s, DataSort) and s.ident == "*"


def list_sort(elem: Sort) -> DataSort:
    return DataSort("list", (elem,))


def product_sort(left: Sort, right: Sort) -> DataSort:
    return DataSort("*", (left, right))


# ---------------------------------------------------------------------------
# Symbols and signatures


@dataclass(frozen=True, slots=True)
class FuncSymbol:
    name: str
    args: tuple[Sort, ...]
    result: DataSort

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class PredSymbol:
    name: str
    args: tuple[Sort, ...]

    def __str__(self) -> str:
        return self.name


# builtin polymorphic constructors, instantiated per element sort
NIL, CONS, PAIR = "[]", "[|]", "(,)"


def nil_symbol(elem: Sort) -> FuncSymbol:
    return FuncSymbol(NIL, (), list_sort(elem))


def cons_symbol(elem: Sort) -> FuncSymbol:
    return FuncSymbol(CONS, (elem, list_sort(elem)), list_sort(elem))


def pair_symbol(left: Sort, right: Sort) -> FuncSymbol:
    return FuncSymbol(PAIR, (left, right), product_sort(left, right))


class Signature:
    """A language: name-types, data-types, function and relation symbols.

    Also records the declared names (label -> Name), since programs declare
    the name constants they use.
    """

    def __init__(self):
        self.nametypes: dict[str, NameType] = {}
        self.datatypes: set[str] = set()
        self.funcs: dict[str, FuncSymbol] = {}
        self.preds: dict[str, PredSymbol] = {}
        self.names: dict[str, Name] = {}

    def copy(self) -> Signature:
        new = Signature()
        new.nametypes = dict(self.nametypes)
        new.datatypes = set(self.datatypes)
        new.funcs = dict(self.funcs)
        new.preds = dict(self.preds)
        new.names = dict(self.names)
        return new

    def _check_fresh_ident(self, ident: str) -> None:
        if ident in self.funcs or ident in self.preds or ident in self.names:
            raise SortError(f"symbol {ident!r} already declared")

    def nametype(self, ident: str) -> NameType:
        if ident in self.datatypes:
            raise SortError(f"{ident!r} is a data type, not a name type")
        if ident not in self.nametypes:
            self.nametypes[ident] = NameType(ident)
        return self.nametypes[ident]

    def datatype(self, ident: str) -> DataSort:
        if ident in self.nametypes:
            raise SortError(f"{ident!r} is a name type, not a data type")
        self.datatypes.add(ident)
        return DataSort(ident)

    def declare_func(self, name: str, args: Iterable[Sort], result: Sort) -> FuncSymbol:
        if not isinstance(result, DataSort):
            raise SortError(f"function {name} must have a data sort as result, not {result}")
        self._check_fresh_ident(name)
        sym = FuncSymbol(name, tuple(args), result)
        self.funcs[name] = sym
        return sym

    def declare_pred(self, name: str, args: Iterable[Sort]) -> PredSymbol:
        if name in self.preds:
            raise SortError(f"relation {name!r} already declared")
        sym = PredSymbol(name, tuple(args))
        self.preds[name] = sym
        return sym

    def declare_name(self, label: str, nametype: NameType, supply: NameSupply = DEFAULT_SUPPLY) -> Name:
        if label in self.names:
            if self.names[label].type != nametype:
                raise SortError(f"name {label} already declared with type {self.names[label].type}")
            return self.names[label]
        self._check_fresh_ident(label)
        a = Name(nametype, supply.next_id(), label)
        self.names[label] = a
        return a

    def constructors(self, sort: DataSort) -> list[FuncSymbol]:
        """Function symbols (including builtins) whose result is ``sort``."""
        if sort.ident == "list" and len(sort.params) == 1:
            return [nil_symbol(sort.params[0]), cons_symbol(sort.params[0])]
        if sort.ident == "*" and len(sort.params) == 2:
            return [pair_symbol(*sort.params)]
        return [f for f in self.funcs.values() if f.result == sort]

    def may_contain(self, sort: Sort, nt: NameType) -> bool:
        """Whether some ground term of ``sort`` can have a name of type ``nt`` free."""
        seen: set = set()

        def rec(s) -> bool:
            if isinstance(s, NameSort):
                return s.nametype == nt
            if isinstance(s, AbsSort):
                return rec(s.body)
            if s in seen:
                return False
            seen.add(s)
            return any(rec(a) for f in self.constructors(s) for a in f.args)

        return rec(sort)

    def __repr__(self) -> str:
        return (
            f"Signature(nametypes={sorted(self.nametypes)}, datatypes={sorted(self.datatypes)}, "
            f"funcs={sorted(self.funcs)}, preds={sorted(self.preds)})"
        )


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True, slots=True)
class Var:
    ident: str
    sort: Sort

    def __str__(self) -> str:
        return self.ident


@dataclass(frozen=True, slots=True)
class Susp:
    """A variable under a suspended permutation; the permutation is kept canonical."""

    perm: Perm
    var: Var

    def __post_init__(self) -> None:
        if self.perm.swaps:
            norm = self.perm.normalized()
            if norm is not self.perm:
                object.__setattr__(self, "perm", norm)
            if isinstance(self.var.sort, NameSort):
                # swaps of another name-type act trivially on names of this type
                nt = self.var.sort.nametype
                if any(a.type != nt for a, _ in self.perm.swaps):
                    object.__setattr__(self, "perm", _restrict(self.perm, nt))


def _restrict(pi: Perm, nt: NameType) -> Perm:
    return Perm(tuple((a, b) for a, b in pi.swaps if a.type == nt))


@dataclass(frozen=True, slots=True)
class Const:
    symbol: FuncSymbol

    def __post_init__(self) -> None:
        if self.symbol.args:
            raise SortError(f"{self.symbol} expects {len(self.symbol.args)} arguments, got 0")


@dataclass(frozen=True, slots=True)
class App:
    symbol: FuncSymbol
    args: tuple

    def __post_init__(self) -> None:
        expected = self.symbol.args
        if len(expected) != len(self.args) or not expected:
            raise SortError(f"{self.symbol} expects {len(expected)} arguments, got {len(self.args)}")
        for i, (arg, want) in enumerate(zip(self.args, expected)):
            got = sort_of(arg)
            if got != want:
                raise SortError(f"argument {i + 1} of {self.symbol}: expected sort {want}, got {got}")


@dataclass(frozen=True, slots=True)
class Abs:
    name: Name
    body: "Term"


Term = Union[Name, Susp, Const, App, Abs]


def var(ident: str, sort: Sort) -> Susp:
    return Susp(IDENTITY, Var(ident, sort))


def mk(symbol: FuncSymbol, *args: Term) -> Term:
    """Apply a symbol, producing a Const for nullary symbols."""
    return App(symbol, tuple(args)) if args else Const(symbol)


def _raw_app(symbol: FuncSymbol, args: tuple) -> App:
    # internal: rebuild with arguments of unchanged sorts
    t = object.__new__(App)
    object.__setattr__(t, "symbol", symbol)
    object.__setattr__(t, "args", args)
    return t


def sort_of(t: Term) -> Sort:
    if isinstance(t, App) or isinstance(t, Const):
        return t.symbol.result
    if isinstance(t, Name):
        return NameSort(t.type)
    if isinstance(t, Susp):
        return t.var.sort
    if isinstance(t, Abs):
        return AbsSort(t.name.type, sort_of(t.body))
    raise TypeError(f"not a term: {t!r}")


def is_ground(t: Term) -> bool:
    if isinstance(t, (Name, Const)):
        return True
    if isinstance(t, App):
        for a in t.args:
            if not is_ground(a):
                return False
        return True
    if isinstance(t, Abs):
        return is_ground(t.body)
    return False


def variables(t: Term) -> Iterator[Var]:
    if isinstance(t, Susp):
        yield t.var
    elif isinstance(t, App):
        for a in t.args:
            yield from variables(a)
    elif isinstance(t, Abs):
        yield from variables(t.body)


def names_in(t: Term) -> set[Name]:
    """Every name mentioned anywhere in ``t``, bound, free or in suspensions."""
    out: set[Name] = set()
    _collect_names(t, out)
    return out


def _collect_names(t: Term, out: set[Name]) -> None:
    if isinstance(t, Name):
        out.add(t)
    elif isinstance(t, App):
        for a in t.args:
            _collect_names(a, out)
    elif isinstance(t, Abs):
        out.add(t.name)
        _collect_names(t.body, out)
    elif isinstance(t, Susp):
        out |= t.perm.names()


def depth(t: Term) -> int:
    """Constructor depth; names, constants and variables are 0, binders add nothing."""
    if isinstance(t, App):
        return 1 + max(depth(a) for a in t.args)
    if isinstance(t, Abs):
        return depth(t.body)
    return 0


def size(t: Term) -> int:
    """Number of function-symbol and constant nodes."""
    if isinstance(t, App):
        return 1 + sum(size(a) for a in t.args)
    if isinstance(t, Abs):
        return size(t.body)
    if isinstance(t, Const):
        return 1
    return 0


# ---------------------------------------------------------------------------
# Swapping


def permute(pi: Perm, t: Term) -> Term:
    """The permutation action pi . t."""
    if not pi.swaps:
        return t
    return _permute(pi, t)


def _permute(pi: Perm, t: Term) -> Term:
    if isinstance(t, Name):
        return pi(t)
    if isinstance(t, App):
        return _raw_app(t.symbol, tuple(_permute(pi, a) for a in t.args))
    if isinstance(t, Abs):
        return Abs(pi(t.name), _permute(pi, t.body))
    if isinstance(t, Susp):
        return Susp(perm_compose(pi, t.perm), t.var)
    return t


def swap_term(pair: tuple[Name, Name], t: Term) -> Term:
    """Apply the transposition (a b) to t. Binders are swapped, never renamed."""
    a, b = pair
    if a.type != b.type:
        raise SortError(f"cannot swap {a}:{a.type} with {b}:{b.type}")
    if a == b:
        return t
    return _permute(transposition(a, b), t)


# ---------------------------------------------------------------------------
# Ground judgments


def fresh_ground(a: Name, t: Term) -> bool:
    """Whether a # t is derivable for a ground term t."""
    if isinstance(t, Name):
        return a != t
    if isinstance(t, Const):
        return True
    if isinstance(t, App):
        for u in t.args:
            if not fresh_ground(a, u):
                return False
        return True
    if isinstance(t, Abs):
        return t.name == a or fresh_ground(a, t.body)
    raise OpenTermError(f"freshness of {a} for an open term")


def alpha_eq_ground(t: Term, u: Term) -> bool:
    """Whether t and u are equal up to safe renaming of abstractions."""
    st, su = sort_of(t), sort_of(u)
    if st != su:
        raise SortError(f"cannot compare a term of sort {st} with one of sort {su}")
    return _aeq(t, u)


def _aeq(t: Term, u: Term) -> bool:
    if t is u:
        if is_ground(t):
            return True
    if isinstance(t, Name):
        return t == u
    if isinstance(t, Const):
        return isinstance(u, Const) and t.symbol == u.symbol
    if isinstance(t, App):
        if not isinstance(u, App) or (t.symbol is not u.symbol and t.symbol != u.symbol):
            return False
        for x, y in zip(t.args, u.args):
            if not _aeq(x, y):
                return False
        return True
    if isinstance(t, Abs):
        if not isinstance(u, Abs):
            return False
        a, b = t.name, u.name
        if a == b:
            return _aeq(t.body, u.body)
        return fresh_ground(a, u.body) and _aeq(t.body, _permute(transposition(a, b), u.body))
    if isinstance(t, Susp) or isinstance(u, Susp):
        raise OpenTermError("alpha-equality of open terms")
    return False


def support(t: Term) -> set[Name]:
    """Free names FN(t) of a ground term: the names not fresh for it."""
    out: set[Name] = set()
    _free_names(t, frozenset(), out)
    return out


def _free_names(t: Term, bound: frozenset, out: set[Name]) -> None:
    if isinstance(t, Name):
        if t not in bound:
            out.add(t)
    elif isinstance(t, App):
        for a in t.args:
            _free_names(a, bound, out)
    elif isinstance(t, Abs):
        _free_names(t.body, bound | {t.name}, out)
    elif isinstance(t, Susp):
        raise OpenTermError("support of an open term")


def fresh_name(
    nametype: NameType,
    avoid: Iterable[Union[Term, Name]] = (),
    supply: NameSupply = DEFAULT_SUPPLY,
    hint: str | None = None,
) -> Name:
    """A name of ``nametype`` fresh for everything in ``avoid``.

    Draws from ``supply``'s monotone counter, so repeated calls return
    distinct names. Open terms in ``avoid`` are handled by avoiding every
    name they mention.
    """
    taken: set[Name] = set()
    for x in avoid:
        # every name occurring in x, bound or free: avoiding all of them is enough
        if isinstance(x, Name):
            taken.add(x)
        else:
            _collect_names(x, taken)
    while True:
        n = supply.next_id()
        a = Name(nametype, n, f"{hint or nametype.ident}{n}")
        if a not in taken:
            return a


# ---------------------------------------------------------------------------
# Sort contexts


@dataclass(frozen=True)
class SortContext:
    """Ordered bindings ``x:sigma`` and name declarations ``Sigma # a``."""

    entries: tuple = ()
    _vars: dict = field(default_factory=dict, compare=False, repr=False)
    _names: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        for e in self.entries:
            if isinstance(e, Var):
                if e.ident in self._vars:
                    raise SortError(f"duplicate binding for {e.ident}")
                self._vars[e.ident] = e.sort
            else:
                name, _fresh = e
                if name in self._names:
                    raise SortError(f"duplicate declaration of name {name}")
                self._names[name] = _fresh

    def bind(self, v: Var) -> SortContext:
        return SortContext(self.entries + (v,))

    def declare(self, a: Name, fresh: bool = False) -> SortContext:
        return SortContext(self.entries + ((a, fresh),))

    def lookup_var(self, ident: str) -> Sort | None:
        return self._vars.get(ident)

    def has_name(self, a: Name) -> bool:
        return a in self._names

    def fresh_names(self) -> list[Name]:
        """Names declared with the Sigma#a form."""
        return [a for a, f in self._names.items() if f]


def well_sorted(ctx: SortContext, sig: Signature, t: Term) -> Sort:
    """Check ``t`` against the context and signature and return its sort."""
    if isinstance(t, Name):
        if not ctx.has_name(t) and sig.names.get(str(t)) != t:
            raise SortError(f"unbound name {t}")
        return NameSort(t.type)
    if isinstance(t, Susp):
        bound = ctx.lookup_var(t.var.ident)
        if bound is None:
            raise SortError(f"unbound variable {t.var.ident}")
        if bound != t.var.sort:
            raise SortError(f"variable {t.var.ident} has sort {bound}, used at {t.var.sort}")
        for a in t.perm.names():
            well_sorted(ctx, sig, a)
        return bound
    if isinstance(t, (Const, App)):
        sym = t.symbol
        if sym.name not in (NIL, CONS, PAIR) and sig.funcs.get(sym.name) != sym:
            raise SortError(f"symbol {sym.name} is not in the signature")
        if isinstance(t, App):
            for arg, want in zip(t.args, sym.args):
                got = well_sorted(ctx, sig, arg)
                if got != want:
                    raise SortError(f"argument of {sym.name}: expected {want}, got {got}")
        return sym.result
    if isinstance(t, Abs):
        well_sorted(ctx, sig, t.name)
        return AbsSort(t.name.type, well_sorted(ctx, sig, t.body))
    raise TypeError(f"not a term: {t!r}")
