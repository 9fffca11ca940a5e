"""Exhaustive enumeration of terms, and canonical keys for alpha-classes."""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from .names import Name
from .terms import Abs, AbsSort, App, Const, DataSort, NameSort, Signature, Sort, Susp, Term, is_ground


def alpha_key(t: Term, _env: tuple = ()):
    """A hashable key, equal for two ground terms exactly when they are alpha-equal.

    Bound names become binder depths (locally nameless form). Abstractions
    whose body is open keep their binder name, so on open terms the key is
    only a sufficient test for alpha-equality.
    """
    if isinstance(t, Name):
        for i, b in enumerate(_env):
            if b == t:
                return ("B", i)
        return ("N", t)
    if isinstance(t, Const):
        return ("C", t.symbol)
    if isinstance(t, App):
        return ("F", t.symbol) + tuple(alpha_key(a, _env) for a in t.args)
    if isinstance(t, Abs):
        if is_ground(t.body):
            return ("L", alpha_key(t.body, (t.name,) + _env))
        return ("A", t.name, alpha_key(t.body, _env))
    if isinstance(t, Susp):
        return ("S", t.perm.swaps, t.var)
    raise TypeError(f"not a term: {t!r}")


def dedupe_alpha(terms: Iterable[Term]) -> list[Term]:
    seen = set()
    out = []
    for t in terms:
        k = alpha_key(t)
        if k not in seen:
            seen.add(k)
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# Lambda-terms by size


def lambda_terms(max_size: int, names: Sequence[Name]) -> list[Term]:
    """Every var/lam/app term with at most ``max_size`` nodes, names drawn from ``names``.

    Binders and variables both range over ``names``; no alpha-quotient is taken.
    The order is deterministic: by size, then constructor, then components.
    """
    out: list[Term] = []
    for s in range(1, max_size + 1):
        out.extend(lambda_terms_of_size(s, tuple(names)))
    return out


@lru_cache(maxsize=None)
def lambda_terms_of_size(size: int, names: tuple) -> tuple:
    from .lam import app, lam, v

    if size <= 0:
        return ()
    if size == 1:
        return tuple(v(a) for a in names)
    out = [lam(a, m) for a in names for m in lambda_terms_of_size(size - 1, names)]
    for k in range(1, size - 1):
        for f in lambda_terms_of_size(k, names):
            for x in lambda_terms_of_size(size - 1 - k, names):
                out.append(app(f, x))
    return tuple(out)


def count_lambda_terms(max_size: int, n_names: int) -> int:
    counts = [0] * (max_size + 1)
    for s in range(1, max_size + 1):
        if s == 1:
            counts[s] = n_names
            continue
        c = n_names * counts[s - 1]
        for k in range(1, s - 1):
            c += counts[k] * counts[s - 1 - k]
        counts[s] = c
    return sum(counts)


# ---------------------------------------------------------------------------
# Ground terms of a sort by depth


class GroundTerms:
    """Alpha-class representatives of every sort up to a constructor depth.

    Names come from ``universe`` (name-type -> list of names); binders
    range over the same names.
    """

    def __init__(self, sig: Signature, universe: dict, alpha: bool = True):
        self.sig = sig
        self.universe = universe
        self.alpha = alpha
        self._cache: dict = {}

    def names(self, nt) -> list[Name]:
        return list(self.universe.get(nt, ()))

    def terms(self, sort: Sort, depth: int) -> list[Term]:
        """Terms of ``sort`` whose constructor depth is at most ``depth``."""
        key = (sort, depth)
        if key in self._cache:
            return self._cache[key]
        self._cache[key] = []  # guards against cyclic sorts at equal depth
        if isinstance(sort, NameSort):
            out = self.names(sort.nametype)
        elif isinstance(sort, AbsSort):
            out = [Abs(a, t) for a in self.names(sort.nametype) for t in self.terms(sort.body, depth)]
        elif isinstance(sort, DataSort):
            out = []
            for f in self.sig.constructors(sort):
                if not f.args:
                    out.append(Const(f))
                elif depth >= 1:
                    pools = [self.terms(s, depth - 1) for s in f.args]
                    for args in product(*pools):
                        out.append(App(f, tuple(args)))
        else:
            raise TypeError(f"not a sort: {sort!r}")
        if self.alpha:
            out = dedupe_alpha(out)
        self._cache[key] = out
        return out

    def iter_terms(self, sort: Sort, depth: int) -> Iterator[Term]:
        yield from self.terms(sort, depth)
