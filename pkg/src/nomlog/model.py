"""The least term model of a program, computed by bounded forward chaining.

The bound is a name universe (``universe_size`` names per name-type) and a
maximum constructor depth for every argument of every atom. Clause names
are instantiated by every injective choice of universe names, so the result
is closed under permutations of the universe.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterator, Optional

from .clauses import Atom, Equation, FreshGoal, HornClause, Program
from .engine import freshen_clause, map_goal, rename_clause
from .enumerate import GroundTerms, alpha_key
from .names import DEFAULT_SUPPLY, Name, NameSupply, NameType, Perm, perm_inverse, transposition
from .terms import Abs, App, Term, depth, fresh_ground, fresh_name, is_ground, permute, support, variables
from .unify import UnificationFailure, apply_subst, unify_problem


@dataclass(frozen=True)
class Bound:
    max_term_depth: int = 2
    name_universe_size: int = 3


def atom_key(a: Atom):
    return (a.pred,) + tuple(alpha_key(t) for t in a.args)


def permute_atom(pi: Perm, a: Atom) -> Atom:
    return Atom(a.pred, tuple(permute(pi, t) for t in a.args))


def atom_support(a: Atom) -> set[Name]:
    out: set[Name] = set()
    for t in a.args:
        out |= support(t)
    return out


def abstraction_count(t: Term) -> int:
    if isinstance(t, Abs):
        return 1 + abstraction_count(t.body)
    if isinstance(t, App):
        return sum(abstraction_count(a) for a in t.args)
    return 0


class LeastModel:
    """A finite set of ground atoms, stored by alpha-class."""

    def __init__(self, program: Program, bound: Bound, universe: dict):
        self.program = program
        self.bound = bound
        self.universe = universe  # NameType -> list[Name]
        self.facts: dict = {}  # pred -> {key: Atom}
        self.rounds = 0
        self.terms = GroundTerms(program.signature, universe)

    # -- contents
    def add(self, a: Atom) -> bool:
        bucket = self.facts.setdefault(a.pred, {})
        k = atom_key(a)
        if k in bucket:
            return False
        bucket[k] = a
        return True

    def atoms(self, pred=None) -> Iterator[Atom]:
        if pred is not None:
            yield from self.facts.get(pred, {}).values()
            return
        for bucket in self.facts.values():
            yield from bucket.values()

    def __len__(self) -> int:
        return sum(len(b) for b in self.facts.values())

    def universe_names(self, nt: Optional[NameType] = None) -> list[Name]:
        if nt is not None:
            return list(self.universe.get(nt, ()))
        return [a for names in self.universe.values() for a in names]

    def into_universe(self, a: Atom) -> Optional[Atom]:
        """A permuted copy of ``a`` whose free names are universe names, if one exists."""
        supp = atom_support(a)
        outside = [x for x in supp if x not in set(self.universe.get(x.type, ()))]
        if not outside:
            return a
        swaps = []
        for nt in {x.type for x in outside}:
            mine = [x for x in outside if x.type == nt]
            spare = [u for u in self.universe.get(nt, ()) if u not in supp]
            if len(spare) < len(mine):
                return None
            swaps.extend(zip(mine, spare))
        return permute_atom(Perm(tuple(swaps)), a)

    def __contains__(self, a: Atom) -> bool:
        b = self.into_universe(a)
        if b is None:
            return False
        return atom_key(b) in self.facts.get(a.pred, {})

    def within_bound(self, a: Atom) -> bool:
        return all(depth(t) <= self.bound.max_term_depth for t in a.args)

    def is_equivariant(self) -> bool:
        """Closed under every transposition of universe names (hence every permutation)."""
        for names in self.universe.values():
            for i in range(len(names)):
                for j in range(i + 1, len(names)):
                    pi = transposition(names[i], names[j])
                    for a in self.atoms():
                        if atom_key(permute_atom(pi, a)) not in self.facts.get(a.pred, {}):
                            return False
        return True

    def closed_under_all_permutations(self) -> bool:
        """Checks each permutation of each name-type's universe explicitly."""
        for nt, names in self.universe.items():
            for image in permutations(names):
                mapping = dict(zip(names, image))
                pi = _perm_of_mapping(mapping)
                for a in self.atoms():
                    if atom_key(permute_atom(pi, a)) not in self.facts.get(a.pred, {}):
                        return False
        return True


def _perm_of_mapping(mapping: dict) -> Perm:
    """A transposition sequence acting as the finite bijection ``mapping``."""
    pi = Perm()
    for a in sorted(mapping, key=Name.sort_key):
        if pi(a) != mapping[a]:
            b = perm_inverse(pi)(mapping[a])
            pi = Perm(pi.swaps + ((a, b),))
    return pi


# ---------------------------------------------------------------------------
# Construction


def make_universe(program: Program, size: int, supply: NameSupply = DEFAULT_SUPPLY) -> dict:
    """Declared names first, then generated names, ``size`` per name-type."""
    universe: dict = {}
    for nt in program.signature.nametypes.values():
        declared = sorted((a for a in program.signature.names.values() if a.type == nt), key=Name.sort_key)
        names = declared[:size]
        while len(names) < size:
            names.append(fresh_name(nt, names, supply))
        universe[nt] = names
    return universe


def least_model_enum(
    program: Program,
    bound: Bound | None = None,
    max_term_depth: int | None = None,
    name_universe_size: int | None = None,
    supply: NameSupply = DEFAULT_SUPPLY,
    universe: dict | None = None,
) -> LeastModel:
    bound = bound or Bound(
        max_term_depth if max_term_depth is not None else 2,
        name_universe_size if name_universe_size is not None else 3,
    )
    if universe is None:
        universe = make_universe(program, bound.name_universe_size, supply)
    model = LeastModel(program, bound, universe)
    instances = []
    for c in program.clauses:
        fc = freshen_clause(c, (), supply)
        for mapping in _injections(fc.new_names, universe):
            instances.append(rename_clause(fc, mapping, {}))
    changed = True
    while changed:
        changed = False
        model.rounds += 1
        new_atoms = []
        for inst in instances:
            for a in _fire(inst, model):
                new_atoms.append(a)
        for a in new_atoms:
            if model.add(a):
                changed = True
    return model


def _injections(names, universe: dict) -> Iterator[dict]:
    names = list(names)

    def rec(i, used, acc):
        if i == len(names):
            yield dict(acc)
            return
        for b in universe.get(names[i].type, ()):
            if b in used:
                continue
            acc[names[i]] = b
            used.add(b)
            yield from rec(i + 1, used, acc)
            used.discard(b)
            del acc[names[i]]

    yield from rec(0, set(), {})


def _fire(c: HornClause, model: LeastModel) -> Iterator[Atom]:
    """Every head instance whose body holds in ``model`` and whose arguments are in bound."""
    d = model.bound.max_term_depth
    for theta, nabla, deferred in _solve_body(list(c.body), {}, frozenset(), [], model):
        head = map_goal(c.head, lambda t: apply_subst(theta, t))
        free = []
        for t in head.args:
            for x in variables(t):
                if x not in free:
                    free.append(x)
        for g in deferred:
            for t in (g.name, g.term):
                for x in variables(apply_subst(theta, t)):
                    if x not in free:
                        free.append(x)
        pools = [model.terms.terms(x.sort, d) for x in free]
        for values in product(*pools):
            rho = dict(zip(free, values))
            inst = map_goal(head, lambda t: apply_subst(rho, t))
            if not model.within_bound(inst):
                continue
            if not _constraints_hold(nabla, rho):
                continue
            if not all(_fresh_holds(map_goal(g, lambda t: apply_subst(rho, apply_subst(theta, t)))) for g in deferred):
                continue
            yield inst


def _fresh_holds(g: FreshGoal) -> bool:
    return fresh_ground(g.name, g.term)


def _constraints_hold(nabla, rho) -> bool:
    for c in nabla:
        t = rho.get(c.target)
        if t is None or not fresh_ground(c.name, t):
            return False
    return True


def _solve_body(goals, theta, nabla, deferred, model: LeastModel):
    if not goals:
        yield theta, nabla, deferred
        return
    g = map_goal(goals[0], lambda t: apply_subst(theta, t))
    rest = goals[1:]
    if isinstance(g, Atom):
        for fact in model.atoms(g.pred):
            try:
                sol = unify_problem(list(zip(g.args, fact.args)), (), nabla)
            except UnificationFailure:
                continue
            yield from _solve_body(rest, _compose(theta, sol.subst), sol.context, deferred, model)
    elif isinstance(g, Equation):
        try:
            sol = unify_problem([(g.left, g.right)], (), nabla)
        except UnificationFailure:
            return
        yield from _solve_body(rest, _compose(theta, sol.subst), sol.context, deferred, model)
    else:
        if is_ground(g.name) and is_ground(g.term):
            if fresh_ground(g.name, g.term):
                yield from _solve_body(rest, theta, nabla, deferred, model)
            return
        yield from _solve_body(rest, theta, nabla, deferred + [goals[0]], model)


def _compose(theta: dict, sigma: dict) -> dict:
    out = {x: apply_subst(sigma, t) for x, t in theta.items()}
    for x, t in sigma.items():
        out.setdefault(x, t)
    return out


# ---------------------------------------------------------------------------
# When is absence from the bounded model conclusive?


def derivation_bounded(program: Program) -> bool:
    """Whether every body atom argument is a subterm of a head argument.

    Then a derivation of an atom only uses atoms no deeper than it, so a
    bounded model that misses the atom refutes it (given enough names).
    """
    for c in program.clauses:
        head_subs = set()
        for t in c.head.args:
            head_subs.update(_subterms_all(t))
        for g in c.body:
            if isinstance(g, Atom):
                for t in g.args:
                    if t not in head_subs:
                        return False
            elif isinstance(g, Equation):
                return False
        for a in c.new_names:
            if not any(a == s or (isinstance(s, Abs) and s.name == a) for s in head_subs):
                return False
    return True


def _subterms_all(t: Term):
    yield t
    if isinstance(t, App):
        for a in t.args:
            yield from _subterms_all(a)
    elif isinstance(t, Abs):
        yield from _subterms_all(t.body)
