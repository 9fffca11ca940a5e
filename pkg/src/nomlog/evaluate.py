"""Three-valued evaluation of closed formulas in a bounded least model.

Truth values follow Kleene's strong logic. An unknown verdict records the
bound responsible: ``term-depth`` when deeper terms could change the answer,
``name-universe`` when more names could.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .clauses import Atom, Equation, FreshGoal
from .formulas import (
    And,
    Bot,
    Exists,
    Forall,
    Formula,
    Iff,
    Implies,
    New,
    Not,
    Or,
    Top,
    formula_names,
    free_vars,
    map_terms,
    permute_formula,
)
from .model import LeastModel, abstraction_count, atom_support, derivation_bounded
from .names import DEFAULT_SUPPLY, Name, NameSupply, transposition
from .terms import NameSort, Var, alpha_eq_ground, fresh_ground, fresh_name, is_ground
from .unify import apply_subst

TERM_DEPTH = "term-depth"
NAME_UNIVERSE = "name-universe"


@dataclass(frozen=True)
class Verdict:
    value: Optional[bool]
    reason: Optional[str] = None

    @property
    def known(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        if self.value is None:
            return f"unknown({self.reason})"
        return "true" if self.value else "false"

    def __invert__(self) -> "Verdict":
        return self if self.value is None else Verdict(not self.value)


TRUE, FALSE = Verdict(True), Verdict(False)


def _and(x: Verdict, y: Verdict) -> Verdict:
    if x.value is False or y.value is False:
        return FALSE
    if x.value is None:
        return x
    return y


def _or(x: Verdict, y: Verdict) -> Verdict:
    if x.value is True or y.value is True:
        return TRUE
    if x.value is None:
        return x
    return y


class OpenFormulaError(ValueError):
    pass


def eval_formula(model: LeastModel, phi: Formula, supply: NameSupply = DEFAULT_SUPPLY) -> Verdict:
    """Evaluate a closed formula; quantifiers range over the model's bounded universe."""
    open_vars = free_vars(phi)
    if open_vars:
        raise OpenFormulaError("open formula: free variables " + ", ".join(sorted(x.ident for x in open_vars)))
    return _Evaluator(model, supply).eval(phi)


def _subst_formula(phi: Formula, x: Var, value) -> Formula:
    if isinstance(phi, (Forall, Exists)):
        if phi.var == x:
            return phi
        return type(phi)(phi.var, _subst_formula(phi.body, x, value))
    if isinstance(phi, New):
        return New(phi.name, _subst_formula(phi.body, x, value))
    if isinstance(phi, Not):
        return Not(_subst_formula(phi.body, x, value))
    if isinstance(phi, (Implies, And, Or, Iff)):
        return type(phi)(_subst_formula(phi.left, x, value), _subst_formula(phi.right, x, value))
    theta = {x: value}
    return map_terms(phi, lambda t: apply_subst(theta, t))


class _Evaluator:
    def __init__(self, model: LeastModel, supply: NameSupply):
        self.model = model
        self.supply = supply
        self.bounded = derivation_bounded(model.program)

    def eval(self, phi: Formula) -> Verdict:
        if isinstance(phi, Atom):
            return self.atom(phi)
        if isinstance(phi, Equation):
            return Verdict(alpha_eq_ground(phi.left, phi.right))
        if isinstance(phi, FreshGoal):
            return Verdict(fresh_ground(phi.name, phi.term))
        if isinstance(phi, Bot):
            return FALSE
        if isinstance(phi, Top):
            return TRUE
        if isinstance(phi, Not):
            return ~self.eval(phi.body)
        if isinstance(phi, Implies):
            return _or(~self.eval(phi.left), self.eval(phi.right))
        if isinstance(phi, And):
            return _and(self.eval(phi.left), self.eval(phi.right))
        if isinstance(phi, Or):
            return _or(self.eval(phi.left), self.eval(phi.right))
        if isinstance(phi, Iff):
            x, y = self.eval(phi.left), self.eval(phi.right)
            if x.value is None:
                return x
            if y.value is None:
                return y
            return Verdict(x.value == y.value)
        if isinstance(phi, Forall):
            return self.forall(phi)
        if isinstance(phi, Exists):
            return ~self.forall(Forall(phi.var, Not(phi.body)))
        if isinstance(phi, New):
            return self.new(phi)
        raise TypeError(f"not a formula: {phi!r}")

    # -- atoms
    def atom(self, a: Atom) -> Verdict:
        if not all(is_ground(t) for t in a.args):
            raise OpenFormulaError("atom with free variables")
        if a in self.model:
            return TRUE
        if not self.model.within_bound(a) or not self.bounded:
            return Verdict(None, TERM_DEPTH)
        supp = atom_support(a)
        n = self.model.bound.name_universe_size
        for nt in {x.type for x in supp} | set(self.model.universe):
            need = len([x for x in supp if x.type == nt]) + sum(abstraction_count(t) for t in a.args)
            if need > n:
                return Verdict(None, NAME_UNIVERSE)
        return FALSE

    # -- quantifiers
    def _fresh_for(self, nt, phi: Formula) -> Name:
        used = formula_names(phi)
        for c in self.model.universe_names(nt):
            if c not in used:
                return c
        return fresh_name(nt, used, self.supply)

    def forall(self, phi: Forall) -> Verdict:
        x = phi.var
        if isinstance(x.sort, NameSort):
            nt = x.sort.nametype
            candidates = sorted((a for a in formula_names(phi) if a.type == nt), key=Name.sort_key)
            candidates.append(self._fresh_for(nt, phi))
            result = TRUE
            for c in candidates:
                result = _and(result, self.eval(_subst_formula(phi.body, x, c)))
                if result.value is False:
                    return FALSE
            return result
        d = self.model.bound.max_term_depth
        values = self.model.terms.terms(x.sort, d)
        result = TRUE
        for t in values:
            result = _and(result, self.eval(_subst_formula(phi.body, x, t)))
            if result.value is False:
                return FALSE
        if result.value is None:
            return result
        if len(self.model.terms.terms(x.sort, d + 1)) != len(values):
            return Verdict(None, TERM_DEPTH)
        if any(self.model.program.signature.may_contain(x.sort, nt) for nt in self.model.universe):
            return Verdict(None, NAME_UNIVERSE)
        return TRUE

    def new(self, phi: New) -> Verdict:
        a = phi.name
        c = self._fresh_for(a.type, phi.body)
        body = phi.body if c == a else permute_formula(transposition(a, c), phi.body)
        return self.eval(body)
