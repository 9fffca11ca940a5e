"""Nominal terms, nominal unification and nominal logic programming."""

from .clauses import Atom, Equation, FreshGoal, HornClause, Program
from .engine import Answer, Floundered, Search, answer_key, solve
from .evaluate import Verdict, eval_formula
from .formulas import And, Bot, Exists, Forall, Iff, Implies, New, Not, Or, Top
from .lam import (
    LAMBDA_SIG,
    NbeExhausted,
    beta_normalize,
    lambda_signature,
    nbe_normalize,
    normalize,
    subst_fun,
    to_debruijn,
)
from .model import Bound, LeastModel, least_model_enum
from .names import DEFAULT_SUPPLY, IDENTITY, Name, NameSupply, NameType, Perm, transposition
from .syntax import (
    ElabError,
    ParseError,
    parse_formula,
    parse_goals,
    parse_program,
    parse_term,
    parse_terms,
    show,
    show_formula,
    show_goal,
)
from .terms import (
    Abs,
    App,
    Const,
    Signature,
    SortError,
    Susp,
    Var,
    alpha_eq_ground,
    fresh_ground,
    fresh_name,
    permute,
    support,
    swap_term,
)
from .unify import (
    ClashFailure,
    Freshness,
    FreshnessFailure,
    OccursCheckFailure,
    Solution,
    UnificationFailure,
    alpha_eq_open,
    apply_subst,
    unify,
    unify_problem,
)

__all__ = [
    "Abs",
    "And",
    "Answer",
    "App",
    "Atom",
    "Bot",
    "Bound",
    "ClashFailure",
    "Const",
    "DEFAULT_SUPPLY",
    "ElabError",
    "Equation",
    "Exists",
    "Floundered",
    "Forall",
    "FreshGoal",
    "Freshness",
    "FreshnessFailure",
    "HornClause",
    "IDENTITY",
    "Iff",
    "Implies",
    "LAMBDA_SIG",
    "LeastModel",
    "Name",
    "NameSupply",
    "NameType",
    "NbeExhausted",
    "New",
    "Not",
    "OccursCheckFailure",
    "Or",
    "ParseError",
    "Perm",
    "Program",
    "Search",
    "Signature",
    "Solution",
    "SortError",
    "Susp",
    "Top",
    "UnificationFailure",
    "Var",
    "Verdict",
    "alpha_eq_ground",
    "alpha_eq_open",
    "answer_key",
    "apply_subst",
    "beta_normalize",
    "eval_formula",
    "fresh_ground",
    "fresh_name",
    "lambda_signature",
    "least_model_enum",
    "nbe_normalize",
    "normalize",
    "parse_formula",
    "parse_goals",
    "parse_program",
    "parse_term",
    "parse_terms",
    "permute",
    "show",
    "show_formula",
    "show_goal",
    "solve",
    "subst_fun",
    "support",
    "swap_term",
    "to_debruijn",
    "transposition",
    "unify",
    "unify_problem",
]
