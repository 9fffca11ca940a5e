"""The bounded least model of a program and formulas with the new-quantifier.

Run: python demos/04_models_and_new.py
"""

import warnings
from pathlib import Path

from nomlog import Bound, eval_formula, least_model_enum, parse_formula, parse_program

warnings.simplefilter("ignore")
src = (Path(__file__).resolve().parent.parent / "programs" / "subst_fig.nl").read_text()
program = parse_program(src)

model = least_model_enum(program, Bound(max_term_depth=2, name_universe_size=3))
print(f"{len(model)} ground atoms, names {[str(n) for n in model.universe_names()]}")
print("closed under every permutation of those names:", model.closed_under_all_permutations())

formulas = [
    # substituting into a fresh name's own variable
    r"new x:var. subst(var(x), var(b), x, var(b))",
    # "for some fresh x" and "for all fresh x" agree
    r"~(new x:var. subst(var(a), var(x), a, var(a)))",
    r"new x:var. ~subst(var(a), var(x), a, var(a))",
    r"exists x:var. x # b /\ subst(var(x), var(b), x, var(b))",
    r"forall x:var. x # b => subst(var(x), var(b), x, var(b))",
    r"forall X:exp. subst(X, var(a), a, X) => a # X",
    # no counterexample inside the bound, but deeper terms exist
    r"forall X:exp. X = X",
]
print()
for text in formulas:
    verdict = eval_formula(model, parse_formula(text, program.signature))
    print(f"{str(verdict):20} {text}")
