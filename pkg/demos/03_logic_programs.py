"""Horn clauses over terms with binders: substitution, typing, closure conversion.

Run: python demos/03_logic_programs.py
"""

import warnings
from pathlib import Path

from nomlog import parse_program, solve

warnings.simplefilter("ignore")
PROGRAMS = Path(__file__).resolve().parent.parent / "programs"


def load(name):
    return parse_program((PROGRAMS / name).read_text())


def ask(program, goal, **kw):
    answers = solve(program, goal, max_answers=None, **kw).all()
    mode = "equivariant" if kw.get("equivariant") else "nominal"
    print(f"?- {goal}    [{mode}]")
    if not answers:
        print("   no")
    for ans in answers:
        print("  ", ", ".join(ans.lines(sugar=True)) or "yes")


# Substitution with the names as variables: the binder clause only fires on
# a name fresh for the substituted term, so capture is impossible.
subst = load("subst.nl")
ask(subst, r"subst(\b. a b, var(b), a, R)")

# The same relation written with concrete clause names only works once
# clause names may be renamed to the query's names.
fig = load("subst_fig.nl")
ask(fig, "subst(var(a), var(c), a, R)")
ask(fig, "subst(var(a), var(c), a, R)", equivariant=True)

# Simple types: the lam clause demands a binder fresh for the context.
typ = load("typ.nl")
ask(typ, r"typ([], \x. \y. x y, T)")
ask(typ, r"typ([], \x. x x, T)")

# One fact, two readings.
p = load("p_ab.nl")
ask(p, "p(b)")
ask(p, "p(b)", equivariant=True)

# Closure conversion of a closed term: the result mentions no source variable.
cc = load("cconv.nl")
ask(cc, r"cconv([], \x. \y. x y, unit, E)")
ask(cc, r"cconv([], \x. \y. x y, unit, E)", equivariant=True)
