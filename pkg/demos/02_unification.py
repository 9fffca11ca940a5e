"""Solving equations between terms with holes, up to renaming of bound names.

Run: python demos/02_unification.py
"""

from nomlog import LAMBDA_SIG, UnificationFailure, parse_terms, show, unify

sig = LAMBDA_SIG.copy()


def attempt(left, right):
    t, u = parse_terms([left, right], sig)
    print(f"{left}  =?  {right}")
    try:
        sol = unify(t, u)
    except UnificationFailure as e:
        print("   ", e.describe())
        return
    for x, v in sol.subst.items():
        print(f"    {x.ident} := {show(v)}")
    for c in sorted(sol.context, key=str):
        print(f"    {c.name} # {c.target.ident}")
    if not sol.subst and not sol.context:
        print("    (already equal)")


# X must be the bound name itself, renamed to line up with b.
attempt("<a>var(X)", "<b>var(b)")

# Same hole under two different binders: X may use neither name.
attempt("<a>X", "<b>X")

# A suspended swap on X; the solver inverts it.
attempt("(a b).X", "var(a)")

attempt("lam(<a>app(X, var(a)))", "lam(<b>app(var(c), var(b)))")

# Failures say which sub-problem broke.
attempt("app(var(a), X)", "app(var(b), X)")
attempt("X", "app(X, X)")
attempt("<a>X", "<b>var(a)")
