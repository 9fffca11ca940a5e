"""Names, swapping and alpha-equivalence on a tiny lambda-calculus.

Run: python demos/01_names_and_binding.py
"""

from nomlog import LAMBDA_SIG, alpha_eq_ground, fresh_ground, parse_term, show, support, swap_term
from nomlog.lam import to_debruijn

sig = LAMBDA_SIG.copy()


def term(src):
    return parse_term(src, sig)


k = term(r"\x. \y. x")
print("K            =", show(k, sugar=True))
print("raw          =", show(k))

# Swapping is plain renaming. It goes under binders too, and can never capture.
a, b = sig.names["x"], sig.names["y"]
print("(x y).K      =", show(swap_term((a, b), k), sugar=True))

# A swapped K is still K: both names were bound, hence fresh.
print("x fresh in K?", fresh_ground(a, k))
print("alpha-equal? ", alpha_eq_ground(k, swap_term((a, b), k)))

open_term = term(r"\x. x z")
print()
print("M            =", show(open_term, sugar=True))
print("free names   =", sorted(str(n) for n in support(open_term)))

# de Bruijn indices give a canonical form; equal indices mean alpha-equal terms.
for src in (r"\x. \y. x y", r"\z. \w. z w", r"\x. \y. y x"):
    print(f"{src:14} ->", to_debruijn(term(src)))
