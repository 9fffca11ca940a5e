"""Two normalizers for lambda-terms and where they agree.

Run: python demos/05_normalization.py
"""

from nomlog import LAMBDA_SIG, alpha_eq_ground, beta_normalize, nbe_normalize, parse_term, show
from nomlog.enumerate import lambda_terms
from nomlog.cli import readable
from nomlog.lam import NbeExhausted
from nomlog.names import Name, NameSupply

sig = LAMBDA_SIG.copy()
labels = NameSupply(start=10_000)


def pretty(t):
    return show(readable(t, labels), sugar=True)

two = r"(\f. \x. f (f x))"
plus = r"(\m. \n. \f. \x. m f (n f x))"
examples = [
    rf"{plus} {two} {two}",
    r"(\x. \y. x) y",  # the binder is renamed, not captured
    r"(c) (\a. a)",  # stuck on a free head; the parentheses keep c from reading as a call
    r"(\x. x x) (\x. x x)",
]
for src in examples:
    t = parse_term(src, sig)
    slow = beta_normalize(t, fuel=200)
    try:
        fast = nbe_normalize(t, budget=20_000)
    except NbeExhausted:
        fast = None
    print(src)
    print("   beta:", "diverges within fuel" if slow is None else pretty(slow))
    print("   nbe: ", "out of budget" if fast is None else pretty(fast))

# Every normalizing term of size <= 5 over three names.
names = [Name(sig.nametypes["var"], i, s) for i, s in enumerate("abc", start=1)]
terms = lambda_terms(5, names)
agree = sum(1 for t in terms if alpha_eq_ground(beta_normalize(t), nbe_normalize(t)))
print(f"\n{agree} of {len(terms)} small terms normalize to the same alpha-class")
