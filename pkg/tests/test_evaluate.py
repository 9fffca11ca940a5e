import pytest

from nomlog.evaluate import OpenFormulaError, eval_formula
from nomlog.syntax import parse_formula


def verdict(model, text):
    return str(eval_formula(model, parse_formula(text, model.program.signature, warn=False)))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("subst(var(b), var(a), a, var(a))", "false"),
        ("new c:var. subst(var(c), var(b), c, var(b))", "true"),
        ("~new c:var. subst(var(a), var(c), a, var(a))", "true"),
        ("new c:var. ~subst(var(a), var(c), a, var(a))", "true"),
        ("exists X:exp. subst(var(a), var(b), a, X)", "true"),
        ("forall X:exp. subst(X, var(a), a, X) => a # X", "false"),
        ("forall X:exp. false", "false"),
    ],
)
def test_verdicts(subst_model, text, expected):
    assert verdict(subst_model, text) == expected


def test_unbounded_universal_is_unknown(subst_model):
    # no counterexample within the bound, but deeper terms are not enumerated
    assert verdict(subst_model, "forall X:exp. X = X") == "unknown(term-depth)"


def test_kleene_connectives(subst_model):
    unknown = "forall X:exp. X = X"
    assert verdict(subst_model, f"({unknown}) \\/ true") == "true"
    assert verdict(subst_model, f"({unknown}) /\\ false") == "false"
    assert verdict(subst_model, f"~({unknown})").startswith("unknown")


def test_open_formulas_are_refused(subst_model):
    with pytest.raises(OpenFormulaError):
        eval_formula(subst_model, parse_formula("subst(X, X, a, X)", subst_model.program.signature, warn=False))
