from nomlog.clauses import Atom
from nomlog.model import Bound, atom_support, derivation_bounded, least_model_enum, permute_atom
from nomlog.names import transposition
from nomlog.syntax import parse_goals, parse_program

from oracles import program_text


def atom(model, text):
    (a,) = parse_goals(text, model.program.signature, warn=False)
    return a


def test_typ_model_contents(typ_model):
    assert len(typ_model) == 7
    assert atom(typ_model, "typ([], lam(<a>var(a)), arr(o, o))") in typ_model
    assert atom(typ_model, "typ([], var(a), o)") not in typ_model


def test_models_are_closed_under_permutations(subst_model, typ_model):
    for m in (subst_model, typ_model):
        assert m.is_equivariant()
        assert m.closed_under_all_permutations()


def test_membership_is_up_to_renaming_of_free_names(subst_model):
    a = atom(subst_model, "subst(var(a), var(b), a, var(b))")
    assert a in subst_model
    names = sorted(atom_support(a), key=lambda n: n.sort_key())
    assert permute_atom(transposition(*names), a) in subst_model


def test_atoms_respect_the_depth_bound(subst_model):
    assert all(subst_model.within_bound(a) for a in subst_model.atoms())
    assert atom(subst_model, "subst(var(b), var(a), a, var(a))") not in subst_model


def test_clause_names_range_over_the_universe():
    p = parse_program(program_text("p_ab.nl"))
    m = least_model_enum(p, Bound(1, 3))
    assert len(m) == 3
    assert all(isinstance(a, Atom) for a in m.atoms())


def test_derivation_boundedness():
    assert derivation_bounded(parse_program(program_text("subst_fig.nl")))
    assert not derivation_bounded(parse_program(program_text("typ.nl")))
