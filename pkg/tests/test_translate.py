import pytest

from cnc.catalog import ND_INSTANCES, SC_INSTANCES, nd_instance, sc_instance
from cnc.cutelim import random_cut_proofs
from cnc.kernel.nd import check_nd
from cnc.kernel.sc import check_sc
from cnc.search import prove
from cnc.syntax.parser import parse_context, parse_formula, parse_proof, parse_sequent, parse_term
from cnc.syntax.printer import print_term
from cnc.translate import nd_ok, nd_to_sc, sc_to_nd

from conftest import CORPUS


def rules(x):
    return [n.rule for n in x.nodes()]


@pytest.mark.parametrize("rule", sorted(SC_INSTANCES))
def test_sc_rule_maps_to_valid_derivation(rule):
    p = sc_instance(rule)
    d = sc_to_nd(p)
    assert nd_ok(d)
    assert d.ctx.formulas == p.conclusion.hyps.formulas and d.type == p.conclusion.goal


@pytest.mark.parametrize("rule", sorted(ND_INSTANCES))
def test_nd_rule_maps_to_valid_proof(rule):
    d = nd_instance(rule)
    p = nd_to_sc(d)
    assert check_sc(p).ok
    assert p.conclusion.hyps.formulas == d.ctx.formulas and p.conclusion.goal == d.type


def test_axiom_maps_to_identity():
    d = sc_to_nd(sc_instance("ax_L"))
    assert d.rule == "id_L" and print_term(d.term) == "x"


def test_tensor_left_maps_to_elimination_over_identity():
    d = sc_to_nd(sc_instance("tenL"))
    assert d.rule == "tenE" and d.premises[0].rule == "id_C"
    assert print_term(d.term) == "let z : p * q be v1 * v2 in v1 * v2"


def test_unit_left_maps_to_unit_elimination():
    d = sc_to_nd(sc_instance("unitL"))
    assert d.rule == "unitE" and print_term(d.term) == "let u : I_c be triv in x"


def test_implication_left_substitutes_application():
    d = sc_to_nd(sc_instance("impL"))
    assert d.rule == "cut" and rules(d)[1] == "impE"
    assert print_term(d.term) == "f x"


def test_identity_maps_to_axiom():
    p = nd_to_sc(nd_instance("id_C"))
    assert p.rule == "ax_C" and p.premises == ()


def test_tensor_elimination_maps_to_displayed_proof():
    text = (CORPUS / "tenE.cnct").read_text()
    d = check_nd(parse_context("s:r, x:p, y:q", "C"), parse_term(text.split("\n", 2)[2]),
                 parse_formula("(r * p) * q"))
    assert d.rule == "tenE"
    assert nd_to_sc(d) == parse_proof((CORPUS / "tenE_translation.cncp").read_text())


def test_dereliction_maps_to_cut_over_gl():
    p = nd_to_sc(nd_instance("GE"))
    assert rules(p) == ["cut1", "ax_C", "Gl", "ax_L"]


def test_roundtrip_preserves_sequent():
    for text in ["x:F(G a) ; y:F(G b) |-L F(G b) |> F(G a)", "x:p -o q, y:p |-C q",
                 "y:b ->> c ; x:a ->> b |-L a ->> c", "x:G a |-C G(a <<- I_l)"]:
        s = parse_sequent(text)
        p = prove(s)
        d = sc_to_nd(p)
        assert nd_ok(d)
        back = nd_to_sc(d)
        assert check_sc(back).ok
        assert back.conclusion.shape == s.shape


def test_cut_proofs_translate():
    for p in random_cut_proofs(30, seed=3):
        d = sc_to_nd(p)
        assert nd_ok(d) and d.type == p.conclusion.goal
        assert check_sc(nd_to_sc(d)).ok
