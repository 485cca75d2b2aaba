import pytest

from cnc.syntax.formulas import (CAtom, CImp, CTensor, F, G, LAtom, LTensor, RImp, LImp,
                                 SortError, depth, rank)
from cnc.syntax.parser import (ParseError, parse_context, parse_formula, parse_pattern,
                               parse_proof, parse_sequent, parse_term)
from cnc.syntax.printer import print_formula, print_proof, print_sequent, print_term
from cnc.syntax.sequents import ProofStructureError, ProofTree, Sequent
from cnc.syntax.terms import (App, Lam, Let, NameSupply, PPair, Var, alpha_eq, free_occurrences,
                              free_vars, size, subst)

from conftest import CORPUS


def test_formula_constructor_reading():
    assert parse_formula("F(G a)") == F(G(LAtom("a")))


def test_lollipop_binds_looser_than_tensor():
    p, q = CAtom("p"), CAtom("q")
    assert parse_formula("p * q -o p") == CImp(CTensor(p, q), p)


def test_g_of_c_formula_is_a_sort_error():
    with pytest.raises(SortError):
        parse_formula("a |> G p")


def test_sort_is_fixed_by_atom_letter():
    assert parse_formula("a").sort == "L"
    assert parse_formula("p").sort == "C"
    with pytest.raises(SortError):
        parse_formula("a * b")


def test_directional_implications():
    a, b = LAtom("a"), LAtom("b")
    assert parse_formula("a ->> b") == RImp(a, b)
    assert parse_formula("b <<- a") == LImp(b, a)
    assert parse_formula("a |> b ->> a") == RImp(LTensor(a, b), a)


@pytest.mark.parametrize("text,r", [("p * q", 1), ("a", 0), ("F(G a)", 2), ("I_l", 0),
                                    ("(a ->> b) |> F p", 3)])
def test_rank(text, r):
    assert rank(parse_formula(text)) == r


def test_depth():
    assert depth(parse_formula("a")) == 0
    assert depth(parse_formula("F(G a) |> b")) == 3


@pytest.mark.parametrize("text", ["p * q * r", "p * (q * r)", "p -o q -o r", "(p -o q) -o r",
                                  "F(p -o q) |> (a ->> b)", "b <<- a <<- c", "G(a |> F I_c)"])
def test_formula_roundtrip(text):
    f = parse_formula(text)
    assert parse_formula(print_formula(f)) == f


def test_sequent_separators_follow_zone():
    s = parse_sequent("x:a ; y:F p |-L a |> F p")
    assert s.side == "L" and s.hyps.names == ("x", "y")
    assert parse_sequent(print_sequent(s)) == s
    with pytest.raises(ParseError):
        parse_sequent("x:p ; y:q |-C p")


def test_c_sequent_rejects_l_hypothesis():
    with pytest.raises(ParseError, match="L-sort"):
        parse_sequent("x:a |-C p")


def test_one_node_proof():
    p = parse_proof("(ax_L (seq L [x:a] a))")
    assert p.rule == "ax_L" and p.premises == () and p.size() == 1


def test_arity_error():
    with pytest.raises(ParseError, match="premise"):
        parse_proof("(cut2 (seq L [x:a] a) (ax_L (seq L [x:a] a)))")
    with pytest.raises(ProofStructureError):
        ProofTree("cut2", parse_sequent("x:a |-L a"))


def test_unknown_rule():
    with pytest.raises(ParseError):
        parse_proof("(axx (seq L [x:a] a))")


def test_golden_file_parses():
    p = parse_proof((CORPUS / "tenE_translation.cncp").read_text())
    assert p.rule == "cut" and p.conclusion == parse_sequent("s:r, x:p, y:q |-C (r * p) * q")
    assert parse_proof(print_proof(p)) == p


def test_term_grammar():
    t = parse_term("let z : p * q be x * y in f x")
    assert isinstance(t, Let) and t.pat == PPair("C", parse_pattern("x"), parse_pattern("y"))
    assert isinstance(t.body, App) and t.body.kind == "C"
    lam = parse_term("lam_r x:a. x")
    assert isinstance(lam, Lam) and lam.kind == "r"


@pytest.mark.parametrize("text", ["lam x:p. f x y", "app_l (lam_l x:a. x) (F u)",
                                  "let w : a |> b be x |> y in y |> x",
                                  "ex u, v with x, y in F (y * x)", "derelict (G (app_r f s))",
                                  "let z : F (p * q) be F (x * y) in F x"])
def test_term_roundtrip(text):
    t = parse_term(text)
    assert parse_term(print_term(t)) == t


def test_free_variables_and_size():
    t = parse_term("lam x:p. f x y")
    assert free_vars(t) == {"f", "y"}
    assert sorted(free_occurrences(parse_term("x * (lam y:p. x)"))) == ["x", "x"]
    assert size(parse_term("x")) == 1


def test_subst_avoids_capture():
    t = parse_term("lam y:p. x * y")
    out = subst(t, {"x": Var("y")}, NameSupply({"x", "y"}))
    assert isinstance(out, Lam) and out.var != "y"
    assert free_vars(out) == {"y"}
    assert alpha_eq(out, parse_term("lam w:p. y * w"))


def test_alpha_eq_distinguishes_free_names():
    assert alpha_eq(parse_term("lam x:p. x"), parse_term("lam y:p. y"))
    assert not alpha_eq(parse_term("lam x:p. z"), parse_term("lam x:p. w"))


def test_context_zone_checks():
    assert parse_context("x:a ; y:p", "L").formulas == (LAtom("a"), CAtom("p"))
    with pytest.raises((SortError, ParseError)):
        parse_context("x:a", "C")
    assert Sequent.make("L", [LAtom("a")], LAtom("a")).hyps.names == ("x1",)
