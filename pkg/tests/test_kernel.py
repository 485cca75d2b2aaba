import pytest

from cnc.catalog import ND_INSTANCES, SC_INSTANCES, nd_instance, sc_instance
from cnc.kernel.nd import ND_RULES, NDTypeError, check_nd, infer_splits, validate_nd
from cnc.kernel.sc import check_sc, is_cut_free
from cnc.syntax.parser import parse_context, parse_formula, parse_proof, parse_term
from cnc.syntax.sequents import RULES
from cnc.translate import nd_to_sc

from conftest import CORPUS


def nd(ctx, zone, term, goal):
    return check_nd(parse_context(ctx, zone), parse_term(term), parse_formula(goal, zone))


# ------------------------------------------------------------------ sequent calculus

def test_catalog_covers_every_rule():
    assert set(SC_INSTANCES) == set(RULES)
    assert set(ND_INSTANCES) == set(ND_RULES)


@pytest.mark.parametrize("rule", sorted(SC_INSTANCES))
def test_sc_instance_checks(rule):
    p = sc_instance(rule)
    assert p.rule == rule
    assert check_sc(p).ok


def test_axiom_ok():
    assert check_sc(parse_proof("(ax_L (seq L [x:a] a))")).ok


def test_axiom_formulas_differ():
    r = check_sc(parse_proof("(ax_L (seq L [x:a] b))"))
    assert not r.ok
    assert r.failures == [((), "ax_L", "axiom formulas differ")]


@pytest.mark.parametrize("text,rule", [
    # ex_L only swaps C-sort neighbours
    ("""(ex_L (seq L [x:a; y:b] b |> a)
          (tenR_L (seq L [y:b; x:a] b |> a) (ax_L (seq L [y:b] b)) (ax_L (seq L [x:a] a))))""", "ex_L"),
    ("(Fr (seq L [x:a] F p) (ax_C (seq C [x:p] p)))", "Fr"),
    ("(tenR (seq C [x:p, y:q] p * q) (ax_C (seq C [x:p] p)) (ax_C (seq C [y:p] p)))", "tenR"),
    ("(tenR_L (seq L [x:a; y:b] b |> a) (ax_L (seq L [x:a] b)) (ax_L (seq L [y:b] a)))", "ax_L"),
])
def test_bad_inference_reported(text, rule):
    r = check_sc(parse_proof(text))
    assert not r.ok
    assert any(f[1] == rule for f in r.failures)


def test_failure_path_points_at_node():
    p = parse_proof("""(tenR (seq C [x:p, y:q] p * q) (ax_C (seq C [x:p] p)) (ax_C (seq C [y:q] p)))""")
    r = check_sc(p)
    assert ((1,), "ax_C", "axiom formulas differ") in r.failures


def test_names_are_labels_only():
    p = parse_proof("(tenR (seq C [u:p, v:q] p * q) (ax_C (seq C [x:p] p)) (ax_C (seq C [y:q] q)))")
    assert check_sc(p).ok


def test_displayed_translation_checks():
    p = parse_proof((CORPUS / "tenE_translation.cncp").read_text())
    assert check_sc(p).ok
    assert not is_cut_free(p)


def test_misordered_corpus_proof_rejected():
    assert not check_sc(parse_proof((CORPUS / "bad_order.cncp").read_text())).ok


# ------------------------------------------------------------------ natural deduction

@pytest.mark.parametrize("rule", sorted(ND_INSTANCES))
def test_nd_instance_checks(rule):
    d = nd_instance(rule)
    assert validate_nd(d).ok
    assert any(n.rule == rule for n in d.nodes())


def test_identity():
    d = nd("x:a", "L", "x", "a")
    assert d.rule == "id_L" and d.premises == ()


def test_unit_introduction():
    assert nd("", "C", "triv", "I_c").rule == "unitI_C"


def test_tensor_elimination_agrees_with_sequent_oracle():
    d = nd("z:p * q", "C", "let z : p * q be x * y in x * y", "p * q")
    assert d.rule == "tenE"
    assert check_sc(nd_to_sc(d)).ok


def test_ordered_zone_respects_order():
    with pytest.raises(NDTypeError) as e:
        nd("x:a ; y:b", "L", "y |> x", "b |> a")
    assert e.value.kind == "order"


def test_linearity():
    with pytest.raises(NDTypeError) as e:
        nd("x:p, y:q", "C", "x", "p")
    assert e.value.kind == "linearity"


def test_type_mismatch():
    with pytest.raises(NDTypeError) as e:
        nd("x:a ; y:b", "L", "x |> y", "b |> a")
    assert e.value.kind == "mismatch"


def test_directional_application_contexts():
    nd("f:a ->> b ; x:a", "L", "app_r f x", "b")
    nd("x:a ; f:b <<- a", "L", "app_l f x", "b")
    with pytest.raises(NDTypeError):
        nd("f:a ->> b ; x:a", "L", "app_l f x", "b")


def test_c_formulas_commute_inside_l_zone():
    d = nd("x:p ; y:q", "L", "F (y * x)", "F(q * p)")
    assert validate_nd(d).ok


def test_splits_in_order():
    c = parse_context("x:a ; y:b", "L")
    got = infer_splits(c, [parse_term("x"), parse_term("y")])
    assert [s.names for s in got] == [("x",), ("y",)]


def test_split_needing_exchange_fails_in_l_zone():
    c = parse_context("x:a ; y:b", "L")
    with pytest.raises(NDTypeError):
        infer_splits(c, [parse_term("y"), parse_term("x")])


def test_split_in_c_zone_records_exchange():
    c = parse_context("x:p, y:q", "C")
    got = infer_splits(c, [parse_term("y"), parse_term("x")])
    assert [s.names for s in got] == [("y",), ("x",)]
    d = nd("x:p, y:q", "C", "y * x", "q * p")
    assert [n.rule for n in d.nodes()] == ["ex_C", "tenI", "id_C", "id_C"]
    assert check_sc(nd_to_sc(d)).ok
