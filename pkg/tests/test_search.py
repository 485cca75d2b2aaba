import random

import pytest

from cnc.kernel.sc import check_sc, is_cut_free
from cnc.search import decide, logical_depth, prove, small_corpus
from cnc.syntax.formulas import atoms
from cnc.syntax.parser import parse_sequent

FLAGSHIP = "x:F(G a) ; y:F(G b) |-L F(G b) |> F(G a)"
SWAP = "x:a ; y:b |-L b |> a"


@pytest.fixture(scope="module")
def corpus():
    return small_corpus()


def test_axiom():
    p = prove(parse_sequent("x:a |-L a"))
    assert p is not None and p.rule == "ax_L"


def test_flagship_found_cut_free():
    s = parse_sequent(FLAGSHIP)
    p = prove(s, depth=12)
    assert p is not None
    assert p.conclusion == s and check_sc(p).ok and is_cut_free(p)
    assert [q.rule for q in p.nodes()][:4] == ["Fl", "Fl", "ex_L", "tenR_L"]
    assert logical_depth(p) <= 12


def test_swap_without_modality_unprovable():
    s = parse_sequent(SWAP)
    for d in range(1, 13):
        assert prove(s, depth=d) is None
    assert decide(s).verdict == "unprovable-at-bound"


def test_decide_unit():
    dec = decide(parse_sequent("|-L I_l"), size_bound=3)
    assert dec.verdict == "provable" and dec.size == 1
    assert check_sc(dec.proof).ok


def test_decide_no_rule_applies():
    assert decide(parse_sequent("x:a |-L b")).verdict == "unprovable-at-bound"


def test_decide_reports_bound_hit():
    dec = decide(parse_sequent(FLAGSHIP), size_bound=64, budget=3)
    assert dec.verdict == "bound hit"


def test_decide_size_bound_cuts_off_large_proofs():
    s = parse_sequent(FLAGSHIP)
    full = decide(s)
    assert full.provable and full.size == full.proof.size()
    assert decide(s, size_bound=full.size - 1).verdict == "unprovable-at-bound"


@pytest.mark.parametrize("text,provable", [
    ("x:p * q |-C q * p", True),
    ("x:p -o q ; y:F p |-L F q", True),
    ("y:b ->> c ; x:a ->> b |-L a ->> c", True),
    ("x:a ->> b ; y:b ->> c |-L a ->> c", False),
])
def test_found_proofs_are_cut_free_and_check(text, provable):
    s = parse_sequent(text)
    p = prove(s)
    assert (p is not None) == provable == decide(s).provable
    if p is not None:
        assert p.conclusion == s and is_cut_free(p) and check_sc(p).ok


def test_mixed_sequent_unprovable():
    s = parse_sequent("x:p ; y:a |-L a |> F p")
    assert prove(s) is None
    assert not decide(s).provable


def test_corpus_shape(corpus):
    assert len(corpus) == 27222
    for s in corpus[::97]:
        assert len(s.hyps.formulas) <= 3
        leaves = [a for f in s.hyps.formulas + (s.goal,) for a in atoms(f)]
        assert {a.name for a in leaves} <= {"p", "q", "a", "b"}


def test_prove_agrees_with_decide_on_two_atom_sample(corpus):
    # sample of the sequents over {p, a}; the full corpus runs in the acceptance suite
    sub = [s for s in corpus
           if {a.name for f in s.hyps.formulas + (s.goal,) for a in atoms(f)} <= {"p", "a"}]
    rng = random.Random(0)
    for s in rng.sample(sub, 400):
        assert (prove(s, 12) is not None) == decide(s).provable, str(s)
