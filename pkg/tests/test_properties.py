from collections import Counter

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cnc.cutelim import default_pool, eliminate_cuts, lower_rank, measure, random_cut_proofs
from cnc.dialectica import (boolean_poset, compose, curry_l, curry_r, hom, homl, homr, identity,
                            small_objects, tensor, uncurry_l, uncurry_r)
from cnc.kernel.nd import check_nd
from cnc.kernel.sc import check_sc, is_cut_free
from cnc.rewrite import normalize, random_typed_terms, redexes, source_terms
from cnc.search import prove, small_corpus
from cnc.syntax.formulas import (CAtom, CImp, CTensor, CUnit, F, G, LAtom, LImp, LTensor, LUnit,
                                 RImp, rank)
from cnc.syntax.parser import parse_formula, parse_proof, parse_sequent, parse_term
from cnc.syntax.printer import print_formula, print_proof, print_sequent, print_term
from cnc.syntax.sequents import Sequent
from cnc.syntax.terms import alpha_eq, free_occurrences
from cnc.translate import nd_ok, nd_to_sc, sc_to_nd

from conftest import load_poset

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

_SOURCES = source_terms()
_POOL = default_pool()
_CORPUS = small_corpus()[::7]
_POSETS = {"boolean": boolean_poset(), "noncommutative4": load_poset("noncommutative4.json")}
_OBJECTS = {k: small_objects(P, 2) for k, P in _POSETS.items()}


def _leaf(sort):
    if sort == "C":
        return st.sampled_from([CAtom("p"), CAtom("q"), CAtom("r"), CUnit()])
    return st.sampled_from([LAtom("a"), LAtom("b"), LAtom("c"), LUnit()])


def _formula(sort, d):
    if d == 0:
        return _leaf(sort)
    c, l = _formula("C", d - 1), _formula("L", d - 1)
    if sort == "C":
        return st.one_of(_leaf("C"), st.builds(CTensor, c, c), st.builds(CImp, c, c), st.builds(G, l))
    return st.one_of(_leaf("L"), st.builds(LTensor, l, l), st.builds(RImp, l, l),
                     st.builds(LImp, l, l), st.builds(F, c))


def formulas(sort):
    return _formula(sort, 3)


any_formula = st.one_of(formulas("C"), formulas("L"))


@st.composite
def sequents(draw):
    side = draw(st.sampled_from("CL"))
    if side == "C":
        hyps = draw(st.lists(formulas("C"), max_size=3))
    else:
        hyps = draw(st.lists(any_formula, max_size=3))
    return Sequent.make(side, hyps, draw(formulas(side)))


# ------------------------------------------------------------------ syntax

@SETTINGS
@given(any_formula)
def test_formula_print_parse_roundtrip(f):
    assert parse_formula(print_formula(f)) == f


@SETTINGS
@given(any_formula)
def test_rank_counts_connectives(f):
    text = print_formula(f)
    ops = sum(text.count(t) for t in ("*", "|>", "-o", "->>", "<<-")) + sum(
        1 for i, ch in enumerate(text) if ch in "FG" and (i == 0 or not text[i - 1].isalnum()))
    assert rank(f) == ops


@SETTINGS
@given(sequents())
def test_sequent_roundtrip(s):
    assert parse_sequent(print_sequent(s)) == s


@SETTINGS
@given(st.sampled_from(_SOURCES))
def test_term_roundtrip(src):
    _, t, _ = src
    assert alpha_eq(parse_term(print_term(t)), t)


# ------------------------------------------------------------------ search

@SETTINGS
@given(st.sampled_from(_CORPUS))
def test_found_proofs_check(s):
    p = prove(s, 12)
    if p is not None:
        assert p.conclusion == s and is_cut_free(p) and check_sc(p).ok


# ------------------------------------------------------------------ cut elimination

@SETTINGS
@given(st.integers(0, 10_000))
def test_cut_elimination_preserves_conclusion(seed):
    (p,) = random_cut_proofs(1, seed=seed, pool=_POOL)
    out = eliminate_cuts(p)
    assert out.conclusion == p.conclusion and is_cut_free(out) and check_sc(out).ok


@SETTINGS
@given(st.integers(0, 10_000))
def test_lower_rank_strictly_decreases(seed):
    (p,) = random_cut_proofs(1, seed=seed, pool=_POOL)
    q = lower_rank(p)
    assert measure(q).cut_rank < measure(p).cut_rank
    assert q.conclusion == p.conclusion


@SETTINGS
@given(st.integers(0, 10_000))
def test_proof_print_parse_roundtrip(seed):
    (p,) = random_cut_proofs(1, seed=seed, pool=_POOL)
    assert parse_proof(print_proof(p)) == p


# ------------------------------------------------------------------ translation

@SETTINGS
@given(st.integers(0, 10_000))
def test_translation_roundtrip_keeps_sequent(seed):
    (p,) = random_cut_proofs(1, seed=seed, pool=_POOL)
    d = sc_to_nd(p)
    assert nd_ok(d)
    back = nd_to_sc(d)
    assert check_sc(back).ok and back.conclusion.shape == p.conclusion.shape


# ------------------------------------------------------------------ rewriting

@SETTINGS
@given(st.integers(0, 10_000))
def test_subject_reduction(seed):
    ((ctx, t, typ),) = random_typed_terms(1, seed=seed, sources=_SOURCES)
    for s in redexes(t):
        check_nd(ctx, s.after, typ)


@SETTINGS
@given(st.integers(0, 10_000))
def test_steps_keep_free_variables(seed):
    ((ctx, t, typ),) = random_typed_terms(1, seed=seed, sources=_SOURCES)
    fv = Counter(free_occurrences(t))
    for s in redexes(t):
        assert Counter(free_occurrences(s.after)) == fv


@SETTINGS
@given(st.integers(0, 10_000))
def test_normalize_deterministic(seed):
    ((ctx, t, typ),) = random_typed_terms(1, seed=seed, sources=_SOURCES)
    a, b = normalize(t), normalize(t)
    assert a == b
    check_nd(ctx, a[0], typ)


# ------------------------------------------------------------------ dialectica

obj_index = st.integers(0, 10_000)


@SETTINGS
@given(st.sampled_from(sorted(_POSETS)), obj_index, obj_index, obj_index, st.randoms(use_true_random=False))
def test_composition_closure_and_category_laws(name, i, j, k, rnd):
    P, pool = _POSETS[name], _OBJECTS[name]
    A, B, C = (pool[n % len(pool)] for n in (i, j, k))
    fs, gs = list(hom(A, B, P)), list(hom(B, C, P))
    if not fs or not gs:
        return
    f, g = rnd.choice(fs), rnd.choice(gs)
    gf = compose(f, g)
    assert gf.is_valid(P)
    assert compose(identity(A), f) == f and compose(f, identity(B)) == f
    hs = list(hom(C, A, P))
    if hs:
        h = rnd.choice(hs)
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


@SETTINGS
@given(st.sampled_from(sorted(_POSETS)), obj_index, obj_index, obj_index)
def test_currying_inverse(name, i, j, k):
    P, pool = _POSETS[name], _OBJECTS[name]
    A, B, C = (pool[n % len(pool)] for n in (i, j, k))
    T, R, L = tensor(A, B, P), homr(B, C, P), homl(C, A, P)
    left = list(hom(T, C, P))
    right_r = list(hom(A, R, P))
    right_l = list(hom(B, L, P))
    assert len(left) == len(right_r) == len(right_l)
    assert {curry_r(m, A, B, C, P, R) for m in left} == set(right_r)
    assert {curry_l(m, A, B, C, P, L) for m in left} == set(right_l)
    for n in right_r:
        assert curry_r(uncurry_r(n, A, B, C, P, T), A, B, C, P, R) == n
    for n in right_l:
        assert curry_l(uncurry_l(n, A, B, C, P, T), A, B, C, P, L) == n
