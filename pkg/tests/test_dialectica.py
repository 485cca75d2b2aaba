import itertools
import json
import random

import pytest

from cnc.dialectica import (BiclosedPoset, DialLawError, DialMorphism, FragmentError, SizeError,
                            bang_d, bang_delta, bang_eps, bang_maps, bang_obj, bang_w, boolean_poset,
                            compose, curry_l, curry_r, exchange_arrow, find_morphism,
                            find_noncommutative_poset, hom, hom_count, homl, homr, identity,
                            interpret, make_object, multisets, refute, small_objects, tensor,
                            uncurry_l, uncurry_r, unit_obj, validate_poset, xi_maps, xi_obj)
from cnc.syntax.parser import parse_sequent

from conftest import POSETS, load_poset


def objs(P, limit=None):
    out = small_objects(P, 2)
    return out if limit is None else out[:limit]


# ------------------------------------------------------------------ posets

def test_boolean_valid(boolean):
    r = validate_poset(boolean)
    assert r.ok and r.facts["commutative"] and r.facts["xi_identity"]
    assert boolean.r("1", "0") == "0" and boolean.l("0", "1") == "0"
    assert boolean.r("0", "0") == "1"


def test_boolean_with_wrong_unit():
    data = boolean_poset().to_json()
    data["unit"] = "0"
    r = validate_poset(BiclosedPoset.from_json(data))
    assert not r.ok
    assert any(f.startswith("monoid: unit law") for f in r.failures)


def test_committed_fixture_valid_and_noncommutative(nc4):
    r = validate_poset(nc4)
    assert r.ok
    assert r.facts == {"commutative": False, "xi_identity": False, "xi_lax_monoidal": True}
    assert len(nc4.carrier) <= 5
    assert nc4.mul("c", "b") != nc4.mul("b", "c")


def test_committed_validation_reports_match():
    for name in ("boolean", "noncommutative4"):
        P = load_poset(f"{name}.json")
        stored = json.loads((POSETS / f"{name}.validation.json").read_text())
        assert validate_poset(P).to_json() == stored


def test_fixture_rediscovered(nc4):
    found = find_noncommutative_poset(max_size=5)
    assert found is not None
    assert found.to_json() == nc4.to_json()


def test_residuals_of_fixture(nc4):
    for a, b in itertools.product(nc4.carrier, repeat=2):
        r, l = nc4.r(a, b), nc4.l(b, a)
        for x in nc4.carrier:
            assert nc4.le(nc4.mul(a, x), b) == nc4.le(x, r)
            assert nc4.le(nc4.mul(x, a), b) == nc4.le(x, l)


def test_missing_residual_reported():
    # join on {0 ≤ 1} with unit 0: nothing x satisfies 1 ∨ x ≤ 0
    P = BiclosedPoset(["0", "1"], [("0", "0"), ("0", "1"), ("1", "1")],
                      {(a, b): max(a, b) for a in "01" for b in "01"}, "0")
    r = validate_poset(P)
    assert not r.ok
    assert "residual 1 ⇀ 0 does not exist" in r.failures
    with pytest.raises(DialLawError):
        P.r("1", "0")


def test_identity_xi_breaks_exchange_on_fixture(nc4):
    bare = BiclosedPoset(nc4.carrier, nc4.leq, nc4.mult, nc4.unit)
    r = validate_poset(bare)
    assert not r.ok and any("Exchange" in f for f in r.failures)


def test_json_roundtrip(nc4):
    again = BiclosedPoset.from_json(json.dumps(nc4.to_json()))
    assert again.to_json() == nc4.to_json()


# ------------------------------------------------------------------ objects and arrows

def test_multisets_and_guard():
    assert len(multisets(["x", "y"], 2)) == 6
    with pytest.raises(SizeError):
        tensor(*[make_object(range(3), range(3), [["1"] * 3] * 3)] * 2, boolean_poset(), limit=1000)


def test_tensor_of_points_is_unit(poset):
    pt = make_object(["*"], ["*"], [[poset.unit]])
    T = tensor(pt, pt, poset)
    assert set(T.rel.values()) == {poset.unit}


def test_tensor_relation_by_hand(nc4):
    A = make_object(["u0", "u1"], ["x0", "x1"], [["c", "b"], ["e", "a"]])
    B = make_object(["v0", "v1"], ["y0", "y1"], [["b", "c"], ["c", "e"]])
    T = tensor(A, B, nc4)
    # α(u0, f v0) = c and β(v0, g u0) = b; c∘b = b while b∘c = a
    assert T.rel[("u0", "v0"), (("x0", "x1"), ("y0", "y1"))] == "b"
    assert T.rel[("u1", "v1"), (("x0", "x0"), ("y0", "y1"))] == nc4.mul("e", "e")


def test_unit_tensor_sizes_and_unitor(poset):
    I = unit_obj(poset)
    for A in objs(poset, 12):
        IA = tensor(I, A, poset)
        assert (len(IA.U), len(IA.X)) == (len(A.U), len(A.X))
        lam = DialMorphism(IA, A, tuple(u for (_, u) in IA.U),
                           tuple(next(x for x in IA.X if x[1] == (y,)) for y in A.X))
        assert lam.is_valid(poset)
        assert hom_count(IA, A, poset) > 0


def test_identity_and_composition_laws(poset):
    rng = random.Random(5)
    pool = objs(poset)
    for _ in range(40):
        A, B, C, D = (rng.choice(pool) for _ in range(4))
        fs, gs, hs = list(hom(A, B, poset)), list(hom(B, C, poset)), list(hom(C, D, poset))
        if not (fs and gs and hs):
            continue
        f, g, h = rng.choice(fs), rng.choice(gs), rng.choice(hs)
        assert compose(identity(A), f) == f == compose(f, identity(B))
        gf = compose(f, g)
        assert gf.is_valid(poset)
        assert compose(gf, h) == compose(f, compose(g, h))


def test_hom_enumeration_matches_brute_force(boolean):
    A = make_object(["u0", "u1"], ["x0", "x1"], [["1", "0"], ["0", "1"]])
    B = make_object(["v0"], ["y0", "y1"], [["0", "1"]])
    brute = sum(DialMorphism(A, B, f, F).is_valid(boolean)
                for f in itertools.product(B.U, repeat=2) for F in itertools.product(A.X, repeat=2))
    assert hom_count(A, B, boolean) == brute == len(list(hom(A, B, boolean)))


# ------------------------------------------------------------------ closed structure

def test_currying_bijections_sample(poset):
    rng = random.Random(2)
    pool = objs(poset)
    for _ in range(15):
        A, B, C = (rng.choice(pool) for _ in range(3))
        T, R, L = tensor(A, B, poset), homr(B, C, poset), homl(C, A, poset)
        left = list(hom(T, C, poset))
        assert len(left) == hom_count(A, R, poset) == hom_count(B, L, poset)
        for m in left:
            n = curry_r(m, A, B, C, poset, R)
            assert n.is_valid(poset) and uncurry_r(n, A, B, C, poset, T) == m
            k = curry_l(m, A, B, C, poset, L)
            assert k.is_valid(poset) and uncurry_l(k, A, B, C, poset, T) == m


def test_evaluation_exists(poset):
    for A in objs(poset, 6):
        assert find_morphism(tensor(A, homr(A, A, poset), poset), A, poset) is not None
        assert find_morphism(tensor(homl(A, A, poset), A, poset), A, poset) is not None


# ------------------------------------------------------------------ modalities

def test_identity_xi_is_trivial(boolean):
    for A in objs(boolean, 8):
        assert xi_obj(A, boolean) == A
        eps, delta = xi_maps(A, boolean)
        assert eps == identity(A) and delta == identity(A)


def test_counit_is_minimality(nc4):
    for A in objs(nc4, 30):
        eps, _ = xi_maps(A, nc4)
        assert eps.is_valid(nc4)
        assert all(nc4.le(nc4.xi[A.rel[k]], A.rel[k]) for k in A.rel)


def test_comonad_laws(poset):
    for A in objs(poset, 30):
        eps, delta = xi_maps(A, poset)
        XA = xi_obj(A, poset)
        eps_x, delta_x = xi_maps(XA, poset)
        assert compose(delta, eps_x) == identity(XA)
        xe = DialMorphism(xi_obj(XA, poset), XA, eps.f, eps.F)
        assert compose(delta, xe) == identity(XA)
        xd = DialMorphism(xi_obj(XA, poset), xi_obj(xi_obj(XA, poset), poset), delta.f, delta.F)
        assert compose(delta, xd) == compose(delta, delta_x)


def test_exchange_is_involutive(poset):
    pool = objs(poset, 10)
    for A, B in itertools.product(pool, repeat=2):
        e_ab, e_ba = exchange_arrow(A, B, poset), exchange_arrow(B, A, poset)
        assert compose(e_ab, e_ba) == identity(e_ab.src)


def test_bang_empty_multiset_is_unit(poset):
    A = objs(poset)[5]
    B = bang_obj(A, 2, poset)
    empty = tuple(() for _ in A.U)
    assert all(B.rel[u, empty] == poset.unit for u in A.U)


def test_bang_structure_maps(poset):
    for A in objs(poset):
        m = bang_maps(A, 2, poset)
        for arrow in m:
            assert arrow.is_valid(poset)


def test_bang_d_without_grading_exists(poset):
    for A in objs(poset):
        if len(A.U) * len(A.X) > 2:
            continue
        B = bang_obj(A, 2, poset)
        assert find_morphism(B, tensor(B, B, poset), poset) is not None


def test_bang_split_range(boolean):
    A = objs(boolean)[3]
    assert bang_d(A, 2, boolean, split=0).is_valid(boolean)
    assert bang_delta(A, 2, 1, boolean).is_valid(boolean)
    assert bang_w(A, 0, boolean).is_valid(boolean)
    with pytest.raises(ValueError):
        bang_d(A, 2, boolean, split=3)
    with pytest.raises(ValueError):
        bang_eps(A, 0, boolean)


# ------------------------------------------------------------------ sequents

def test_identity_sequent_not_refuted(poset):
    assert refute(parse_sequent("x:a |-L a"), poset) is None


def test_swap_refuted_on_fixture(nc4):
    cm = refute(parse_sequent("x:a ; y:b |-L b |> a"), nc4)
    assert cm is not None
    assert find_morphism(cm.context, cm.goal, nc4) is None
    assert hom_count(cm.context, cm.goal, nc4) == 0


def test_swap_holds_in_commutative_model(boolean):
    assert refute(parse_sequent("x:a ; y:b |-L b |> a"), boolean) is None


def test_flagship_has_morphism_for_every_valuation(nc4):
    s = parse_sequent("x:F(G a) ; y:F(G b) |-L F(G b) |> F(G a)")
    pool = objs(nc4)
    rng = random.Random(4)
    for _ in range(60):
        val = {"a": rng.choice(pool), "b": rng.choice(pool)}
        ctx, goal = interpret(s, val, nc4)
        assert find_morphism(ctx, goal, nc4) is not None
    assert refute(s, nc4, size_bound=1) is None


def test_fragment_enforced(boolean):
    with pytest.raises(FragmentError):
        refute(parse_sequent("x:F p |-L F p"), boolean)
    with pytest.raises(FragmentError):
        refute(parse_sequent("x:p |-C p"), boolean)
