from collections import Counter

import pytest

from cnc.kernel.nd import check_nd
from cnc.rewrite import (BETA_RULES, annotate, beta_rule, beta_step, cc_rule, cc_step, normalize,
                         random_typed_terms, redexes, step)
from cnc.syntax.parser import parse_context, parse_formula, parse_term
from cnc.syntax.printer import print_term
from cnc.syntax.terms import Var, alpha_eq, free_occurrences


def T(s):
    return parse_term(s)


@pytest.fixture(scope="module")
def terms():
    return random_typed_terms(120, seed=1)


@pytest.mark.parametrize("src,rule,out", [
    ("let triv : I_c be triv in t", "letU", "t"),
    ("let triv : I_l be triv in t", "letUOne", "t"),
    ("(lam x:p. x) u", "lam", "u"),
    ("app_r (lam_r x:a. x) u", "lamR", "u"),
    ("app_l (lam_l x:a. x) u", "lamL", "u"),
    ("derelict (G s)", "derelict", "s"),
    ("let s * t : p * q be x * y in y * x", "letT", "t * s"),
    ("let s |> t : a |> b be x |> y in x |> y", "letTTwo", "s |> t"),
    ("let F u : F p be F x in F x", "letF", "F u"),
    ("let G u : G a be G x in x", "letG", "u"),
    ("let u : p be x in x", "letVar", "u"),
])
def test_beta_rules(src, rule, out):
    got = beta_rule(T(src))
    assert got is not None and got[0] == rule
    assert alpha_eq(got[1], T(out))
    assert alpha_eq(beta_step(T(src)), T(out))


def test_beta_needs_root_redex():
    assert beta_step(T("x")) is None
    assert beta_step(T("f ((lam x:p. x) u)")) is None


def test_tensor_against_application():
    got = cc_rule(T("(let z : p * q be x * y in f) u"))
    assert got[0] == "tenE/impE"
    assert print_term(got[1]) == "let z : p * q be x * y in f u"


def test_unit_against_unit():
    got = cc_step(T("let (let z : I_c be triv in s1) : I_c be triv in s2"))
    assert print_term(got) == "let z : I_c be triv in let s1 : I_c be triv in s2"


def test_cc_freshens_inner_binders():
    # y is free in the outer argument, so the inner binder must move away from it
    got = cc_step(T("(let z : p * q be x * y in f x) y"))
    assert got is not None
    assert sorted(free_occurrences(got)) == ["f", "y", "z"]


@pytest.mark.parametrize("ctx,src,goal,rule", [
    ("x:a ; u:I_c ; f:b <<- a", "app_l (let u : I_c be triv in f) x", "b", "unitE/implE"),
    ("u:I_l ; f:a ->> b ; x:a", "app_r (let u : I_l be triv in f) x", "b", "unitETwo/imprE"),
    ("z:F p ; x:a", "app_r (let z : F p be F y in lam_r w:a. (F y) |> w) x", "F p |> a", "FE/imprE"),
    ("z:p * q", "let (let z : p * q be x * y in F (y * x)) : F(q * p) be F w in F w", "F(q * p)",
     "tenE/FE"),
])
def test_mixed_conversion_keeps_type(ctx, src, goal, rule):
    c, t, g = parse_context(ctx, "L"), T(src), parse_formula(goal)
    check_nd(c, t, g)
    name, out = cc_rule(t)
    assert name == rule
    check_nd(c, out, g)
    nf, _, exhausted = normalize(t)
    assert not exhausted
    check_nd(c, nf, g)


def test_normal_term_untouched():
    assert normalize(T("x")) == (Var("x"), 0, False)


def test_two_step_normalization():
    trace = []
    nf, n, exhausted = normalize(T("(lam x:p. x) ((lam y:q. y) u)"), trace=trace)
    assert (nf, n, exhausted) == (Var("u"), 2, False)
    assert [s.rule for s in trace] == ["lam", "lam"]
    assert trace[0].path == ()


def test_fuel_exhaustion():
    t = T("(lam x:p. x) ((lam y:q. y) u)")
    nf, n, exhausted = normalize(t, fuel=1)
    assert n == 1 and exhausted
    assert normalize(t, fuel=0) == (t, 0, True)
    with pytest.raises(ValueError):
        normalize(t, fuel=-1)


def test_beta_before_commuting():
    # the cc redex sits to the left of a β redex; β still goes first
    t = T("((let z : p * q be x * y in f) u) ((lam w:p. w) v)")
    s = step(t)
    assert s.kind == "beta" and s.rule == "lam"


def test_leftmost_outermost():
    t = T("(lam x:p. (lam y:q. y) x) u")
    assert step(t).path == ()


def test_annotate_root_type():
    ctx = parse_context("z:p * q", "C")
    info = annotate(T("let z : p * q be x * y in y * x"), ctx)
    assert info[()] == ("C", parse_formula("q * p"))


def test_generated_terms_are_small_and_typed(terms):
    assert len(terms) >= 100
    for ctx, t, typ in terms:
        check_nd(ctx, t, typ)
        assert step(t) is not None


def test_subject_reduction_every_redex(terms):
    for ctx, t, typ in terms:
        for s in redexes(t):
            check_nd(ctx, s.after, typ)


def test_subject_reduction_along_normalization(terms):
    for ctx, t, typ in terms:
        trace = []
        nf, _, exhausted = normalize(t, trace=trace)
        assert not exhausted
        for s in trace:
            check_nd(ctx, s.after, typ)
        assert step(nf) is None


def test_rule_coverage(terms):
    seen = Counter(s.rule for _, t, _ in terms for s in redexes(t))
    missing = set(BETA_RULES) - set(seen) - {"letVar"}
    assert not missing
    assert sum(n for r, n in seen.items() if "/" in r) > 0
    assert len({r for r in seen if "/" in r}) >= 10
