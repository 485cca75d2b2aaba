"""Sequent-calculus rule schemas and the proof checker.

Each rule has a matcher that relates a conclusion to its premises. A
successful match also records where every conclusion hypothesis came from,
which the cut-elimination engine uses to push cuts through rules.
Hypotheses are compared by formula and position; names are labels only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from ..syntax.formulas import (CImp, CTensor, CUnit, F, Formula, G, LImp,
                               LTensor, LUnit, RImp)
from ..syntax.sequents import RULE_ARITY, RULE_SIDE, ProofTree, Sequent

PRINCIPAL = "principal"
Origin = tuple[int, int] | str  # (premise, position) or PRINCIPAL


@dataclass(frozen=True)
class Match:
    """A successful reading of one rule instance.

    ``origin[i]`` says where conclusion hypothesis ``i`` lives in the
    premises. ``pos`` is the rule's anchor index: the principal hypothesis
    of a left rule, the first swapped slot of an exchange, or the cut
    position inside the second premise of a cut.
    """

    rule: str
    origin: tuple[Origin, ...]
    pos: int | None = None
    goal_premise: int | None = None
    extra: dict = field(default_factory=dict)


class RuleMismatch(Exception):
    pass


@dataclass
class CheckReport:
    ok: bool
    failures: list[tuple[tuple[int, ...], str, str]]

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"at {list(path)} [{rule}]: {msg}" for path, rule, msg in self.failures)


def _seq(s: Sequent) -> tuple[list[Formula], Formula]:
    return list(s.hyps.formulas), s.goal


def _insert_left(rule: str, c: Sequent, ps: Sequence[Sequent],
                 test: Callable[[Formula], list[Formula] | None]) -> Iterator[Match]:
    """One-premise left rule: hypothesis k of the conclusion is replaced by
    the formulas ``test(C[k])`` in the premise."""
    C, g = _seq(c)
    P, g0 = _seq(ps[0])
    if g0 != g:
        return
    for k, h in enumerate(C):
        parts = test(h)
        if parts is None:
            continue
        if P == C[:k] + parts + C[k + 1:]:
            n = len(parts)
            origin = tuple((0, i) if i < k else PRINCIPAL if i == k else (0, i - 1 + n) for i in range(len(C)))
            yield Match(rule, origin, k, 0)


def _unit(u: Formula):
    return lambda h: [] if h == u else None


def _tensor(cls):
    return lambda h: [h.left, h.right] if isinstance(h, cls) else None


def _m_ax(rule, c, ps):
    C, g = _seq(c)
    if len(C) != 1:
        yield RuleMismatch("axiom needs exactly one hypothesis")
    elif C[0] != g:
        yield RuleMismatch("axiom formulas differ")
    else:
        yield Match(rule, (PRINCIPAL,))


def _m_unitR(rule, c, ps):
    unit = CUnit() if rule == "unitR" else LUnit()
    C, g = _seq(c)
    if C:
        yield RuleMismatch("unit introduction needs an empty context")
    elif g != unit:
        yield RuleMismatch(f"goal must be {'I_c' if rule == 'unitR' else 'I_l'}")
    else:
        yield Match(rule, ())


def _m_tenR(rule, c, ps):
    cls = CTensor if rule == "tenR" else LTensor
    C, g = _seq(c)
    P0, g0 = _seq(ps[0])
    P1, g1 = _seq(ps[1])
    if not isinstance(g, cls) or g.left != g0 or g.right != g1:
        yield RuleMismatch("goal is not the tensor of the premise goals")
    elif C != P0 + P1:
        yield RuleMismatch("context is not the concatenation of the premise contexts")
    else:
        n = len(P0)
        yield Match(rule, tuple((0, i) if i < n else (1, i - n) for i in range(len(C))))


def _m_impR(rule, c, ps):
    C, g = _seq(c)
    P, g0 = _seq(ps[0])
    if rule == "impR" and isinstance(g, CImp):
        arg, res, expect, shift = g.left, g.right, C + [g.left], 0
    elif rule == "imprR" and isinstance(g, RImp):
        arg, res, expect, shift = g.arg, g.res, C + [g.arg], 0
    elif rule == "implR" and isinstance(g, LImp):
        arg, res, expect, shift = g.arg, g.res, [g.arg] + C, 1
    else:
        yield RuleMismatch("goal has the wrong connective")
        return
    if g0 != res or P != expect:
        yield RuleMismatch("premise does not match the discharged implication")
    else:
        yield Match(rule, tuple((0, i + shift) for i in range(len(C))))


def _m_impL(rule, c, ps):
    """impL, impL_mixed, imprL: Ψ1, X⊸Y, Φ, Ψ2 from Φ ⊢ X and Ψ1, Y, Ψ2 ⊢ Z."""
    cls = RImp if rule == "imprL" else CImp
    C, g = _seq(c)
    P0, g0 = _seq(ps[0])
    P1, g1 = _seq(ps[1])
    if g != g1:
        yield RuleMismatch("goal differs from the second premise's goal")
        return
    n = len(P0)
    found = False
    for k, h in enumerate(C):
        if not isinstance(h, cls):
            continue
        arg, res = h.children()
        if arg != g0 or k >= len(P1) or P1[k] != res:
            continue
        if C[k + 1:k + 1 + n] == P0 and C[:k] == P1[:k] and C[k + 1 + n:] == P1[k + 1:]:
            found = True
            origin = []
            for i in range(len(C)):
                if i < k:
                    origin.append((1, i))
                elif i == k:
                    origin.append(PRINCIPAL)
                elif i <= k + n:
                    origin.append((0, i - k - 1))
                else:
                    origin.append((1, i - n))
            yield Match(rule, tuple(origin), k, 1)
    if not found:
        yield RuleMismatch("no implication hypothesis splits the context as required")


def _m_implL(rule, c, ps):
    """Γ1; Δ; A2 <<- A1; Γ2 from Δ ⊢ A1 and Γ1; A2; Γ2 ⊢ B."""
    C, g = _seq(c)
    P0, g0 = _seq(ps[0])
    P1, g1 = _seq(ps[1])
    if g != g1:
        yield RuleMismatch("goal differs from the second premise's goal")
        return
    n = len(P0)
    found = False
    for k, h in enumerate(C):
        if not isinstance(h, LImp) or h.arg != g0:
            continue
        j = k - n  # start of Δ
        if j < 0 or j >= len(P1) or P1[j] != h.res:
            continue
        if C[j:k] == P0 and C[:j] == P1[:j] and C[k + 1:] == P1[j + 1:]:
            found = True
            origin = []
            for i in range(len(C)):
                if i < j:
                    origin.append((1, i))
                elif i < k:
                    origin.append((0, i - j))
                elif i == k:
                    origin.append(PRINCIPAL)
                else:
                    origin.append((1, i - n))
            yield Match(rule, tuple(origin), k, 1, {"delta_start": j})
    if not found:
        yield RuleMismatch("no left implication hypothesis splits the context as required")


def _m_ex(rule, c, ps):
    C, g = _seq(c)
    P, g0 = _seq(ps[0])
    if g != g0 or len(C) != len(P):
        yield RuleMismatch("exchange must keep the goal and context length")
        return
    diff = [i for i in range(len(C)) if C[i] != P[i]]
    cands = [diff[0]] if diff else list(range(len(C) - 1))
    found = False
    for k in cands:
        if k + 1 >= len(C):
            continue
        if C[k] != P[k + 1] or C[k + 1] != P[k] or C[:k] != P[:k] or C[k + 2:] != P[k + 2:]:
            continue
        if rule == "ex_L" and not (C[k].sort == "C" and C[k + 1].sort == "C"):
            yield RuleMismatch("ex_L may only swap two C-sort hypotheses")
            return
        found = True
        origin = tuple((0, k + 1) if i == k else (0, k) if i == k + 1 else (0, i) for i in range(len(C)))
        yield Match(rule, origin, k, 0)
        break
    if not found:
        yield RuleMismatch("conclusion is not an adjacent swap of the premise context")


def _m_Fr(rule, c, ps):
    C, g = _seq(c)
    P, g0 = _seq(ps[0])
    if not isinstance(g, F) or g.body != g0:
        yield RuleMismatch("goal must be F of the premise goal")
    elif not all(h.sort == "C" for h in C):
        yield RuleMismatch("Fr requires an all-C-sort context")
    elif C != P:
        yield RuleMismatch("context must equal the premise context")
    else:
        yield Match(rule, tuple((0, i) for i in range(len(C))))


def _m_Gr(rule, c, ps):
    C, g = _seq(c)
    P, g0 = _seq(ps[0])
    if not isinstance(g, G) or g.body != g0:
        yield RuleMismatch("goal must be G of the premise goal")
    elif C != P:
        yield RuleMismatch("context must equal the premise context")
    else:
        yield Match(rule, tuple((0, i) for i in range(len(C))))


def _m_cut(rule, c, ps):
    C, g = _seq(c)
    P0, g0 = _seq(ps[0])
    P1, g1 = _seq(ps[1])
    if g != g1:
        yield RuleMismatch("goal differs from the second premise's goal")
        return
    n = len(P0)
    found = False
    for k, h in enumerate(P1):
        if h != g0:
            continue
        if C == P1[:k] + P0 + P1[k + 1:]:
            found = True
            origin = tuple((1, i) if i < k else (0, i - k) if i < k + n else (1, i - n + 1) for i in range(len(C)))
            yield Match(rule, origin, k, 1, {"cut_formula": g0})
    if not found:
        yield RuleMismatch("context is not the second premise with the cut formula replaced")


PREMISE_SIDES: dict[str, tuple[str, ...]] = {
    "ax_C": (), "ax_L": (), "unitR": (), "unitR_L": (),
    "unitL": ("C",), "tenL": ("C",), "impR": ("C",), "Gr": ("L",), "ex_C": ("C",),
    "tenR": ("C", "C"), "impL": ("C", "C"), "cut": ("C", "C"),
    "unitL1": ("L",), "unitL2": ("L",), "ex_L": ("L",), "tenL1": ("L",), "tenL2": ("L",),
    "imprR": ("L",), "implR": ("L",), "Fl": ("L",), "Fr": ("C",), "Gl": ("L",),
    "tenR_L": ("L", "L"), "impL_mixed": ("C", "L"), "imprL": ("L", "L"),
    "implL": ("L", "L"), "cut1": ("C", "L"), "cut2": ("L", "L"),
}

_MATCHERS: dict[str, Callable] = {
    "ax_C": _m_ax, "ax_L": _m_ax,
    "unitR": _m_unitR, "unitR_L": _m_unitR,
    "unitL": lambda r, c, ps: _insert_left(r, c, ps, _unit(CUnit())),
    "unitL1": lambda r, c, ps: _insert_left(r, c, ps, _unit(CUnit())),
    "unitL2": lambda r, c, ps: _insert_left(r, c, ps, _unit(LUnit())),
    "tenL": lambda r, c, ps: _insert_left(r, c, ps, _tensor(CTensor)),
    "tenL1": lambda r, c, ps: _insert_left(r, c, ps, _tensor(CTensor)),
    "tenL2": lambda r, c, ps: _insert_left(r, c, ps, _tensor(LTensor)),
    "Fl": lambda r, c, ps: _insert_left(r, c, ps, lambda h: [h.body] if isinstance(h, F) else None),
    "Gl": lambda r, c, ps: _insert_left(r, c, ps, lambda h: [h.body] if isinstance(h, G) else None),
    "tenR": _m_tenR, "tenR_L": _m_tenR,
    "impR": _m_impR, "imprR": _m_impR, "implR": _m_impR,
    "impL": _m_impL, "impL_mixed": _m_impL, "imprL": _m_impL,
    "implL": _m_implL,
    "ex_C": _m_ex, "ex_L": _m_ex,
    "Fr": _m_Fr, "Gr": _m_Gr,
    "cut": _m_cut, "cut1": _m_cut, "cut2": _m_cut,
}


def matches(rule: str, conclusion: Sequent, premises: Sequence[Sequent]) -> Iterator[Match | RuleMismatch]:
    if rule not in RULE_ARITY:
        yield RuleMismatch(f"unknown rule {rule!r}")
        return
    if len(premises) != RULE_ARITY[rule]:
        yield RuleMismatch(f"{rule} takes {RULE_ARITY[rule]} premise(s)")
        return
    if conclusion.side != RULE_SIDE[rule]:
        yield RuleMismatch(f"{rule} concludes a |-{RULE_SIDE[rule]} sequent")
        return
    for i, (want, p) in enumerate(zip(PREMISE_SIDES[rule], premises)):
        if p.side != want:
            yield RuleMismatch(f"premise {i + 1} of {rule} must be a |-{want} sequent")
            return
    if rule in ("unitL", "tenL", "unitL1", "unitL2", "tenL1", "tenL2", "Fl", "Gl"):
        produced = False
        for m in _MATCHERS[rule](rule, conclusion, premises):
            produced = True
            yield m
        if not produced:
            yield RuleMismatch("no hypothesis decomposes into the premise context")
        return
    yield from _MATCHERS[rule](rule, conclusion, premises)


def match_rule(rule: str, conclusion: Sequent, premises: Sequence[Sequent]) -> Match:
    """First valid reading of a rule instance; raises RuleMismatch otherwise."""
    err: RuleMismatch | None = None
    for m in matches(rule, conclusion, premises):
        if isinstance(m, Match):
            return m
        err = err or m
    raise err or RuleMismatch("rule does not apply")


def match_node(p: ProofTree) -> Match:
    return match_rule(p.rule, p.conclusion, [q.conclusion for q in p.premises])


def check_sc(p: ProofTree) -> CheckReport:
    failures: list[tuple[tuple[int, ...], str, str]] = []
    stack: list[tuple[ProofTree, tuple[int, ...]]] = [(p, ())]
    while stack:
        node, path = stack.pop()
        try:
            match_node(node)
        except RuleMismatch as e:
            failures.append((path, node.rule, str(e)))
        for i, q in enumerate(node.premises):
            stack.append((q, path + (i,)))
    failures.sort()
    return CheckReport(not failures, failures)


def is_cut_free(p: ProofTree) -> bool:
    return all(n.rule not in ("cut", "cut1", "cut2") for n in p.nodes())
