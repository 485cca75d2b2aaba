"""Cut elimination: measures, one-cut reduction, rank lowering.

``reduce_cut`` removes the root cut on a formula φ whose premises contain
only cuts on formulas smaller than φ. It recurses on the summed depth of
the two premises, commuting the cut upward until both sides introduce φ,
then replaces it by cuts on immediate subformulas of φ. The commuting steps
are driven by the kernel's origin maps, so every rule is handled by one
generic mechanism instead of a table of cases.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .kernel.sc import PRINCIPAL, RuleMismatch, check_sc, match_node, match_rule
from .search import prove
from .syntax.formulas import (CImp, CTensor, CUnit, F, Formula, G, LImp,
                              LTensor, LUnit, RImp, rank)
from .syntax.sequents import CUT_RULES, Context, Hyp, ProofTree, Sequent


class CutElimError(ValueError):
    """Invalid input or a violated precondition."""


@dataclass(frozen=True)
class CutMeasure:
    cut_rank: int
    depth: int


def cut_formula(p: ProofTree) -> Formula:
    if p.rule not in CUT_RULES:
        raise CutElimError(f"{p.rule} is not a cut")
    return p.premises[0].conclusion.goal


def cut_rank(p: ProofTree) -> int:
    return max((1 + rank(cut_formula(n)) for n in p.nodes() if n.rule in CUT_RULES), default=0)


def measure(p: ProofTree) -> CutMeasure:
    report = check_sc(p)
    if not report.ok:
        raise CutElimError("invalid proof: " + report.summary())
    return CutMeasure(cut_rank(p), p.height())


# ------------------------------------------------------------- construction

RIGHT_RULES = frozenset({"unitR", "unitR_L", "tenR", "tenR_L", "impR", "imprR", "implR", "Fr", "Gr"})
EXCHANGES = frozenset({"ex_C", "ex_L"})
# a C-side left rule moved into an L-context
TO_L = {"unitL": "unitL1", "tenL": "tenL1", "ex_C": "ex_L", "impL": "impL_mixed", "cut": "cut1"}
CUT_BY_SIDES = {("C", "C"): "cut", ("C", "L"): "cut1", ("L", "L"): "cut2"}


class _Namer:
    """Deterministic renaming of clashing hypothesis names."""

    def __init__(self) -> None:
        self.counter = itertools.count(1)

    def ctx(self, side: str, entries: Sequence[Hyp]) -> Context:
        seen: set[str] = set()
        out = []
        taken = {n for n, _ in entries}
        for n, f in entries:
            if n in seen:
                while True:
                    n = f"c{next(self.counter)}"
                    if n not in taken:
                        break
                taken.add(n)
            seen.add(n)
            out.append((n, f))
        return Context(side, tuple(out))  # type: ignore[arg-type]

    def seq(self, side: str, entries: Sequence[Hyp], goal: Formula) -> Sequent:
        return Sequent(side, self.ctx(side, entries), goal)  # type: ignore[arg-type]


def _node(rule: str, concl: Sequent, prems: Sequence[ProofTree]) -> ProofTree:
    """Build an inference and check it on the spot."""
    try:
        match_rule(rule, concl, [q.conclusion for q in prems])
    except RuleMismatch as e:  # pragma: no cover - internal invariant
        raise AssertionError(f"cut elimination built a bad {rule} node: {e}") from e
    return ProofTree(rule, concl, tuple(prems))


def _relabel(p: ProofTree, concl: Sequent) -> ProofTree:
    if p.conclusion.shape != concl.shape:
        raise AssertionError("relabel changes the sequent")
    return ProofTree(p.rule, concl, p.premises)


def _entries(p: ProofTree) -> list[Hyp]:
    return list(p.conclusion.hyps.entries)


class _Reducer:
    def __init__(self) -> None:
        self.names = _Namer()

    def cut(self, pi1: ProofTree, pi2: ProofTree, pos: int) -> ProofTree:
        """A raw cut of pi1's goal into hypothesis ``pos`` of pi2."""
        c2 = _entries(pi2)
        concl = self.names.seq(pi2.conclusion.side, c2[:pos] + _entries(pi1) + c2[pos + 1:], pi2.conclusion.goal)
        rule = CUT_BY_SIDES[(pi1.conclusion.side, pi2.conclusion.side)]
        return _node(rule, concl, [pi1, pi2])

    def reduce(self, pi1: ProofTree, pi2: ProofTree, pos: int) -> ProofTree:
        """Eliminate the cut of pi1 into hypothesis ``pos`` of pi2."""
        phi = pi1.conclusion.goal
        c2 = _entries(pi2)
        side = pi2.conclusion.side
        concl = self.names.seq(side, c2[:pos] + _entries(pi1) + c2[pos + 1:], pi2.conclusion.goal)
        m2 = match_node(pi2)
        # axiom steps
        if pi1.rule in ("ax_C", "ax_L"):
            return _relabel(pi2, concl)
        if pi2.rule in ("ax_C", "ax_L"):
            return _relabel(pi1, concl)
        # exchange steps: the cut formula is one of the two swapped hypotheses
        if pi2.rule in EXCHANGES and m2.pos in (pos, pos - 1):
            return self._into_exchange(pi1, pi2, pos, concl)
        # principal formula vs principal formula
        if pi1.rule in RIGHT_RULES and m2.origin[pos] == PRINCIPAL:
            return self._principal(pi1, pi2, pos, concl)
        # secondary conclusion: pi1 does not introduce φ
        if pi1.rule not in RIGHT_RULES and pi1.rule not in CUT_RULES:
            return self._up_left(pi1, pi2, pos, concl)
        # secondary hypothesis: φ is passive in pi2's last inference
        if pi2.rule not in CUT_RULES and m2.origin[pos] != PRINCIPAL:
            return self._up_right(pi1, pi2, pos, concl)
        # cut against cut
        if pi1.rule in CUT_RULES:
            return self._up_left(pi1, pi2, pos, concl)
        return self._up_right(pi1, pi2, pos, concl)

    # -- commuting into the left premise
    def _up_left(self, pi1: ProofTree, pi2: ProofTree, pos: int, concl: Sequent) -> ProofTree:
        m1 = match_node(pi1)
        gp = m1.goal_premise
        assert gp is not None, pi1.rule
        prems = list(pi1.premises)
        prems[gp] = self.reduce(prems[gp], pi2, pos)
        rule = pi1.rule
        if pi1.conclusion.side != concl.side:
            rule = TO_L[rule]
        return _node(rule, concl, prems)

    # -- commuting into the right premise
    def _up_right(self, pi1: ProofTree, pi2: ProofTree, pos: int, concl: Sequent) -> ProofTree:
        m2 = match_node(pi2)
        origin = m2.origin[pos]
        assert origin != PRINCIPAL
        i, j = origin  # type: ignore[misc]
        prems = list(pi2.premises)
        prems[i] = self.reduce(pi1, prems[i], j)
        return _node(pi2.rule, concl, prems)

    def _into_exchange(self, pi1: ProofTree, pi2: ProofTree, pos: int, concl: Sequent) -> ProofTree:
        m2 = match_node(pi2)
        _, j = m2.origin[pos]  # type: ignore[misc]
        inner = self.reduce(pi1, pi2.premises[0], j)
        # block positions: conclusion order vs. premise order of the original hypotheses
        n1 = len(pi1.conclusion.hyps)
        src = [("h", m2.origin[i][1]) if i != pos else ("phi", 0) for i in range(len(m2.origin))]  # type: ignore[index]
        # expand: inner context = premise context with slot j replaced by pi1's context
        inner_ids: list[tuple] = []
        for k in range(len(pi2.premises[0].conclusion.hyps)):
            if k == j:
                inner_ids += [("phi", t) for t in range(n1)]
            else:
                inner_ids.append(("h", k))
        target_ids: list[tuple] = []
        for tag in src:
            if tag[0] == "phi":
                target_ids += [("phi", t) for t in range(n1)]
            else:
                target_ids.append(tag)
        return self._permute(inner, inner_ids, target_ids, concl)

    def _permute(self, p: ProofTree, ids: list[tuple], target: list[tuple], concl: Sequent) -> ProofTree:
        """Adjacent exchanges taking p's context order ``ids`` to ``target``."""
        rank_of = {t: i for i, t in enumerate(target)}
        keys = [rank_of[t] for t in ids]
        cur = _entries(p)
        side = concl.side
        rule = "ex_C" if side == "C" else "ex_L"
        node = p
        changed = True
        while changed:
            changed = False
            for k in range(len(keys) - 1):
                if keys[k] > keys[k + 1]:
                    keys[k], keys[k + 1] = keys[k + 1], keys[k]
                    cur[k], cur[k + 1] = cur[k + 1], cur[k]
                    node = _node(rule, self.names.seq(side, cur, concl.goal), [node])
                    changed = True
        return _relabel(node, concl)

    def _principal(self, pi1: ProofTree, pi2: ProofTree, pos: int, concl: Sequent) -> ProofTree:
        phi = pi1.conclusion.goal
        m2 = match_node(pi2)
        r1 = pi1.rule
        if r1 in ("unitR", "unitR_L"):
            return _relabel(pi2.premises[0], concl)
        if r1 in ("tenR", "tenR_L"):
            a, b = pi1.premises
            (sigma,) = pi2.premises
            inner = self.cut(b, sigma, pos + 1)
            return _relabel(self.cut(a, inner, pos), concl)
        if r1 in ("impR", "imprR"):
            (body,) = pi1.premises
            a, b = pi2.premises
            inner = self.cut(a, body, len(body.conclusion.hyps) - 1)
            return _relabel(self.cut(inner, b, pos), concl)
        if r1 == "implR":
            (body,) = pi1.premises
            a, b = pi2.premises
            inner = self.cut(a, body, 0)
            return _relabel(self.cut(inner, b, m2.extra["delta_start"]), concl)
        if r1 in ("Fr", "Gr"):
            (body,) = pi1.premises
            (sigma,) = pi2.premises
            return _relabel(self.cut(body, sigma, pos), concl)
        raise AssertionError(f"no principal case for {r1} against {pi2.rule} on {phi}")


def _cut_parts(p: ProofTree) -> tuple[ProofTree, ProofTree, int]:
    m = match_node(p)
    return p.premises[0], p.premises[1], m.pos  # type: ignore[return-value]


def reduce_cut(p: ProofTree) -> ProofTree:
    """Replace the root cut on φ by cuts on formulas of smaller rank."""
    if p.rule not in CUT_RULES:
        raise CutElimError("proof does not end in a cut")
    report = check_sc(p)
    if not report.ok:
        raise CutElimError("invalid proof: " + report.summary())
    phi = cut_formula(p)
    for q in p.premises:
        if cut_rank(q) > rank(phi):
            raise CutElimError("a premise contains a cut at least as large as the root cut")
    return _reduce_root(_Reducer(), p)


def _reduce_root(red: _Reducer, p: ProofTree) -> ProofTree:
    pi1, pi2, pos = _cut_parts(p)
    out = red.reduce(pi1, pi2, pos)
    return _relabel(out, p.conclusion)


def _lower(red: _Reducer, p: ProofTree, c: int) -> ProofTree:
    if cut_rank(p) < c:
        return p
    prems = tuple(_lower(red, q, c) for q in p.premises)
    node = ProofTree(p.rule, p.conclusion, prems)
    if p.rule in CUT_RULES and 1 + rank(cut_formula(p)) == c:
        return _reduce_root(red, node)
    return node


def lower_rank(p: ProofTree) -> ProofTree:
    """A proof of the same sequent with strictly smaller cut rank."""
    report = check_sc(p)
    if not report.ok:
        raise CutElimError("invalid proof: " + report.summary())
    c = cut_rank(p)
    if c == 0:
        raise CutElimError("proof is already cut-free")
    return _lower(_Reducer(), p, c)


def eliminate_cuts(p: ProofTree, trace: list[int] | None = None) -> ProofTree:
    """Iterate ``lower_rank`` to a cut-free proof of the same sequent.

    ``trace`` (if given) receives the cut rank before each pass and the final 0.
    """
    report = check_sc(p)
    if not report.ok:
        raise CutElimError("invalid proof: " + report.summary())
    red = _Reducer()
    while True:
        c = cut_rank(p)
        if trace is not None:
            trace.append(c)
        if c == 0:
            return p
        p = _lower(red, p, c)


# ---------------------------------------------------------------- generator

def eta_identity(f: Formula, side: str | None = None) -> ProofTree:
    """Cut-free η-expanded proof of f ⊢ f (no axiom on a compound formula)."""
    side = side or f.sort
    x = "e"
    seq = lambda s, hs, g: Sequent.make(s, hs, g, [f"{x}{i}" for i in range(1, len(hs) + 1)])  # noqa: E731
    ax = "ax_C" if side == "C" else "ax_L"
    if isinstance(f, CUnit):
        return ProofTree("unitL", seq("C", [f], f), (ProofTree("unitR", seq("C", [], f)),))
    if isinstance(f, LUnit):
        return ProofTree("unitL2", seq("L", [f], f), (ProofTree("unitR_L", seq("L", [], f)),))
    if isinstance(f, (CTensor, LTensor)):
        r = "tenR" if side == "C" else "tenR_L"
        l = "tenL" if isinstance(f, CTensor) and side == "C" else ("tenL1" if isinstance(f, CTensor) else "tenL2")
        a, b = eta_identity(f.left, side), eta_identity(f.right, side)
        inner = ProofTree(r, seq(side, [f.left, f.right], f), (a, b))
        return ProofTree(l, seq(side, [f], f), (inner,))
    if isinstance(f, CImp):
        a, b = eta_identity(f.left, "C"), eta_identity(f.right, "C")
        inner = ProofTree("impL", seq("C", [f, f.left], f.right), (a, b))
        return ProofTree("impR", seq("C", [f], f), (inner,))
    if isinstance(f, RImp):
        a, b = eta_identity(f.arg), eta_identity(f.res)
        inner = ProofTree("imprL", seq("L", [f, f.arg], f.res), (a, b))
        return ProofTree("imprR", seq("L", [f], f), (inner,))
    if isinstance(f, LImp):
        a, b = eta_identity(f.arg), eta_identity(f.res)
        inner = ProofTree("implL", seq("L", [f.arg, f], f.res), (a, b))
        return ProofTree("implR", seq("L", [f], f), (inner,))
    if isinstance(f, F):
        inner = ProofTree("Fr", seq("L", [f.body], f), (eta_identity(f.body, "C"),))
        return ProofTree("Fl", seq("L", [f], f), (inner,))
    if isinstance(f, G):
        inner = ProofTree("Gl", seq("L", [f], f.body), (eta_identity(f.body, "L"),))
        return ProofTree("Gr", seq("C", [f], f), (inner,))
    return ProofTree(ax, seq(side, [f], f))


def _splice_identity(p: ProofTree, rng: random.Random, max_rank: int) -> ProofTree | None:
    """Insert a cut against an η-identity at a random node of p."""
    nodes: list[tuple[tuple[int, ...], ProofTree]] = []

    def walk(q: ProofTree, path: tuple[int, ...]) -> None:
        nodes.append((path, q))
        for i, r in enumerate(q.premises):
            walk(r, path + (i,))

    walk(p, ())
    # pick the cut rank first so leaf axioms on atoms do not dominate
    sites: dict[int, list[tuple[tuple[int, ...], ProofTree, int]]] = {}
    for path, q in nodes:
        s = q.conclusion
        if rank(s.goal) <= max_rank:
            sites.setdefault(rank(s.goal), []).append((path, q, -1))
        for k, (_, h) in enumerate(s.hyps.entries):
            if rank(h) <= max_rank:
                sites.setdefault(rank(h), []).append((path, q, k))
    if not sites:
        return None
    path, q, k = rng.choice(sites[rng.choice(sorted(sites))])
    s = q.conclusion
    red = _Reducer()
    if k < 0:
        new = _relabel(red.cut(q, eta_identity(s.goal, s.side), 0), s)
    else:
        h = s.hyps.entries[k][1]
        new = _relabel(red.cut(eta_identity(h, h.sort), q, k), s)
    return _replace(p, path, new)


def _replace(p: ProofTree, path: tuple[int, ...], new: ProofTree) -> ProofTree:
    if not path:
        return new
    prems = list(p.premises)
    prems[path[0]] = _replace(prems[path[0]], path[1:], new)
    return ProofTree(p.rule, p.conclusion, tuple(prems))


def _root_cut(p: ProofTree, pool: Sequence[ProofTree], rng: random.Random, max_rank: int) -> ProofTree | None:
    """Cut p against a pool proof that consumes p's goal or produces one of p's hypotheses."""
    s = p.conclusion
    red = _Reducer()
    choices = []
    for q in pool:
        t = q.conclusion
        if rank(s.goal) <= max_rank:
            for k, (_, h) in enumerate(t.hyps.entries):
                if h == s.goal and (s.side, t.side) in CUT_BY_SIDES:
                    choices.append(("below", q, k))
        if rank(t.goal) <= max_rank:
            for k, (_, h) in enumerate(s.hyps.entries):
                if h == t.goal and (t.side, s.side) in CUT_BY_SIDES:
                    choices.append(("above", q, k))
    if not choices:
        return None
    kind, q, k = rng.choice(choices)
    return red.cut(p, q, k) if kind == "below" else red.cut(q, p, k)


def random_cut_proofs(n: int, seed: int = 0, max_cuts: int = 3, max_rank: int = 3,
                      pool: Sequence[ProofTree] | None = None) -> list[ProofTree]:
    """Valid proofs with 1..max_cuts cuts on formulas of rank ≤ max_rank."""
    rng = random.Random(seed)
    pool = list(pool) if pool is not None else default_pool()
    out: list[ProofTree] = []
    while len(out) < n:
        p = rng.choice(pool)
        want = rng.randint(1, max_cuts)
        for _ in range(want * 4):
            if sum(1 for q in p.nodes() if q.rule in CUT_RULES) >= want:
                break
            step = _root_cut(p, pool, rng, max_rank) if rng.random() < 0.4 else None
            p = step or _splice_identity(p, rng, max_rank) or p
        k = sum(1 for q in p.nodes() if q.rule in CUT_RULES)
        if 1 <= k <= max_cuts:
            out.append(p)
    return out


_POOL_SEQUENTS = (
    "x:p * q |-C q * p",
    "x:p, y:q |-C p * q",
    "x:p -o q, y:p |-C q",
    "x:p * q -o r, y:q, z:p |-C r",
    "x:(p -o q) * p |-C q",
    "x:I_c, y:p |-C p",
    "|-C I_c",
    "x:p |-C G(F p)",
    "x:G a, y:G b |-C G a * G b",
    "x:G(a |> b) |-C G(a |> b)",
    "x:a ; y:b |-L a |> b",
    "x:a |> b |-L a |> b",
    "x:a ->> b ; y:a |-L b",
    "y:a ; x:b <<- a |-L b",
    "x:a |-L (b <<- a) ->> b",
    "x:a |-L b ->> (a |> b)",
    "x:F(G a) ; y:F(G b) |-L F(G b) |> F(G a)",
    "x:F p ; y:F q |-L F(p * q)",
    "x:F(p * q) |-L F q |> F p",
    "x:p ; y:a |-L F p |> a",
    "x:I_l ; y:a |-L a",
    "x:G a ; y:G b |-L b |> a",
    "x:F(p -o q) ; y:F p |-L F q",
    "x:F(G(a |> b)) |-L a |> b",
    "x:p -o q ; y:p ; z:a <<- F q |-L a",
    "x:I_c ; y:a |-L a",
    "x:a ; y:I_l |-L a",
)


def default_pool() -> list[ProofTree]:
    from .syntax.parser import parse_sequent

    out = []
    for text in _POOL_SEQUENTS:
        proof = prove(parse_sequent(text), 12)
        if proof is None:  # pragma: no cover - fixture sanity
            raise AssertionError(f"pool sequent not provable: {text}")
        out.append(proof)
    return out
