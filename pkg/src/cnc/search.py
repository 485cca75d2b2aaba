"""Cut-free proof search and a brute-force derivability oracle.

``prove`` is a depth-bounded backward search with iterative deepening.
Exchange is not searched step by step: for the rules whose applicability
depends on hypothesis order, every reachable arrangement of the conclusion
is tried (any permutation in the C-zone, permutations inside maximal runs
of C-sort hypotheses in the L-zone) and the chosen arrangement is reached by
an explicit chain of adjacent ``ex`` steps. Depth counts logical inferences
only; exchange chains are free.

``decide`` shares nothing with ``prove``. It generates every candidate
premise list built from immediate subformulas and contiguous context
segments, keeps those the kernel's rule matcher accepts, and computes the
least proof size over the resulting AND/OR graph (exchange included as
ordinary one-step edges).
"""

from __future__ import annotations

import functools
import heapq
import itertools
from dataclasses import dataclass
from typing import Iterator, Literal, Sequence

from .kernel.sc import PREMISE_SIDES, RuleMismatch, match_rule
from .syntax.formulas import (CImp, CTensor, CUnit, F, Formula, G, LImp,
                              LTensor, LUnit, RImp, SortError)
from .syntax.printer import print_formula
from .syntax.sequents import (RULE_ARITY, Context, Hyp, ProofTree, Sequent,
                              default_names)

EX_RULE = {"C": "ex_C", "L": "ex_L"}


def _fresh(names: Sequence[str], n: int = 1) -> list[str]:
    taken = set(names)
    out = []
    for i in itertools.count(1):
        cand = f"h{i}"
        if cand not in taken:
            out.append(cand)
            taken.add(cand)
            if len(out) == n:
                return out
    raise AssertionError


def _seq(side: str, entries: Sequence[Hyp], goal: Formula) -> Sequent:
    return Sequent(side, Context(side, tuple(entries)), goal)  # type: ignore[arg-type]


def _key(f: Formula) -> str:
    return print_formula(f)


def canonical(s: Sequent) -> tuple:
    """Sequent up to the exchanges that are always available."""
    fs = s.hyps.formulas
    if s.side == "C":
        return ("C", tuple(sorted(fs, key=_key)), s.goal)
    out: list[Formula] = []
    run: list[Formula] = []
    for f in fs:
        if f.sort == "C":
            run.append(f)
        else:
            out.extend(sorted(run, key=_key))
            run = []
            out.append(f)
    out.extend(sorted(run, key=_key))
    return ("L", tuple(out), s.goal)


def _runs(s: Sequent) -> list[list[int]]:
    """Index groups that may be permuted freely."""
    n = len(s.hyps)
    if s.side == "C":
        return [list(range(n))]
    groups: list[list[int]] = []
    cur: list[int] = []
    for i, f in enumerate(s.hyps.formulas):
        if f.sort == "C":
            cur.append(i)
        else:
            if cur:
                groups.append(cur)
            cur = []
            groups.append([i])
    if cur:
        groups.append(cur)
    return groups


def arrangements(s: Sequent) -> Iterator[tuple[int, ...]]:
    """Distinct reachable orders (by formula sequence), identity first."""
    fs = s.hyps.formulas
    seen: set[tuple[Formula, ...]] = set()
    per_group = [list(itertools.permutations(g)) for g in _runs(s)]
    for combo in itertools.product(*per_group):
        order = tuple(i for part in combo for i in part)
        shape = tuple(fs[i] for i in order)
        if shape in seen:
            continue
        seen.add(shape)
        yield order


def exchange_chain(target: Sequent, arranged: ProofTree) -> ProofTree:
    """Prefix ``arranged`` (a proof of a permutation of ``target``) with
    adjacent exchanges so that the result concludes ``target``."""
    start = list(arranged.conclusion.hyps.entries)
    want = list(target.hyps.entries)
    if [f for _, f in start] == [f for _, f in want]:
        if arranged.conclusion == target:
            return arranged
        return ProofTree(arranged.rule, target, arranged.premises)
    # position of each arranged entry inside the target (by name)
    pos = {n: i for i, (n, _) in enumerate(want)}
    keys = [pos[n] for n, _ in start]
    cur = list(start)
    states = []
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1):
            if keys[i] > keys[i + 1]:
                keys[i], keys[i + 1] = keys[i + 1], keys[i]
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                states.append(list(cur))
                changed = True
    node = arranged
    side = target.side
    for st in states:
        node = ProofTree(EX_RULE[side], _seq(side, st, target.goal), (node,))
    return node


# ------------------------------------------------------------------- prove

def _order_free_instances(s: Sequent) -> Iterator[tuple[str, list[Sequent]]]:
    side, ctx, g = s.side, list(s.hyps.entries), s.goal
    names = s.hyps.names
    # axioms and units
    if len(ctx) == 1 and ctx[0][1] == g:
        yield (f"ax_{side}", [])
    if not ctx and g == (CUnit() if side == "C" else LUnit()):
        yield ("unitR" if side == "C" else "unitR_L", [])
    # right rules that keep the context in place
    if side == "C" and isinstance(g, CImp):
        (x,) = _fresh(names)
        yield ("impR", [_seq("C", ctx + [(x, g.left)], g.right)])
    if side == "C" and isinstance(g, G):
        yield ("Gr", [_seq("L", ctx, g.body)])
    if side == "L" and isinstance(g, RImp):
        (x,) = _fresh(names)
        yield ("imprR", [_seq("L", ctx + [(x, g.arg)], g.res)])
    if side == "L" and isinstance(g, LImp):
        (x,) = _fresh(names)
        yield ("implR", [_seq("L", [(x, g.arg)] + ctx, g.res)])
    if side == "L" and isinstance(g, F) and all(f.sort == "C" for _, f in ctx):
        yield ("Fr", [_seq("C", ctx, g.body)])
    # invertible-ish left rules
    for k, (n, h) in enumerate(ctx):
        before, after = ctx[:k], ctx[k + 1:]
        if isinstance(h, CUnit):
            yield ("unitL" if side == "C" else "unitL1", [_seq(side, before + after, g)])
        elif isinstance(h, LUnit):
            yield ("unitL2", [_seq(side, before + after, g)])
        elif isinstance(h, (CTensor, LTensor)):
            a, b = _fresh(names, 2)
            rule = "tenL2" if isinstance(h, LTensor) else ("tenL" if side == "C" else "tenL1")
            yield (rule, [_seq(side, before + [(a, h.left), (b, h.right)] + after, g)])
        elif side == "L" and isinstance(h, F):
            (a,) = _fresh(names)
            yield ("Fl", [_seq(side, before + [(a, h.body)] + after, g)])
        elif side == "L" and isinstance(h, G):
            (a,) = _fresh(names)
            yield ("Gl", [_seq(side, before + [(a, h.body)] + after, g)])


def _order_dependent_instances(s: Sequent) -> Iterator[tuple[str, list[Sequent]]]:
    side, ctx, g = s.side, list(s.hyps.entries), s.goal
    names = s.hyps.names
    n = len(ctx)
    if isinstance(g, (CTensor, LTensor)) and g.sort == side:
        rule = "tenR" if side == "C" else "tenR_L"
        for i in range(n + 1):
            yield (rule, [_seq(side, ctx[:i], g.left), _seq(side, ctx[i:], g.right)])
    for k, (_, h) in enumerate(ctx):
        if isinstance(h, CImp):
            rule = "impL" if side == "C" else "impL_mixed"
            for m in range(0, n - k):
                phi = ctx[k + 1:k + 1 + m]
                if any(f.sort != "C" for _, f in phi):
                    break
                (y,) = _fresh(names)
                yield (rule, [_seq("C", phi, h.left),
                              _seq(side, ctx[:k] + [(y, h.right)] + ctx[k + 1 + m:], g)])
        elif side == "L" and isinstance(h, RImp):
            for m in range(0, n - k):
                (y,) = _fresh(names)
                yield ("imprL", [_seq("L", ctx[k + 1:k + 1 + m], h.arg),
                                 _seq("L", ctx[:k] + [(y, h.res)] + ctx[k + 1 + m:], g)])
        elif side == "L" and isinstance(h, LImp):
            for m in range(0, k + 1):
                (y,) = _fresh(names)
                yield ("implL", [_seq("L", ctx[k - m:k], h.arg),
                                 _seq("L", ctx[:k - m] + [(y, h.res)] + ctx[k + 1:], g)])


@dataclass
class SearchStats:
    nodes: int = 0
    memo_hits: int = 0


class _Prover:
    def __init__(self) -> None:
        self.failed: dict[tuple, int] = {}  # canonical sequent -> largest failed depth
        self.stats = SearchStats()

    def search(self, s: Sequent, depth: int, branch: frozenset) -> ProofTree | None:
        self.stats.nodes += 1
        key = canonical(s)
        if self.failed.get(key, -1) >= depth:
            self.stats.memo_hits += 1
            return None
        if key in branch or depth <= 0:
            return None
        branch = branch | {key}
        found = self._try(s, depth, branch)
        if found is None:
            self.failed[key] = max(self.failed.get(key, -1), depth)
        return found

    def _close(self, rule: str, concl: Sequent, prems: list[Sequent], depth: int,
               branch: frozenset) -> ProofTree | None:
        subs = []
        for p in prems:
            sub = self.search(p, depth - 1, branch)
            if sub is None:
                return None
            subs.append(sub)
        return ProofTree(rule, concl, tuple(subs))

    def _try(self, s: Sequent, depth: int, branch: frozenset) -> ProofTree | None:
        for rule, prems in _order_free_instances(s):
            if not prems:
                return ProofTree(rule, s)
            got = self._close(rule, s, prems, depth, branch)
            if got is not None:
                return got
        entries = s.hyps.entries
        for order in arrangements(s):
            arranged = _seq(s.side, [entries[i] for i in order], s.goal)
            for rule, prems in _order_dependent_instances(arranged):
                got = self._close(rule, arranged, prems, depth, branch)
                if got is not None:
                    return exchange_chain(s, got)
        return None


def logical_depth(p: ProofTree) -> int:
    """Height counting only non-exchange inferences."""
    below = max((logical_depth(q) for q in p.premises), default=-1)
    if p.rule in ("ex_C", "ex_L"):
        return max(below, 0)
    return below + 1


def prove(s: Sequent, depth: int = 12) -> ProofTree | None:
    """Find a cut-free proof whose logical depth is at most ``depth``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    prover = _Prover()
    for d in range(1, depth + 2):
        got = prover.search(s, d, frozenset())
        if got is not None:
            return got
    return None


# ------------------------------------------------------------------ decide

Verdict = Literal["provable", "unprovable-at-bound", "bound hit"]


@dataclass
class Decision:
    verdict: Verdict
    size: int | None = None
    proof: ProofTree | None = None
    explored: int = 0

    @property
    def provable(self) -> bool:
        return self.verdict == "provable"


Shape = tuple[str, tuple[Formula, ...], Formula]


def _shape_seq(shape: Shape) -> Sequent:
    side, fs, g = shape
    return Sequent.make(side, fs, g)  # type: ignore[arg-type]


def _mk(side: str, fs: Sequence[Formula], g: Formula) -> Sequent | None:
    return _mk_cached(side, tuple(fs), g)


@functools.lru_cache(maxsize=1 << 18)
def _mk_cached(side: str, fs: tuple[Formula, ...], g: Formula) -> Sequent | None:
    try:
        return Sequent.make(side, fs, g)  # type: ignore[arg-type]
    except (SortError, ValueError):
        return None


def _one_premise_shapes(side: str, C: list[Formula], g: Formula) -> list[tuple[list[Formula], Formula]]:
    """Contexts/goals one decomposition or one adjacent swap away."""
    n = len(C)
    out: list[tuple[list[Formula], Formula]] = []
    for k in range(n):
        out.append((C[:k] + list(C[k].children()) + C[k + 1:], g))
    kids = g.children()
    if len(kids) == 1:
        out.append((C, kids[0]))
    elif len(kids) == 2:
        for i, j in ((0, 1), (1, 0)):
            out.append((C + [kids[i]], kids[j]))
            out.append(([kids[i]] + C, kids[j]))
    for k in range(n - 1):
        if C[k] != C[k + 1]:
            out.append((C[:k] + [C[k + 1], C[k]] + C[k + 2:], g))
    return out


def _two_premise_shapes(C: list[Formula], g: Formula) -> list[tuple[tuple[list[Formula], Formula], tuple[list[Formula], Formula]]]:
    """Context splits and segment extractions around a binary hypothesis."""
    n = len(C)
    out = []
    kids = g.children()
    if len(kids) == 2:
        for i in range(n + 1):
            out.append(((C[:i], kids[0]), (C[i:], kids[1])))
    for k in range(n):
        hk = C[k].children()
        if len(hk) != 2:
            continue
        for lo in range(n + 1):
            for hi in range(lo, n + 1):
                if lo <= k < hi:
                    continue
                rest0 = [C[m] for m in range(n) if not (lo <= m < hi)]
                at = k - (hi - lo) if k >= hi else k
                for i, j in ((0, 1), (1, 0)):
                    rest = list(rest0)
                    rest[at] = hk[j]
                    out.append(((C[lo:hi], hk[i]), (rest, g)))
    return out


def _candidates(shape: Shape) -> Iterator[tuple[str, list[Sequent]]]:
    """Every premise list of the right form for some rule; unfiltered."""
    side, C, g = shape
    C = list(C)
    ones = _one_premise_shapes(side, C, g)
    twos = _two_premise_shapes(C, g)
    for rule, arity in RULE_ARITY.items():
        if rule in ("cut", "cut1", "cut2"):
            continue
        sides = PREMISE_SIDES[rule]
        if arity == 0:
            yield rule, []
        elif arity == 1:
            for fs, goal in ones:
                cand = _mk(sides[0], fs, goal)
                if cand is not None:
                    yield rule, [cand]
        else:
            for (f0, g0), (f1, g1) in twos:
                a, b = _mk(sides[0], f0, g0), _mk(sides[1], f1, g1)
                if a is not None and b is not None:
                    yield rule, [a, b]


@functools.lru_cache(maxsize=1 << 18)
def _edges(shape: Shape) -> tuple[tuple[str, tuple[Shape, ...]], ...]:
    concl = _shape_seq(shape)
    out = []
    seen = set()
    for rule, prems in _candidates(shape):
        key = (rule, tuple(p.shape for p in prems))
        if key in seen:
            continue
        seen.add(key)
        try:
            match_rule(rule, concl, prems)
        except RuleMismatch:
            continue
        out.append(key)
    return tuple(out)


def decide(s: Sequent, size_bound: int = 64, budget: int = 200_000) -> Decision:
    """Exhaustive cut-free derivability up to ``size_bound`` proof nodes.

    Explores every sequent reachable by backward rule instances, then runs
    a Knuth-style least-cost fixpoint (cost = number of proof nodes).
    ``budget`` caps the number of explored sequents; exceeding it returns
    ``bound hit`` instead of a guess.
    """
    root: Shape = s.shape
    graph: dict[Shape, tuple[tuple[str, tuple[Shape, ...]], ...]] = {}
    todo = [root]
    while todo:
        sh = todo.pop()
        if sh in graph:
            continue
        if len(graph) >= budget:
            return Decision("bound hit", explored=len(graph))
        graph[sh] = _edges(sh)
        for _, prems in graph[sh]:
            for p in prems:
                if p not in graph:
                    todo.append(p)
    # least proof size per sequent
    users: dict[Shape, list[tuple[Shape, int]]] = {sh: [] for sh in graph}
    waiting: dict[tuple[Shape, int], int] = {}
    best: dict[Shape, int] = {}
    via: dict[Shape, tuple[str, tuple[Shape, ...]]] = {}
    heap: list[tuple[int, int, Shape, int]] = []
    tick = itertools.count()
    for sh, edges in graph.items():
        for ei, (rule, prems) in enumerate(edges):
            waiting[(sh, ei)] = len(prems)
            for p in prems:
                users[p].append((sh, ei))
            if not prems:
                heapq.heappush(heap, (1, next(tick), sh, ei))
    while heap:
        cost, _, sh, ei = heapq.heappop(heap)
        if sh in best:
            continue
        best[sh] = cost
        via[sh] = graph[sh][ei]
        for user, uei in users[sh]:
            waiting[(user, uei)] -= 1
            if waiting[(user, uei)] == 0 and user not in best:
                rule, prems = graph[user][uei]
                if all(p in best for p in prems):
                    heapq.heappush(heap, (1 + sum(best[p] for p in prems), next(tick), user, uei))
    if root in best and best[root] <= size_bound:
        proof = _rebuild(root, via)
        proof = ProofTree(proof.rule, s, proof.premises)
        return Decision("provable", best[root], proof, len(graph))
    return Decision("unprovable-at-bound", best.get(root), None, len(graph))


def _rebuild(sh: Shape, via: dict[Shape, tuple[str, tuple[Shape, ...]]]) -> ProofTree:
    rule, prems = via[sh]
    return ProofTree(rule, _shape_seq(sh), tuple(_rebuild(p, via) for p in prems))


# ------------------------------------------------------------------ corpus

def _leaves(f: Formula) -> tuple[int, int]:
    kids = f.children()
    if not kids:
        return (1, 0) if f.sort == "C" else (0, 1)
    c = l = 0
    for k in kids:
        kc, kl = _leaves(k)
        c, l = c + kc, l + kl
    return c, l


def small_formulas(max_depth: int = 2, max_leaves: int = 2) -> list[Formula]:
    """Formulas over p, q, I_c / a, b, I_l of bounded depth and with at most
    ``max_leaves`` leaf occurrences (atoms or units) of each sort."""
    from .syntax.formulas import CAtom, LAtom
    level: list[Formula] = [CAtom("p"), CAtom("q"), CUnit(), LAtom("a"), LAtom("b"), LUnit()]
    seen = list(level)
    for _ in range(max_depth):
        nxt: list[Formula] = []
        for x in seen:
            nxt.append(G(x) if x.sort == "L" else F(x))
            for y in seen:
                if x.sort != y.sort:
                    continue
                if x.sort == "C":
                    nxt += [CTensor(x, y), CImp(x, y)]
                else:
                    nxt += [LTensor(x, y), RImp(x, y), LImp(x, y)]
        seen = list(dict.fromkeys(seen + [f for f in nxt if max(_leaves(f)) <= max_leaves]))
    return seen


def _renaming_canonical(fs: Sequence[Formula]) -> bool:
    """True if p precedes q and a precedes b in first-occurrence order."""
    order: list[str] = []

    def walk(f: Formula) -> None:
        name = getattr(f, "name", None)
        if name is not None and name not in order:
            order.append(name)
        for k in f.children():
            walk(k)

    for f in fs:
        walk(f)
    for first, second in (("p", "q"), ("a", "b")):
        if second in order and (first not in order or order.index(first) > order.index(second)):
            return False
    return True


def small_corpus(max_depth: int = 2, max_leaves: int = 2, max_hyps: int = 3) -> list[Sequent]:
    """Exhaustive small-sequent corpus.

    Every sequent with at most ``max_hyps`` hypotheses whose formulas have
    depth at most ``max_depth`` and which uses at most ``max_leaves`` leaf
    occurrences of each sort in total. One representative is kept per class
    of atom renaming (p/q, a/b) and free exchange; order follows enumeration.
    """
    pool = [(f, _leaves(f)) for f in small_formulas(max_depth, max_leaves)]
    out: list[Sequent] = []
    seen: set[tuple] = set()

    def fill(side: str, goal: Formula, acc: list[Formula], budget: tuple[int, int]) -> None:
        if _renaming_canonical(acc + [goal]):
            s = Sequent.make(side, acc, goal)  # type: ignore[arg-type]
            key = canonical(s)
            if key not in seen:
                seen.add(key)
                out.append(s)
        if len(acc) == max_hyps:
            return
        for f, (c, l) in pool:
            if side == "C" and f.sort != "C":
                continue
            if c <= budget[0] and l <= budget[1]:
                fill(side, goal, acc + [f], (budget[0] - c, budget[1] - l))

    for goal, (c, l) in pool:
        fill(goal.sort, goal, [], (max_leaves - c, max_leaves - l))
    return out
