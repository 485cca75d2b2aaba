"""Term rewriting: β-reductions, commuting conversions and a normalizer.

``beta_step`` and ``cc_step`` act at the root only and return ``None``
when the root is not a redex. ``step`` finds the leftmost-outermost redex,
preferring β over commuting conversions, and ``normalize`` iterates it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .kernel.nd import NDTypeError, check_nd, pattern_bindings
from .syntax.formulas import (CImp, CTensor, CUnit, F, Formula, G, LImp, LTensor,
                              LUnit, RImp)
from .syntax.sequents import Context
from .syntax.terms import (GI, App, Derelict, Ex, FI, Lam, Let, NameSupply, PF,
                           PG, PPair, PTriv, PVar, Pair, Pattern, Term, Triv,
                           Var, all_names, children, free_vars, pattern_vars,
                           rebuild, rename_pattern, size, subst)

Path = tuple[int, ...]

BETA_RULES = ("letU", "letT", "lam", "letUOne", "letTOne", "letTTwo", "letF",
              "lamL", "lamR", "derelict", "letG", "letVar")


@dataclass(frozen=True)
class Step:
    kind: str  # "beta" | "cc"
    rule: str
    path: Path
    before: Term
    after: Term


# ------------------------------------------------------------------- zones

def guess_zone(t: Term) -> str | None:
    """Zone of ``t`` when its shape decides it, else ``None``."""
    if isinstance(t, Pair):
        return t.kind
    if isinstance(t, (Lam, App)):
        return "C" if t.kind == "C" else "L"
    if isinstance(t, GI):
        return "C"
    if isinstance(t, (FI, Derelict)):
        return "L"
    if isinstance(t, Let):
        return guess_zone(t.body)
    if isinstance(t, Ex):
        return guess_zone(t.body)
    return None


# ---------------------------------------------------------------------- β

def _bind(pat: Pattern, value: Term, ann: Formula, body: Term) -> Term:
    """``let value : ann be pat in body`` after peeling introductions."""
    if isinstance(pat, PVar):
        return subst(body, {pat.name: value})
    return Let(value, ann, pat, body)


def _match_intro(t: Let) -> bool:
    s, p = t.scrut, t.pat
    if isinstance(p, PTriv):
        return isinstance(s, Triv)
    if isinstance(p, PPair):
        return isinstance(s, Pair) and s.kind == p.kind
    if isinstance(p, PF):
        return isinstance(s, FI)
    if isinstance(p, PG):
        return isinstance(s, GI)
    return isinstance(p, PVar)


def beta_rule(t: Term) -> tuple[str, Term] | None:
    """Contract a root β-redex; returns (rule name, contractum)."""
    if isinstance(t, Let) and _match_intro(t):
        s, p, ann = t.scrut, t.pat, t.ann
        in_l = guess_zone(t.body) == "L"
        if isinstance(p, PVar):
            return "letVar", subst(t.body, {p.name: s})
        if isinstance(p, PTriv):
            if isinstance(ann, LUnit) or in_l:
                return "letUOne", t.body
            return "letU", t.body
        if isinstance(p, PPair):
            # bind the right component innermost so the blocks stay in order
            inner = _bind(p.right, s.right, ann.right, t.body)
            out = _bind(p.left, s.left, ann.left, inner)
            if p.kind == "L":
                return "letTTwo", out
            return ("letTOne" if in_l else "letT"), out
        if isinstance(p, PF):
            return "letF", _bind(p.inner, s.body, ann.body, t.body)
        return "letG", _bind(p.inner, s.body, ann.body, t.body)
    if isinstance(t, App) and isinstance(t.fn, Lam) and t.fn.kind == t.kind:
        name = {"C": "lam", "l": "lamL", "r": "lamR"}[t.kind]
        return name, subst(t.fn.body, {t.fn.var: t.arg})
    if isinstance(t, Derelict) and isinstance(t.body, GI):
        return "derelict", t.body.body
    return None


def beta_step(t: Term) -> Term | None:
    r = beta_rule(t)
    return None if r is None else r[1]


# ------------------------------------------------------- commuting conversions

def _elim_name(t: Term) -> str:
    if isinstance(t, App):
        return {"C": "impE", "r": "imprE", "l": "implE"}[t.kind]
    return _let_name(t)  # type: ignore[arg-type]


def _let_name(t: Let) -> str:
    p = t.pat
    if isinstance(p, PTriv):
        return "unitETwo" if isinstance(t.ann, LUnit) else "unitE"
    if isinstance(p, PPair):
        return "tenETwo" if p.kind == "L" else "tenE"
    if isinstance(p, PF):
        return "FE"
    if isinstance(p, PG):
        return "GE"
    return "cut"


def _freshen(inner: Let, avoid: set[str]) -> Let:
    """Rename the binders of ``inner`` away from ``avoid``."""
    clash = [n for n in pattern_vars(inner.pat) if n in avoid]
    if not clash:
        return inner
    supply = NameSupply(avoid | all_names(inner))
    ren = {n: supply.fresh(n) for n in clash}
    return Let(inner.scrut, inner.ann, rename_pattern(inner.pat, ren),
               subst(inner.body, {k: Var(v) for k, v in ren.items()}))


def cc_rule(t: Term) -> tuple[str, Term] | None:
    """Push a root eliminator whose major premise is a let under that let."""
    if isinstance(t, Let) and isinstance(t.scrut, Let):
        inner = _freshen(t.scrut, free_vars(t.body) | set(pattern_vars(t.pat)))
        name = f"{_let_name(inner)}/{_let_name(t)}"
        return name, Let(inner.scrut, inner.ann, inner.pat,
                         Let(inner.body, t.ann, t.pat, t.body))
    if isinstance(t, App) and isinstance(t.fn, Let):
        inner = _freshen(t.fn, free_vars(t.arg))
        name = f"{_let_name(inner)}/{_elim_name(t)}"
        return name, Let(inner.scrut, inner.ann, inner.pat, App(t.kind, inner.body, t.arg))
    return None


def cc_step(t: Term) -> Term | None:
    r = cc_rule(t)
    return None if r is None else r[1]


# --------------------------------------------------------------- positions

def positions(t: Term, path: Path = ()) -> Iterator[tuple[Path, Term]]:
    """Subterms in leftmost-outermost (pre-order) order."""
    yield path, t
    for i, c in enumerate(children(t)):
        yield from positions(c, path + (i,))


def subterm_at(t: Term, path: Path) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t: Term, path: Path, new: Term) -> Term:
    if not path:
        return new
    kids = list(children(t))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return rebuild(t, tuple(kids))


def redexes(t: Term) -> Iterator[Step]:
    """Every single-step reduct of ``t``, β and commuting, at every position."""
    for path, u in positions(t):
        for kind, fn in (("beta", beta_rule), ("cc", cc_rule)):
            r = fn(u)
            if r is not None:
                yield Step(kind, r[0], path, t, replace_at(t, path, r[1]))


def step(t: Term) -> Step | None:
    for kind, fn in (("beta", beta_rule), ("cc", cc_rule)):
        for path, u in positions(t):
            r = fn(u)
            if r is not None:
                return Step(kind, r[0], path, t, replace_at(t, path, r[1]))
    return None


def normalize(t: Term, fuel: int = 1000, trace: list[Step] | None = None) -> tuple[Term, int, bool]:
    """Leftmost-outermost normalization, β before commuting conversions.

    Returns (term, steps taken, whether fuel ran out with a redex left)."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    steps = 0
    while True:
        s = step(t)
        if s is None:
            return t, steps, False
        if steps >= fuel:
            return t, steps, True
        if trace is not None:
            trace.append(s)
        t = s.after
        steps += 1


# ------------------------------------------------------------- annotation

def annotate(t: Term, ctx: Context) -> dict[Path, tuple[str, Formula]]:
    """Zone and type of every subterm of a well-typed ``t``."""
    out: dict[Path, tuple[str, Formula]] = {}
    _ann(t, dict(ctx.entries), ctx.zone, (), out)
    return out


def _ann(t: Term, env: dict[str, Formula], zone: str, path: Path,
         out: dict[Path, tuple[str, Formula]]) -> Formula:
    if isinstance(t, Var):
        typ = env[t.name]
    elif isinstance(t, Triv):
        typ = CUnit() if zone == "C" else LUnit()
    elif isinstance(t, Pair):
        a = _ann(t.left, env, zone, path + (0,), out)
        b = _ann(t.right, env, zone, path + (1,), out)
        typ = CTensor(a, b) if t.kind == "C" else LTensor(a, b)
    elif isinstance(t, Lam):
        b = _ann(t.body, {**env, t.var: t.ann}, zone, path + (0,), out)
        typ = {"C": CImp, "r": RImp}[t.kind](t.ann, b) if t.kind != "l" else LImp(b, t.ann)
    elif isinstance(t, App):
        f = _ann(t.fn, env, zone, path + (0,), out)
        _ann(t.arg, env, zone, path + (1,), out)
        typ = f.right if isinstance(f, CImp) else f.res  # type: ignore[union-attr]
    elif isinstance(t, Let):
        _ann(t.scrut, env, t.ann.sort, path + (0,), out)
        binds = dict(pattern_bindings(t.pat, t.ann))
        typ = _ann(t.body, {**env, **binds}, zone, path + (1,), out)
    elif isinstance(t, Ex):
        a = _ann(t.t1, env, "C", path + (0,), out)
        b = _ann(t.t2, env, "C", path + (1,), out)
        typ = _ann(t.body, {**env, t.x1: a, t.x2: b}, zone, path + (2,), out)
    elif isinstance(t, GI):
        typ = G(_ann(t.body, env, "L", path + (0,), out))
    elif isinstance(t, FI):
        typ = F(_ann(t.body, env, "C", path + (0,), out))
    elif isinstance(t, Derelict):
        typ = _ann(t.body, env, "C", path + (0,), out).body  # type: ignore[attr-defined]
    else:
        raise TypeError(t)
    out[path] = (zone, typ)
    return typ


# ------------------------------------------------------- random redex terms

class _Expander:
    """Wraps subterms in typed redexes: each expansion is a β- or
    commuting-redex whose contractum is the original subterm."""

    def __init__(self, rng: random.Random, avoid: set[str], ctx: Context) -> None:
        self.rng = rng
        self.supply = NameSupply(avoid, stem="e")
        self.env = dict(ctx.entries)

    def fresh(self) -> str:
        return self.supply.fresh("e")

    def options(self, u: Term, zone: str, typ: Formula, all_c: bool) -> list:
        x, y = self.fresh(), self.fresh()
        out = []
        if zone == "C":
            out += [App("C", Lam("C", x, typ, Var(x)), u),
                    Let(Triv(), CUnit(), PTriv(), u),
                    Let(Pair("C", u, Triv()), CTensor(typ, CUnit()), PPair("C", PVar(x), PVar(y)),
                        Let(Var(y), CUnit(), PTriv(), Var(x)))]
        else:
            out += [App("r", Lam("r", x, typ, Var(x)), u),
                    App("l", Lam("l", x, typ, Var(x)), u),
                    Let(Triv(), self.rng.choice([CUnit(), LUnit()]), PTriv(), u),
                    Let(Pair("L", u, Triv()), LTensor(typ, LUnit()), PPair("L", PVar(x), PVar(y)),
                        Let(Var(y), LUnit(), PTriv(), Var(x))),
                    Let(Pair("C", Triv(), Triv()), CTensor(CUnit(), CUnit()), PPair("C", PVar(x), PVar(y)),
                        Let(Var(x), CUnit(), PTriv(), Let(Var(y), CUnit(), PTriv(), u))),
                    Let(FI(Triv()), F(CUnit()), PF(PVar(x)), Let(Var(x), CUnit(), PTriv(), u)),
                    Let(GI(Triv()), G(LUnit()), PG(PVar(x)), Let(Var(x), LUnit(), PTriv(), u))]
            if all_c:
                out.append(Derelict(GI(u)))
        if isinstance(u, Var):
            out += self._var_lets(u, typ)
        return out

    def _var_lets(self, u: Var, typ: Formula) -> list[Term]:
        """Non-β lets on a variable: they feed commuting conversions."""
        a, b = self.fresh(), self.fresh()
        if isinstance(typ, (CUnit, LUnit)):
            return [Let(u, typ, PTriv(), Triv())]
        if isinstance(typ, CTensor):
            return [Let(u, typ, PPair("C", PVar(a), PVar(b)), Pair("C", Var(a), Var(b)))]
        if isinstance(typ, LTensor):
            return [Let(u, typ, PPair("L", PVar(a), PVar(b)), Pair("L", Var(a), Var(b)))]
        if isinstance(typ, F):
            return [Let(u, typ, PF(PVar(a)), FI(Var(a)))]
        return []

    def expand(self, t: Term, info: dict[Path, tuple[str, Formula]], rate: float) -> Term:
        def go(u: Term, path: Path) -> Term:
            kids = tuple(go(c, path + (i,)) for i, c in enumerate(children(u)))
            v = rebuild(u, kids) if kids else u
            if self.rng.random() >= rate:
                return v
            zone, typ = info[path]
            all_c = all(self.env.get(n, CUnit()).sort == "C" for n in free_vars(u))
            return self.rng.choice(self.options(v, zone, typ, all_c))
        return go(t, ())


def _binder_types(t: Term, info: dict[Path, tuple[str, Formula]]) -> dict[str, Formula]:
    """Types of bound variables, so the expander can see them."""
    out: dict[str, Formula] = {}
    for path, u in positions(t):
        if isinstance(u, Lam):
            out[u.var] = u.ann
        elif isinstance(u, Let):
            out.update(pattern_bindings(u.pat, u.ann))
        elif isinstance(u, Ex):
            out[u.x1] = info[path + (0,)][1]
            out[u.x2] = info[path + (1,)][1]
    return out


def source_terms() -> list[tuple[Context, Term, Formula]]:
    """Well-typed terms read off cut-free and cut-containing proofs."""
    from .cutelim import default_pool, random_cut_proofs
    from .translate import sc_to_nd

    pool = default_pool()
    out = []
    for p in pool + random_cut_proofs(40, seed=7, pool=pool):
        d = sc_to_nd(p)
        out.append((d.ctx, d.term, d.type))
    return out


def random_typed_terms(n: int, seed: int = 0, max_size: int = 20,
                       sources: Sequence[tuple[Context, Term, Formula]] | None = None
                       ) -> list[tuple[Context, Term, Formula]]:
    """``n`` well-typed terms of size ≤ max_size, each holding at least one
    redex."""
    rng = random.Random(seed)
    srcs = [s for s in (sources or source_terms()) if size(s[1]) < max_size]
    out: list[tuple[Context, Term, Formula]] = []
    seen: set[Term] = set()
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > 200 * n:
            raise RuntimeError("term generator stalled")
        ctx, t, typ = rng.choice(srcs)
        info = annotate(t, ctx)
        ex = _Expander(rng, all_names(t) | set(ctx.names), ctx)
        ex.env.update(_binder_types(t, info))
        u = ex.expand(t, info, rng.choice([0.1, 0.2, 0.35]))
        if u in seen or size(u) > max_size or step(u) is None:
            continue
        try:
            check_nd(ctx, u, typ)
        except NDTypeError:
            continue
        seen.add(u)
        out.append((ctx, u, typ))
    return out
