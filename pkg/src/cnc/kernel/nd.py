"""Natural-deduction typing: a syntax-directed checker and a node validator.

``check_nd`` elaborates a term into a rule-labelled derivation. Context
splits are read off the free variables of the subterms: in the ordered
L-zone each premise must own a contiguous block in the right order, while in
the C-zone any arrangement is reachable and the needed exchanges are
recorded as ``ex_C`` nodes.

``validate_nd`` checks an existing derivation node by node in the forward
direction (premises to conclusion). It shares no code with the checker and
is used as the oracle for derivations built by the translations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from ..syntax.formulas import (CImp, CTensor, CUnit, F, Formula, G, LImp,
                               LTensor, LUnit, RImp, SortError)
from ..syntax.printer import print_formula, print_term
from ..syntax.sequents import Context, Hyp
from ..syntax.terms import (GI, App, Derelict, Ex, FI, Lam, Let, NameSupply, PF,
                            PG, PPair, PTriv, PVar, Pair, Pattern, Term, Triv,
                            Var, alpha_eq, all_names, free_occurrences,
                            pattern_vars, rename_pattern, subst)
from .sc import CheckReport

ND_RULES = (
    "id_C", "unitI_C", "unitE", "tenI", "tenE", "impI", "impE", "GI", "beta_C", "cut",
    "id_L", "unitI_L", "unitE1", "unitE2", "tenI_L", "tenE1", "tenE2", "imprI", "imprE",
    "implI", "implE", "FI", "FE", "GE", "beta_L", "cut1", "cut2",
    "GE_let", "ex_C",
)


class NDTypeError(ValueError):
    def __init__(self, kind: str, msg: str) -> None:
        super().__init__(f"{kind}: {msg}")
        self.kind = kind


@dataclass(frozen=True)
class NDDerivation:
    rule: str
    ctx: Context
    term: Term
    type: Formula
    premises: tuple["NDDerivation", ...] = ()

    def nodes(self) -> Iterator["NDDerivation"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def pretty(self, indent: int = 0) -> str:
        from ..syntax.printer import print_context

        pad = "  " * indent
        head = f"{pad}({self.rule} [{print_context(self.ctx)}] {print_term(self.term)} : {print_formula(self.type)}"
        if not self.premises:
            return head + ")"
        return head + "\n" + "\n".join(p.pretty(indent + 1) for p in self.premises) + ")"


def _ctx(zone: str, entries: Sequence[Hyp]) -> Context:
    try:
        return Context(zone, tuple(entries))  # type: ignore[arg-type]
    except SortError as e:
        raise NDTypeError("sort", str(e)) from None
    except ValueError as e:
        raise NDTypeError("linearity", str(e)) from None


# ------------------------------------------------------------ split logic

def _owner_map(ctx: Context, subterms: Sequence[Term], bound: Sequence[str] = ()) -> list[int]:
    """For each hypothesis, the index of the subterm using it. Names in
    ``bound`` are binders of the last subterm and are skipped there."""
    names = set(ctx.names)
    owner: dict[str, int] = {}
    for i, t in enumerate(subterms):
        seen: set[str] = set()
        occs = free_occurrences(t)
        if i == len(subterms) - 1 and bound:
            occs = [x for x in occs if x not in bound]
        for x in occs:
            if x not in names:
                raise NDTypeError("unbound", f"variable {x} is not in the context")
            if x in seen or x in owner:
                raise NDTypeError("linearity", f"variable {x} used twice")
            seen.add(x)
            owner[x] = i
    unused = [n for n in ctx.names if n not in owner]
    if unused:
        raise NDTypeError("linearity", f"hypothesis {', '.join(unused)} unused")
    return [owner[n] for n in ctx.names]


def infer_splits(ctx: Context, subterms: Sequence[Term]) -> list[Context]:
    """Partition ``ctx`` among ``subterms`` by free-variable ownership.

    L-zone: the blocks must already be contiguous and in subterm order.
    C-zone: any arrangement is allowed; relative order inside each block is
    kept.
    """
    owners = _owner_map(ctx, subterms)
    if ctx.zone == "L" and owners != sorted(owners):
        raise NDTypeError("order", "split not contiguous (ordered-zone violation)")
    return [_ctx(ctx.zone, [h for h, o in zip(ctx.entries, owners) if o == i]) for i in range(len(subterms))]


def _exchange_chain(ctx: Context, target: Sequence[Hyp], term: Term, typ: Formula,
                    top: NDDerivation) -> NDDerivation:
    """Wrap ``top`` (whose context is ``target``) in ex_C nodes so that the
    outermost node has context ``ctx``."""
    order = [ctx.names.index(n) for n, _ in target]
    if order == sorted(order):
        return top
    # bubble ``target`` back into ``ctx`` order one adjacent swap at a time
    states = [list(target)]
    cur = list(target)
    keys = list(order)
    changed = True
    while changed:
        changed = False
        for i in range(len(cur) - 1):
            if keys[i] > keys[i + 1]:
                keys[i], keys[i + 1] = keys[i + 1], keys[i]
                cur[i], cur[i + 1] = cur[i + 1], cur[i]
                states.append(list(cur))
                changed = True
    node = top
    for st in states[1:]:
        node = NDDerivation("ex_C", _ctx("C", st), term, typ, (node,))
    return node


# ---------------------------------------------------------------- patterns

def pattern_bindings(pat: Pattern, typ: Formula) -> list[Hyp]:
    if isinstance(pat, PVar):
        return [(pat.name, typ)]
    if isinstance(pat, PTriv):
        if not isinstance(typ, (CUnit, LUnit)):
            raise NDTypeError("mismatch", f"pattern triv against {print_formula(typ)}")
        return []
    if isinstance(pat, PPair):
        cls = CTensor if pat.kind == "C" else LTensor
        if not isinstance(typ, cls):
            raise NDTypeError("mismatch", f"pair pattern against {print_formula(typ)}")
        return pattern_bindings(pat.left, typ.left) + pattern_bindings(pat.right, typ.right)
    if isinstance(pat, PF):
        if not isinstance(typ, F):
            raise NDTypeError("mismatch", f"F pattern against {print_formula(typ)}")
        return pattern_bindings(pat.inner, typ.body)
    if isinstance(pat, PG):
        if not isinstance(typ, G):
            raise NDTypeError("mismatch", f"G pattern against {print_formula(typ)}")
        return pattern_bindings(pat.inner, typ.body)
    raise TypeError(pat)


def let_rule(zone: str, ann: Formula, pat: Pattern) -> str:
    if isinstance(pat, PVar):
        return "cut" if zone == "C" else ("cut1" if ann.sort == "C" else "cut2")
    if isinstance(pat, PTriv):
        return "unitE" if zone == "C" else ("unitE1" if ann.sort == "C" else "unitE2")
    if isinstance(pat, PPair):
        if pat.kind == "C":
            return "tenE" if zone == "C" else "tenE1"
        return "tenE2"
    if isinstance(pat, PF):
        return "FE"
    return "GE_let"


# ----------------------------------------------------------------- checker

class _Checker:
    def __init__(self, root: Term, ctx: Context) -> None:
        self.supply = NameSupply(all_names(root) | set(ctx.names), stem="h")

    def infer(self, ctx: Context, t: Term) -> NDDerivation:
        zone = ctx.zone
        if isinstance(t, Var):
            if len(ctx) == 1 and ctx[0][0] == t.name:
                typ = ctx[0][1]
                if typ.sort != zone:
                    raise NDTypeError("sort", f"{t.name} has C-sort type {print_formula(typ)} in an L-term position")
                return NDDerivation(f"id_{zone}", ctx, t, typ)
            _owner_map(ctx, [t])
            raise AssertionError("unreachable")
        if isinstance(t, Triv):
            if len(ctx):
                raise NDTypeError("linearity", f"hypothesis {', '.join(ctx.names)} unused")
            return NDDerivation(f"unitI_{zone}", ctx, t, CUnit() if zone == "C" else LUnit())
        if isinstance(t, Pair):
            if t.kind != zone:
                raise NDTypeError("sort", f"{'*' if t.kind == 'C' else '|>'}-pair is not a {zone}-term")
            return self._binary(ctx, t, [t.left, t.right], "tenI" if zone == "C" else "tenI_L")
        if isinstance(t, Lam):
            return self._lam(ctx, t)
        if isinstance(t, App):
            if (t.kind == "C") != (zone == "C"):
                raise NDTypeError("sort", f"application kind {t.kind} is not a {zone}-term")
            rule = {"C": "impE", "r": "imprE", "l": "implE"}[t.kind]
            subs = [t.arg, t.fn] if t.kind == "l" else [t.fn, t.arg]
            return self._binary(ctx, t, subs, rule)
        if isinstance(t, GI):
            if zone != "C":
                raise NDTypeError("sort", "G s is a C-term")
            d = self.infer(_ctx("L", ctx.entries), t.body)
            return NDDerivation("GI", ctx, t, _build(G, d.type), (d,))
        if isinstance(t, (FI, Derelict)):
            if zone != "L":
                raise NDTypeError("sort", f"{'F t' if isinstance(t, FI) else 'derelict t'} is an L-term")
            if not ctx.all_c():
                raise NDTypeError("sort", "F t and derelict t need an all-C-sort context")
            d = self.infer(_ctx("C", ctx.entries), t.body)
            if isinstance(t, FI):
                return NDDerivation("FI", ctx, t, _build(F, d.type), (d,))
            if not isinstance(d.type, G):
                raise NDTypeError("mismatch", f"derelict expects a G-type, got {print_formula(d.type)}")
            return NDDerivation("GE", ctx, t, d.type.body, (d,))
        if isinstance(t, Let):
            return self._let(ctx, t)
        if isinstance(t, Ex):
            return self._ex(ctx, t)
        raise TypeError(t)

    def check(self, ctx: Context, t: Term, goal: Formula) -> NDDerivation:
        d = self.infer(ctx, t)
        if d.type != goal:
            raise NDTypeError("mismatch", f"{print_term(t)} has type {print_formula(d.type)}, expected {print_formula(goal)}")
        return d

    # -- helpers
    def _binary(self, ctx: Context, t: Term, subs: list[Term], rule: str) -> NDDerivation:
        parts = infer_splits(ctx, subs)
        arranged = _ctx(ctx.zone, [h for p in parts for h in p.entries])
        d0 = self.infer(parts[0], subs[0])
        d1 = self.infer(parts[1], subs[1])
        if rule in ("tenI", "tenI_L"):
            typ = _build(CTensor if rule == "tenI" else LTensor, d0.type, d1.type)
            prem = (d0, d1)
        elif rule == "impE":
            if not isinstance(d0.type, CImp) or d0.type.left != d1.type:
                raise NDTypeError("mismatch", f"cannot apply {print_formula(d0.type)} to {print_formula(d1.type)}")
            typ, prem = d0.type.right, (d0, d1)
        elif rule == "imprE":
            if not isinstance(d0.type, RImp) or d0.type.arg != d1.type:
                raise NDTypeError("mismatch", f"app_r: cannot apply {print_formula(d0.type)} to {print_formula(d1.type)}")
            typ, prem = d0.type.res, (d0, d1)
        else:  # implE: subs = [arg, fn]
            if not isinstance(d1.type, LImp) or d1.type.arg != d0.type:
                raise NDTypeError("mismatch", f"app_l: cannot apply {print_formula(d1.type)} to {print_formula(d0.type)}")
            typ, prem = d1.type.res, (d1, d0)
        node = NDDerivation(rule, arranged, t, typ, prem)
        return _exchange_chain(ctx, arranged.entries, t, typ, node) if ctx.zone == "C" else node

    def _fresh_binder(self, ctx: Context, names: list[str]) -> dict[str, str]:
        return {n: self.supply.fresh(n) for n in names if n in ctx.names}

    def _lam(self, ctx: Context, t: Lam) -> NDDerivation:
        zone = ctx.zone
        if (t.kind == "C") != (zone == "C"):
            raise NDTypeError("sort", f"lam{'' if t.kind == 'C' else '_' + t.kind} is not a {zone}-term")
        if t.ann.sort != zone:
            raise NDTypeError("sort", f"binder {t.var} annotated with a {t.ann.sort}-sort type")
        ren = self._fresh_binder(ctx, [t.var])
        x = ren.get(t.var, t.var)
        body = subst(t.body, {t.var: Var(x)}) if ren else t.body
        hyp = (x, t.ann)
        if t.kind == "l":
            bctx = _ctx(zone, (hyp,) + ctx.entries)
        else:
            bctx = _ctx(zone, ctx.entries + (hyp,))
        d = self.infer(bctx, body)
        if t.kind == "C":
            return NDDerivation("impI", ctx, t, _build(CImp, t.ann, d.type), (d,))
        if t.kind == "r":
            return NDDerivation("imprI", ctx, t, _build(RImp, t.ann, d.type), (d,))
        return NDDerivation("implI", ctx, t, _build(LImp, d.type, t.ann), (d,))

    def _block(self, ctx: Context, block_terms: list[Term], rest: Term,
               bound: Sequence[str]) -> list[tuple[int, list[Context], list[Hyp], list[Hyp]]]:
        """Candidate placements of the contexts of ``block_terms`` as one
        contiguous block. Returns (position, block contexts, Ψ1, Ψ2)."""
        owners = _owner_map(ctx, block_terms + [rest], bound)
        nb = len(block_terms)
        entries = list(ctx.entries)
        blocks = [[h for h, o in zip(entries, owners) if o == i] for i in range(nb)]
        others = [h for h, o in zip(entries, owners) if o == nb]
        in_block = [i for i, o in enumerate(owners) if o < nb]
        if ctx.zone == "L":
            if in_block:
                lo, hi = in_block[0], in_block[-1]
                inner = owners[lo:hi + 1]
                if any(o == nb for o in inner) or inner != sorted(inner):
                    raise NDTypeError("order", "split not contiguous (ordered-zone violation)")
                positions = [lo]
            else:
                positions = list(range(len(others) + 1))
        else:
            positions = [in_block[0] if in_block else 0]
            if in_block:
                positions = [sum(1 for o in owners[:in_block[0]] if o == nb)]
        out = []
        for k in positions:
            out.append((k, [_ctx(ctx.zone if ctx.zone == "C" else "L", b) for b in blocks], others[:k], others[k:]))
        return out

    def _let(self, ctx: Context, t: Let) -> NDDerivation:
        zone = ctx.zone
        if zone == "C" and t.ann.sort != "C":
            raise NDTypeError("sort", "a C-term may only eliminate C-sort formulas")
        pvars = pattern_vars(t.pat)
        if len(set(pvars)) != len(pvars):
            raise NDTypeError("linearity", "pattern binds a variable twice")
        ren = self._fresh_binder(ctx, pvars)
        pat = rename_pattern(t.pat, ren) if ren else t.pat
        body = subst(t.body, {k: Var(v) for k, v in ren.items()}) if ren else t.body
        binds = pattern_bindings(pat, t.ann)
        for n, f in binds:
            if zone == "C" and f.sort != "C":
                raise NDTypeError("sort", f"pattern variable {n} would carry L-sort {print_formula(f)} into a C-context")
        rule = let_rule(zone, t.ann, pat)
        last: NDTypeError | None = None
        for k, (phi,), psi1, psi2 in self._block(ctx, [t.scrut], body, pattern_vars(pat)):
            try:
                d0 = self.check(_ctx(t.ann.sort, phi.entries), t.scrut, t.ann)
                d1 = self.infer(_ctx(zone, psi1 + binds + psi2), body)
            except NDTypeError as e:
                last = e
                continue
            arranged = _ctx(zone, psi1 + list(phi.entries) + psi2)
            node = NDDerivation(rule, arranged, t, d1.type, (d0, d1))
            return _exchange_chain(ctx, arranged.entries, t, d1.type, node) if zone == "C" else node
        assert last is not None
        raise last

    def _ex(self, ctx: Context, t: Ex) -> NDDerivation:
        zone = ctx.zone
        if t.x1 == t.x2:
            raise NDTypeError("linearity", "ex binds the same name twice")
        ren = self._fresh_binder(ctx, [t.x1, t.x2])
        x1, x2 = ren.get(t.x1, t.x1), ren.get(t.x2, t.x2)
        body = subst(t.body, {k: Var(v) for k, v in ren.items()}) if ren else t.body
        # the block is Φ2 followed by Φ1
        last: NDTypeError | None = None
        for k, (phi2, phi1), psi1, psi2 in self._block(ctx, [t.t2, t.t1], body, [x1, x2]):
            try:
                d1 = self.infer(_ctx("C", phi1.entries), t.t1)
                d2 = self.infer(_ctx("C", phi2.entries), t.t2)
                d3 = self.infer(_ctx(zone, psi1 + [(x1, d1.type), (x2, d2.type)] + psi2), body)
            except NDTypeError as e:
                last = e
                continue
            arranged = _ctx(zone, psi1 + list(phi2.entries) + list(phi1.entries) + psi2)
            node = NDDerivation(f"beta_{zone}", arranged, t, d3.type, (d1, d2, d3))
            return _exchange_chain(ctx, arranged.entries, t, d3.type, node) if zone == "C" else node
        assert last is not None
        raise last


def _build(cls, *args: Formula) -> Formula:
    try:
        return cls(*args)
    except SortError as e:
        raise NDTypeError("sort", str(e)) from None


def check_nd(ctx: Context, t: Term, goal: Formula) -> NDDerivation:
    """Type ``t`` against ``goal`` in ``ctx``; raises NDTypeError."""
    if ctx.zone != goal.sort:
        raise NDTypeError("sort", f"a {goal.sort}-sort goal needs a {goal.sort}-zone context")
    return _Checker(t, ctx).check(ctx, t, goal)


def infer_nd(ctx: Context, t: Term) -> NDDerivation:
    return _Checker(t, ctx).infer(ctx, t)


# --------------------------------------------------------------- validator

class _Bad(Exception):
    pass


def _req(cond: bool, msg: str) -> None:
    if not cond:
        raise _Bad(msg)


def _validate_node(d: NDDerivation) -> None:
    r, ctx, t, T, ps = d.rule, d.ctx.entries, d.term, d.type, d.premises
    zone = d.ctx.zone
    _req(T.sort == zone, "type sort differs from the context zone")
    if r in ("id_C", "id_L"):
        _req(isinstance(t, Var) and ctx == ((t.name, T),), "id needs exactly the used hypothesis")
        return
    if r in ("unitI_C", "unitI_L"):
        _req(isinstance(t, Triv) and not ctx and T == (CUnit() if zone == "C" else LUnit()), "bad unit introduction")
        return
    if r == "ex_C":
        (p,) = ps
        _req(zone == "C" and p.ctx.zone == "C", "ex_C acts on C-contexts")
        _req(alpha_eq(p.term, t) and p.type == T, "ex_C keeps term and type")
        a, b = ctx, p.ctx.entries
        diffs = [i for i in range(len(a)) if i >= len(b) or a[i] != b[i]]
        _req(len(a) == len(b) and len(diffs) == 2 and diffs[1] == diffs[0] + 1
             and a[diffs[0]] == b[diffs[1]] and a[diffs[1]] == b[diffs[0]], "ex_C must swap one adjacent pair")
        return
    if r in ("tenI", "tenI_L", "impE", "imprE", "implE"):
        p0, p1 = ps
        if r == "implE":
            _req(isinstance(t, App) and t.kind == "l", "implE needs app_l")
            _req(alpha_eq(t.fn, p0.term) and alpha_eq(t.arg, p1.term), "subterms differ")
            _req(ctx == p1.ctx.entries + p0.ctx.entries, "implE context must be Δ;Γ")
            _req(isinstance(p0.type, LImp) and p0.type.arg == p1.type and p0.type.res == T, "implE types")
            return
        _req(ctx == p0.ctx.entries + p1.ctx.entries, "context is not the premise concatenation")
        if r in ("tenI", "tenI_L"):
            kind = "C" if r == "tenI" else "L"
            _req(isinstance(t, Pair) and t.kind == kind, "tenI needs a pair")
            _req(alpha_eq(t.left, p0.term) and alpha_eq(t.right, p1.term), "subterms differ")
            _req(T == (CTensor if kind == "C" else LTensor)(p0.type, p1.type), "tensor type")
            return
        kind = "C" if r == "impE" else "r"
        _req(isinstance(t, App) and t.kind == kind, f"{r} needs an application")
        _req(alpha_eq(t.fn, p0.term) and alpha_eq(t.arg, p1.term), "subterms differ")
        cls = CImp if r == "impE" else RImp
        _req(isinstance(p0.type, cls) and p0.type.children() == (p1.type, T), f"{r} types")
        return
    if r in ("impI", "imprI", "implI"):
        (p,) = ps
        kind = {"impI": "C", "imprI": "r", "implI": "l"}[r]
        _req(isinstance(t, Lam) and t.kind == kind, f"{r} needs a matching abstraction")
        x = p.ctx.entries[0][0] if kind == "l" else p.ctx.entries[-1][0] if p.ctx.entries else None
        _req(x is not None, "abstraction premise has an empty context")
        _req(alpha_eq(t, Lam(kind, x, t.ann, p.term)), "abstraction body differs")
        hyp = (x, t.ann)
        _req(p.ctx.entries == ((hyp,) + ctx if kind == "l" else ctx + (hyp,)), "discharged hypothesis misplaced")
        want = {"impI": CImp(t.ann, p.type) if t.ann.sort == "C" and p.type.sort == "C" else None,
                "imprI": RImp(t.ann, p.type) if zone == "L" and t.ann.sort == "L" else None,
                "implI": LImp(p.type, t.ann) if zone == "L" and t.ann.sort == "L" else None}[r]
        _req(want is not None and T == want, f"{r} type")
        return
    if r in ("GI", "FI", "GE"):
        (p,) = ps
        _req(all(f.sort == "C" for _, f in ctx), f"{r} needs an all-C-sort context")
        _req(p.ctx.entries == ctx, f"{r} keeps the context")
        if r == "GI":
            _req(isinstance(t, GI) and alpha_eq(t.body, p.term) and T == G(p.type) and zone == "C", "GI shape")
        elif r == "FI":
            _req(isinstance(t, FI) and alpha_eq(t.body, p.term) and p.type.sort == "C" and T == F(p.type), "FI shape")
        else:
            _req(isinstance(t, Derelict) and alpha_eq(t.body, p.term) and p.type == G(T), "GE shape")
        return
    if r in ("beta_C", "beta_L"):
        p1, p2, p3 = ps
        _req(isinstance(t, Ex), "beta needs an ex term")
        _req(alpha_eq(t.t1, p1.term) and alpha_eq(t.t2, p2.term), "ex subterms differ")
        _req(p1.ctx.zone == "C" and p2.ctx.zone == "C", "ex subterms are C-terms")
        _req(T == p3.type, "ex type")
        body = p3.ctx.entries
        ok = False
        for k in range(len(body) - 1):
            (y1, f1), (y2, f2) = body[k], body[k + 1]
            if (f1, f2) != (p1.type, p2.type):
                continue
            if ctx == body[:k] + p2.ctx.entries + p1.ctx.entries + body[k + 2:] and \
                    alpha_eq(t, Ex(p1.term, p2.term, y1, y2, p3.term)):
                ok = True
        _req(ok, "ex context must be Ψ1, Φ2, Φ1, Ψ2")
        return
    if r in ("unitE", "unitE1", "unitE2", "tenE", "tenE1", "tenE2", "FE", "GE_let"):
        _validate_let(d)
        return
    if r in ("cut", "cut1", "cut2"):
        try:
            _validate_let(d)
            return
        except _Bad:
            pass
        p0, p1 = ps
        want = {"cut": ("C", "C"), "cut1": ("C", "L"), "cut2": ("L", "L")}[r]
        _req((p0.ctx.zone, p1.ctx.zone) == want and zone == want[1], "cut zones")
        _req(T == p1.type, "cut type")
        body = p1.ctx.entries
        ok = False
        for k, (x, f) in enumerate(body):
            if f != p0.type:
                continue
            if ctx == body[:k] + p0.ctx.entries + body[k + 1:] and alpha_eq(t, subst(p1.term, {x: p0.term})):
                ok = True
                break
        _req(ok, "cut conclusion is not the substitution instance")
        return
    raise _Bad(f"unknown ND rule {r!r}")


def _validate_let(d: NDDerivation) -> None:
    ctx, t, T = d.ctx.entries, d.term, d.type
    _req(isinstance(t, Let) and len(d.premises) == 2, f"{d.rule} needs a let")
    p0, p1 = d.premises
    _req(let_rule(d.ctx.zone, t.ann, t.pat) == d.rule, f"{d.rule} does not match the pattern")
    _req(alpha_eq(t.scrut, p0.term) and p0.type == t.ann and T == p1.type, "let premises")
    _req(p0.ctx.zone == t.ann.sort, "scrutinee sort")
    try:
        binds = pattern_bindings(t.pat, t.ann)
    except NDTypeError as e:
        raise _Bad(str(e)) from None
    pvars = pattern_vars(t.pat)
    n = len(binds)
    body = p1.ctx.entries
    for k in range(len(body) - n + 1):
        block = body[k:k + n]
        if [f for _, f in block] != [f for _, f in binds]:
            continue
        if ctx != body[:k] + p0.ctx.entries + body[k + n:]:
            continue
        pat = rename_pattern(t.pat, {v: y for v, (y, _) in zip(pvars, block)})
        if alpha_eq(t, Let(p0.term, t.ann, pat, p1.term)):
            return
    raise _Bad("let context must be Ψ1, Φ, Ψ2 with the bindings in place of Φ")


def validate_nd(d: NDDerivation) -> CheckReport:
    """Forward, node-by-node validation of an ND derivation."""
    failures = []
    stack: list[tuple[NDDerivation, tuple[int, ...]]] = [(d, ())]
    while stack:
        node, path = stack.pop()
        try:
            _validate_node(node)
        except (_Bad, ValueError, IndexError) as e:
            failures.append((path, node.rule, str(e)))
        for i, p in enumerate(node.premises):
            stack.append((p, path + (i,)))
    failures.sort()
    return CheckReport(not failures, failures)
