"""Translations between sequent proofs and natural-deduction derivations.

``sc_to_nd`` walks a sequent proof from the root, choosing term variables
for each premise context (inherited names for passive hypotheses, fresh
ones for new hypotheses) and building the derivation bottom-up. Left rules
become eliminations applied to an identity, plugged in by substitution.

``nd_to_sc`` maps introductions to right rules and each elimination to the
matching left rule closed by a cut.
"""

from __future__ import annotations

from typing import Sequence

from .kernel.nd import NDDerivation, NDTypeError, check_nd, pattern_bindings, validate_nd
from .kernel.sc import PRINCIPAL, check_sc, match_node
from .syntax.formulas import CUnit, F, Formula, G, LUnit
from .syntax.sequents import Context, Hyp, ProofTree, Sequent
from .syntax.terms import (GI, App, Derelict, Ex, FI, Lam, Let, NameSupply, PF,
                           PG, PPair, PTriv, PVar, Pair, Pattern, Triv, Var,
                           pattern_vars, subst)


class TranslationError(ValueError):
    pass


# ------------------------------------------------------------------ SC → ND

class _ToND:
    def __init__(self, avoid: set[str]) -> None:
        self.supply = NameSupply(avoid, stem="v")

    def fresh(self, hint: str = "v") -> str:
        return self.supply.fresh(hint)

    def premise_names(self, p: ProofTree, names: Sequence[str]) -> list[list[str]]:
        """Names for each premise context: inherited where the kernel's
        origin map says so, fresh otherwise."""
        m = match_node(p)
        out = [[None] * len(q.conclusion.hyps) for q in p.premises]
        for i, o in enumerate(m.origin):
            if o != PRINCIPAL:
                prem, j = o  # type: ignore[misc]
                out[prem][j] = names[i]
        return [[n if n is not None else self.fresh() for n in row] for row in out]

    def run(self, p: ProofTree, names: Sequence[str]) -> NDDerivation:
        s = p.conclusion
        zone = s.side
        ctx = Context(zone, tuple(zip(names, s.hyps.formulas)))
        g = s.goal
        r = p.rule
        m = match_node(p)
        pn = self.premise_names(p, names)
        subs = [self.run(q, pn[i]) for i, q in enumerate(p.premises)]

        if r in ("ax_C", "ax_L"):
            return NDDerivation(f"id_{zone}", ctx, Var(names[0]), g)
        if r in ("unitR", "unitR_L"):
            return NDDerivation(f"unitI_{zone}", ctx, Triv(), g)
        if r in ("tenR", "tenR_L"):
            a, b = subs
            return NDDerivation("tenI" if zone == "C" else "tenI_L", ctx, Pair(zone, a.term, b.term), g, (a, b))
        if r in ("impR", "imprR", "implR"):
            (d,) = subs
            kind = {"impR": "C", "imprR": "r", "implR": "l"}[r]
            x = pn[0][0] if kind == "l" else pn[0][-1]
            ann = d.ctx.entries[0][1] if kind == "l" else d.ctx.entries[-1][1]
            return NDDerivation({"C": "impI", "r": "imprI", "l": "implI"}[kind], ctx, Lam(kind, x, ann, d.term), g, (d,))
        if r in ("Fr", "Gr"):
            (d,) = subs
            return NDDerivation("FI" if r == "Fr" else "GI", ctx, (FI if r == "Fr" else GI)(d.term), g, (d,))
        if r in ("ex_C", "ex_L"):
            (d,) = subs
            k = m.pos
            # conclusion: Ψ1, a, b, Ψ2 ; premise: Ψ1, u:b-type, v:a-type, Ψ2
            a_name, a_ty = ctx.entries[k]
            b_name, b_ty = ctx.entries[k + 1]
            u, v = pn[0][k], pn[0][k + 1]
            t1 = NDDerivation("id_C", Context("C", ((b_name, b_ty),)), Var(b_name), b_ty)
            t2 = NDDerivation("id_C", Context("C", ((a_name, a_ty),)), Var(a_name), a_ty)
            term = Ex(Var(b_name), Var(a_name), u, v, d.term)
            return NDDerivation(f"beta_{zone}", ctx, term, g, (t1, t2, d))
        if r in ("unitL", "unitL1", "unitL2", "tenL", "tenL1", "tenL2", "Fl"):
            (d,) = subs
            k = m.pos
            z, zt = ctx.entries[k]
            scrut_zone = zt.sort
            scrut = NDDerivation(f"id_{scrut_zone}", Context(scrut_zone, ((z, zt),)), Var(z), zt)
            if r in ("unitL", "unitL1", "unitL2"):
                pat: Pattern = PTriv()
                rule = {"unitL": "unitE", "unitL1": "unitE1", "unitL2": "unitE2"}[r]
            elif r == "Fl":
                pat = PF(PVar(pn[0][k]))
                rule = "FE"
            else:
                pat = PPair("C" if r in ("tenL", "tenL1") else "L", PVar(pn[0][k]), PVar(pn[0][k + 1]))
                rule = {"tenL": "tenE", "tenL1": "tenE1", "tenL2": "tenE2"}[r]
            return NDDerivation(rule, ctx, Let(Var(z), zt, pat, d.term), g, (scrut, d))
        if r == "Gl":
            (d,) = subs
            k = m.pos
            z, zt = ctx.entries[k]
            x = pn[0][k]
            inner = NDDerivation("id_C", Context("C", ((z, zt),)), Var(z), zt)
            der = NDDerivation("GE", Context("L", ((z, zt),)), Derelict(Var(z)), zt.body, (inner,))
            return self._cut("cut2", ctx, der, d, x)
        if r in ("impL", "impL_mixed", "imprL", "implL"):
            side_d, main_d = subs
            k = m.pos
            f, ft = ctx.entries[k]
            fid = NDDerivation(f"id_{ft.sort}", Context(ft.sort, ((f, ft),)), Var(f), ft)
            if r == "implL":
                y = pn[1][m.extra["delta_start"]]
                app = NDDerivation("implE", Context("L", side_d.ctx.entries + ((f, ft),)),
                                   App("l", Var(f), side_d.term), ft.res, (fid, side_d))
                return self._cut("cut2", ctx, app, main_d, y)
            y = pn[1][k]
            if r == "imprL":
                app = NDDerivation("imprE", Context("L", ((f, ft),) + side_d.ctx.entries),
                                   App("r", Var(f), side_d.term), ft.res, (fid, side_d))
                return self._cut("cut2", ctx, app, main_d, y)
            app = NDDerivation("impE", Context("C", ((f, ft),) + side_d.ctx.entries),
                               App("C", Var(f), side_d.term), ft.right, (fid, side_d))
            return self._cut("cut" if r == "impL" else "cut1", ctx, app, main_d, y)
        if r in ("cut", "cut1", "cut2"):
            d0, d1 = subs
            x = pn[1][m.pos]
            return self._cut(r, ctx, d0, d1, x)
        raise TranslationError(f"no translation for rule {r}")

    def _cut(self, rule: str, ctx: Context, d0: NDDerivation, d1: NDDerivation, x: str) -> NDDerivation:
        term = subst(d1.term, {x: d0.term}, self.supply)
        return NDDerivation(rule, ctx, term, d1.type, (d0, d1))


def _all_sc_names(p: ProofTree) -> set[str]:
    return {n for q in p.nodes() for n in q.conclusion.hyps.names}


def sc_to_nd(p: ProofTree) -> NDDerivation:
    """Natural-deduction derivation of the sequent proved by ``p``."""
    report = check_sc(p)
    if not report.ok:
        raise TranslationError("invalid sequent proof: " + report.summary())
    tr = _ToND(_all_sc_names(p))
    return tr.run(p, list(p.conclusion.hyps.names))


# ------------------------------------------------------------------ ND → SC

def _ax(name: str, f: Formula, side: str) -> ProofTree:
    return ProofTree("ax_C" if side == "C" else "ax_L", Sequent(side, Context(side, ((name, f),)), f))  # type: ignore[arg-type]


CUT_BY_ZONES = {("C", "C"): "cut", ("C", "L"): "cut1", ("L", "L"): "cut2"}


class _ToSC:
    def __init__(self, avoid: set[str]) -> None:
        self.supply = NameSupply(avoid, stem="w")

    def seq(self, zone: str, entries: Sequence[Hyp], goal: Formula) -> Sequent:
        return Sequent(zone, Context(zone, tuple(entries)), goal)  # type: ignore[arg-type]

    def cut(self, p0: ProofTree, p1: ProofTree, k: int, concl: Sequent) -> ProofTree:
        rule = CUT_BY_ZONES[(p0.conclusion.side, p1.conclusion.side)]
        return ProofTree(rule, concl, (p0, p1))

    def run(self, d: NDDerivation) -> ProofTree:
        r, zone, ctx, T = d.rule, d.ctx.zone, list(d.ctx.entries), d.type
        concl = self.seq(zone, ctx, T)
        ps = [self.run(q) for q in d.premises]
        if r in ("id_C", "id_L"):
            return ProofTree("ax_C" if zone == "C" else "ax_L", concl)
        if r in ("unitI_C", "unitI_L"):
            return ProofTree("unitR" if zone == "C" else "unitR_L", concl)
        if r in ("tenI", "tenI_L"):
            return ProofTree("tenR" if zone == "C" else "tenR_L", concl, tuple(ps))
        if r in ("impI", "imprI", "implI"):
            return ProofTree({"impI": "impR", "imprI": "imprR", "implI": "implR"}[r], concl, tuple(ps))
        if r == "GI":
            return ProofTree("Gr", concl, tuple(ps))
        if r == "FI":
            return ProofTree("Fr", concl, tuple(ps))
        if r == "ex_C":
            return ProofTree("ex_C", concl, tuple(ps))
        if r in ("impE", "imprE"):
            p_fn, p_arg = ps
            fty = d.premises[0].type
            f = self.supply.fresh("f")
            y = self.supply.fresh("y")
            arg_ctx = list(d.premises[1].ctx.entries)
            res = fty.children()[1]
            rule = "impL" if r == "impE" else "imprL"
            left = ProofTree(rule, self.seq(zone, [(f, fty)] + arg_ctx, res), (p_arg, _ax(y, res, zone)))
            return self.cut(p_fn, left, 0, concl)
        if r == "implE":
            p_fn, p_arg = ps
            fty = d.premises[0].type
            f, y = self.supply.fresh("f"), self.supply.fresh("y")
            arg_ctx = list(d.premises[1].ctx.entries)
            left = ProofTree("implL", self.seq("L", arg_ctx + [(f, fty)], fty.res), (p_arg, _ax(y, fty.res, "L")))
            return self.cut(p_fn, left, len(arg_ctx), concl)
        if r == "GE":
            (p,) = ps
            gty = d.premises[0].type
            z, a = self.supply.fresh("g"), self.supply.fresh("y")
            gl = ProofTree("Gl", self.seq("L", [(z, gty)], gty.body), (_ax(a, gty.body, "L"),))
            return self.cut(p, gl, 0, concl)
        if r in ("beta_C", "beta_L"):
            p1, p2, p3 = ps
            d1, d2, d3 = d.premises
            body = list(d3.ctx.entries)
            k = self._ex_position(d)
            swapped = body[:k] + [body[k + 1], body[k]] + body[k + 2:]
            ex = ProofTree("ex_C" if zone == "C" else "ex_L", self.seq(zone, swapped, T), (p3,))
            phi1, phi2 = list(d1.ctx.entries), list(d2.ctx.entries)
            mid = self.seq(zone, body[:k] + phi2 + [body[k]] + body[k + 2:], T)
            c1 = self.cut(p2, ex, k, mid)
            return self.cut(p1, c1, k + len(phi2), concl)
        if r in ("unitE", "unitE1", "unitE2", "tenE", "tenE1", "tenE2", "FE", "GE_let", "cut", "cut1", "cut2"):
            return self._elim(d, ps, concl)
        raise TranslationError(f"no translation for ND rule {r}")

    def _ex_position(self, d: NDDerivation) -> int:
        d1, d2, d3 = d.premises
        body = d3.ctx.entries
        t = d.term
        assert isinstance(t, Ex)
        for k in range(len(body) - 1):
            if (body[k][1], body[k + 1][1]) != (d1.type, d2.type):
                continue
            if d.ctx.entries == body[:k] + d2.ctx.entries + d1.ctx.entries + body[k + 2:]:
                return k
        raise TranslationError("ex node does not fit its premises")

    def _elim(self, d: NDDerivation, ps: list[ProofTree], concl: Sequent) -> ProofTree:
        d0, d1 = d.premises
        p0, p1 = ps
        t = d.term
        body = list(d1.ctx.entries)
        ctx = list(d.ctx.entries)
        phi = list(d0.ctx.entries)
        if isinstance(t, Let) and d.rule not in ("cut", "cut1", "cut2") or (
                isinstance(t, Let) and isinstance(t.pat, PVar) and self._is_let(d)):
            binds = pattern_bindings(t.pat, t.ann)
            n = len(binds)
            for k in range(len(body) - n + 1):
                if [f for _, f in body[k:k + n]] != [f for _, f in binds]:
                    continue
                if ctx != body[:k] + phi + body[k + n:]:
                    continue
                z = self.supply.fresh("z")
                collapsed = self._collapse(p1, t.pat, t.ann, k, body, z, d1.type, d1.ctx.zone)
                return self.cut(p0, collapsed, k, concl)
            raise TranslationError("let node does not fit its premises")
        # substitution-form cut
        for k, (x, f) in enumerate(body):
            if f == d0.type and ctx == body[:k] + phi + body[k + 1:]:
                return self.cut(p0, p1, k, concl)
        raise TranslationError("cut node does not fit its premises")

    def _is_let(self, d: NDDerivation) -> bool:
        from .kernel.nd import _validate_let, _Bad

        try:
            _validate_let(d)
            return True
        except _Bad:
            return False

    def _collapse(self, p: ProofTree, pat: Pattern, typ: Formula, k: int, body: list[Hyp],
                  z: str, goal: Formula, zone: str) -> ProofTree:
        """Left rules turning the pattern's bindings at position k into one
        hypothesis z:typ."""
        n = len(pattern_vars(pat)) if not isinstance(pat, PTriv) else 0
        n = len(pattern_bindings(pat, typ))
        before, after = body[:k], body[k + n:]
        if isinstance(pat, PVar):
            return p
        if isinstance(pat, PTriv):
            rule = "unitL" if zone == "C" else ("unitL1" if isinstance(typ, CUnit) else "unitL2")
            return ProofTree(rule, self.seq(zone, before + [(z, typ)] + after, goal), (p,))
        if isinstance(pat, PPair):
            nl = len(pattern_bindings(pat.left, typ.left))
            zl, zr = self.supply.fresh("z"), self.supply.fresh("z")
            # collapse the right component first, then the left
            q = self._collapse(p, pat.right, typ.right, k + nl, body, zr, goal, zone)
            mid = body[:k + nl] + [(zr, typ.right)] + after
            q = self._collapse(q, pat.left, typ.left, k, mid, zl, goal, zone)
            rule = ("tenL" if zone == "C" else "tenL1") if pat.kind == "C" else "tenL2"
            return ProofTree(rule, self.seq(zone, before + [(z, typ)] + after, goal), (q,))
        if isinstance(pat, (PF, PG)):
            zi = self.supply.fresh("z")
            q = self._collapse(p, pat.inner, typ.body, k, body, zi, goal, zone)
            rule = "Fl" if isinstance(pat, PF) else "Gl"
            return ProofTree(rule, self.seq(zone, before + [(z, typ)] + after, goal), (q,))
        raise TypeError(pat)


def _all_nd_names(d: NDDerivation) -> set[str]:
    from .syntax.terms import all_names

    out: set[str] = set()
    for q in d.nodes():
        out |= set(q.ctx.names) | all_names(q.term)
    return out


def nd_to_sc(d: NDDerivation) -> ProofTree:
    """Sequent proof of the judgement derived by ``d``."""
    report = validate_nd(d)
    if not report.ok:
        raise TranslationError("invalid ND derivation: " + report.summary())
    return _ToSC(_all_nd_names(d)).run(d)


def nd_ok(d: NDDerivation) -> bool:
    """Node-wise validity plus an independent re-check of the root term."""
    if not validate_nd(d).ok:
        return False
    try:
        check_nd(d.ctx, d.term, d.type)
    except NDTypeError:
        return False
    return True
