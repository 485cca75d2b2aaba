"""Concrete ASCII rendering; inverse of :mod:`cnc.syntax.parser`."""

from __future__ import annotations

from .formulas import (CAtom, CImp, CTensor, CUnit, F, Formula, G, LAtom, LImp,
                       LTensor, LUnit, RImp)
from .sequents import Context, ProofTree, Sequent
from .terms import (GI, App, Derelict, Ex, FI, Lam, Let, PF, PG, PPair, PTriv,
                    PVar, Pair, Pattern, Term, Triv, Var)


def _fprec(f: Formula) -> int:
    if isinstance(f, (CImp, RImp)):
        return 1
    if isinstance(f, LImp):
        return 2
    if isinstance(f, (CTensor, LTensor)):
        return 3
    if isinstance(f, (F, G)):
        return 4
    return 5


def _fwrap(f: Formula, parens: bool) -> str:
    s = print_formula(f)
    return f"({s})" if parens else s


def print_formula(f: Formula) -> str:
    if isinstance(f, (CAtom, LAtom)):
        return f.name
    if isinstance(f, CUnit):
        return "I_c"
    if isinstance(f, LUnit):
        return "I_l"
    if isinstance(f, (F, G)):
        tag = "F" if isinstance(f, F) else "G"
        if _fprec(f.body) == 5:
            return f"{tag} {print_formula(f.body)}"
        return f"{tag}({print_formula(f.body)})"
    if isinstance(f, (CImp, RImp)):
        op = "-o" if isinstance(f, CImp) else "->>"
        left, right = f.children()
        return f"{_fwrap(left, _fprec(left) <= 1)} {op} {_fwrap(right, _fprec(right) < 1)}"
    if isinstance(f, LImp):
        return f"{_fwrap(f.res, _fprec(f.res) < 2)} <<- {_fwrap(f.arg, _fprec(f.arg) <= 2)}"
    if isinstance(f, (CTensor, LTensor)):
        op = "*" if isinstance(f, CTensor) else "|>"
        return f"{_fwrap(f.left, _fprec(f.left) < 3)} {op} {_fwrap(f.right, _fprec(f.right) <= 3)}"
    raise TypeError(f)


def print_context(ctx: Context) -> str:
    sep = ", " if ctx.zone == "C" else " ; "
    return sep.join(f"{n}:{print_formula(f)}" for n, f in ctx.entries)


def print_sequent(s: Sequent) -> str:
    ctx = print_context(s.hyps)
    turn = f"|-{s.side}"
    return f"{ctx} {turn} {print_formula(s.goal)}" if ctx else f"{turn} {print_formula(s.goal)}"


def print_seq_sexpr(s: Sequent) -> str:
    sep = ", " if s.side == "C" else "; "
    ctx = sep.join(f"{n}:{print_formula(f)}" for n, f in s.hyps.entries)
    return f"(seq {s.side} [{ctx}] {print_formula(s.goal)})"


def print_proof(p: ProofTree, indent: int = 0) -> str:
    pad = "  " * indent
    head = f"{pad}({p.rule} {print_seq_sexpr(p.conclusion)}"
    if not p.premises:
        return head + ")"
    body = "\n".join(print_proof(q, indent + 1) for q in p.premises)
    return f"{head}\n{body})"


# ------------------------------------------------------------------- terms

def _tprec(t: Term) -> int:
    if isinstance(t, (Lam, Let, Ex)):
        return 0
    if isinstance(t, Pair):
        return 1
    if isinstance(t, App) and t.kind == "C":
        return 2
    if isinstance(t, (App, GI, FI, Derelict)):
        return 3
    return 4


def _twrap(t: Term, parens: bool) -> str:
    s = print_term(t)
    return f"({s})" if parens else s


def _atomic(t: Term) -> str:
    return _twrap(t, _tprec(t) < 4)


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Triv):
        return "triv"
    if isinstance(t, Pair):
        op = "*" if t.kind == "C" else "|>"
        return f"{_twrap(t.left, _tprec(t.left) < 1)} {op} {_twrap(t.right, _tprec(t.right) <= 1)}"
    if isinstance(t, App):
        if t.kind == "C":
            return f"{_twrap(t.fn, _tprec(t.fn) < 2)} {_atomic(t.arg)}"
        return f"app_{t.kind} {_atomic(t.fn)} {_atomic(t.arg)}"
    if isinstance(t, GI):
        return f"G {_atomic(t.body)}"
    if isinstance(t, FI):
        return f"F {_atomic(t.body)}"
    if isinstance(t, Derelict):
        return f"derelict {_atomic(t.body)}"
    if isinstance(t, Lam):
        kw = "lam" if t.kind == "C" else f"lam_{t.kind}"
        return f"{kw} {t.var}:{print_formula(t.ann)}. {print_term(t.body)}"
    if isinstance(t, Let):
        scrut = _twrap(t.scrut, _tprec(t.scrut) == 0)
        return f"let {scrut} : {print_formula(t.ann)} be {print_pattern(t.pat)} in {print_term(t.body)}"
    if isinstance(t, Ex):
        t1 = _twrap(t.t1, _tprec(t.t1) == 0)
        t2 = _twrap(t.t2, _tprec(t.t2) == 0)
        return f"ex {t1}, {t2} with {t.x1}, {t.x2} in {print_term(t.body)}"
    raise TypeError(t)


def _pprec(p: Pattern) -> int:
    if isinstance(p, PPair):
        return 1
    if isinstance(p, (PG, PF)):
        return 2
    return 3


def print_pattern(p: Pattern) -> str:
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PTriv):
        return "triv"
    if isinstance(p, PPair):
        op = "*" if p.kind == "C" else "|>"
        left = print_pattern(p.left)
        right = print_pattern(p.right)
        if _pprec(p.left) < 1:
            left = f"({left})"
        if _pprec(p.right) <= 1:
            right = f"({right})"
        return f"{left} {op} {right}"
    if isinstance(p, (PG, PF)):
        tag = "G" if isinstance(p, PG) else "F"
        inner = print_pattern(p.inner)
        return f"{tag} {inner}" if _pprec(p.inner) == 3 else f"{tag}({inner})"
    raise TypeError(p)
