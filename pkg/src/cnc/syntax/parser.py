"""Recursive-descent parsers for formulas, sequents, proofs and terms.

Atom sorts are fixed by the first letter: ``a``..``o`` name L-atoms and
``p``..``z`` name C-atoms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Literal

from .formulas import (CAtom, CImp, CTensor, CUnit, F, Formula, G, LAtom, LImp,
                       LTensor, LUnit, RImp, SortError)
from .sequents import (RULE_ARITY, Context, ProofStructureError, ProofTree,
                       Sequent, default_names)
from .terms import (GI, App, Derelict, Ex, FI, Lam, Let, PF, PG, PPair, PTriv,
                    PVar, Pair, Pattern, Term, Triv, Var)


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None) -> None:
        super().__init__(msg if pos is None else f"{msg} (at offset {pos})")
        self.pos = pos


_TOKEN = re.compile(
    r"\s+|#[^\n]*"
    r"|(?P<sym>\|-C|\|-L|->>|<<-|-o|\|>|[*()\[\]:.,;])"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_']*)"
)

TERM_KEYWORDS = frozenset({
    "lam", "lam_l", "lam_r", "let", "be", "in", "ex", "with", "G", "F",
    "derelict", "app_l", "app_r", "triv",
})


@dataclass(frozen=True, slots=True)
class Tok:
    kind: str  # "sym" | "id" | "eof"
    text: str
    pos: int


def tokenize(text: str) -> list[Tok]:
    toks: list[Tok] = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        if m.group("sym"):
            toks.append(Tok("sym", m.group("sym"), i))
        elif m.group("id"):
            toks.append(Tok("id", m.group("id"), i))
        i = m.end()
    toks.append(Tok("eof", "", len(text)))
    return toks


def atom_sort(name: str) -> Literal["C", "L"]:
    return "C" if name[0] >= "p" else "L"


class _Stream:
    def __init__(self, text: str) -> None:
        self.toks = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Tok:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        t = self.peek
        return t.kind != "eof" and t.text == text

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        t = self.next()
        if t.text != text or t.kind == "eof":
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def ident(self, what: str = "identifier") -> Tok:
        t = self.next()
        if t.kind != "id":
            raise ParseError(f"expected {what}, found {t.text or 'end of input'!r}", t.pos)
        return t

    def done(self) -> None:
        if self.peek.kind != "eof":
            raise ParseError(f"unexpected trailing input {self.peek.text!r}", self.peek.pos)


# ---------------------------------------------------------------- formulas

def _build(pos: int, fn: Callable[[], Formula]) -> Formula:
    try:
        return fn()
    except SortError as e:
        raise SortError(f"{e} (at offset {pos})") from None


def _formula(st: _Stream) -> Formula:
    left = _limp_level(st)
    t = st.peek
    if t.kind == "sym" and t.text in ("-o", "->>"):
        st.next()
        right = _formula(st)
        cls = CImp if t.text == "-o" else RImp
        return _build(t.pos, lambda: cls(left, right))
    return left


def _limp_level(st: _Stream) -> Formula:
    left = _tensor_level(st)
    while st.peek.kind == "sym" and st.peek.text == "<<-":
        t = st.next()
        right = _tensor_level(st)
        left = _build(t.pos, lambda l=left, r=right: LImp(l, r))
    return left


def _tensor_level(st: _Stream) -> Formula:
    left = _prefix(st)
    while st.peek.kind == "sym" and st.peek.text in ("*", "|>"):
        t = st.next()
        right = _prefix(st)
        cls = CTensor if t.text == "*" else LTensor
        left = _build(t.pos, lambda l=left, r=right, c=cls: c(l, r))
    return left


def _prefix(st: _Stream) -> Formula:
    t = st.peek
    if t.kind == "id" and t.text in ("F", "G"):
        st.next()
        body = _prefix(st)
        cls = F if t.text == "F" else G
        return _build(t.pos, lambda: cls(body))
    return _fatom(st)


def _fatom(st: _Stream) -> Formula:
    t = st.next()
    if t.kind == "sym" and t.text == "(":
        f = _formula(st)
        st.expect(")")
        return f
    if t.kind == "id":
        if t.text == "I_c":
            return CUnit()
        if t.text == "I_l":
            return LUnit()
        if t.text in TERM_KEYWORDS or not t.text[0].islower():
            raise ParseError(f"{t.text!r} is not an atom", t.pos)
        return CAtom(t.text) if atom_sort(t.text) == "C" else LAtom(t.text)
    raise ParseError(f"expected a formula, found {t.text or 'end of input'!r}", t.pos)


def parse_formula(text: str, expected_sort: Literal["C", "L", "any"] = "any") -> Formula:
    st = _Stream(text)
    f = _formula(st)
    st.done()
    if expected_sort != "any" and f.sort != expected_sort:
        raise SortError(f"expected a {expected_sort}-sort formula, got {f.sort}-sort {f}")
    return f


# ---------------------------------------------------------------- sequents

def _hyp_list(st: _Stream, stop: Callable[[Tok], bool]) -> tuple[list[tuple[str | None, Formula]], set[str]]:
    hyps: list[tuple[str | None, Formula]] = []
    seps: set[str] = set()
    if stop(st.peek):
        return hyps, seps
    while True:
        name = None
        if st.peek.kind == "id" and st.toks[st.i + 1].text == ":":
            name = st.next().text
            st.next()
        hyps.append((name, _formula(st)))
        if st.peek.kind == "sym" and st.peek.text in (",", ";"):
            seps.add(st.next().text)
            continue
        if stop(st.peek):
            return hyps, seps
        raise ParseError(f"unexpected {st.peek.text or 'end of input'!r} in context", st.peek.pos)


def _name_hyps(hyps: list[tuple[str | None, Formula]]) -> list[tuple[str, Formula]]:
    taken = {n for n, _ in hyps if n is not None}
    pool = iter(n for n in default_names(len(hyps) + len(taken)) if n not in taken)
    return [(n if n is not None else next(pool), f) for n, f in hyps]


def _check_seps(side: str, seps: set[str], pos: int) -> None:
    want = "," if side == "C" else ";"
    if seps - {want}:
        raise ParseError(f"|-{side} contexts are separated by {want!r}", pos)


def _make_sequent(side: str, hyps, goal: Formula, pos: int) -> Sequent:
    try:
        return Sequent(side, Context(side, tuple(_name_hyps(hyps))), goal)  # type: ignore[arg-type]
    except (SortError, ValueError) as e:
        raise ParseError(str(e), pos) from None


def _sequent(st: _Stream) -> Sequent:
    start = st.peek.pos
    hyps, seps = _hyp_list(st, lambda t: t.text in ("|-C", "|-L"))
    turn = st.next()
    if turn.text not in ("|-C", "|-L"):
        raise ParseError("expected |-C or |-L", turn.pos)
    side = turn.text[-1]
    _check_seps(side, seps, start)
    goal = _formula(st)
    return _make_sequent(side, hyps, goal, start)


def parse_sequent(text: str) -> Sequent:
    st = _Stream(text)
    s = _sequent(st)
    st.done()
    return s


def parse_context(text: str, zone: Literal["C", "L"]) -> Context:
    st = _Stream(text)
    hyps, seps = _hyp_list(st, lambda t: t.kind == "eof")
    st.done()
    _check_seps(zone, seps, 0)
    try:
        return Context(zone, tuple(_name_hyps(hyps)))
    except (SortError, ValueError) as e:
        raise ParseError(str(e)) from None


# ------------------------------------------------------------------ proofs

def _seq_sexpr(st: _Stream) -> Sequent:
    open_ = st.expect("(")
    st.expect("seq")
    side_tok = st.ident("sequent side C or L")
    if side_tok.text not in ("C", "L"):
        raise ParseError("sequent side must be C or L", side_tok.pos)
    st.expect("[")
    hyps, seps = _hyp_list(st, lambda t: t.text == "]")
    st.expect("]")
    _check_seps(side_tok.text, seps, open_.pos)
    goal = _formula(st)
    st.expect(")")
    return _make_sequent(side_tok.text, hyps, goal, open_.pos)


def _proof(st: _Stream) -> ProofTree:
    open_ = st.expect("(")
    rule = st.ident("rule name")
    if rule.text not in RULE_ARITY:
        raise ParseError(f"unknown rule name {rule.text!r}", rule.pos)
    concl = _seq_sexpr(st)
    prems = []
    while st.at("("):
        prems.append(_proof(st))
    st.expect(")")
    try:
        return ProofTree(rule.text, concl, tuple(prems))
    except ProofStructureError as e:
        raise ParseError(str(e), open_.pos) from None


def parse_proof(text: str) -> ProofTree:
    st = _Stream(text)
    p = _proof(st)
    st.done()
    return p


# ------------------------------------------------------------------- terms

def _var(st: _Stream) -> str:
    t = st.ident("variable")
    if t.text in TERM_KEYWORDS:
        raise ParseError(f"keyword {t.text!r} used as a variable", t.pos)
    return t.text


def _term(st: _Stream) -> Term:
    t = st.peek
    if t.kind == "id" and t.text in ("lam", "lam_l", "lam_r"):
        st.next()
        x = _var(st)
        st.expect(":")
        ann = _formula(st)
        st.expect(".")
        kind = "C" if t.text == "lam" else t.text[-1]
        return Lam(kind, x, ann, _term(st))  # type: ignore[arg-type]
    if t.kind == "id" and t.text == "let":
        st.next()
        scrut = _term(st)
        st.expect(":")
        ann = _formula(st)
        st.expect("be")
        pat = _pattern(st)
        st.expect("in")
        return Let(scrut, ann, pat, _term(st))
    if t.kind == "id" and t.text == "ex":
        st.next()
        t1 = _term(st)
        st.expect(",")
        t2 = _term(st)
        st.expect("with")
        x1 = _var(st)
        st.expect(",")
        x2 = _var(st)
        st.expect("in")
        return Ex(t1, t2, x1, x2, _term(st))
    return _pair_term(st)


def _pair_term(st: _Stream) -> Term:
    left = _app_term(st)
    while st.peek.kind == "sym" and st.peek.text in ("*", "|>"):
        kind = "C" if st.next().text == "*" else "L"
        left = Pair(kind, left, _app_term(st))  # type: ignore[arg-type]
    return left


def _starts_atom(t: Tok) -> bool:
    return (t.kind == "sym" and t.text == "(") or \
        (t.kind == "id" and (t.text == "triv" or t.text not in TERM_KEYWORDS))


def _app_term(st: _Stream) -> Term:
    fn = _prefix_term(st)
    while _starts_atom(st.peek):
        fn = App("C", fn, _atom_term(st))
    return fn


def _prefix_term(st: _Stream) -> Term:
    t = st.peek
    if t.kind == "id":
        if t.text in ("G", "F", "derelict"):
            st.next()
            body = _atom_term(st)
            return {"G": GI, "F": FI, "derelict": Derelict}[t.text](body)
        if t.text in ("app_l", "app_r"):
            st.next()
            fn = _atom_term(st)
            return App(t.text[-1], fn, _atom_term(st))  # type: ignore[arg-type]
    return _atom_term(st)


def _atom_term(st: _Stream) -> Term:
    t = st.peek
    if t.kind == "sym" and t.text == "(":
        st.next()
        inner = _term(st)
        st.expect(")")
        return inner
    if t.kind == "id" and t.text == "triv":
        st.next()
        return Triv()
    if t.kind == "id" and t.text not in TERM_KEYWORDS:
        st.next()
        return Var(t.text)
    raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", t.pos)


def _pattern(st: _Stream) -> Pattern:
    left = _prefix_pattern(st)
    while st.peek.kind == "sym" and st.peek.text in ("*", "|>"):
        kind = "C" if st.next().text == "*" else "L"
        left = PPair(kind, left, _prefix_pattern(st))  # type: ignore[arg-type]
    return left


def _prefix_pattern(st: _Stream) -> Pattern:
    t = st.peek
    if t.kind == "id" and t.text in ("G", "F"):
        st.next()
        inner = _prefix_pattern(st)
        return PG(inner) if t.text == "G" else PF(inner)
    st.next()
    if t.kind == "sym" and t.text == "(":
        p = _pattern(st)
        st.expect(")")
        return p
    if t.kind == "id" and t.text == "triv":
        return PTriv()
    if t.kind == "id" and t.text not in TERM_KEYWORDS:
        return PVar(t.text)
    raise ParseError(f"expected a pattern, found {t.text or 'end of input'!r}", t.pos)


def parse_term(text: str) -> Term:
    st = _Stream(text)
    t = _term(st)
    st.done()
    return t


def parse_pattern(text: str) -> Pattern:
    st = _Stream(text)
    p = _pattern(st)
    st.done()
    return p
