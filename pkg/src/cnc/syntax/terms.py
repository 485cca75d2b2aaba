"""Natural-deduction terms and patterns.

One AST serves both term sorts; whether a node is a C-term or an L-term is
decided by the type checker. ``kind`` fields distinguish the commutative
and ordered variants of pairs, abstractions and applications.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Literal

from .formulas import Formula

PairKind = Literal["C", "L"]  # t1 * t2  |  s1 |> s2
FunKind = Literal["C", "l", "r"]  # lam / app, lam_l / app_l, lam_r / app_r


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        from .printer import print_term

        return print_term(self)


class Pattern:
    __slots__ = ()

    def __str__(self) -> str:
        from .printer import print_pattern

        return print_pattern(self)


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str


@dataclass(frozen=True, slots=True)
class Triv(Term):
    pass


@dataclass(frozen=True, slots=True)
class Pair(Term):
    kind: PairKind
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Let(Term):
    """``let scrut : ann be pat in body``."""

    scrut: Term
    ann: Formula
    pat: Pattern
    body: Term


@dataclass(frozen=True, slots=True)
class Lam(Term):
    kind: FunKind
    var: str
    ann: Formula
    body: Term


@dataclass(frozen=True, slots=True)
class App(Term):
    kind: FunKind
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Ex(Term):
    """``ex t1, t2 with x1, x2 in body``: the exchange binder."""

    t1: Term
    t2: Term
    x1: str
    x2: str
    body: Term


@dataclass(frozen=True, slots=True)
class GI(Term):
    body: Term


@dataclass(frozen=True, slots=True)
class FI(Term):
    body: Term


@dataclass(frozen=True, slots=True)
class Derelict(Term):
    body: Term


@dataclass(frozen=True, slots=True)
class PVar(Pattern):
    name: str


@dataclass(frozen=True, slots=True)
class PTriv(Pattern):
    pass


@dataclass(frozen=True, slots=True)
class PPair(Pattern):
    kind: PairKind
    left: Pattern
    right: Pattern


@dataclass(frozen=True, slots=True)
class PG(Pattern):
    inner: Pattern


@dataclass(frozen=True, slots=True)
class PF(Pattern):
    inner: Pattern


# ---------------------------------------------------------------- variables

def pattern_vars(p: Pattern) -> list[str]:
    """Bound names of a pattern, left to right."""
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PTriv):
        return []
    if isinstance(p, PPair):
        return pattern_vars(p.left) + pattern_vars(p.right)
    if isinstance(p, (PG, PF)):
        return pattern_vars(p.inner)
    raise TypeError(p)


def free_occurrences(t: Term) -> list[str]:
    """Free variable occurrences in left-to-right order, with repetitions."""
    out: list[str] = []
    _occ(t, frozenset(), out)
    return out


def _occ(t: Term, bound: frozenset[str], out: list[str]) -> None:
    if isinstance(t, Var):
        if t.name not in bound:
            out.append(t.name)
    elif isinstance(t, Triv):
        pass
    elif isinstance(t, Pair):
        _occ(t.left, bound, out)
        _occ(t.right, bound, out)
    elif isinstance(t, Let):
        _occ(t.scrut, bound, out)
        _occ(t.body, bound | set(pattern_vars(t.pat)), out)
    elif isinstance(t, Lam):
        _occ(t.body, bound | {t.var}, out)
    elif isinstance(t, App):
        _occ(t.fn, bound, out)
        _occ(t.arg, bound, out)
    elif isinstance(t, Ex):
        _occ(t.t1, bound, out)
        _occ(t.t2, bound, out)
        _occ(t.body, bound | {t.x1, t.x2}, out)
    elif isinstance(t, (GI, FI, Derelict)):
        _occ(t.body, bound, out)
    else:
        raise TypeError(t)


def free_vars(t: Term) -> set[str]:
    return set(free_occurrences(t))


def all_names(t: Term) -> set[str]:
    """Every variable name appearing in ``t``, free or bound."""
    names: set[str] = set()
    for n in subterms(t):
        if isinstance(n, Var):
            names.add(n.name)
        elif isinstance(n, Let):
            names.update(pattern_vars(n.pat))
        elif isinstance(n, Lam):
            names.add(n.var)
        elif isinstance(n, Ex):
            names.update((n.x1, n.x2))
    return names


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, (Var, Triv)):
        return ()
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, Let):
        return (t.scrut, t.body)
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fn, t.arg)
    if isinstance(t, Ex):
        return (t.t1, t.t2, t.body)
    if isinstance(t, (GI, FI, Derelict)):
        return (t.body,)
    raise TypeError(t)


def rebuild(t: Term, kids: tuple[Term, ...]) -> Term:
    if isinstance(t, Pair):
        return Pair(t.kind, *kids)
    if isinstance(t, Let):
        return Let(kids[0], t.ann, t.pat, kids[1])
    if isinstance(t, Lam):
        return Lam(t.kind, t.var, t.ann, kids[0])
    if isinstance(t, App):
        return App(t.kind, *kids)
    if isinstance(t, Ex):
        return Ex(kids[0], kids[1], t.x1, t.x2, kids[2])
    if isinstance(t, (GI, FI, Derelict)):
        return type(t)(kids[0])
    return t


def subterms(t: Term) -> Iterator[Term]:
    yield t
    for c in children(t):
        yield from subterms(c)


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


# ------------------------------------------------------------- substitution

class NameSupply:
    """Deterministic fresh names: ``stem`` followed by a counter."""

    def __init__(self, avoid: set[str] | None = None, stem: str = "v") -> None:
        self.avoid = set(avoid or ())
        self.stem = stem
        self._count = itertools.count(1)

    def fresh(self, hint: str | None = None) -> str:
        base = (hint or self.stem).rstrip("0123456789'") or self.stem
        while True:
            name = f"{base}{next(self._count)}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def rename_pattern(p: Pattern, mapping: dict[str, str]) -> Pattern:
    if isinstance(p, PVar):
        return PVar(mapping.get(p.name, p.name))
    if isinstance(p, PPair):
        return PPair(p.kind, rename_pattern(p.left, mapping), rename_pattern(p.right, mapping))
    if isinstance(p, PG):
        return PG(rename_pattern(p.inner, mapping))
    if isinstance(p, PF):
        return PF(rename_pattern(p.inner, mapping))
    return p


def subst(t: Term, sigma: dict[str, Term], supply: NameSupply | None = None) -> Term:
    """Capture-avoiding simultaneous substitution ``[sigma]t``."""
    if not sigma:
        return t
    if supply is None:
        avoid = all_names(t)
        for s in sigma.values():
            avoid |= all_names(s)
        avoid |= set(sigma)
        supply = NameSupply(avoid)
    incoming: set[str] = set()
    for s in sigma.values():
        incoming |= free_vars(s)
    return _subst(t, sigma, incoming, supply)


def _binder(names: list[str], sigma: dict[str, Term], incoming: set[str],
            supply: NameSupply) -> tuple[dict[str, Term], dict[str, str]]:
    inner = {k: v for k, v in sigma.items() if k not in names}
    renaming = {}
    for n in names:
        if n in incoming and inner:
            renaming[n] = supply.fresh(n)
    for old, new in renaming.items():
        inner[old] = Var(new)
    return inner, renaming


def _subst(t: Term, sigma: dict[str, Term], incoming: set[str], supply: NameSupply) -> Term:
    if not sigma:
        return t
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, Triv):
        return t
    if isinstance(t, Pair):
        return Pair(t.kind, _subst(t.left, sigma, incoming, supply), _subst(t.right, sigma, incoming, supply))
    if isinstance(t, Let):
        scrut = _subst(t.scrut, sigma, incoming, supply)
        inner, ren = _binder(pattern_vars(t.pat), sigma, incoming, supply)
        return Let(scrut, t.ann, rename_pattern(t.pat, ren), _subst(t.body, inner, incoming, supply))
    if isinstance(t, Lam):
        inner, ren = _binder([t.var], sigma, incoming, supply)
        return Lam(t.kind, ren.get(t.var, t.var), t.ann, _subst(t.body, inner, incoming, supply))
    if isinstance(t, App):
        return App(t.kind, _subst(t.fn, sigma, incoming, supply), _subst(t.arg, sigma, incoming, supply))
    if isinstance(t, Ex):
        t1 = _subst(t.t1, sigma, incoming, supply)
        t2 = _subst(t.t2, sigma, incoming, supply)
        inner, ren = _binder([t.x1, t.x2], sigma, incoming, supply)
        return Ex(t1, t2, ren.get(t.x1, t.x1), ren.get(t.x2, t.x2), _subst(t.body, inner, incoming, supply))
    if isinstance(t, (GI, FI, Derelict)):
        return type(t)(_subst(t.body, sigma, incoming, supply))
    raise TypeError(t)


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality up to renaming of bound variables."""
    return _alpha(a, b, {}, {})


def _pat_alpha(p: Pattern, q: Pattern, envp: dict, envq: dict, depth: list[int]) -> bool:
    if isinstance(p, PVar) and isinstance(q, PVar):
        k = depth[0]
        depth[0] += 1
        envp[p.name] = k
        envq[q.name] = k
        return True
    if type(p) is not type(q):
        return False
    if isinstance(p, PTriv):
        return True
    if isinstance(p, PPair):
        return p.kind == q.kind and _pat_alpha(p.left, q.left, envp, envq, depth) and \
            _pat_alpha(p.right, q.right, envp, envq, depth)
    return _pat_alpha(p.inner, q.inner, envp, envq, depth)


def _alpha(a: Term, b: Term, ea: dict[str, object], eb: dict[str, object]) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        ka, kb = ea.get(a.name), eb.get(b.name)
        if ka is None and kb is None:
            return a.name == b.name
        return ka is not None and ka == kb
    if isinstance(a, Triv):
        return True
    if isinstance(a, Pair):
        return a.kind == b.kind and _alpha(a.left, b.left, ea, eb) and _alpha(a.right, b.right, ea, eb)
    if isinstance(a, App):
        return a.kind == b.kind and _alpha(a.fn, b.fn, ea, eb) and _alpha(a.arg, b.arg, ea, eb)
    if isinstance(a, (GI, FI, Derelict)):
        return _alpha(a.body, b.body, ea, eb)
    marker = object()
    if isinstance(a, Lam):
        if a.kind != b.kind or a.ann != b.ann:
            return False
        return _alpha(a.body, b.body, {**ea, a.var: marker}, {**eb, b.var: marker})
    if isinstance(a, Let):
        if a.ann != b.ann or not _alpha(a.scrut, b.scrut, ea, eb):
            return False
        pa: dict = {}
        pb: dict = {}
        if not _pat_alpha(a.pat, b.pat, pa, pb, [0]):
            return False
        ma = {n: (marker, i) for n, i in pa.items()}
        mb = {n: (marker, i) for n, i in pb.items()}
        return _alpha(a.body, b.body, {**ea, **ma}, {**eb, **mb})
    if isinstance(a, Ex):
        if not (_alpha(a.t1, b.t1, ea, eb) and _alpha(a.t2, b.t2, ea, eb)):
            return False
        m1, m2 = object(), object()
        return _alpha(a.body, b.body, {**ea, a.x1: m1, a.x2: m2}, {**eb, b.x1: m1, b.x2: m2})
    raise TypeError(a)
