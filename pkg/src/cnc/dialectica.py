"""Finite dialectica Lambek spaces over biclosed posets with exchange.

Objects are triples (U, X, α) with α : U × X → M materialized as a table.
Functions between finite sets are tuples aligned with the order of their
domain. Morphisms are pairs (f, F) checked against weak adjointness.

Two readings worth stating up front:
- the internal hom interpreting A ⇀ B abstracts the right tensor factor,
  so its relation uses the poset residual that abstracts on the right
  (``limp``); the one for B ↼ A uses ``rimp``;
- ! is truncated: X* becomes multisets of size ≤ k, and the product over
  a multiset multiplies ξ-images of α, which commute by the Exchange law,
  so the product does not depend on the order of the multiset.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .syntax.formulas import F, Formula, G, LAtom, LImp, LTensor, LUnit, RImp
from .syntax.sequents import Sequent

DEFAULT_LIMIT = 250_000


class SizeError(ValueError):
    """A carrier would exceed the configured size guard."""


class DialLawError(ValueError):
    """A structure map fails weak adjointness; names the law responsible."""


class FragmentError(ValueError):
    """The sequent is outside the directly interpretable fragment."""


# ------------------------------------------------------------------- posets

@dataclass
class LawReport:
    ok: bool
    failures: list[str]
    facts: dict[str, bool] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict[str, Any]:
        return {"ok": self.ok, "failures": self.failures, "facts": self.facts}


class BiclosedPoset:
    """A finite ordered monoid with residuals and an exchange operation.

    ``rimp[a, b]`` is the largest x with a∘x ≤ b (written a ⇀ b) and
    ``limp[b, a]`` the largest x with x∘a ≤ b (written b ↼ a); ``None``
    marks a residual that does not exist.
    """

    def __init__(self, carrier: Sequence[str], leq: Iterable[tuple[str, str]],
                 mult: Mapping[tuple[str, str], str], unit: str,
                 xi: Mapping[str, str] | None = None, name: str = "") -> None:
        self.carrier = tuple(carrier)
        self.leq = frozenset((a, b) for a, b in leq)
        self.mult = dict(mult)
        self.unit = unit
        self.xi = dict(xi) if xi is not None else {a: a for a in self.carrier}
        self.name = name
        self.rimp = {(a, b): self._largest(lambda x: self.mul(a, x), b)
                     for a in self.carrier for b in self.carrier}
        self.limp = {(b, a): self._largest(lambda x: self.mul(x, a), b)
                     for a in self.carrier for b in self.carrier}

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.leq

    def mul(self, a: str, b: str) -> str:
        return self.mult[a, b]

    def prod(self, xs: Iterable[str]) -> str:
        out = self.unit
        for x in xs:
            out = self.mul(out, x)
        return out

    def _largest(self, op, b: str) -> str | None:
        try:
            sols = [x for x in self.carrier if self.le(op(x), b)]
        except KeyError:
            return None
        top = [x for x in sols if all(self.le(y, x) for y in sols)]
        return top[0] if top else None

    def r(self, a: str, b: str) -> str:
        """a ⇀ b"""
        v = self.rimp[a, b]
        if v is None:
            raise DialLawError(f"residual {a} ⇀ {b} does not exist")
        return v

    def l(self, b: str, a: str) -> str:
        """b ↼ a"""
        v = self.limp[b, a]
        if v is None:
            raise DialLawError(f"residual {b} ↼ {a} does not exist")
        return v

    # -- serialization
    @classmethod
    def from_json(cls, data: str | Mapping[str, Any], name: str = "") -> "BiclosedPoset":
        if isinstance(data, str):
            data = json.loads(data)
        carrier = [str(a) for a in data["carrier"]]
        leq = [(str(a), str(b)) for a, b in data["leq"]]
        mult = {}
        for k, v in data["mult"].items():
            a, b = (s.strip() for s in k.split(","))
            mult[a, b] = str(v)
        xi = {str(k): str(v) for k, v in data.get("xi", {a: a for a in carrier}).items()}
        return cls(carrier, leq, mult, str(data["unit"]), xi, name or str(data.get("name", "")))

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "carrier": list(self.carrier),
            "leq": sorted([a, b] for a, b in self.leq),
            "mult": {f"{a},{b}": self.mult[a, b] for a in self.carrier for b in self.carrier
                     if (a, b) in self.mult},
            "unit": self.unit,
            "xi": {a: self.xi[a] for a in self.carrier if a in self.xi},
        }


def boolean_poset() -> BiclosedPoset:
    """{0 ≤ 1} with meet, unit 1, implication for both residuals, ξ = id."""
    c = ("0", "1")
    return BiclosedPoset(c, [("0", "0"), ("0", "1"), ("1", "1")],
                         {(a, b): min(a, b) for a in c for b in c}, "1", name="boolean")


def validate_poset(P: BiclosedPoset) -> LawReport:
    """Check every defining law exhaustively; report each violation."""
    M = P.carrier
    bad: list[str] = []

    def need(cond: bool, law: str) -> None:
        if not cond:
            bad.append(law)

    for a, b in itertools.product(M, M):
        if (a, b) not in P.mult or P.mult[a, b] not in M:
            bad.append(f"mult table not total at {a},{b}")
    for a in M:
        if P.xi.get(a) not in M:
            bad.append(f"xi table not total at {a}")
    if P.unit not in M:
        bad.append(f"unit {P.unit} not in carrier")
    if bad:
        return LawReport(False, bad)
    le, mul, xi = P.le, P.mul, P.xi
    for a in M:
        need(le(a, a), f"order: reflexivity fails at {a}")
    for a, b in itertools.product(M, M):
        if a != b and le(a, b) and le(b, a):
            bad.append(f"order: antisymmetry fails at {a},{b}")
    for a, b, c in itertools.product(M, M, M):
        if le(a, b) and le(b, c):
            need(le(a, c), f"order: transitivity fails at {a},{b},{c}")
    for a in M:
        need(mul(P.unit, a) == a and mul(a, P.unit) == a, f"monoid: unit law fails at {a}")
    for a, b, c in itertools.product(M, M, M):
        need(mul(mul(a, b), c) == mul(a, mul(b, c)), f"monoid: associativity fails at {a},{b},{c}")
    for a, b, c in itertools.product(M, M, M):
        if le(a, b):
            need(le(mul(c, a), mul(c, b)) and le(mul(a, c), mul(b, c)),
                 f"monotonicity fails at {a} ≤ {b} with {c}")
    for a, b in itertools.product(M, M):
        if P.rimp[a, b] is None:
            bad.append(f"residual {a} ⇀ {b} does not exist")
        if P.limp[b, a] is None:
            bad.append(f"residual {b} ↼ {a} does not exist")
    if not any(m.startswith("residual") for m in bad):
        for a, b, x in itertools.product(M, M, M):
            need(le(mul(a, x), b) == le(x, P.rimp[a, b]), f"residual law for ⇀ fails at {a},{b},{x}")
            need(le(mul(x, a), b) == le(x, P.limp[b, a]), f"residual law for ↼ fails at {a},{b},{x}")
    for a, b in itertools.product(M, M):
        if le(a, b):
            need(le(xi[a], xi[b]), f"xi Compatibility fails at {a} ≤ {b}")
        need(le(mul(xi[a], xi[b]), mul(xi[b], xi[a])), f"xi Exchange fails at {a},{b}")
    for a in M:
        need(le(xi[a], a), f"xi Minimality fails at {a}")
        need(le(xi[a], xi[xi[a]]), f"xi Duplication fails at {a}")
    facts = {
        "commutative": all(mul(a, b) == mul(b, a) for a, b in itertools.product(M, M)),
        "xi_identity": all(xi[a] == a for a in M),
        "xi_lax_monoidal": le(P.unit, xi[P.unit]) and all(
            le(mul(xi[a], xi[b]), xi[mul(a, b)]) for a, b in itertools.product(M, M)),
    }
    return LawReport(not bad, bad, facts)


# ------------------------------------------------------------ finite sets

def fn_space(dom: Sequence[Any], cod: Sequence[Any], limit: int = DEFAULT_LIMIT) -> list[tuple]:
    """All functions dom → cod as value tuples aligned with ``dom``."""
    n = len(cod) ** len(dom)
    if n > limit:
        raise SizeError(f"function space of size {len(cod)}^{len(dom)} exceeds the guard {limit}")
    return list(itertools.product(cod, repeat=len(dom)))


def multisets(X: Sequence[Any], k: int) -> list[tuple]:
    """Multisets over X of size ≤ k, each sorted by the order of X."""
    out: list[tuple] = []
    for n in range(k + 1):
        out.extend(itertools.combinations_with_replacement(X, n))
    return out


class DialObject:
    def __init__(self, U: Sequence[Any], X: Sequence[Any], rel: Mapping[tuple[Any, Any], str],
                 name: str = "", limit: int = DEFAULT_LIMIT) -> None:
        if len(U) * len(X) > limit:
            raise SizeError(f"object of size {len(U)}×{len(X)} exceeds the guard {limit}")
        self.U = tuple(U)
        self.X = tuple(X)
        self.rel = dict(rel)
        self.name = name
        self.uidx = {u: i for i, u in enumerate(self.U)}
        self.xidx = {x: i for i, x in enumerate(self.X)}
        missing = [(u, x) for u in self.U for x in self.X if (u, x) not in self.rel]
        if missing:
            raise ValueError(f"relation not total: missing {missing[0]}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DialObject) and (self.U, self.X, self.rel) == (other.U, other.X, other.rel)

    def __hash__(self) -> int:
        return hash((self.U, self.X))

    def __repr__(self) -> str:
        return f"DialObject({self.name or '?'}: |U|={len(self.U)}, |X|={len(self.X)})"

    def to_json(self) -> dict[str, Any]:
        return {"U": [repr_el(u) for u in self.U], "X": [repr_el(x) for x in self.X],
                "rel": [[repr_el(u), repr_el(x), self.rel[u, x]] for u in self.U for x in self.X]}


def repr_el(v: Any) -> Any:
    if isinstance(v, tuple):
        return [repr_el(w) for w in v]
    return v


def make_object(U: Sequence[Any], X: Sequence[Any], rows: Sequence[Sequence[str]], name: str = "") -> DialObject:
    """Object from a |U|×|X| matrix of poset elements."""
    return DialObject(U, X, {(u, x): rows[i][j] for i, u in enumerate(U) for j, x in enumerate(X)}, name)


@dataclass(frozen=True)
class DialMorphism:
    src: DialObject
    tgt: DialObject
    f: tuple  # tgt.U value for each src.U
    F: tuple  # src.X value for each tgt.X

    def fwd(self, u: Any) -> Any:
        return self.f[self.src.uidx[u]]

    def back(self, y: Any) -> Any:
        return self.F[self.tgt.xidx[y]]

    def violation(self, P: BiclosedPoset) -> tuple[Any, Any] | None:
        """First (u, y) breaking α(u, F y) ≤ β(f u, y), if any."""
        for i, u in enumerate(self.src.U):
            fu = self.f[i]
            for j, y in enumerate(self.tgt.X):
                if not P.le(self.src.rel[u, self.F[j]], self.tgt.rel[fu, y]):
                    return (u, y)
        return None

    def is_valid(self, P: BiclosedPoset) -> bool:
        return self.violation(P) is None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DialMorphism) and (self.f, self.F) == (other.f, other.F) \
            and self.src == other.src and self.tgt == other.tgt

    def __hash__(self) -> int:
        return hash((self.f, self.F))

    def to_json(self) -> dict[str, Any]:
        return {"f": [[repr_el(u), repr_el(v)] for u, v in zip(self.src.U, self.f)],
                "F": [[repr_el(y), repr_el(x)] for y, x in zip(self.tgt.X, self.F)]}


def morphism(src: DialObject, tgt: DialObject, f, F) -> DialMorphism:
    """Build from callables or mappings."""
    ff = f if callable(f) else f.__getitem__
    FF = F if callable(F) else F.__getitem__
    return DialMorphism(src, tgt, tuple(ff(u) for u in src.U), tuple(FF(y) for y in tgt.X))


def identity(A: DialObject) -> DialMorphism:
    return DialMorphism(A, A, A.U, A.X)


def compose(m1: DialMorphism, m2: DialMorphism) -> DialMorphism:
    """m2 ∘ m1: first m1 then m2."""
    if m1.tgt != m2.src:
        raise ValueError("compose: objects do not match")
    return DialMorphism(m1.src, m2.tgt, tuple(m2.fwd(v) for v in m1.f), tuple(m1.back(y) for y in m2.F))


def checked(m: DialMorphism, P: BiclosedPoset, law: str) -> DialMorphism:
    bad = m.violation(P)
    if bad is not None:
        raise DialLawError(f"{law}: weak adjointness fails at u={bad[0]!r}, y={bad[1]!r}")
    return m


def _f_assignments(A: DialObject, B: DialObject, P: BiclosedPoset) -> Iterator[tuple[tuple, list[list]]]:
    """Forward maps f with, for each y, the nonempty list of admissible F(y)."""
    U, V, Y = A.U, B.U, B.X
    ok = {(u, v, y): [x for x in A.X if P.le(A.rel[u, x], B.rel[v, y])]
          for u in U for v in V for y in Y}
    allowed0 = [list(A.X) for _ in Y]

    def go(i: int, f: list, allowed: list[list]) -> Iterator[tuple[tuple, list[list]]]:
        if i == len(U):
            yield tuple(f), allowed
            return
        u = U[i]
        for v in V:
            nxt = []
            for j, y in enumerate(Y):
                s = ok[u, v, y]
                cur = [x for x in allowed[j] if x in s]
                if not cur:
                    break
                nxt.append(cur)
            else:
                f.append(v)
                yield from go(i + 1, f, nxt)
                f.pop()

    yield from go(0, [], allowed0)


def hom(A: DialObject, B: DialObject, P: BiclosedPoset) -> Iterator[DialMorphism]:
    """Every morphism A → B."""
    for f, allowed in _f_assignments(A, B, P):
        for F in itertools.product(*allowed):
            yield DialMorphism(A, B, f, F)


def hom_count(A: DialObject, B: DialObject, P: BiclosedPoset) -> int:
    total = 0
    for _, allowed in _f_assignments(A, B, P):
        n = 1
        for s in allowed:
            n *= len(s)
        total += n
    return total


def find_morphism(A: DialObject, B: DialObject, P: BiclosedPoset) -> DialMorphism | None:
    for m in hom(A, B, P):
        return m
    return None


# ------------------------------------------------------- monoidal structure

def unit_obj(P: BiclosedPoset) -> DialObject:
    return DialObject(("*",), ("*",), {("*", "*"): P.unit}, "I")


def tensor(A: DialObject, B: DialObject, P: BiclosedPoset, limit: int = DEFAULT_LIMIT) -> DialObject:
    """(U×V, (V→X)×(U→Y), ((u,v),(f,g)) ↦ α(u, f v) ∘ β(v, g u))."""
    U = [(u, v) for u in A.U for v in B.U]
    fs = fn_space(B.U, A.X, limit)
    gs = fn_space(A.U, B.X, limit)
    if len(fs) * len(gs) * len(U) > limit:
        raise SizeError(f"tensor of size {len(U)}×{len(fs) * len(gs)} exceeds the guard {limit}")
    X = [(f, g) for f in fs for g in gs]
    rel = {}
    for (u, v) in U:
        iu, iv = A.uidx[u], B.uidx[v]
        for (f, g) in X:
            rel[(u, v), (f, g)] = P.mul(A.rel[u, f[iv]], B.rel[v, g[iu]])
    return DialObject(U, X, rel, f"({A.name} ▷ {B.name})", limit)


def _hom_carriers(A: DialObject, B: DialObject, limit: int) -> tuple[list, list]:
    hs = fn_space(A.U, B.U, limit)
    ks = fn_space(B.X, A.X, limit)
    if len(hs) * len(ks) * len(A.U) * len(B.X) > limit:
        raise SizeError("internal hom exceeds the size guard")
    return [(h, k) for h in hs for k in ks], [(u, y) for u in A.U for y in B.X]


def homr(A: DialObject, B: DialObject, P: BiclosedPoset, limit: int = DEFAULT_LIMIT) -> DialObject:
    """A ⇀ B, right adjoint to – ▷ A: ((h,k),(u,y)) ↦ β(h u, y) ↼ α(u, k y)."""
    Us, Xs = _hom_carriers(A, B, limit)
    rel = {}
    for (h, k) in Us:
        for (u, y) in Xs:
            rel[(h, k), (u, y)] = P.l(B.rel[h[A.uidx[u]], y], A.rel[u, k[B.xidx[y]]])
    return DialObject(Us, Xs, rel, f"({A.name} ⇀ {B.name})", limit)


def homl(B: DialObject, A: DialObject, P: BiclosedPoset, limit: int = DEFAULT_LIMIT) -> DialObject:
    """B ↼ A, right adjoint to A ▷ –: ((h,k),(u,y)) ↦ α(u, k y) ⇀ β(h u, y)."""
    Us, Xs = _hom_carriers(A, B, limit)
    rel = {}
    for (h, k) in Us:
        for (u, y) in Xs:
            rel[(h, k), (u, y)] = P.r(A.rel[u, k[B.xidx[y]]], B.rel[h[A.uidx[u]], y])
    return DialObject(Us, Xs, rel, f"({B.name} ↼ {A.name})", limit)


# -- the two currying bijections, with A = (U,X,α), B = (V,Y,β), C = (W,Z,γ)

def curry_r(m: DialMorphism, A: DialObject, B: DialObject, C: DialObject,
            P: BiclosedPoset, H: DialObject | None = None) -> DialMorphism:
    """Hom(A ▷ B, C) → Hom(A, B ⇀ C)."""
    H = H or homr(B, C, P)
    f, F = [], []
    for u in A.U:
        h = tuple(m.fwd((u, v)) for v in B.U)
        k = tuple(m.back(z)[1][A.uidx[u]] for z in C.X)
        f.append((h, k))
    for (v, z) in H.X:
        F.append(m.back(z)[0][B.uidx[v]])
    return DialMorphism(A, H, tuple(f), tuple(F))


def uncurry_r(n: DialMorphism, A: DialObject, B: DialObject, C: DialObject,
              P: BiclosedPoset, T: DialObject | None = None) -> DialMorphism:
    """Hom(A, B ⇀ C) → Hom(A ▷ B, C)."""
    T = T or tensor(A, B, P)
    f = tuple(n.fwd(u)[0][B.uidx[v]] for (u, v) in T.U)
    F = []
    for z in C.X:
        fz = tuple(n.back((v, z)) for v in B.U)
        gz = tuple(n.fwd(u)[1][C.xidx[z]] for u in A.U)
        F.append((fz, gz))
    return DialMorphism(T, C, f, tuple(F))


def curry_l(m: DialMorphism, A: DialObject, B: DialObject, C: DialObject,
            P: BiclosedPoset, H: DialObject | None = None) -> DialMorphism:
    """Hom(A ▷ B, C) → Hom(B, C ↼ A)."""
    H = H or homl(C, A, P)
    f, F = [], []
    for v in B.U:
        h = tuple(m.fwd((u, v)) for u in A.U)
        k = tuple(m.back(z)[0][B.uidx[v]] for z in C.X)
        f.append((h, k))
    for (u, z) in H.X:
        F.append(m.back(z)[1][A.uidx[u]])
    return DialMorphism(B, H, tuple(f), tuple(F))


def uncurry_l(n: DialMorphism, A: DialObject, B: DialObject, C: DialObject,
              P: BiclosedPoset, T: DialObject | None = None) -> DialMorphism:
    """Hom(B, C ↼ A) → Hom(A ▷ B, C)."""
    T = T or tensor(A, B, P)
    f = tuple(n.fwd(v)[0][A.uidx[u]] for (u, v) in T.U)
    F = []
    for z in C.X:
        fz = tuple(n.fwd(v)[1][C.xidx[z]] for v in B.U)
        gz = tuple(n.back((u, z)) for u in A.U)
        F.append((fz, gz))
    return DialMorphism(T, C, f, tuple(F))


# ---------------------------------------------------------------- modalities

def xi_obj(A: DialObject, P: BiclosedPoset) -> DialObject:
    return DialObject(A.U, A.X, {k: P.xi[v] for k, v in A.rel.items()}, f"ξ{A.name}")


def xi_map(m: DialMorphism, P: BiclosedPoset) -> DialMorphism:
    """ξ on arrows keeps (f, F); valid by Compatibility."""
    return checked(DialMorphism(xi_obj(m.src, P), xi_obj(m.tgt, P), m.f, m.F), P, "Compatibility")


def xi_maps(A: DialObject, P: BiclosedPoset) -> tuple[DialMorphism, DialMorphism]:
    """(ε : ξA → A, δ : ξA → ξξA), both carried by identities."""
    XA = xi_obj(A, P)
    eps = checked(DialMorphism(XA, A, A.U, A.X), P, "Minimality")
    delta = checked(DialMorphism(XA, xi_obj(XA, P), A.U, A.X), P, "Duplication")
    return eps, delta


def exchange_arrow(A: DialObject, B: DialObject, P: BiclosedPoset) -> DialMorphism:
    """e_{A,B} : ξA ▷ ξB → ξB ▷ ξA, swapping both components."""
    src = tensor(xi_obj(A, P), xi_obj(B, P), P)
    tgt = tensor(xi_obj(B, P), xi_obj(A, P), P)
    f = tuple((v, u) for (u, v) in src.U)
    F = tuple((g, f2) for (f2, g) in tgt.X)
    return checked(DialMorphism(src, tgt, f, F), P, "Exchange")


def bang_obj(A: DialObject, k: int, P: BiclosedPoset, limit: int = DEFAULT_LIMIT) -> DialObject:
    """!A at truncation k: (U, U → X*≤k, (u, φ) ↦ ∏ ξα(u, x) over φ(u))."""
    if k < 0:
        raise ValueError("truncation k must be ≥ 0")
    ms = multisets(A.X, k)
    X = fn_space(A.U, ms, limit)
    rel = {}
    for i, u in enumerate(A.U):
        vals = {m: P.prod(P.xi[A.rel[u, x]] for x in m) for m in ms}
        for phi in X:
            rel[u, phi] = vals[phi[i]]
    return DialObject(A.U, X, rel, f"!{k}{A.name}", limit)


def _union(*ms: tuple, order: Mapping[Any, int]) -> tuple:
    return tuple(sorted(itertools.chain(*ms), key=order.__getitem__))


def bang_eps(A: DialObject, k: int, P: BiclosedPoset) -> DialMorphism:
    """ε : !A → A, sending x to the constant singleton multiset (k ≥ 1)."""
    if k < 1:
        raise ValueError("ε needs truncation k ≥ 1")
    B = bang_obj(A, k, P)
    F = tuple(tuple((x,) for _ in A.U) for x in A.X)
    return checked(DialMorphism(B, A, A.U, F), P, "Minimality (ε for !)")


def bang_w(A: DialObject, k: int, P: BiclosedPoset) -> DialMorphism:
    """w : !A → I, answering with the empty multiset."""
    B = bang_obj(A, k, P)
    I = unit_obj(P)
    F = (tuple(() for _ in A.U),)
    return checked(DialMorphism(B, I, tuple("*" for _ in A.U), F), P, "unit (w for !)")


def bang_d(A: DialObject, k: int, P: BiclosedPoset, split: int | None = None) -> DialMorphism:
    """d : !ₖA → !ⱼA ▷ !ₖ₋ⱼA, u ↦ (u, u), merging the two answers."""
    j = k // 2 if split is None else split
    if not 0 <= j <= k:
        raise ValueError("split must lie in 0..k")
    S = bang_obj(A, k, P)
    L, R = bang_obj(A, j, P), bang_obj(A, k - j, P)
    T = tensor(L, R, P)
    order = A.xidx
    f = tuple((u, u) for u in A.U)
    F = []
    for (fl, gr) in T.X:
        phi = []
        for u in A.U:
            i = A.uidx[u]
            phi.append(_union(fl[i][i], gr[i][i], order=order))
        F.append(tuple(phi))
    return checked(DialMorphism(S, T, f, tuple(F)), P, "d for !")


def bang_delta(A: DialObject, outer: int, inner: int, P: BiclosedPoset) -> DialMorphism:
    """δ : !ₘₙA → !ₘ!ₙA, flattening a multiset of answers."""
    S = bang_obj(A, outer * inner, P)
    T = bang_obj(bang_obj(A, inner, P), outer, P)
    order = A.xidx
    F = []
    for Phi in T.X:
        phi = []
        for i, u in enumerate(A.U):
            phi.append(_union(*(psi[i] for psi in Phi[i]), order=order))
        F.append(tuple(phi))
    return checked(DialMorphism(S, T, A.U, tuple(F)), P, "δ for !")


class BangMaps(NamedTuple):
    eps: DialMorphism
    delta: DialMorphism
    w: DialMorphism
    d: DialMorphism


def bang_maps(A: DialObject, k: int, P: BiclosedPoset) -> BangMaps:
    """ε and w at truncation k; δ : !ₖA → !ₖ!₁A; d : !ₖA → !ⱼA ▷ !ₖ₋ⱼA."""
    return BangMaps(bang_eps(A, k, P), bang_delta(A, k, 1, P), bang_w(A, k, P), bang_d(A, k, P))


# ------------------------------------------------------- sequent semantics

def in_fragment(f: Formula) -> bool:
    if isinstance(f, (LAtom, LUnit)):
        return True
    if isinstance(f, LTensor):
        return in_fragment(f.left) and in_fragment(f.right)
    if isinstance(f, RImp):
        return in_fragment(f.arg) and in_fragment(f.res)
    if isinstance(f, LImp):
        return in_fragment(f.res) and in_fragment(f.arg)
    if isinstance(f, F) and isinstance(f.body, G):
        return in_fragment(f.body.body)
    return False


def sequent_in_fragment(s: Sequent) -> bool:
    return s.side == "L" and all(in_fragment(h) for h in s.hyps.formulas) and in_fragment(s.goal)


def interpret_formula(f: Formula, val: Mapping[str, DialObject], P: BiclosedPoset) -> DialObject:
    if isinstance(f, LAtom):
        if f.name not in val:
            raise FragmentError(f"no object for atom {f.name}")
        return val[f.name]
    if isinstance(f, LUnit):
        return unit_obj(P)
    if isinstance(f, LTensor):
        return tensor(interpret_formula(f.left, val, P), interpret_formula(f.right, val, P), P)
    if isinstance(f, RImp):
        return homr(interpret_formula(f.arg, val, P), interpret_formula(f.res, val, P), P)
    if isinstance(f, LImp):
        return homl(interpret_formula(f.res, val, P), interpret_formula(f.arg, val, P), P)
    if isinstance(f, F) and isinstance(f.body, G):
        return xi_obj(interpret_formula(f.body.body, val, P), P)
    raise FragmentError(f"{f} is outside the interpretable fragment")


def interpret(s: Sequent, val: Mapping[str, DialObject], P: BiclosedPoset) -> tuple[DialObject, DialObject]:
    """(left-nested ▷-product of the hypotheses, goal object)."""
    if not sequent_in_fragment(s):
        raise FragmentError(f"{s} is outside the interpretable fragment")
    ctx: DialObject | None = None
    for h in s.hyps.formulas:
        o = interpret_formula(h, val, P)
        ctx = o if ctx is None else tensor(ctx, o, P)
    return (ctx if ctx is not None else unit_obj(P)), interpret_formula(s.goal, val, P)


def small_objects(P: BiclosedPoset, size_bound: int) -> list[DialObject]:
    """Objects with |U|,|X| ≤ size_bound, one per relabelling of U and X,
    smallest first."""
    out = []
    for nu in range(1, size_bound + 1):
        for nx in range(1, size_bound + 1):
            U = tuple(f"u{i}" for i in range(nu))
            X = tuple(f"x{j}" for j in range(nx))
            seen = set()
            for cells in itertools.product(P.carrier, repeat=nu * nx):
                rows = [cells[i * nx:(i + 1) * nx] for i in range(nu)]
                key = min(tuple(tuple(r[j] for j in pj) for r in pr)
                          for pr in itertools.permutations(rows)
                          for pj in itertools.permutations(range(nx)))
                if key in seen:
                    continue
                seen.add(key)
                out.append(make_object(U, X, rows))
    out.sort(key=lambda o: len(o.U) * len(o.X))
    return out


def _atom_names(s: Sequent) -> list[str]:
    names: set[str] = set()

    def walk(f: Formula) -> None:
        if isinstance(f, LAtom):
            names.add(f.name)
        for c in f.children():
            walk(c)

    for h in s.hyps.formulas:
        walk(h)
    walk(s.goal)
    return sorted(names)


@dataclass
class Countermodel:
    valuation: dict[str, DialObject]
    context: DialObject
    goal: DialObject

    def to_json(self) -> dict[str, Any]:
        return {"valuation": {a: o.to_json() for a, o in self.valuation.items()},
                "context": {"U": len(self.context.U), "X": len(self.context.X)},
                "goal": {"U": len(self.goal.U), "X": len(self.goal.X)}}


def refute(s: Sequent, P: BiclosedPoset, size_bound: int = 2,
           objects: Sequence[DialObject] | None = None) -> Countermodel | None:
    """A valuation with Hom(⟦Γ⟧, ⟦A⟧) empty, or None if every valuation
    with |U|,|X| ≤ size_bound admits a morphism."""
    if not sequent_in_fragment(s):
        raise FragmentError(f"{s} is outside the interpretable fragment")
    atoms = _atom_names(s)
    pool = list(objects) if objects is not None else small_objects(P, size_bound)
    # valuations in order of total size so small countermodels come first
    for combo in sorted(itertools.product(range(len(pool)), repeat=len(atoms)),
                        key=lambda c: (sum(len(pool[i].U) * len(pool[i].X) for i in c), c)):
        val = {a: pool[i] for a, i in zip(atoms, combo)}
        try:
            ctx, goal = interpret(s, val, P)
        except SizeError:
            continue
        if find_morphism(ctx, goal, P) is None:
            return Countermodel(val, ctx, goal)
    return None


# --------------------------------------------------- fixture discovery

def _posets(n: int) -> Iterator[frozenset]:
    """Partial orders on range(n) with 0 = unit allowed anywhere."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = {(a, a) for a in range(n)} | {p for p, on in zip(pairs, bits) if on}
        if any((b, a) in rel for (a, b) in rel if a != b):
            continue
        if any((a, c) not in rel for (a, b) in rel for (b2, c) in rel if b == b2):
            continue
        yield frozenset(rel)


def _monoids(n: int) -> Iterator[dict]:
    """Monoid tables on range(n) with unit 0, by backtracking on
    associativity."""
    cells = [(a, b) for a in range(1, n) for b in range(1, n)]
    table = {(0, a): a for a in range(n)} | {(a, 0): a for a in range(n)}

    def assoc_ok() -> bool:
        for a in range(n):
            for b in range(n):
                ab = table.get((a, b))
                if ab is None:
                    continue
                for c in range(n):
                    bc = table.get((b, c))
                    if bc is None:
                        continue
                    l, r = table.get((ab, c)), table.get((a, bc))
                    if l is not None and r is not None and l != r:
                        return False
        return True

    def go(i: int) -> Iterator[dict]:
        if i == len(cells):
            yield dict(table)
            return
        for v in range(n):
            table[cells[i]] = v
            if assoc_ok():
                yield from go(i + 1)
            del table[cells[i]]

    yield from go(0)


def _iso_reps(monoids: list[dict], n: int) -> list[dict]:
    """One table per relabelling of the non-unit elements."""
    seen, out = set(), []
    for m in monoids:
        keys = []
        for q in itertools.permutations(range(1, n)):
            p = (0,) + q
            inv = [0] * n
            for i, v in enumerate(p):
                inv[v] = i
            keys.append(tuple(p[m[inv[a], inv[b]]] for a in range(n) for b in range(n)))
        k = min(keys)
        if k not in seen:
            seen.add(k)
            out.append(m)
    return out


def _quick_biclosed(leq: frozenset, m: dict, n: int) -> bool:
    R = range(n)
    for a, b in leq:
        if a != b and any((m[c, a], m[c, b]) not in leq or (m[a, c], m[b, c]) not in leq for c in R):
            return False
    for a in R:
        for b in R:
            for op in (lambda x: m[a, x], lambda x: m[x, a]):
                s = [x for x in R if (op(x), b) in leq]
                if not any(all((y, x) in leq for y in s) for x in s):
                    return False
    return True


def find_noncommutative_poset(max_size: int = 5, lax_monoidal_xi: bool = True) -> BiclosedPoset | None:
    """First valid biclosed poset with exchange (in a fixed enumeration
    order) whose monoid is not commutative and whose ξ is not the identity.
    With ``lax_monoidal_xi`` also ask e ≤ ξe and ξa∘ξb ≤ ξ(a∘b)."""
    for n in range(2, max_size + 1):
        names = ["e"] + [chr(ord("a") + i) for i in range(n - 1)]
        monoids = [m for m in _monoids(n) if any(m[a, b] != m[b, a] for a in range(n) for b in range(n))]
        reps = _iso_reps(monoids, n)
        for leq in _posets(n):
            for m in reps:
                if not _quick_biclosed(leq, m, n):
                    continue
                P = BiclosedPoset(names, [(names[a], names[b]) for a, b in leq],
                                  {(names[a], names[b]): names[v] for (a, b), v in m.items()}, "e")
                below = [[x for x in range(n) if (x, a) in leq] for a in range(n)]
                for xs in itertools.product(*below):
                    if all(xs[a] == a for a in range(n)):
                        continue
                    P.xi = {names[a]: names[xs[a]] for a in range(n)}
                    rep = validate_poset(P)
                    if rep.ok and (rep.facts["xi_lax_monoidal"] or not lax_monoidal_xi):
                        P.name = f"noncommutative{n}"
                        return P
    return None
