"""Two-sorted CNC formulas.

C-sort formulas live in the commutative (intuitionistic linear) zone, L-sort
formulas in the ordered Lambek zone. ``F`` embeds C into L and ``G`` embeds L
into C. Ill-sorted trees cannot be constructed: every constructor checks the
sorts of its children.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal

Sort = Literal["C", "L"]


class SortError(ValueError):
    """Raised when a formula tree violates the sort discipline."""


class Formula:
    __slots__ = ()
    sort: Sort

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        from .printer import print_formula

        return print_formula(self)


def _need(f: Formula, sort: Sort, where: str) -> None:
    if not isinstance(f, Formula):
        raise SortError(f"{where}: expected a formula, got {f!r}")
    if f.sort != sort:
        from .printer import print_formula

        raise SortError(f"{where}: argument {print_formula(f)} is {f.sort}-sort, expected {sort}-sort")


@dataclass(frozen=True, slots=True)
class CAtom(Formula):
    name: str
    sort = "C"


@dataclass(frozen=True, slots=True)
class CUnit(Formula):
    sort = "C"


@dataclass(frozen=True, slots=True)
class CTensor(Formula):
    left: Formula
    right: Formula
    sort = "C"

    def __post_init__(self) -> None:
        _need(self.left, "C", "*")
        _need(self.right, "C", "*")

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class CImp(Formula):
    """``left -o right``."""

    left: Formula
    right: Formula
    sort = "C"

    def __post_init__(self) -> None:
        _need(self.left, "C", "-o")
        _need(self.right, "C", "-o")

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class G(Formula):
    body: Formula
    sort = "C"

    def __post_init__(self) -> None:
        _need(self.body, "L", "G")

    def children(self) -> tuple[Formula, ...]:
        return (self.body,)


@dataclass(frozen=True, slots=True)
class LAtom(Formula):
    name: str
    sort = "L"


@dataclass(frozen=True, slots=True)
class LUnit(Formula):
    sort = "L"


@dataclass(frozen=True, slots=True)
class LTensor(Formula):
    left: Formula
    right: Formula
    sort = "L"

    def __post_init__(self) -> None:
        _need(self.left, "L", "|>")
        _need(self.right, "L", "|>")

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class RImp(Formula):
    """``arg ->> res``: consumes ``arg`` on its right."""

    arg: Formula
    res: Formula
    sort = "L"

    def __post_init__(self) -> None:
        _need(self.arg, "L", "->>")
        _need(self.res, "L", "->>")

    def children(self) -> tuple[Formula, ...]:
        return (self.arg, self.res)


@dataclass(frozen=True, slots=True)
class LImp(Formula):
    """``res <<- arg``: consumes ``arg`` on its left."""

    res: Formula
    arg: Formula
    sort = "L"

    def __post_init__(self) -> None:
        _need(self.res, "L", "<<-")
        _need(self.arg, "L", "<<-")

    def children(self) -> tuple[Formula, ...]:
        return (self.res, self.arg)


@dataclass(frozen=True, slots=True)
class F(Formula):
    body: Formula
    sort = "L"

    def __post_init__(self) -> None:
        _need(self.body, "C", "F")

    def children(self) -> tuple[Formula, ...]:
        return (self.body,)


ATOMS = (CAtom, LAtom)
UNITS = (CUnit, LUnit)


def rank(f: Formula) -> int:
    """Number of connective nodes; atoms and units count zero."""
    if isinstance(f, ATOMS + UNITS):
        return 0
    return 1 + sum(rank(c) for c in f.children())


def depth(f: Formula) -> int:
    kids = f.children()
    return 0 if not kids else 1 + max(depth(c) for c in kids)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for c in f.children():
        yield from subformulas(c)


def atoms(f: Formula) -> set[Formula]:
    return {g for g in subformulas(f) if isinstance(g, ATOMS)}
