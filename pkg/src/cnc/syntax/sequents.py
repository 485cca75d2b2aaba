"""Contexts, sequents and sequent-calculus proof trees."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .formulas import Formula, Sort, SortError

RULE_ARITY: dict[str, int] = {
    # C side
    "ax_C": 0, "unitL": 1, "unitR": 0, "tenL": 1, "tenR": 2, "impL": 2,
    "impR": 1, "Gr": 1, "ex_C": 1, "cut": 2,
    # L side
    "ax_L": 0, "unitL1": 1, "unitL2": 1, "unitR_L": 0, "ex_L": 1,
    "tenL1": 1, "tenL2": 1, "tenR_L": 2, "impL_mixed": 2, "imprL": 2,
    "imprR": 1, "implL": 2, "implR": 1, "Fl": 1, "Fr": 1, "Gl": 1,
    "cut1": 2, "cut2": 2,
}
RULES = tuple(RULE_ARITY)
CUT_RULES = frozenset({"cut", "cut1", "cut2"})
# conclusion side of each rule
RULE_SIDE: dict[str, Sort] = {
    r: ("C" if r in {"ax_C", "unitL", "unitR", "tenL", "tenR", "impL", "impR", "Gr", "ex_C", "cut"} else "L")
    for r in RULES
}


class ProofStructureError(ValueError):
    """Unknown rule name or wrong number of premises."""


Hyp = tuple[str, Formula]


@dataclass(frozen=True, slots=True)
class Context:
    zone: Sort
    entries: tuple[Hyp, ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate hypothesis names in context: {names}")
        if self.zone == "C":
            for n, f in self.entries:
                if f.sort != "C":
                    raise SortError(f"hypothesis {n} is L-sort inside a C-context")

    @staticmethod
    def of(zone: Sort, entries: Iterable[Hyp]) -> "Context":
        return Context(zone, tuple(entries))

    @property
    def formulas(self) -> tuple[Formula, ...]:
        return tuple(f for _, f in self.entries)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Hyp]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> Hyp:
        return self.entries[i]

    def all_c(self) -> bool:
        return all(f.sort == "C" for _, f in self.entries)

    def lookup(self, name: str) -> Formula | None:
        for n, f in self.entries:
            if n == name:
                return f
        return None


@dataclass(frozen=True, slots=True)
class Sequent:
    side: Sort
    hyps: Context
    goal: Formula

    def __post_init__(self) -> None:
        if self.hyps.zone != self.side:
            raise SortError(f"{self.side}-sequent with a {self.hyps.zone}-zone context")
        if self.goal.sort != self.side:
            raise SortError(f"goal of a |-{self.side} sequent must be {self.side}-sort")

    @staticmethod
    def make(side: Sort, formulas: Sequence[Formula], goal: Formula,
             names: Sequence[str] | None = None) -> "Sequent":
        if names is None:
            names = default_names(len(formulas))
        return Sequent(side, Context(side, tuple(zip(names, formulas))), goal)

    @property
    def shape(self) -> tuple[Sort, tuple[Formula, ...], Formula]:
        """The sequent with hypothesis names erased."""
        return (self.side, self.hyps.formulas, self.goal)

    def __str__(self) -> str:
        from .printer import print_sequent

        return print_sequent(self)


def default_names(n: int, start: int = 1) -> list[str]:
    return [f"x{i}" for i in range(start, start + n)]


@dataclass(frozen=True, slots=True)
class ProofTree:
    rule: str
    conclusion: Sequent
    premises: tuple["ProofTree", ...] = ()

    def __post_init__(self) -> None:
        if self.rule not in RULE_ARITY:
            raise ProofStructureError(f"unknown rule name {self.rule!r}")
        if len(self.premises) != RULE_ARITY[self.rule]:
            raise ProofStructureError(
                f"rule {self.rule} takes {RULE_ARITY[self.rule]} premise(s), got {len(self.premises)}"
            )

    def nodes(self) -> Iterator["ProofTree"]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        return 0 if not self.premises else 1 + max(p.height() for p in self.premises)

    def __str__(self) -> str:
        from .printer import print_proof

        return print_proof(self)
