"""Value types shared across the package: probability intervals, label
states, partial label vectors and the interval decision rule."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

#: slack used when checking ``lower <= upper`` on computed intervals
INTERVAL_TOL = 1e-12


class ContractError(ValueError):
    """Raised when a value violates a documented precondition."""


@dataclass(frozen=True)
class ProbInterval:
    """Lower/upper probability of a binary event."""

    lower: float
    upper: float
    # interval this one was dualised from; lets dual(dual(I)) return I exactly
    _source: "ProbInterval | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        lo, up = self.lower, self.upper
        if not (0.0 <= lo <= 1.0 and 0.0 <= up <= 1.0):
            raise ContractError(f"interval bounds outside [0, 1]: [{lo}, {up}]")
        if lo > up + INTERVAL_TOL:
            raise ContractError(f"lower bound exceeds upper bound: [{lo}, {up}]")

    @classmethod
    def precise(cls, p: float) -> "ProbInterval":
        return cls(p, p)

    @classmethod
    def vacuous(cls) -> "ProbInterval":
        return cls(0.0, 1.0)

    @property
    def is_precise(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, other: "ProbInterval", tol: float = 0.0) -> bool:
        """True if ``other`` lies inside this interval (up to ``tol``)."""
        return self.lower - tol <= other.lower and other.upper <= self.upper + tol

    def __iter__(self):
        yield self.lower
        yield self.upper


class LabelState(enum.IntEnum):
    IRRELEVANT = 0
    RELEVANT = 1
    ABSTAIN = -1

    @property
    def symbol(self) -> str:
        return "*" if self is LabelState.ABSTAIN else str(int(self))

    @classmethod
    def from_symbol(cls, token: str) -> "LabelState":
        token = token.strip()
        if token == "*":
            return cls.ABSTAIN
        if token in ("0", "1"):
            return cls(int(token))
        raise ContractError(f"unknown label symbol {token!r}")


class PartialLabelVector(tuple):
    """A partial binary prediction, one :class:`LabelState` per label.

    States are kept in the dataset's original label order. The vector stands
    for the set of all complete binary vectors agreeing with it on the
    determined positions.
    """

    def __new__(cls, states: Iterable[LabelState | int]):
        return super().__new__(cls, (LabelState(s) for s in states))

    @classmethod
    def parse(cls, text: str) -> "PartialLabelVector":
        return cls(LabelState.from_symbol(t) for t in text.split(","))

    @property
    def m(self) -> int:
        return len(self)

    @property
    def determined_indices(self) -> list[int]:
        return [i for i, s in enumerate(self) if s is not LabelState.ABSTAIN]

    @property
    def abstained_indices(self) -> list[int]:
        return [i for i, s in enumerate(self) if s is LabelState.ABSTAIN]

    @property
    def is_complete(self) -> bool:
        return LabelState.ABSTAIN not in self

    def __str__(self) -> str:
        return ",".join(s.symbol for s in self)

    def __repr__(self) -> str:
        return f"PartialLabelVector({str(self)!r})"


@dataclass(frozen=True)
class IndexSets:
    """Chain positions split by the state predicted so far."""

    relevant: frozenset[int] = frozenset()
    irrelevant: frozenset[int] = frozenset()
    abstained: frozenset[int] = frozenset()

    def __post_init__(self):
        if (self.relevant & self.irrelevant or self.relevant & self.abstained
                or self.irrelevant & self.abstained):
            raise ContractError("index sets must be pairwise disjoint")

    @classmethod
    def from_states(cls, states: Sequence[LabelState]) -> "IndexSets":
        """Index sets for a sequence of states given in chain order."""
        rel = frozenset(i for i, s in enumerate(states) if s is LabelState.RELEVANT)
        irr = frozenset(i for i, s in enumerate(states) if s is LabelState.IRRELEVANT)
        abst = frozenset(i for i, s in enumerate(states) if s is LabelState.ABSTAIN)
        return cls(rel, irr, abst)

    @property
    def determined(self) -> dict[int, int]:
        """Mapping position -> predicted value for non-abstained positions."""
        out = {k: 1 for k in self.relevant}
        out.update({k: 0 for k in self.irrelevant})
        return out

    def __len__(self):
        return len(self.relevant) + len(self.irrelevant) + len(self.abstained)


def decide(interval: ProbInterval, precise_tie_to_one: bool = False) -> LabelState:
    """Map an interval on ``P(Y=1)`` to a label state.

    Relevant when the lower bound exceeds 0.5, irrelevant when the upper bound
    is below 0.5, abstain otherwise. With ``precise_tie_to_one`` a precise
    interval at exactly 0.5 gives ``RELEVANT``, as the ``>= 0.5`` precise
    chain rule does.
    """
    if not isinstance(interval, ProbInterval):
        raise ContractError(f"expected ProbInterval, got {type(interval).__name__}")
    lo, up = interval.lower, interval.upper
    if precise_tie_to_one and lo == up:
        return LabelState.RELEVANT if lo >= 0.5 else LabelState.IRRELEVANT
    if lo > 0.5:
        return LabelState.RELEVANT
    if up < 0.5:
        return LabelState.IRRELEVANT
    return LabelState.ABSTAIN


def dual(interval_for_y1: ProbInterval) -> ProbInterval:
    """Interval for ``Y=0`` given the interval for ``Y=1``."""
    if interval_for_y1._source is not None:
        return interval_for_y1._source
    return ProbInterval(1.0 - interval_for_y1.upper, 1.0 - interval_for_y1.lower,
                        interval_for_y1)
