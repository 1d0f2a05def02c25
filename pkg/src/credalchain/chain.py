"""Classifier chains over NCC positions: the precise chain, imprecise
branching (IB) and marginalization (MAR), plus an exhaustive IB oracle."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import (ContractError, LabelState, PartialLabelVector, ProbInterval,
                   decide)
from .data import DiscretizedDataset
from .ncc import CountTables, Hyperparams, PositionBounds, fit_counts

BRUTE_FORCE_LIMIT = 20


class Strategy(enum.Enum):
    PRECISE = "precise"
    IMPRECISE_BRANCHING = "ib"
    MARGINALIZATION = "mar"

    @classmethod
    def parse(cls, value: "Strategy | str") -> "Strategy":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"imprecise_branching": "ib", "branching": "ib",
                   "marginalization": "mar", "marginalisation": "mar"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ContractError(f"unknown strategy {value!r}") from None


class OpCounter:
    """Counts unit operations of chain inference.

    One unit per chain step (a bound evaluation) and one per abstained
    position scanned while building the IB optimal paths.
    """

    def __init__(self):
        self.count = 0

    def add(self, n: int = 1):
        self.count += n


@dataclass(frozen=True, eq=False)
class ChainModel:
    order: tuple[int, ...]
    tables: tuple[CountTables, ...]
    hps: tuple[Hyperparams, ...]
    m: int
    _bounds: tuple[PositionBounds, ...] = field(init=False, repr=False)
    _precise: tuple[PositionBounds, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.tables) != self.m or len(self.hps) != self.m:
            raise ContractError("need one count table and one hyperparameter set per position")
        object.__setattr__(self, "_bounds", tuple(
            PositionBounds(t, hp) for t, hp in zip(self.tables, self.hps)))
        object.__setattr__(self, "_precise", tuple(
            b if b.hp.s == 0 else PositionBounds(t, hp.precise())
            for b, t, hp in zip(self._bounds, self.tables, self.hps)))

    @property
    def hp(self) -> Hyperparams:
        """Hyperparameters of the first position (all equal unless set per label)."""
        return self.hps[0]

    def position_bounds(self, j: int, precise: bool = False) -> PositionBounds:
        return (self._precise if precise else self._bounds)[j]

    def with_hyperparams(self, hp) -> "ChainModel":
        """Same counts and order under different hyperparameters."""
        return ChainModel(self.order, self.tables, _per_position(hp, self.order), self.m)


def _per_position(hp, order) -> tuple[Hyperparams, ...]:
    if isinstance(hp, Hyperparams):
        return (hp,) * len(order)
    hp = list(hp)
    if len(hp) != len(order):
        raise ContractError(f"need {len(order)} per-label hyperparameter sets, got {len(hp)}")
    return tuple(hp[label] for label in order)


def fit(train: DiscretizedDataset, order: Sequence[int],
        hp: Hyperparams | Sequence[Hyperparams] = Hyperparams()) -> ChainModel:
    """Fit count tables at every chain position.

    ``hp`` is either one :class:`Hyperparams` for the whole chain or one per
    label, indexed by original label.
    """
    if train.n == 0:
        raise ContractError("cannot fit on an empty training set")
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(train.m)):
        raise ContractError(f"order {order} is not a permutation of 0..{train.m - 1}")
    tables = tuple(fit_counts(train, order, j) for j in range(train.m))
    return ChainModel(order, tables, _per_position(hp, order), train.m)


def random_order(m: int, seed) -> tuple[int, ...]:
    return tuple(int(k) for k in np.random.default_rng(seed).permutation(m))


# ----------------------------------------------------------------- IB paths

def _frac_key(num: float, den: float) -> tuple[int, float, float]:
    # (is_inf, num, den); 0/0 counts as 0
    if den == 0:
        return (1, 0.0, 0.0) if num > 0 else (0, 0.0, 1.0)
    return (0, num, den)


def _frac_gt(a, b) -> bool:
    """Strict ``a > b`` for ``(num, den)`` pairs without dividing."""
    ka, kb = _frac_key(*a), _frac_key(*b)
    if ka[0] != kb[0]:
        return ka[0] > kb[0]
    if ka[0]:
        return False
    return ka[1] * kb[2] > kb[1] * ka[2]


def ib_optimal_paths(tables: CountTables, s: float, abstained,
                     counter: OpCounter | None = None) -> tuple[dict[int, int], dict[int, int]]:
    """Completions of the abstained positions that give the IB lower and
    upper bounds at ``tables.position``.

    The lower-bound path takes, at each abstained position ``k``, the value
    ``b`` maximising ``(n(y_k=b|y_j=0) + s) / n(y_k=b|y_j=1)``; the upper-bound
    path takes the ``b`` minimising ``n(y_k=b|y_j=0) / (n(y_k=b|y_j=1) + s)``.
    Positions are independent, so one pass suffices. Ties go to ``b = 0``.
    """
    n = tables.n_prev_given_y
    lower, upper = {}, {}
    for k in sorted(abstained):
        if counter is not None:
            counter.add()
        lo0 = (n[k, 0, 0] + s, n[k, 0, 1])
        lo1 = (n[k, 1, 0] + s, n[k, 1, 1])
        lower[k] = 1 if _frac_gt(lo1, lo0) else 0
        up0 = (n[k, 0, 0], n[k, 0, 1] + s)
        up1 = (n[k, 1, 0], n[k, 1, 1] + s)
        upper[k] = 1 if _frac_gt(up0, up1) else 0
    return lower, upper


def _check_context(j: int, determined: Mapping[int, int], abstained) -> None:
    abstained = set(abstained)
    if abstained & set(determined):
        raise ContractError("a position cannot be both determined and abstained")
    if set(determined) | abstained != set(range(j)):
        raise ContractError(f"determined and abstained positions must cover 0..{j - 1}")


def _ib_interval(pb: PositionBounds, feat, determined, abstained, counter=None) -> ProbInterval:
    lo_path, hi_path = ib_optimal_paths(pb.tables, pb.hp.s, abstained, counter)
    lower = pb.interval_from_logs(feat, {**determined, **lo_path}).lower
    upper = pb.interval_from_logs(feat, {**determined, **hi_path}).upper
    return ProbInterval(lower, upper)


def ib_bounds(model: ChainModel, x, determined: Mapping[int, int], abstained, j: int,
              counter: OpCounter | None = None) -> ProbInterval:
    """IB interval for ``Y_j = 1``: worst and best case over all completions
    of the abstained positions, found through :func:`ib_optimal_paths`."""
    _check_context(j, determined, abstained)
    pb = model.position_bounds(j)
    return _ib_interval(pb, pb.feature_logs(x), dict(determined), abstained, counter)


def mar_bounds(model: ChainModel, x, determined: Mapping[int, int], j: int) -> ProbInterval:
    """Marginalization interval for ``Y_j = 1``: abstained positions are
    dropped from the conditioning."""
    if any(not 0 <= k < j for k in determined):
        raise ContractError(f"determined positions must lie in 0..{j - 1}")
    return model.position_bounds(j).interval(x, determined)


def ib_brute_force(model: ChainModel, x, determined: Mapping[int, int], abstained,
                   j: int) -> ProbInterval:
    """Reference IB interval by enumerating every completion of the
    abstained positions."""
    _check_context(j, determined, abstained)
    abstained = sorted(abstained)
    if len(abstained) > BRUTE_FORCE_LIMIT:
        raise ContractError(f"brute force limited to {BRUTE_FORCE_LIMIT} abstained positions")
    pb = model.position_bounds(j)
    feat = pb.feature_logs(x)
    lower, upper = 1.0, 0.0
    for values in itertools.product((0, 1), repeat=len(abstained)):
        prefix = dict(determined)
        prefix.update(zip(abstained, values))
        iv = pb.interval_from_logs(feat, prefix)
        lower = min(lower, iv.lower)
        upper = max(upper, iv.upper)
    return ProbInterval(lower, upper)


# -------------------------------------------------------------- prediction

@dataclass(frozen=True)
class ChainStep:
    position: int
    label: int
    interval: ProbInterval
    state: LabelState
    determined: dict
    abstained: frozenset


def trace(model: ChainModel, x, strategy: Strategy | str = Strategy.IMPRECISE_BRANCHING,
          counter: OpCounter | None = None) -> list[ChainStep]:
    """Run the chain on ``x`` and return every step in chain order."""
    strategy = Strategy.parse(strategy)
    precise = strategy is Strategy.PRECISE
    x = np.asarray(x, dtype=np.int64)
    determined: dict[int, int] = {}
    abstained: set[int] = set()
    steps = []
    for j in range(model.m):
        pb = model.position_bounds(j, precise=precise)
        feat = pb.feature_logs(x)
        if counter is not None:
            counter.add()
        if strategy is Strategy.IMPRECISE_BRANCHING:
            interval = _ib_interval(pb, feat, determined, abstained, counter)
        else:
            interval = pb.interval_from_logs(feat, determined)
        state = decide(interval, precise_tie_to_one=pb.hp.s == 0)
        steps.append(ChainStep(j, model.order[j], interval, state,
                               dict(determined), frozenset(abstained)))
        if state is LabelState.ABSTAIN:
            abstained.add(j)
        else:
            determined[j] = int(state)
    return steps


def predict(model: ChainModel, x, strategy: Strategy | str = Strategy.IMPRECISE_BRANCHING,
            counter: OpCounter | None = None) -> PartialLabelVector:
    """Partial label vector for ``x``, in original label order."""
    out = [LabelState.ABSTAIN] * model.m
    for step in trace(model, x, strategy, counter):
        out[step.label] = step.state
    return PartialLabelVector(out)


def predict_precise(model: ChainModel, x) -> PartialLabelVector:
    """Classical chain with the precise naive Bayes posterior at every step
    (the model's ``s`` is ignored) and the ``>= 0.5`` rule."""
    return predict(model, x, Strategy.PRECISE)


def predict_many(model: ChainModel, X, strategy: Strategy | str = Strategy.IMPRECISE_BRANCHING
                 ) -> list[PartialLabelVector]:
    strategy = Strategy.parse(strategy)
    return [predict(model, x, strategy) for x in np.asarray(X, dtype=np.int64)]
