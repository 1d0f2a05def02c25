"""Set-valued metrics and the repeated cross-validation harness."""

from __future__ import annotations

import concurrent.futures
import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .chain import Strategy, fit, predict, random_order
from .core import ContractError, LabelState, PartialLabelVector
from .data import RawDataset, apply_bins, discretize, inject_missing, make_folds
from .ncc import Hyperparams

log = logging.getLogger(__name__)

DEFAULT_S_VALUES = tuple(k / 2 for k in range(12))  # 0.0, 0.5, ..., 5.5
DEFAULT_MISSING = (0, 20, 40, 60, 80)


def set_accuracy(pred: Sequence[LabelState], truth: Sequence[int]) -> int:
    """1 if ``truth`` is one of the completions of ``pred``, else 0."""
    if len(pred) != len(truth):
        raise ContractError(f"prediction has {len(pred)} labels, truth has {len(truth)}")
    for state, y in zip(pred, truth):
        if state != LabelState.ABSTAIN and int(state) != int(y):
            return 0
    return 1


def completeness(pred: Sequence[LabelState]) -> float:
    """Fraction of labels that were not abstained on."""
    if len(pred) == 0:
        raise ContractError("completeness needs at least one label")
    return sum(s != LabelState.ABSTAIN for s in pred) / len(pred)


@dataclass(frozen=True)
class MetricRow:
    dataset: str
    strategy: str
    s: float
    missing_pct: float
    repeat: int
    fold: int
    n_test: int
    set_accuracy: float
    completeness: float
    wall_ms: float = 0.0

    def key(self):
        return (_STRATEGY_RANK[self.strategy], self.s, self.missing_pct, self.repeat, self.fold)


_STRATEGY_RANK = {s.value: i for i, s in enumerate(Strategy)}


@dataclass(frozen=True)
class ExperimentGrid:
    """Cartesian experiment specification over one dataset.

    ``order`` fixes the chain order; otherwise a seeded random order is drawn
    per (repeat, fold) and shared by every s, missing level and strategy.
    """

    dataset: RawDataset
    s_values: Sequence[float] = DEFAULT_S_VALUES
    missing_pcts: Sequence[float] = DEFAULT_MISSING
    strategies: Sequence[Strategy | str] = (Strategy.IMPRECISE_BRANCHING,)
    repeats: int = 10
    folds: int = 10
    seed: int = 0
    z: int = 6
    binning: str = "frequency"
    laplace_alpha: float = 1.0
    order: Sequence[int] | None = None
    n_jobs: int = 1
    record_timing: bool = False
    strategies_: tuple[Strategy, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "strategies_",
                           tuple(Strategy.parse(s) for s in self.strategies))
        if not (self.s_values and self.missing_pcts and self.strategies_):
            raise ContractError("experiment grid is empty")
        if any(s < 0 for s in self.s_values):
            raise ContractError("s values must be non-negative")
        if any(not 0 <= p <= 100 for p in self.missing_pcts):
            raise ContractError("missing percentages must lie in [0, 100]")

    @property
    def n_cells(self) -> int:
        return (self.repeats * self.folds * len(self.s_values)
                * len(self.missing_pcts) * len(self.strategies_))


def _cell_seed(seed: int, *coords) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, *coords])


def _run_split(grid: ExperimentGrid, plan, repeat: int, fold: int) -> list[MetricRow]:
    data = grid.dataset
    train = data.subset(plan.train_indices(repeat, fold))
    test = data.subset(plan.test_indices(repeat, fold))
    disc_train, edges = discretize(train, grid.z, grid.binning)
    disc_test = apply_bins(test, edges, grid.z)
    if grid.order is not None:
        order = tuple(grid.order)
    else:
        order = random_order(data.m, _cell_seed(grid.seed, 1, repeat, fold))

    rows = []
    for pct in grid.missing_pcts:
        # missing-label mask keyed on percentage * 1000 to keep fractional levels distinct
        mask_seed = _cell_seed(grid.seed, 2, repeat, fold, int(round(pct * 1000)))
        fitted = fit(inject_missing(disc_train, pct, mask_seed), order,
                     Hyperparams(0.0, grid.laplace_alpha))
        for s in grid.s_values:
            model = fitted.with_hyperparams(Hyperparams(float(s), grid.laplace_alpha))
            for strategy in grid.strategies_:
                start = time.perf_counter()
                sa = cp = 0.0
                for x, y in zip(disc_test.features, disc_test.labels):
                    pred = predict(model, x, strategy)
                    sa += set_accuracy(pred, y)
                    cp += completeness(pred)
                n = disc_test.n
                wall = (time.perf_counter() - start) * 1000 if grid.record_timing else 0.0
                rows.append(MetricRow(data.name, strategy.value, float(s), pct, repeat,
                                      fold, n, sa / n, cp / n, wall))
    return rows


def _run_split_safe(grid, plan, repeat, fold):
    try:
        return _run_split(grid, plan, repeat, fold)
    except Exception as exc:
        raise RuntimeError(f"{grid.dataset.name}: cell repeat={repeat} fold={fold} "
                           f"failed: {exc}") from exc


def run_experiment(grid: ExperimentGrid) -> list[MetricRow]:
    """Run the grid; rows come back sorted by (strategy, s, missing, repeat, fold)."""
    plan = make_folds(grid.dataset.n, grid.repeats, grid.folds, grid.seed)
    splits = [(r, f) for r in range(grid.repeats) for f in range(grid.folds)]
    rows: list[MetricRow] = []
    if grid.n_jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(grid.n_jobs) as pool:
            futures = [pool.submit(_run_split_safe, grid, plan, r, f) for r, f in splits]
            for fut in futures:
                rows.extend(fut.result())
    else:
        for r, f in splits:
            log.debug("running repeat %d fold %d", r, f)
            rows.extend(_run_split_safe(grid, plan, r, f))
    rows.sort(key=MetricRow.key)
    return rows


# ----------------------------------------------------------------- summary

@dataclass(frozen=True)
class SeriesPoint:
    strategy: str
    s: float
    missing_pct: float
    mean_sa: float
    mean_cp: float
    stderr_sa: float
    stderr_cp: float
    n_folds: int


def _stderr(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def summarize(rows: Iterable[MetricRow]) -> list[SeriesPoint]:
    """Macro-average fold metrics per (strategy, s, missing_pct)."""
    groups = defaultdict(list)
    for row in rows:
        groups[(row.strategy, row.s, row.missing_pct)].append(row)
    points = []
    for (strategy, s, pct), members in groups.items():
        sa = [r.set_accuracy for r in members]
        cp = [r.completeness for r in members]
        points.append(SeriesPoint(strategy, s, pct, float(np.mean(sa)), float(np.mean(cp)),
                                  _stderr(sa), _stderr(cp), len(members)))
    points.sort(key=lambda p: (_STRATEGY_RANK.get(p.strategy, 99), p.strategy, p.s,
                               p.missing_pct))
    return points
