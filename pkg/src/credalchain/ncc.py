"""Naive credal classifier for one position of a label chain.

Each chain position ``j`` predicts label ``order[j]`` from the discretized
features and from the labels at earlier positions, with class-conditional
probabilities bounded by the imprecise Dirichlet model (IDM) and a precise,
Laplace-smoothed marginal on the class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import ContractError, ProbInterval
from .data import MISSING, DiscretizedDataset

NEG_INF = -math.inf


class FitError(ValueError):
    """A chain position cannot be estimated from the training data."""


@dataclass(frozen=True)
class Hyperparams:
    s: float = 1.0
    laplace_alpha: float = 1.0

    def __post_init__(self):
        if not (self.s >= 0 and math.isfinite(self.s)):
            raise ContractError(f"s must be a finite non-negative number, got {self.s}")
        if not (self.laplace_alpha >= 0 and math.isfinite(self.laplace_alpha)):
            raise ContractError(f"laplace_alpha must be non-negative, got {self.laplace_alpha}")

    def precise(self) -> "Hyperparams":
        return Hyperparams(0.0, self.laplace_alpha)


@dataclass(frozen=True, eq=False)
class CountTables:
    """Occurrence counts backing chain position ``position``.

    ``n_x_given_y[i][v, a]`` counts ``x_i = v`` among instances with
    ``y_j = a``; ``n_prev_given_y[k, b, a]`` counts ``y_k = b, y_j = a`` over
    instances where both labels are observed.
    """

    position: int
    label: int
    n_y: np.ndarray
    n_x_given_y: tuple[np.ndarray, ...]
    n_prev_given_y: np.ndarray

    @property
    def n_observed(self) -> int:
        return int(self.n_y.sum())

    @property
    def pair_totals(self) -> np.ndarray:
        """``pair_totals[k, a]``: instances with ``y_k`` observed and ``y_j = a``."""
        return self.n_prev_given_y.sum(axis=1)


def fit_counts(train: DiscretizedDataset, order: Sequence[int], j: int) -> CountTables:
    """Count tables for chain position ``j`` (0-based) under ``order``.

    Only instances whose label at position ``j`` is observed contribute.
    Label-pair counts additionally need the earlier label to be observed
    (pairwise deletion).
    """
    m = train.m
    if sorted(order) != list(range(m)):
        raise ContractError(f"order {list(order)} is not a permutation of 0..{m - 1}")
    if not 0 <= j < m:
        raise ContractError(f"position {j} outside chain of length {m}")
    label = order[j]
    y_all = train.labels[:, label]
    observed = y_all != MISSING
    if not observed.any():
        raise FitError(f"label {label} (chain position {j}) has no observed values")
    y = y_all[observed].astype(np.int64)
    n_y = np.bincount(y, minlength=2)

    X = train.features[observed]
    feat = []
    for i, card in enumerate(train.cardinalities):
        counts = np.zeros((card, 2), dtype=np.int64)
        np.add.at(counts, (X[:, i], y), 1)
        feat.append(counts)

    prev = np.zeros((j, 2, 2), dtype=np.int64)
    for k in range(j):
        yk = train.labels[observed, order[k]]
        both = yk != MISSING
        np.add.at(prev[k], (yk[both].astype(np.int64), y[both]), 1)

    return CountTables(j, label, n_y, tuple(feat), prev)


def idm_interval(count: float, class_total: float, s: float) -> ProbInterval:
    """IDM bounds ``[n / (N + s), (n + s) / (N + s)]`` for an event seen
    ``count`` times among ``class_total`` observations.

    With no observations and ``s == 0`` the ratio is 0/0, taken as 0.
    """
    if not 0 <= count <= class_total:
        raise ContractError(f"need 0 <= count <= total, got {count}, {class_total}")
    denom = class_total + s
    if denom == 0:
        return ProbInterval(0.0, 0.0)
    return ProbInterval(count / denom, (count + s) / denom)


def marginal_prob(n_y, n_observed: float, laplace_alpha: float = 1.0) -> tuple[float, float]:
    """Laplace-smoothed precise marginal ``(P(y=0), P(y=1))``."""
    denom = n_observed + 2 * laplace_alpha
    if denom == 0:
        return 0.5, 0.5
    return ((n_y[0] + laplace_alpha) / denom, (n_y[1] + laplace_alpha) / denom)


def _log(a: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(a)


def _idm_log_tables(counts: np.ndarray, totals: np.ndarray, s: float):
    """Log lower/upper IDM bounds, broadcasting ``totals`` over ``counts``."""
    denom = totals + s
    safe = np.where(denom > 0, denom, 1.0)
    lo = np.where(denom > 0, counts / safe, 0.0)
    hi = np.where(denom > 0, (counts + s) / safe, 0.0)
    return _log(lo), _log(hi)


def inv_one_plus_ratio(log_num: float, log_den: float) -> float:
    """``1 / (1 + num / den)`` from logs, with ``x / 0 -> inf`` and
    ``0 / 0`` mapped to a result of 0."""
    if log_den == NEG_INF:
        return 0.0
    if log_num == NEG_INF:
        return 1.0
    d = log_num - log_den
    if d >= 0:
        e = math.exp(-d)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(d))


class PositionBounds:
    """Log-space IDM tables for one chain position at a fixed ``s``.

    Built once per (tables, hyperparameters); :meth:`interval` then costs
    O(p + |prefix|).
    """

    def __init__(self, tables: CountTables, hp: Hyperparams):
        self.tables = tables
        self.hp = hp
        s = hp.s
        p0, p1 = marginal_prob(tables.n_y, tables.n_observed, hp.laplace_alpha)
        self.log_prior = _log(np.array([p0, p1]))

        p = len(tables.n_x_given_y)
        width = max((c.shape[0] for c in tables.n_x_given_y), default=1)
        self.feat_lo = np.full((p, width, 2), NEG_INF)
        self.feat_hi = np.full((p, width, 2), NEG_INF)
        for i, counts in enumerate(tables.n_x_given_y):
            lo, hi = _idm_log_tables(counts, tables.n_y[None, :], s)
            self.feat_lo[i, :counts.shape[0]] = lo
            self.feat_hi[i, :counts.shape[0]] = hi
        self._rows = np.arange(p)

        totals = tables.pair_totals[:, None, :]
        self.label_lo, self.label_hi = _idm_log_tables(tables.n_prev_given_y, totals, s)

    def feature_logs(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Summed log lower/upper feature likelihoods per class for ``x``."""
        x = np.asarray(x, dtype=np.int64)
        if x.shape != (len(self._rows),):
            raise ContractError(f"instance has {x.shape} features, expected {len(self._rows)}")
        return (self.feat_lo[self._rows, x].sum(axis=0),
                self.feat_hi[self._rows, x].sum(axis=0))

    def label_logs(self, prefix: Mapping[int, int]) -> tuple[np.ndarray, np.ndarray]:
        if not prefix:
            return np.zeros(2), np.zeros(2)
        ks = np.fromiter(prefix.keys(), dtype=np.int64, count=len(prefix))
        bs = np.fromiter(prefix.values(), dtype=np.int64, count=len(prefix))
        if ks.min() < 0 or ks.max() >= self.tables.position:
            raise ContractError(f"prefix positions must lie in 0..{self.tables.position - 1}")
        return self.label_lo[ks, bs].sum(axis=0), self.label_hi[ks, bs].sum(axis=0)

    def interval_from_logs(self, feat, prefix: Mapping[int, int]) -> ProbInterval:
        f_lo, f_hi = feat
        l_lo, l_hi = self.label_logs(prefix)
        lp = self.log_prior
        lower = inv_one_plus_ratio(lp[0] + f_hi[0] + l_hi[0], lp[1] + f_lo[1] + l_lo[1])
        upper = inv_one_plus_ratio(lp[0] + f_lo[0] + l_lo[0], lp[1] + f_hi[1] + l_hi[1])
        return ProbInterval(lower, upper)

    def interval(self, x, prefix: Mapping[int, int]) -> ProbInterval:
        """Bounds on ``P(Y_j = 1 | x, prefix)``."""
        return self.interval_from_logs(self.feature_logs(x), prefix)


def ncc_bounds(tables: CountTables, hp: Hyperparams, x, prefix: Mapping[int, int]) -> ProbInterval:
    """NCC interval for ``Y_j = 1`` given features ``x`` and earlier labels.

    ``prefix`` maps earlier chain positions to their conditioning values;
    positions left out contribute no factor. The bound for ``Y_j = 0`` is
    ``core.dual`` of the result.
    """
    return PositionBounds(tables, hp).interval(x, prefix)
