"""Dataset ingestion, discretization, missing-label injection and folds.

Labels are held as ``int8`` arrays where ``MISSING`` (-1) marks a removed
label cell. Raw datasets are always complete.
"""

from __future__ import annotations

import csv
import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

MISSING = -1
NUMERIC = "numeric"
CATEGORICAL = "categorical"

_BINARY_TOKENS = {"0": 0, "1": 1, "false": 0, "true": 1}


class DataError(ValueError):
    """Malformed or inconsistent dataset input."""


class ConfigError(ValueError):
    """Invalid preprocessing parameter."""


@dataclass(frozen=True)
class RawDataset:
    """Features and complete binary labels as read from disk.

    Categorical features are stored as float-valued category ids; their
    category names live in ``categories``.
    """

    name: str
    features: np.ndarray
    labels: np.ndarray
    feature_kinds: tuple[str, ...]
    feature_names: tuple[str, ...] = ()
    label_names: tuple[str, ...] = ()
    categories: tuple[tuple[str, ...] | None, ...] = ()

    def __post_init__(self):
        if self.features.ndim != 2 or self.labels.ndim != 2:
            raise DataError("features and labels must be 2-d arrays")
        if self.features.shape[0] != self.labels.shape[0]:
            raise DataError("features and labels differ in row count")
        if len(self.feature_kinds) != self.features.shape[1]:
            raise DataError("one feature kind is needed per feature column")
        if self.labels.size and not np.isin(self.labels, (0, 1)).all():
            raise DataError("labels must be binary")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def m(self) -> int:
        return self.labels.shape[1]

    def subset(self, rows) -> "RawDataset":
        return RawDataset(self.name, self.features[rows], self.labels[rows],
                          self.feature_kinds, self.feature_names,
                          self.label_names, self.categories)


@dataclass(frozen=True)
class DiscretizedDataset:
    """Integer-coded features plus labels that may contain ``MISSING``."""

    features: np.ndarray
    labels: np.ndarray
    bin_edges: tuple[np.ndarray | None, ...]
    cardinalities: tuple[int, ...]
    z: int

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def m(self) -> int:
        return self.labels.shape[1]

    def with_labels(self, labels: np.ndarray) -> "DiscretizedDataset":
        return DiscretizedDataset(self.features, labels, self.bin_edges,
                                  self.cardinalities, self.z)


@dataclass(frozen=True)
class FoldPlan:
    repeats: int
    folds: int
    seed: int
    assignments: tuple[np.ndarray, ...] = field(repr=False)

    def test_indices(self, repeat: int, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments[repeat] == fold)

    def train_indices(self, repeat: int, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments[repeat] != fold)


# --------------------------------------------------------------------- ARFF

_ATTR_RE = re.compile(r"@attribute\s+('(?:[^'\\]|\\.)*'|\"[^\"]*\"|\S+)\s+(.+)$",
                      re.IGNORECASE)
_MEKA_RE = re.compile(r"-C\s+(-?\d+)")


def _unquote(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
        return token[1:-1]
    return token


def _split_row(line: str) -> list[str]:
    return next(csv.reader([line], skipinitialspace=True, quotechar="'"
                           if "'" in line else '"'))


def read_mulan_xml(path) -> list[str]:
    """Label names listed in a MULAN ``.xml`` label file."""
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise DataError(f"{path}: malformed label XML: {exc}") from None
    names = [el.get("name") for el in root.iter() if el.tag.endswith("label")]
    if not names or None in names:
        raise DataError(f"{path}: no <label name=...> entries found")
    return names


def load_arff(path, labels: int | str | Path | Sequence[str] | None = None) -> RawDataset:
    """Read a dense ARFF file into a :class:`RawDataset`.

    ``labels`` picks the label attributes: an int ``n`` means the last ``n``
    attributes, a path to a MULAN XML file or a list of names selects by
    name, and ``None`` falls back to the MEKA ``-C n`` option in the
    relation name (``n > 0``: first ``n`` attributes, ``n < 0``: last ``-n``).
    """
    path = Path(path)
    relation = path.stem
    attrs: list[tuple[str, str, tuple[str, ...] | None]] = []
    rows: list[tuple[int, list[str]]] = []
    in_data = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            if in_data:
                if line.startswith("{"):
                    raise DataError(f"{path}:{lineno}: sparse ARFF rows are not supported")
                rows.append((lineno, _split_row(line)))
                continue
            low = line.lower()
            if low.startswith("@relation"):
                relation = _unquote(line[len("@relation"):])
            elif low.startswith("@attribute"):
                match = _ATTR_RE.match(line)
                if match is None:
                    raise DataError(f"{path}:{lineno}: malformed @attribute line")
                name, spec = _unquote(match.group(1)), match.group(2).strip()
                if spec.startswith("{"):
                    if not spec.endswith("}"):
                        raise DataError(f"{path}:{lineno}: unterminated nominal spec")
                    values = tuple(_unquote(v) for v in _split_row(spec[1:-1]))
                    attrs.append((name, CATEGORICAL, values))
                elif spec.split()[0].lower() in ("numeric", "real", "integer"):
                    attrs.append((name, NUMERIC, None))
                else:
                    raise DataError(f"{path}:{lineno}: unsupported attribute type {spec!r}")
            elif low.startswith("@data"):
                in_data = True
            else:
                raise DataError(f"{path}:{lineno}: unexpected header line")
    if not in_data:
        raise DataError(f"{path}: missing @data section")
    if not attrs:
        raise DataError(f"{path}: no attributes declared")

    names = [a[0] for a in attrs]
    label_idx = _resolve_label_columns(path, relation, names, labels)
    feat_idx = [i for i in range(len(attrs)) if i not in set(label_idx)]

    n_rows = len(rows)
    X = np.empty((n_rows, len(feat_idx)), dtype=float)
    Y = np.empty((n_rows, len(label_idx)), dtype=np.int8)
    lookups = [None if kind == NUMERIC else {v: k for k, v in enumerate(vals)}
               for _, kind, vals in attrs]
    for r, (lineno, tokens) in enumerate(rows):
        if len(tokens) != len(attrs):
            raise DataError(f"{path}:{lineno}: expected {len(attrs)} values, got {len(tokens)}")
        tokens = [_unquote(t) for t in tokens]
        for c, col in enumerate(feat_idx):
            X[r, c] = _parse_feature(path, lineno, tokens[col], lookups[col])
        for c, col in enumerate(label_idx):
            Y[r, c] = _parse_label(path, lineno, names[col], tokens[col])

    return RawDataset(
        name=relation.split(":")[0].strip() or path.stem,
        features=X,
        labels=Y,
        feature_kinds=tuple(attrs[i][1] for i in feat_idx),
        feature_names=tuple(names[i] for i in feat_idx),
        label_names=tuple(names[i] for i in label_idx),
        categories=tuple(attrs[i][2] for i in feat_idx),
    )


def _resolve_label_columns(path, relation, names, labels) -> list[int]:
    n_attr = len(names)
    if labels is None:
        match = _MEKA_RE.search(relation)
        if match is None:
            raise DataError(f"{path}: no label spec given and no '-C n' in @relation")
        c = int(match.group(1))
        idx = list(range(c)) if c > 0 else list(range(n_attr + c, n_attr))
    elif isinstance(labels, (int, np.integer)):
        if not 1 <= labels < n_attr:
            raise DataError(f"{path}: label count {labels} out of range")
        idx = list(range(n_attr - labels, n_attr))
    else:
        if isinstance(labels, (str, Path)):
            label_names = read_mulan_xml(labels)
        else:
            label_names = list(labels)
        missing = [nm for nm in label_names if nm not in names]
        if missing:
            raise DataError(f"{path}: label attributes not found: {missing}")
        idx = [names.index(nm) for nm in label_names]
    if not idx or len(idx) >= n_attr:
        raise DataError(f"{path}: bad label selection")
    return idx


def _parse_feature(path, lineno, token, lookup) -> float:
    if token == "?":
        raise DataError(f"{path}:{lineno}: missing feature values are not supported")
    if lookup is None:
        try:
            return float(token)
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-numeric value {token!r}") from None
    if token not in lookup:
        raise DataError(f"{path}:{lineno}: undeclared nominal value {token!r}")
    return float(lookup[token])


def _parse_label(path, lineno, name, token) -> int:
    value = _BINARY_TOKENS.get(token.strip().lower())
    if value is None:
        try:
            f = float(token)
        except ValueError:
            f = None
        if f not in (0.0, 1.0):
            raise DataError(f"{path}:{lineno}: non-binary value {token!r} in label {name!r}")
        value = int(f)
    return value


# ---------------------------------------------------------------------- CSV

def load_csv(path, m_labels: int, *, header: bool | None = None) -> RawDataset:
    """Numeric CSV whose last ``m_labels`` columns are binary labels.

    A first row that does not parse as numbers is taken as a header.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [(i, row) for i, row in enumerate(csv.reader(fh), 1) if row]
    if lines and header is not False:
        first = lines[0][1]
        try:
            [float(t) for t in first]
            has_header = bool(header)
        except ValueError:
            has_header = True
    else:
        has_header = False
    names = [t.strip() for t in lines[0][1]] if has_header and lines else []
    body = lines[1:] if has_header else lines
    if not body:
        raise DataError(f"{path}: no rows")
    width = len(body[0][1])
    if m_labels < 1 or m_labels >= width:
        raise DataError(f"{path}: need 1 <= labels < {width} columns, got {m_labels}")
    data = np.empty((len(body), width))
    for r, (lineno, row) in enumerate(body):
        if len(row) != width:
            raise DataError(f"{path}:{lineno}: expected {width} values, got {len(row)}")
        try:
            data[r] = [float(t) for t in row]
        except ValueError:
            raise DataError(f"{path}:{lineno}: non-numeric value") from None
    Y = data[:, width - m_labels:]
    if not np.isin(Y, (0.0, 1.0)).all():
        bad = int(np.argwhere(~np.isin(Y, (0.0, 1.0)))[0, 0])
        raise DataError(f"{path}:{body[bad][0]}: non-binary label value")
    p = width - m_labels
    if not names:
        names = [f"x{i}" for i in range(p)] + [f"y{j}" for j in range(m_labels)]
    return RawDataset(
        name=path.stem,
        features=data[:, :p],
        labels=Y.astype(np.int8),
        feature_kinds=(NUMERIC,) * p,
        feature_names=tuple(names[:p]),
        label_names=tuple(names[p:]),
        categories=(None,) * p,
    )


def load_dataset(path, labels=None, fmt: str | None = None) -> RawDataset:
    """Dispatch on ``fmt`` (or the file extension) to the ARFF/CSV readers."""
    path = Path(path)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if fmt == "arff":
        return load_arff(path, labels)
    if fmt == "csv":
        if not isinstance(labels, (int, np.integer)):
            raise DataError("CSV datasets need an integer label count")
        return load_csv(path, int(labels))
    raise DataError(f"unsupported dataset format {fmt!r}")


# ------------------------------------------------------------ discretization

def _frequency_edges(values: np.ndarray, z: int) -> np.ndarray:
    v = np.sort(values)
    n = len(v)
    distinct = np.unique(v)
    gaps = set()
    for k in range(1, z):
        r = math.ceil(k * n / z)  # 1-based rank of the last value in bin k-1
        if 1 <= r < n:
            # a tie at the cut rank sends the tied value to the lower bin
            g = int(np.searchsorted(distinct, v[r - 1], side="right"))
            if g < len(distinct):
                gaps.add(g)
    cuts = [(distinct[g - 1] + distinct[g]) / 2.0 for g in sorted(gaps)]
    return np.asarray(cuts, dtype=float)


def _width_edges(values: np.ndarray, z: int) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        return np.array([lo])
    return np.linspace(lo, hi, z + 1)[1:-1]


def discretize(train: RawDataset, z: int = 6, method: str = "frequency"):
    """Fit per-feature cut points on ``train`` and bin it.

    Numeric features get up to ``z - 1`` cut points (equal-frequency by
    default, ``method="width"`` for equal-width); tied cut points collapse.
    Bins are right-closed, so a value equal to a cut point lands in the lower
    bin. Categorical features pass through unchanged.

    Returns ``(DiscretizedDataset, bin_edges)``.
    """
    if z < 2:
        raise ConfigError(f"z must be >= 2, got {z}")
    if train.n == 0:
        raise ConfigError("cannot discretize an empty dataset")
    if method not in ("frequency", "width"):
        raise ConfigError(f"unknown binning method {method!r}")
    fit_edges = _frequency_edges if method == "frequency" else _width_edges
    edges = []
    for i, kind in enumerate(train.feature_kinds):
        edges.append(fit_edges(train.features[:, i], z) if kind == NUMERIC else None)
    edges = tuple(edges)
    data = apply_bins(train, edges)
    return DiscretizedDataset(data.features, data.labels, edges,
                              data.cardinalities, z), edges


def apply_bins(data: RawDataset, bin_edges, z: int | None = None) -> DiscretizedDataset:
    """Bin ``data`` with previously fitted edges; out-of-range values clamp."""
    if len(bin_edges) != data.p:
        raise DataError(f"feature arity mismatch: {data.p} features, {len(bin_edges)} edge sets")
    X = np.empty(data.features.shape, dtype=np.int64)
    cards = []
    for i, edges in enumerate(bin_edges):
        col = data.features[:, i]
        if edges is None:
            X[:, i] = col.astype(np.int64)
            cats = data.categories[i] if i < len(data.categories) else None
            if cats is not None:
                cards.append(len(cats))
            else:
                cards.append(int(col.max()) + 1 if len(col) else 1)
        else:
            X[:, i] = np.searchsorted(edges, col, side="left")
            cards.append(len(edges) + 1)
    if z is None:
        z = max((len(e) + 1 for e in bin_edges if e is not None), default=2)
    return DiscretizedDataset(X, data.labels.astype(np.int8), tuple(bin_edges),
                              tuple(cards), z)


# ------------------------------------------------------------- missingness

def inject_missing(data: DiscretizedDataset, pct: float, seed) -> DiscretizedDataset:
    """Remove ``floor(pct * N * m / 100)`` label cells chosen uniformly."""
    if not 0 <= pct <= 100:
        raise ConfigError(f"missing percentage must lie in [0, 100], got {pct}")
    labels = data.labels.copy()
    k = math.floor(pct * labels.size / 100)
    if k:
        rng = np.random.default_rng(seed)
        cells = rng.choice(labels.size, size=k, replace=False)
        labels.flat[cells] = MISSING
    return data.with_labels(labels)


# ------------------------------------------------------------------- folds

def make_folds(n: int, repeats: int, folds: int, seed: int) -> FoldPlan:
    """Seeded repeated k-fold plan; fold sizes differ by at most one."""
    if folds < 2:
        raise ConfigError(f"need at least 2 folds, got {folds}")
    if n < folds:
        raise ConfigError(f"cannot split {n} instances into {folds} folds")
    if repeats < 1:
        raise ConfigError("need at least one repeat")
    assignments = []
    for r in range(repeats):
        rng = np.random.default_rng([seed, r])
        perm = rng.permutation(n)
        fold_of = np.empty(n, dtype=np.int64)
        for f, chunk in enumerate(np.array_split(perm, folds)):
            fold_of[chunk] = f
        assignments.append(fold_of)
    return FoldPlan(repeats, folds, seed, tuple(assignments))
