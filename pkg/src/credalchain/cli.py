"""Command-line interface: ``run``, ``predict`` and ``summarize``.

Exit status is 0 on success, 2 on usage errors and 1 on runtime errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from .chain import Strategy, fit, predict, random_order
from .data import RawDataset, apply_bins, discretize, load_dataset
from .evaluation import (DEFAULT_MISSING, DEFAULT_S_VALUES, ExperimentGrid, MetricRow,
                         SeriesPoint, run_experiment, summarize)
from .ncc import Hyperparams
from .toy import TOYS, toy_path

log = logging.getLogger("credalchain")

RESULT_COLUMNS = ("dataset", "strategy", "s", "missing_pct", "repeat", "fold", "n_test",
                  "set_accuracy", "completeness", "wall_ms")
SERIES_COLUMNS = ("strategy", "s", "missing_pct", "mean_sa", "mean_cp", "stderr_sa",
                  "stderr_cp", "n_folds")
_FLOAT_COLUMNS = {"s", "missing_pct", "set_accuracy", "completeness", "wall_ms",
                  "mean_sa", "mean_cp", "stderr_sa", "stderr_cp"}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    dataset: str | None = None
    format: str | None = None
    labels: str | None = None
    z: int = 6
    binning: str = "frequency"
    s: tuple[float, ...] = DEFAULT_S_VALUES
    missing: tuple[float, ...] = DEFAULT_MISSING
    strategies: tuple[str, ...] = ("ib",)
    repeats: int = 10
    folds: int = 10
    seed: int = 0
    laplace: float = 1.0
    order: tuple[int, ...] | None = None
    output: str = "results.csv"
    jobs: int = 1
    timing: bool = False

    def validate(self):
        if self.dataset is None:
            raise UsageError("--dataset is required")
        if self.z < 2:
            raise UsageError("--z must be at least 2")
        if any(s < 0 for s in self.s):
            raise UsageError("--s values must be non-negative")
        if any(not 0 <= p <= 100 for p in self.missing):
            raise UsageError("--missing values must lie in [0, 100]")
        if self.repeats < 1 or self.folds < 2 or self.jobs < 1:
            raise UsageError("need repeats >= 1, folds >= 2 and jobs >= 1")
        try:
            [Strategy.parse(s) for s in self.strategies]
        except ValueError as exc:
            raise UsageError(str(exc)) from None


# ------------------------------------------------------------------ parsing

def _floats(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    return tuple(float(v) for v in str(text).split(",") if v.strip())


def _ints(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(v) for v in text)
    return tuple(int(v) for v in str(text).split(",") if v.strip())


def _words(text) -> tuple[str, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(str(v) for v in text)
    return tuple(v.strip() for v in str(text).split(",") if v.strip())


_CONVERTERS = {"s": _floats, "missing": _floats, "order": _ints, "strategies": _words}


def _resolve_path(spec: str) -> Path:
    if spec.startswith("toy:"):
        name = spec[4:]
        if name not in TOYS:
            raise UsageError(f"unknown toy dataset {name!r}; choose from {sorted(TOYS)}")
        return toy_path(name)
    return Path(spec)


def _label_spec(path: Path, labels: str | None):
    """Integer count, XML path or None (MEKA header) for the label columns."""
    if labels is None:
        if path.suffix.lower() == ".arff" and path.with_suffix(".xml").exists():
            return path.with_suffix(".xml")
        return None
    try:
        return int(labels)
    except ValueError:
        return _resolve_path(labels)


def _load(spec: str, labels: str | None, fmt: str | None) -> RawDataset:
    path = _resolve_path(spec)
    if spec == "toy:two-label" and labels is None:
        labels = "2"
    return load_dataset(path, _label_spec(path, labels), fmt)


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, an optional JSON config file and flags (flags win)."""
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        known = {f.name for f in fields(RunConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None and flag is not False:
            values[f.name] = flag
    for key, conv in _CONVERTERS.items():
        if values.get(key) is not None:
            values[key] = conv(values[key])
    if values.get("labels") is not None:
        values["labels"] = str(values["labels"])
    config = RunConfig(**values)
    config.validate()
    return config


# ------------------------------------------------------------------ output

def _fmt(column: str, value) -> str:
    if column in _FLOAT_COLUMNS:
        return f"{float(value):.6f}"
    return str(value)


def write_rows(path_or_file, columns: Sequence[str], records) -> None:
    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_fmt(c, getattr(rec, c)) for c in columns])

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="") as fh:
            _write(fh)


def read_results(path) -> list[MetricRow]:
    """Parse a results CSV written by ``run``."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != RESULT_COLUMNS:
            raise ValueError(f"{path}: not a results file (bad header)")
        for lineno, rec in enumerate(reader, 2):
            if not rec:
                continue
            if len(rec) != len(RESULT_COLUMNS):
                raise ValueError(f"{path}:{lineno}: expected {len(RESULT_COLUMNS)} fields")
            try:
                rows.append(MetricRow(rec[0], rec[1], float(rec[2]), float(rec[3]),
                                      int(rec[4]), int(rec[5]), int(rec[6]),
                                      float(rec[7]), float(rec[8]), float(rec[9])))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed field") from None
    return rows


def read_series(path) -> list[SeriesPoint]:
    points = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            points.append(SeriesPoint(rec["strategy"], float(rec["s"]),
                                      float(rec["missing_pct"]), float(rec["mean_sa"]),
                                      float(rec["mean_cp"]), float(rec["stderr_sa"]),
                                      float(rec["stderr_cp"]), int(rec["n_folds"])))
    return points


# ---------------------------------------------------------------- commands

def cmd_run(config: RunConfig) -> list[MetricRow]:
    dataset = _load(config.dataset, config.labels, config.format)
    grid = ExperimentGrid(
        dataset=dataset, s_values=config.s, missing_pcts=config.missing,
        strategies=config.strategies, repeats=config.repeats, folds=config.folds,
        seed=config.seed, z=config.z, binning=config.binning,
        laplace_alpha=config.laplace, order=config.order, n_jobs=config.jobs,
        record_timing=config.timing,
    )
    log.info("running %d cells on %s (N=%d, p=%d, m=%d)", grid.n_cells, dataset.name,
             dataset.n, dataset.p, dataset.m)
    rows = run_experiment(grid)
    write_rows(config.output, RESULT_COLUMNS, rows)
    return rows


def _read_test_features(spec: str, train: RawDataset, labels, fmt) -> np.ndarray:
    path = _resolve_path(spec)
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if fmt == "arff":
        test = load_dataset(path, _label_spec(path, labels), "arff")
        if test.p != train.p:
            raise ValueError(f"{path}: {test.p} features, training data has {train.p}")
        return test.features
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if rows:
        try:
            [float(t) for t in rows[0]]
        except ValueError:
            rows = rows[1:]
    if not rows:
        return np.empty((0, train.p))
    widths = {len(r) for r in rows}
    if len(widths) != 1 or widths.pop() not in (train.p, train.p + train.m):
        raise ValueError(f"{path}: rows must have {train.p} feature columns "
                         f"(optionally followed by {train.m} labels)")
    return np.array([[float(t) for t in r[:train.p]] for r in rows])


def cmd_predict(args: argparse.Namespace, out=None) -> list[str]:
    out = out or sys.stdout
    train = _load(args.train, args.labels, args.format)
    s_values = _floats(args.s)
    if len(s_values) == 1:
        hp = Hyperparams(s_values[0], args.laplace)
    elif len(s_values) == train.m:
        hp = [Hyperparams(s, args.laplace) for s in s_values]
    else:
        raise UsageError(f"--s takes one value or {train.m} per-label values")
    order = _ints(args.order) if args.order else random_order(train.m, args.seed)
    disc_train, edges = discretize(train, args.z, args.binning)
    model = fit(disc_train, order, hp)

    X = _read_test_features(args.test, train, args.labels, args.format)
    lines = []
    if len(X):
        placeholder = RawDataset("test", X, np.zeros((len(X), train.m), dtype=np.int8),
                                 train.feature_kinds, categories=train.categories)
        disc_test = apply_bins(placeholder, edges, args.z)
        strategy = Strategy.parse(args.strategy)
        for x in disc_test.features:
            lines.append(str(predict(model, x, strategy)))
    for line in lines:
        print(line, file=out)
    return lines


def cmd_summarize(path, output=None) -> list[SeriesPoint]:
    points = summarize(read_results(path))
    write_rows(output if output else sys.stdout, SERIES_COLUMNS, points)
    return points


# -------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="credalchain",
        description="Multi-label chaining with naive credal classifiers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="cross-validated missing-label experiment")
    run.add_argument("--config", help="JSON file with RunConfig keys; flags override it")
    run.add_argument("--dataset", help="ARFF/CSV path or toy:<name>")
    run.add_argument("--format", choices=("arff", "csv"))
    run.add_argument("--labels", help="label count (trailing columns) or MULAN XML path")
    run.add_argument("--z", type=int, help="bins per numeric feature (default 6)")
    run.add_argument("--binning", choices=("frequency", "width"))
    run.add_argument("--s", help="comma-separated s values (default 0.0,0.5,...,5.5)")
    run.add_argument("--missing", help="comma-separated missing percentages")
    run.add_argument("--strategies", help="comma-separated subset of precise,ib,mar")
    run.add_argument("--repeats", type=int)
    run.add_argument("--folds", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--laplace", type=float, help="Laplace smoothing of label marginals")
    run.add_argument("--order", help="fixed chain order as comma-separated label indices")
    run.add_argument("--output", help="results CSV (default results.csv)")
    run.add_argument("--jobs", type=int, help="worker processes")
    run.add_argument("--timing", action="store_true",
                     help="record wall-clock time per cell (output no longer reproducible)")

    pred = sub.add_parser("predict", help="print partial label vectors for test instances")
    pred.add_argument("--train", required=True, help="ARFF/CSV path or toy:<name>")
    pred.add_argument("--test", required=True, help="ARFF/CSV path or toy:<name>")
    pred.add_argument("--format", choices=("arff", "csv"))
    pred.add_argument("--labels", help="label count or MULAN XML path")
    pred.add_argument("--s", default="1.0", help="s, or one value per label")
    pred.add_argument("--laplace", type=float, default=1.0)
    pred.add_argument("--strategy", default="ib", help="precise, ib or mar")
    pred.add_argument("--order", help="chain order (default: random from --seed)")
    pred.add_argument("--seed", type=int, default=0)
    pred.add_argument("--z", type=int, default=6)
    pred.add_argument("--binning", choices=("frequency", "width"), default="frequency")

    summ = sub.add_parser("summarize", help="average a results CSV into plot series")
    summ.add_argument("results")
    summ.add_argument("--output", help="series file (default stdout)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            try:
                config = build_run_config(args)
            except (UsageError, ValueError, TypeError) as exc:
                parser.error(str(exc))
            cmd_run(config)
        elif args.command == "predict":
            cmd_predict(args)
        else:
            cmd_summarize(args.results, args.output)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ValueError, RuntimeError, KeyError) as exc:
        print(f"credalchain: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
