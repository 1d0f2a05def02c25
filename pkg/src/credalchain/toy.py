"""Small datasets shipped with the package.

``two-label`` is a 50-instance, two-label table whose empirical joint is
``P(y1, y2) = {(1,1): .36, (1,0): .24, (0,1): .04, (0,0): .36}`` with one
binary feature that carries no information about ``y2``. Chaining it in
the order (y1, y2) predicts (1, 1) and in the order (y2, y1) predicts
(0, 0). Fitted with ``s = 10`` on y1 and ``s = 0`` on y2 (no Laplace
smoothing) it reproduces the imprecise-branching example: y1 is abstained
and y2 gets the interval [0.1, 0.6] at ``x = 1``.

``emotions_sample`` holds ten real instances of the MULAN emotions dataset.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .data import RawDataset, load_arff, load_csv

TOYS = {
    "two-label": ("two_label.csv", 2),
    "two-label-test": ("two_label_test.csv", None),
    "emotions-sample": ("emotions_sample.arff", "emotions_sample.xml"),
}


def toy_path(name: str) -> Path:
    """Filesystem path of a bundled file (``two-label``, ``two-label-test``, ...)."""
    filename = TOYS[name][0] if name in TOYS else name
    return Path(str(resources.files("credalchain") / "datasets" / filename))


def two_label_dataset() -> RawDataset:
    return load_csv(toy_path("two-label"), 2)


def emotions_sample() -> RawDataset:
    return load_arff(toy_path("emotions-sample"), toy_path("emotions_sample.xml"))
