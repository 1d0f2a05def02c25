import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from credalchain import Hyperparams, discretize, fit  # noqa: E402
from credalchain.data import DiscretizedDataset  # noqa: E402
from credalchain.toy import two_label_dataset  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


def make_disc(X, Y, cards):
    return DiscretizedDataset(np.asarray(X, dtype=np.int64), np.asarray(Y, dtype=np.int8),
                              (None,) * len(cards), tuple(cards), 6)


@pytest.fixture
def toy_disc():
    disc, _ = discretize(two_label_dataset(), 6)
    return disc


@pytest.fixture
def branching_model(toy_disc):
    """Y1 at s=10, Y2 precise, no Laplace smoothing; test instance x=1 is bin 1."""
    return fit(toy_disc, (0, 1), [Hyperparams(10.0, 0.0), Hyperparams(0.0, 0.0)])


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.report_lines():
        terminalreporter.write_line(line)
