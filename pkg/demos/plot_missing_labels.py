"""
Missing labels and cautious chains
==================================

Cross-validated set-accuracy and completeness as training labels are
removed. The data is a synthetic surrogate: three numeric features and
four correlated labels, so the script runs in seconds. Point ``DATASET``
at an ARFF file (with its MULAN ``.xml`` beside it) to use real data.
"""

import sys

import numpy as np

from credalchain import ExperimentGrid, RawDataset, load_arff, run_experiment, summarize

DATASET = sys.argv[1] if len(sys.argv) > 1 else None

if DATASET:
    data = load_arff(DATASET, DATASET.rsplit(".", 1)[0] + ".xml")
else:
    rng = np.random.default_rng(0)
    n = 300
    X = rng.normal(size=(n, 3))
    latent = X @ rng.normal(size=(3, 4)) + rng.normal(scale=0.8, size=(n, 4))
    latent[:, 1] += 0.8 * latent[:, 0]
    latent[:, 3] -= 0.8 * latent[:, 2]
    Y = (latent > 0).astype(np.int8)
    data = RawDataset("surrogate", X, Y, ("numeric",) * 3)

grid = ExperimentGrid(data, s_values=(0.0, 2.0, 5.5), missing_pcts=(0, 20, 40, 60, 80),
                      repeats=1, folds=5, seed=0)
points = summarize(run_experiment(grid))

print(f"{'s':>4} {'missing':>8} {'SA':>6} {'CP':>6}")
for p in points:
    print(f"{p.s:4.1f} {p.missing_pct:7.0f}% {p.mean_sa:6.3f} {p.mean_cp:6.3f}")

# with s > 0 the chain abstains more as labels go missing, which keeps the
# set-accuracy up; at s = 0 it never abstains
