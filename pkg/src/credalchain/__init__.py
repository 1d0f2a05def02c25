"""Multi-label classifier chains with naive credal classifiers.

Each label in the chain gets an interval on ``P(Y_j = 1)`` from an NCC
with imprecise Dirichlet counts. Labels whose interval contains 0.5 are
abstained on, and later links handle them by imprecise branching or by
marginalization.
"""

from .chain import (ChainModel, OpCounter, Strategy, fit, ib_bounds, ib_brute_force,
                    ib_optimal_paths, mar_bounds, predict, predict_many, predict_precise,
                    random_order, trace)
from .core import (ContractError, IndexSets, LabelState, PartialLabelVector, ProbInterval,
                   decide, dual)
from .data import (MISSING, ConfigError, DataError, DiscretizedDataset, FoldPlan,
                   RawDataset, apply_bins, discretize, inject_missing, load_arff,
                   load_csv, load_dataset, make_folds)
from .evaluation import (ExperimentGrid, MetricRow, completeness, run_experiment,
                         set_accuracy, summarize)
from .ncc import (CountTables, FitError, Hyperparams, fit_counts, idm_interval,
                  marginal_prob, ncc_bounds)

__version__ = "0.1.0"
