"""
Imprecise branching versus marginalization
==========================================

With a wide IDM on Y1 the first link abstains. Imprecise branching then
bounds P(Y2=1) over both values of Y1, while marginalization simply drops
Y1 from the conditioning.
"""

from credalchain import (Hyperparams, discretize, fit, ib_brute_force, mar_bounds,
                         predict, trace)
from credalchain.toy import two_label_dataset

train, _ = discretize(two_label_dataset(), z=6)

# s=10 on Y1, a precise Y2, and no Laplace smoothing of the marginals
model = fit(train, (0, 1), [Hyperparams(10.0, 0.0), Hyperparams(0.0, 0.0)])
x = [1]

for step in trace(model, x, "ib"):
    iv = step.interval
    print(f"Y{step.label + 1}: [{iv.lower:.3f}, {iv.upper:.3f}] -> {step.state.symbol}")
print("branching:", predict(model, x, "ib"))

# the fast optimal-path bound agrees with enumerating both branches
print("enumerated:", ib_brute_force(model, x, {}, {0}, 1))

# marginalization keeps only the precise marginal of Y2 here
print("marginalized Y2:", mar_bounds(model, x, {}, 1))
print("marginalization:", predict(model, x, "mar"))
