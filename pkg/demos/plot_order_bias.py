"""
Chain order changes the prediction
==================================

The bundled two-label toy table has joint frequencies .36 for (1,1), .24
for (1,0), .04 for (0,1) and .36 for (0,0), and one binary feature that
carries no information. A greedy precise chain reads it differently
depending on which label it predicts first.
"""

from credalchain import Hyperparams, discretize, fit, predict_precise, trace
from credalchain.toy import two_label_dataset

train, _ = discretize(two_label_dataset(), z=6)
x = [1]

for order in [(0, 1), (1, 0)]:
    model = fit(train, order, Hyperparams(s=0.0, laplace_alpha=0.0))
    for step in trace(model, x, "precise"):
        print(f"  position {step.position}: P(Y{step.label + 1}=1 | ...) = "
              f"{step.interval.lower:.2f} -> {step.state.symbol}")
    print(f"order {order}: prediction {predict_precise(model, x)}")

# the most probable joint assignment is a tie between (1,1) and (0,0); each
# order picks one of them and never hesitates
