"""
Interval decisions and abstention
=================================

A label is predicted relevant when the whole interval on P(Y=1) lies
above one half, irrelevant when it lies below, and abstained on otherwise.
"""

from credalchain import ProbInterval, decide, dual

for lo, up in [(0.55, 0.70), (0.20, 0.40), (0.10, 0.60)]:
    iv = ProbInterval(lo, up)
    print(f"[{lo:.2f}, {up:.2f}] -> {decide(iv).symbol}")

# the interval for Y=0 is the mirror image of the one for Y=1
iv = ProbInterval(0.1, 0.6)
print("bounds on Y=0:", dual(iv))

# a precise posterior of exactly one half abstains under the strict rule;
# the precise chain breaks the tie towards relevant
half = ProbInterval.precise(0.5)
print(decide(half).symbol, decide(half, precise_tie_to_one=True).symbol)
