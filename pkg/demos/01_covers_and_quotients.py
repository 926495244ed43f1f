"""Covers of [0,1] and S^1 by small balls, and the finite spaces they induce.

Run: python3 demos/01_covers_and_quotients.py
"""
from finmodels import CIRCLE, INTERVAL, FiniteMetricSpace, bonding_projection, quotient

# At n = 2 the interval splits into five classes: three points and two gaps.
q2 = quotient(INTERVAL, 2)
print("[0,1] at n=2:")
print(q2.export())

# Going finer, the number of classes grows faster than 2n+1, because the
# cover keeps every coarser ball and their endpoints pile up.
for n in range(1, 7):
    print("n=%d: %d classes" % (n, len(quotient(INTERVAL, n).classes)))

# Each finer quotient projects onto the coarser one.
p = bonding_projection(quotient(INTERVAL, 3), q2)
q3 = quotient(INTERVAL, 3)
print("\nbonding map n=3 -> n=2:")
for i, j in enumerate(p.mapping):
    print("  %s -> %s" % (q3.label(i), q2.label(j)))

# The circle, measured by arc length.
print("\nS^1 at n=2:")
print(quotient(CIRCLE, 2).export())

# A finite metric space whose points are far apart is discrete at every scale.
X = FiniteMetricSpace(["a", "b", "c"], [[0, 3, 3], [3, 0, 3], [3, 3, 0]])
print("three far points at n=1:")
print(quotient(X, 1).export())
