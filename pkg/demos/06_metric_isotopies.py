"""Approximating an isotopy of [0,1] by isotopies of its finite quotients.

A sampled isotopy F_t of a metric space is pushed to each quotient X/W_n:
every F_t induces a relation on classes, and when that relation contains a
bijection the levels become automorphisms of the finite model. This works at
the coarsest scale. At finer scales the relation often has no perfect
matching at all, which the pipeline reports instead of guessing.

Run: python3 demos/06_metric_isotopies.py
"""
from fractions import Fraction as F

from finmodels import (INTERVAL, MetricIsotopySample, NoBijection, PLMap, ResolutionExhausted,
                       approximate_isotopy, quotient, select_bijection)

ident = PLMap.identity(INTERVAL)
bent = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), F(1, 4)), (1, 1)])
sample = MetricIsotopySample((F(0), F(1)), (ident, bent))

res = approximate_isotopy(INTERVAL, sample, F(1, 10))
print(res.report())

# The bent map sends the point 1/2 to 1/4, inside an open class, so the
# classes up to 1/2 all land in fewer classes than there are of them.
for n in (2, 3):
    q = quotient(INTERVAL, n)
    try:
        select_bijection(bent, q)
        print("n=%d: bijection found" % n)
    except NoBijection as exc:
        print("n=%d: %s" % (n, exc))

try:
    approximate_isotopy(INTERVAL, sample, F(1, 10), min_n=2, max_n=4)
except ResolutionExhausted as exc:
    print("\nasking for n >= 2:")
    for n, why in exc.skipped:
        print("  n=%d skipped: %s" % (n, why))
