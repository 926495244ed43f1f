"""Retracting stage elements onto the projected maps W, and where it breaks.

Between discrete finite spaces every set map is continuous, so W is the set
of all projections plus the empty element. The retraction picks the largest
member of W inside a given element, which only makes sense when the members
inside it form a chain.

Run: python3 demos/03_retraction_onto_W.py
"""
from finmodels import (EXHAUSTIVE, FiniteMetricSpace, ModelStage, TotalOrderViolation,
                       enumerate_W, export_element, import_element, retract)

X = FiniteMetricSpace(["x1", "x2"], [[0, 3], [3, 0]])
Y = FiniteMetricSpace(["y1", "y2"], [[0, 3], [3, 0]])
# the constant map at the basepoint y1 projects to the empty element
stage = enumerate_W(ModelStage.build(X, Y, 1, 1), EXHAUSTIVE)
print("W has %d elements:" % len(stage.W))
for T in stage.W:
    print("  ", stage.element_label(T))

S = import_element("x1: y1\nx2: y2\n", stage)
print("\nretract of the identity graph:")
print(export_element(retract(S, stage), stage))

# Projections of single maps are singletons, and distinct singletons are
# never comparable. Any element holding two of them has no largest one.
S = import_element("x1: y1 | y2\nx2: y2\n", stage)
try:
    retract(S, stage)
except TotalOrderViolation as exc:
    a, b = exc.pair
    print("no retraction for\n%s" % export_element(S, stage))
    print("incomparable members:", stage.element_label(a), stage.element_label(b))
