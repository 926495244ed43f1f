"""Factoring an isotopy of a finite space into moves.

An isotopy of a finite T0-space is a family of automorphisms whose traces
only jump at finitely many times. Each change from one level to the next is
split into moves: automorphisms that are the identity outside some minimal
open set U_x.

Run: python3 demos/05_isotopy_by_moves.py
"""
import random
from fractions import Fraction as F

from finmodels import (ConstructionFailure, FiniteIsotopy, decompose_moves, validate_isotopy)
from finmodels.isotopy import random_isotopy
from finmodels.posets import FinitePoset, antichain

# Four points a,b,c,d below a common top t.
fan = FinitePoset("abcdt", [(x, "t") for x in "abcd"])
ident = {x: x for x in fan.elements}
swap_ab = dict(ident, a="b", b="a")
both = dict(swap_ab, c="d", d="c")
H = FiniteIsotopy.from_levels(fan, [0, F(1, 3), F(2, 3)], [ident, swap_ab, both])
print("the isotopy as traces:")
print(H.export())
print(validate_isotopy(H) and "valid")

dec = decompose_moves(H)
print()
print(dec.report())

# A random isotopy on the same space, replayed through its moves.
rng = random.Random(7)
R = random_isotopy(fan, rng, events=4)
dec = decompose_moves(R)
print("random isotopy: %d critical times, %d moves, composite checked: %s"
      % (len(R.critical_times()), len(dec.moves), dec.to_dict()["verified"]))

# Without a common upper bound there is no U_x holding both points, so a swap
# of a two-point antichain is a valid isotopy with no move decomposition.
pair = antichain("pq")
flip = FiniteIsotopy.from_levels(pair, [0, F(1, 2)], [{"p": "p", "q": "q"}, {"p": "q", "q": "p"}])
print("\nantichain swap valid:", bool(validate_isotopy(flip)))
try:
    decompose_moves(flip)
except ConstructionFailure as exc:
    print("no decomposition:", exc)
