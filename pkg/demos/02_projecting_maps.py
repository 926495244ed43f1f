"""Projecting maps [0,1] -> [0,1] into finite stages and walking down the bonds.

Run: python3 demos/02_projecting_maps.py
"""
from fractions import Fraction as F

from finmodels import (INTERVAL, ModelIndex, ModelStage, PLMap, TruncatedThread, bond,
                       check_thread, export_element, injectivity_witness, project)

stage = ModelStage.build(INTERVAL, INTERVAL, 1, 1)
ident = PLMap.identity(INTERVAL)
half = PLMap.constant(INTERVAL, INTERVAL, F(1, 2))
print("identity at (1,1): each source class lists the target classes it may hit")
print(export_element(project(ident, stage), stage))
print("constant 1/2 at (1,1):")
print(export_element(project(half, stage), stage))

# A finer stage sees more, and the bond recovers the coarser picture.
fine = ModelStage.build(INTERVAL, INTERVAL, 2, 2)
tent = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), 1), (1, 0)])
S = project(tent, fine)
print("tent map at (2,2):")
print(export_element(S, fine))
print("bonded down to (1,1):")
print(export_element(bond(S, fine, stage), stage))
print("same as projecting directly:", bond(S, fine, stage) == project(tent, stage))

# Projections at increasing indices form a compatible thread.
thread = TruncatedThread.of_map(tent, [ModelIndex(i, i) for i in range(1, 5)])
print("\nthread of the tent map up to (4,4) compatible:", check_thread(thread))

# Two maps that agree on coarse scales are told apart eventually.
low = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), F(3, 4)), (1, 0)])
lower = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), F(5, 8)), (1, 0)])
print("first index separating tents of height 3/4 and 5/8:", injectivity_witness(low, lower, 64))
