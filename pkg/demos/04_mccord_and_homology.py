"""From finite spaces to complexes and back, with integral homology.

Run: python3 demos/04_mccord_and_homology.py
"""
from finmodels import (SimplicialComplex, barycentric_subdivision, face_poset, homology,
                       order_complex)
from finmodels.posets import FinitePoset

# The minimal finite model of the circle: two minima below two maxima.
S1 = FinitePoset.from_covers(["a", "b", "c", "d"],
                             [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
K = order_complex(S1)
print("order complex of the 4-point circle:", K.maximal_simplices())
print(homology(K).report())

# Face poset then order complex is the barycentric subdivision.
T = SimplicialComplex.boundary_of_simplex("xyz")
sd = order_complex(face_poset(T))
print("sd of a triangle boundary, f-vector", sd.f_vector(),
      "matches direct subdivision:", sd == barycentric_subdivision(T))
print(homology(sd).report())

# Torsion shows up for the projective plane (6 vertices, 10 triangles).
rp2 = SimplicialComplex(range(1, 7), [
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
    (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6)])
print("RP^2:")
print(homology(rp2).report())

