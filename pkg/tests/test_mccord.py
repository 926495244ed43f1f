import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from finmodels.batteries import mccord_corpus
from finmodels.homology import elementary_divisors, rank_over_q, smith_diagonal
from finmodels.mccord import (ComplexError, SimplicialComplex, SimplicialMap,
                              barycentric_subdivision, boundary_entries, face_poset, homology,
                              induced_poset_map, induced_simplicial_map, order_complex)
from finmodels.posets import FinitePoset, MonotoneMap, antichain, chain

RP2 = SimplicialComplex("123456", ["124", "126", "135", "136", "145", "234", "235", "256",
                                   "346", "456"])
TORUS = SimplicialComplex("0123456", [sorted({str(i % 7), str((i + a) % 7), str((i + b) % 7)})
                                      for i in range(7) for a, b in [(1, 3), (2, 3)]])

complexes_st = st.lists(st.sets(st.sampled_from("abcdef"), min_size=1, max_size=4),
                        min_size=1, max_size=6).map(lambda ss: SimplicialComplex(
                            set().union(*ss), ss))


def test_order_complexes_of_chains_and_antichains():
    assert order_complex(chain("abc")) == SimplicialComplex.simplex("abc")
    assert order_complex(antichain("ab")).f_vector() == (2,)


def test_face_poset_of_an_edge():
    P = face_poset(SimplicialComplex.simplex("ab"))
    assert P.elements == ("{a,b}", "{a}", "{b}")
    assert P.maximal() == ["{a,b}"]


@pytest.mark.parametrize("name", list(mccord_corpus()))
def test_subdivision_equals_order_complex_of_face_poset(name):
    K = mccord_corpus()[name]
    assert order_complex(face_poset(K)) == barycentric_subdivision(K)


def test_subdivision_counts():
    assert barycentric_subdivision(SimplicialComplex.simplex("abc")).f_vector() == (7, 12, 6)


def test_known_homology():
    assert homology(SimplicialComplex.simplex("a")).betti == (1,)
    assert homology(SimplicialComplex.boundary_of_simplex("abc")).betti == (1, 1)
    assert homology(SimplicialComplex.boundary_of_simplex("abcd")).betti == (1, 0, 1)
    rp2 = homology(RP2)
    assert rp2.betti == (1, 0, 0) and rp2.torsion == ((), (2,), ())
    assert rp2.report() == "H_0 = Z\nH_1 = Z/2\nH_2 = 0\n"
    t = homology(TORUS)
    assert TORUS.f_vector() == (7, 21, 14)
    assert t.betti == (1, 2, 1) and not any(t.torsion)
    assert homology(SimplicialComplex("abcd", ["ab", "cd"])).report() == "H_0 = Z^2\nH_1 = 0\n"


@settings(max_examples=60, deadline=None)
@given(complexes_st)
def test_betti_numbers_against_rational_rank(K):
    h = homology(K)
    ranks = {}
    for k in range(1, K.dimension + 1):
        entries, nr, nc = boundary_entries(K, k)
        dense = [[0] * nc for _ in range(nr)]
        for i, j, v in entries:
            dense[i][j] = v
        ranks[k] = rank_over_q(dense)
    for k in range(K.dimension + 1):
        assert h.betti[k] == len(K.faces(k)) - ranks.get(k, 0) - ranks.get(k + 1, 0)
    assert h.euler_characteristic() == K.euler_characteristic()


@settings(max_examples=25, deadline=None)
@given(complexes_st)
def test_homology_invariant_under_subdivision(K):
    a, b = homology(K), homology(barycentric_subdivision(K))
    assert (a.betti, a.torsion) == (b.betti, b.torsion)


def _determinantal_divisors(m):
    rows, cols = len(m), len(m[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = math.gcd(g, round(_det([[m[i][j] for j in c] for i in r])))
        if g == 0:
            break
        out.append(g)
    return out


def _det(a):
    if len(a) == 1:
        return a[0][0]
    return sum((-1) ** j * a[0][j] * _det([row[:j] + row[j + 1:] for row in a[1:]])
               for j in range(len(a)))


@settings(max_examples=150)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_smith_form_against_determinantal_divisors(r, c, data):
    m = [[data.draw(st.integers(-6, 6)) for _ in range(c)] for _ in range(r)]
    d = _determinantal_divisors(m)
    want = [d[0]] + [d[i] // d[i - 1] for i in range(1, len(d))] if d else []
    assert sorted(smith_diagonal(m)) == sorted(want)
    entries = [(i, j, v) for i, row in enumerate(m) for j, v in enumerate(row)]
    assert elementary_divisors(entries, r, c) == sorted(want)


def test_maps():
    P = chain("ab")
    Q = chain("xyz")
    phi = MonotoneMap.build(P, Q, {"a": "x", "b": "z"})
    psi = induced_simplicial_map(phi)
    assert psi.image(("a", "b")) == frozenset({"x", "z"})
    back = induced_poset_map(psi)
    assert back.as_dict()["{a,b}"] == "{x,z}"
    K = SimplicialComplex.boundary_of_simplex("abc")
    with pytest.raises(ComplexError):
        SimplicialMap.build(SimplicialComplex.simplex("abc"), K, {"a": "a", "b": "b", "c": "c"})


def test_json_round_trip_and_validation():
    for K in list(mccord_corpus().values()) + [RP2]:
        assert SimplicialComplex.from_json(K.to_json()) == K
    with pytest.raises(ComplexError):
        SimplicialComplex.from_json('{"vertices": ["a"]}')
    with pytest.raises(ComplexError):
        SimplicialComplex("ab", ["abc"])


def test_dimension_bound():
    with pytest.raises(ComplexError):
        homology(SimplicialComplex.simplex("abcdefgh"), max_dim=6)
