import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from finmodels.batteries import random_pl_map, retraction_stage, two_point
from finmodels.mccord import boundary_entries, chain_map, induced_simplicial_map, order_complex
from finmodels.metric import INTERVAL, FiniteMetricSpace
from finmodels.model import (EMPTY, EXHAUSTIVE, ModelError, ModelIndex, ModelStage,
                             RectangularMapSet, TotalOrderViolation, TruncatedThread, bond,
                             bond_map, cardinality, check_thread, enumerate_W, export_element,
                             import_element, injectivity_witness, interval_W_pattern, model_leq,
                             project, retract, same_element, stage_poset, sweep_order)
from finmodels.plmap import PLMap
from finmodels.posets import is_continuous

maps_st = st.builds(lambda seed, mono: random_pl_map(__import__("random").Random(seed), mono),
                    st.integers(0, 10 ** 6), st.booleans())


def brute_allowed(f, stage):
    """Allowed targets by probing cl(E) at points where f crosses class endpoints."""
    ends = sorted({e for c in stage.qy.classes for e in c.endpoints()})
    probes = set(f.breakpoints())
    for (s0, v0), (s1, v1) in zip(f.points, f.points[1:]):
        for y in ends:
            if v0 != v1 and min(v0, v1) <= y <= max(v0, v1):
                probes.add(s0 + (y - v0) * (s1 - s0) / (v1 - v0))
    out = []
    for E in stage.qx.classes:
        cl = E.closure()
        xs = [x for x in probes | set(cl.endpoints()) if cl.contains_point(x)]
        xs += [(a + b) / 2 for a in xs for b in xs]
        xs = [x for x in xs if cl.contains_point(x)]
        out.append(frozenset(j for j, c in enumerate(stage.qy.classes)
                             if any(c.closure().contains_point(f(x)) for x in xs)))
    return out


def test_worked_example_projection():
    stage = ModelStage.build(INTERVAL, INTERVAL, 1, 1)
    S = project(PLMap.identity(INTERVAL), stage)
    assert [sorted(a) for a in S.allowed] == [[0, 1], [0, 1, 2], [1, 2]]
    assert cardinality(S) == 12
    half = project(PLMap.constant(INTERVAL, INTERVAL, F(1, 2)), stage)
    assert [sorted(a) for a in half.allowed] == [[1], [1], [1]]
    base = PLMap.constant(INTERVAL, INTERVAL, 0, basepoint=True)
    assert project(base, stage) is EMPTY
    with pytest.raises(ModelError):
        project(PLMap.constant(INTERVAL, INTERVAL, 1, basepoint=True), stage)
    assert export_element(EMPTY, stage) == "∅\n"


@settings(max_examples=60, deadline=None)
@given(maps_st, st.integers(1, 4), st.integers(1, 4))
def test_projection_against_crossing_oracle(f, n, m):
    stage = ModelStage.build(INTERVAL, INTERVAL, n, m)
    assert list(project(f, stage).allowed) == brute_allowed(f, stage)


@settings(max_examples=40, deadline=None)
@given(maps_st, st.integers(1, 3), st.integers(1, 3), st.integers(0, 2), st.integers(0, 2))
def test_bond_commutes_with_projection(f, n, m, dn, dm):
    coarse = ModelStage.build(INTERVAL, INTERVAL, n, m)
    fine = ModelStage.build(INTERVAL, INTERVAL, n + dn, m + dm)
    assert same_element(bond(project(f, fine), fine, coarse), project(f, coarse))


@settings(max_examples=40, deadline=None)
@given(maps_st, st.integers(1, 4), st.integers(1, 4))
def test_interval_pattern_holds_on_projections(f, n, m):
    stage = ModelStage.build(INTERVAL, INTERVAL, n, m)
    assert interval_W_pattern(project(f, stage), stage)


def test_pattern_rejects_gaps():
    stage = ModelStage.build(INTERVAL, INTERVAL, 1, 1)
    assert not interval_W_pattern(RectangularMapSet([{0, 2}, {0, 1, 2}, {2}]), stage)
    assert not interval_W_pattern(RectangularMapSet([{0, 1}, {1}, {2}]), stage)


def test_bond_rules():
    coarse = ModelStage.build(INTERVAL, INTERVAL, 1, 1)
    fine = ModelStage.build(INTERVAL, INTERVAL, 2, 2)
    assert bond(EMPTY, fine, coarse) is EMPTY
    with pytest.raises(ModelError):
        bond(coarse.full(), coarse, fine)
    # a general (non-rectangular) set coarsens per class: fine x-classes and
    # y-classes 0, (0,1/2), 1/2, (1/2,1), 1 land in 0, (0,1), (0,1), (0,1), 1
    S = frozenset({(0, 0, 2, 4, 4), (1, 1, 2, 3, 4)})
    assert [sorted(a) for a in bond(S, fine, coarse).allowed] == [[0, 1], [0, 1, 2], [2]]


def test_model_order_is_reverse_inclusion():
    a = RectangularMapSet([{0}, {1}])
    b = RectangularMapSet([{0, 1}, {1}])
    assert model_leq(b, a) and not model_leq(a, b)
    assert model_leq(a, EMPTY) and model_leq(EMPTY, EMPTY)
    assert RectangularMapSet([{0}, set()]) == EMPTY


def test_exhaustive_W_and_retraction():
    stage = retraction_stage()
    assert len(stage.W) == 9 and stage.provenance == "exhaustive"
    for T in stage.W:
        assert same_element(retract(T, stage), T)
    # (0, 0) is the basepoint map, so only ∅ ⊂ {(1, 1)} lie below S
    S = frozenset({(0, 0), (1, 1)})
    assert same_element(retract(S, stage), frozenset({(1, 1)}))
    with pytest.raises(TotalOrderViolation) as info:
        retract(frozenset({(0, 1), (0, 2)}), stage)
    a, b = info.value.pair
    assert cardinality(a) == cardinality(b) == 1
    with pytest.raises(ModelError):
        retract(S, ModelStage.build(stage.X, stage.Y, 1, 1))


def test_exhaustive_enumeration_guards():
    with pytest.raises(ModelError):
        enumerate_W(ModelStage.build(INTERVAL, INTERVAL, 1, 1), EXHAUSTIVE)
    X = two_point()
    with pytest.raises(ModelError):
        enumerate_W(ModelStage.build(X, X, 1, 1), EXHAUSTIVE)


def test_sampled_W_on_interval():
    stage = ModelStage.build(INTERVAL, INTERVAL, 1, 1)
    fam = [PLMap.identity(INTERVAL), PLMap.constant(INTERVAL, INTERVAL, F(1, 2))]
    W = enumerate_W(stage, fam)
    assert W.provenance == "sampled" and len(W.W) == 3
    assert same_element(retract(stage.full(), W), project(fam[0], stage))


@settings(max_examples=25, deadline=None)
@given(maps_st, maps_st)
def test_injectivity_witness_is_first_difference(f, g):
    idx = injectivity_witness(f, g, 16)
    if f == g:
        assert idx is None
        return
    assert idx is not None
    for earlier in sweep_order(16):
        st_ = ModelStage.build(INTERVAL, INTERVAL, earlier.n, earlier.m)
        differ = not same_element(project(f, st_), project(g, st_))
        assert differ == (earlier == idx)
        if differ:
            break


def test_witness_for_the_identity_and_a_constant():
    idx = injectivity_witness(PLMap.identity(INTERVAL), PLMap.constant(INTERVAL, INTERVAL, F(1, 2)), 4)
    assert idx == ModelIndex(1, 1)


def test_indices():
    assert list(sweep_order(2)) == [ModelIndex(1, 1), ModelIndex(1, 2), ModelIndex(2, 1), ModelIndex(2, 2)]
    assert ModelIndex.parse("3,4") == ModelIndex(3, 4) and str(ModelIndex(3, 4)) == "3,4"
    assert ModelIndex(1, 2) <= ModelIndex(2, 2) and not ModelIndex(2, 1) <= ModelIndex(1, 2)
    with pytest.raises(ModelError):
        ModelIndex(0, 1)


def test_threads():
    f = PLMap.pl(INTERVAL, INTERVAL, [(0, F(1, 3)), (1, F(2, 3))])
    thread = TruncatedThread.of_map(f, [ModelIndex(i, i) for i in range(1, 5)])
    assert check_thread(thread)
    bad = TruncatedThread(thread.stages, (thread.elements[0], EMPTY) + thread.elements[2:])
    assert not check_thread(bad)


@settings(max_examples=30, deadline=None)
@given(maps_st, st.integers(1, 3))
def test_element_export_round_trip(f, n):
    stage = ModelStage.build(INTERVAL, INTERVAL, n, n)
    S = project(f, stage)
    assert same_element(import_element(export_element(S, stage), stage), S)


def test_general_element_round_trip():
    stage = retraction_stage()
    S = frozenset({(0, 1), (1, 2)})
    assert import_element(export_element(S, stage), stage) == S


def test_stage_poset_has_empty_maximum():
    X = FiniteMetricSpace.discrete(["x"])
    Y = FiniteMetricSpace.discrete(["y1", "y2"])
    P = stage_poset(ModelStage.build(X, Y, 1, 1))
    assert len(P) == 4 and P.maximal() == ["∅"]
    sinks = {b for _, b in P.hasse_edges()} - {a for a, _ in P.hasse_edges()}
    assert sinks == {"∅"}


def test_bond_maps_induce_chain_maps():
    # two points at distance 1/2: one class at n=1, two at n=2
    X = two_point()
    s11, s12, s22 = (ModelStage.build(X, X, *ix) for ix in [(1, 1), (1, 2), (2, 2)])
    assert (len(s11.qx), len(s22.qx)) == (1, 2)
    P11, P12, P22 = (stage_poset(s) for s in (s11, s12, s22))
    b1 = bond_map(s22, s12, P22, P12)
    b2 = bond_map(s12, s11, P12, P11)
    direct = bond_map(s22, s11, P22, P11)
    assert is_continuous(b1) and is_continuous(b2)
    assert b2.compose(b1).as_dict() == direct.as_dict()
    psi = induced_simplicial_map(b1)
    K, L = psi.source, psi.target
    for k in range(1, min(K.dimension, L.dimension) + 1):
        dK, rK, cK = boundary_entries(K, k)
        dL, rL, cL = boundary_entries(L, k)
        ck, ck1 = chain_map(psi, k), chain_map(psi, k - 1)
        left = _mul(ck1, _sparse(dK))
        right = _mul(_sparse(dL), ck)
        assert left == right


def _sparse(entries):
    out = {}
    for i, j, v in entries:
        out[(i, j)] = out.get((i, j), 0) + v
    return out


def _mul(a, b):
    out = {}
    for (i, k), v in a.items():
        for (k2, j), w in b.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), 0) + v * w
    return {key: v for key, v in out.items() if v}
