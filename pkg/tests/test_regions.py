from fractions import Fraction as F

import pytest
from hypothesis import given

from finmodels.regions import PointSet, Region, frac

from conftest import PROBES, regions_st


def member(comps, x):
    return any((lo < x or (lc and lo == x)) and (x < hi or (hc and x == hi))
               for lo, hi, lc, hc in comps)


@given(regions_st, regions_st)
def test_algebra_agrees_with_pointwise_membership(a, b):
    ra, rb = Region(a), Region(b)
    for x in PROBES:
        assert ra.contains_point(x) == member(a, x)
        assert ra.union(rb).contains_point(x) == (member(a, x) or member(b, x))
        assert ra.intersect(rb).contains_point(x) == (member(a, x) and member(b, x))
    assert ra.meets(rb) == any(member(a, x) and member(b, x) for x in PROBES)
    assert ra.issubset(rb) == all(member(b, x) for x in PROBES if member(a, x))


@given(regions_st)
def test_canonical_form_is_unique(a):
    r = Region(a)
    assert Region(reversed(a)) == r
    assert Region(r.components) == r
    for (_, hi, _, hc), (lo, _, lc, _) in zip(r.components, r.components[1:]):
        assert hi < lo or (hi == lo and not hc and not lc)


@given(regions_st)
def test_export_round_trip(a):
    r = Region(a)
    assert Region.from_export(r.export_lines()) == r


def test_rendering():
    assert str(Region.open(0, F(1, 2))) == "(0,1/2)"
    assert str(Region.point(0)) == "0"
    assert str(Region.interval(0, 1, True, False)) == "[0,1)"
    assert str(Region.open(0, 1).union(Region.point(2))) == "(0,1) ∪ 2"
    assert str(Region.empty()) == "∅"


def test_adjacent_pieces_merge():
    r = Region.open(0, F(1, 2)).union(Region.point(F(1, 2))).union(Region.open(F(1, 2), 1))
    assert r == Region.open(0, 1)
    assert Region.open(0, F(1, 2)).union(Region.open(F(1, 2), 1)) != Region.open(0, 1)


def test_floats_are_refused():
    with pytest.raises(TypeError):
        frac(0.5)
    assert frac("1/3") == F(1, 3)


def test_point_sets():
    a, b = PointSet([0, 1]), PointSet([1, 2])
    assert a.intersect(b) == PointSet([1])
    assert a.meets(b) and not a.issubset(b)
    assert a.closure() == a
