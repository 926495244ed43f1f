from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from finmodels.metric import CIRCLE, INTERVAL, FiniteMetricSpace, MetricError
from finmodels.plmap import PLMap, interpolate, pl_from_values
from finmodels.regions import Region

from conftest import regions_st

values_st = st.lists(st.integers(0, 8).map(lambda k: F(k, 8)), min_size=2, max_size=5)
FINE = [F(k, 64) for k in range(65)]


@st.composite
def homeomorphisms(draw):
    k = draw(st.integers(1, 4))
    inner = sorted(draw(st.sets(st.integers(1, 15), min_size=k - 1, max_size=k - 1)))
    vals = [F(0)] + [F(v, 16) for v in inner] + [F(1)]
    pts = [(F(i, k), v) for i, v in enumerate(vals)]
    if draw(st.booleans()):
        pts = [(s, 1 - v) for s, v in pts]
    return PLMap.pl(INTERVAL, INTERVAL, pts)


@given(values_st, regions_st)
def test_image_contains_samples_and_has_exact_hull(values, comps):
    f = pl_from_values(INTERVAL, INTERVAL, values)
    r = Region(comps)
    img = f.image(r)
    for x in FINE:
        if r.contains_point(x):
            assert img.contains_point(f(x))
    for lo, hi, _, _ in r.components:
        grid = [x for x in FINE + f.breakpoints() if lo <= x <= hi] + [lo, hi]
        piece = f.image(Region.closed(lo, hi))
        assert piece == Region.closed(min(f(x) for x in grid), max(f(x) for x in grid))


def test_open_ends_of_images():
    f = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), 1), (1, 0)])
    assert f.image(Region.open(0, 1)) == Region.interval(0, 1, False, True)
    assert f.image(Region.open(0, F(1, 2))) == Region.open(0, 1)
    g = PLMap.constant(INTERVAL, INTERVAL, F(1, 3))
    assert g.image(Region.open(0, 1)) == Region.point(F(1, 3))


@given(homeomorphisms(), homeomorphisms())
def test_inverse_and_compose(f, g):
    assert f.is_homeomorphism()
    inv = f.inverse()
    assert inv.compose(f) == PLMap.identity(INTERVAL)
    assert f.compose(inv) == PLMap.identity(INTERVAL)
    h = g.compose(f)
    for x in FINE[::4]:
        assert h(x) == g(f(x))


def test_circle_maps():
    rot = PLMap.pl(CIRCLE, CIRCLE, [(0, F(1, 3)), (1, F(4, 3))])
    assert rot.is_homeomorphism() and not rot.is_constant()
    assert rot(F(5, 6)) == F(1, 6)
    assert rot.export() == "pl: (0,1/3) (1,4/3)"
    back = rot.inverse()
    assert back.compose(rot) == PLMap.identity(CIRCLE)
    assert rot.image(Region.open(F(1, 2), F(5, 6))) == Region.interval(F(5, 6), 1, False, False) \
        .union(Region.interval(0, F(1, 6), True, False))
    with pytest.raises(MetricError):
        PLMap.pl(CIRCLE, CIRCLE, [(0, 0), (1, F(1, 2))])


def test_key_drops_collinear_breakpoints():
    a = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), F(1, 2)), (1, 1)])
    assert a == PLMap.identity(INTERVAL) and hash(a) == hash(PLMap.identity(INTERVAL))


def test_tables_and_validation():
    X = FiniteMetricSpace.discrete(["a", "b"])
    Y = FiniteMetricSpace.discrete(["p", "q", "r"])
    f = PLMap.from_table(X, Y, {"a": "q", "b": "r"})
    assert f("a") == 1 and f.export() == "table: a→q b→r"
    with pytest.raises(MetricError):
        PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (1, 2)])
    with pytest.raises(MetricError):
        PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (0, 1), (1, 1)])
    with pytest.raises(MetricError):
        PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (1, 1)], basepoint=True)
    with pytest.raises(MetricError):
        PLMap.pl(INTERVAL, Y, [(0, "p"), (1, "q")])


def test_interpolation_and_distances():
    f = PLMap.identity(INTERVAL)
    g = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), F(1, 4)), (1, 1)])
    mid = interpolate(f, g, F(1, 2))
    assert mid(F(1, 2)) == F(3, 8)
    assert f.sup_distance(g) == F(1, 4)
    assert f.differs_at(g) == F(1, 2) and f.differs_at(f) is None
