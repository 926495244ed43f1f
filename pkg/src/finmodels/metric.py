"""Compact metric spaces with exact covers, cover quotients and bonding maps.

Three carriers are supported: the unit interval, the circle R/Z with the arc
metric (coordinates in ``[0, 1)``), and finite metric spaces given by a
rational distance matrix. Everything is exact rational arithmetic.

Balls are open, ``B(x, r) = {y : d(x, y) < r}``. The cover ``W_n`` is the union
of the ball families ``U_1, ..., U_n`` where ``U_i`` has radius ``1/i``; ball
centers are ``k/i`` on the interval, ``k/(2i)`` on the circle and every point of
a finite space.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .regions import PointSet, Region, frac

HALF = Fraction(1, 2)


class MetricError(ValueError):
    """Invalid metric data or an operation outside its domain."""


class NotNestedError(MetricError):
    """A finer class is not contained in a single coarser class."""


class IncompatibleThreadError(MetricError):
    """A chain of classes does not map onto itself under bonding."""


# ---------------------------------------------------------------------------
# spaces


class MetricSpace:
    kind: str = ""

    def carrier(self):
        raise NotImplementedError

    def __hash__(self):
        return hash(self.key())

    def __eq__(self, other):
        return isinstance(other, MetricSpace) and self.key() == other.key()

    def key(self):
        raise NotImplementedError


class IntervalSpace(MetricSpace):
    """The unit interval ``[0, 1]`` with the usual metric."""

    kind = "interval"

    def key(self):
        return ("interval",)

    def __repr__(self):
        return "IntervalSpace()"

    def carrier(self) -> Region:
        return Region.closed(0, 1)

    def normalize(self, x) -> Fraction:
        x = frac(x)
        if not 0 <= x <= 1:
            raise MetricError("%s is outside [0,1]" % x)
        return x

    def contains(self, x) -> bool:
        return 0 <= frac(x) <= 1

    def centers(self, i: int) -> list[Fraction]:
        return [Fraction(k, i) for k in range(i + 1)]

    def ball(self, center, radius) -> Region:
        lo, hi = center - radius, center + radius
        lc = hc = False
        if lo < 0:
            lo, lc = Fraction(0), True
        if hi > 1:
            hi, hc = Fraction(1), True
        return Region.interval(lo, hi, lc, hc)

    def wrap(self, lo, hi, lc, hc) -> Region:
        return Region.interval(lo, hi, lc, hc)

    def closure(self, region: Region) -> Region:
        return region.closure()

    def point_region(self, x) -> Region:
        return Region.point(self.normalize(x))

    def dist(self, x, y) -> Fraction:
        return abs(frac(x) - frac(y))

    def _probe_points(self, a: Region, b: Region) -> list[Fraction]:
        eb = b.endpoints()
        cands = set(a.endpoints())
        cands.update((p + q) / 2 for p in eb for q in eb)
        return [c for c in cands if a.contains_point(c)]

    def point_to_set(self, x, closed: Region) -> Fraction:
        if closed.contains_point(x):
            return Fraction(0)
        return min(self.dist(x, e) for e in closed.endpoints())

    def diameter(self, region: Region) -> Fraction:
        if region.is_empty():
            raise MetricError("diameter of an empty region")
        return region.hi - region.lo


class CircleSpace(IntervalSpace):
    """The circle ``R/Z`` with the arc metric, coordinates in ``[0, 1)``."""

    kind = "circle"

    def key(self):
        return ("circle",)

    def __repr__(self):
        return "CircleSpace()"

    def carrier(self) -> Region:
        return Region.interval(0, 1, True, False)

    def normalize(self, x) -> Fraction:
        x = frac(x)
        return x - (x.numerator // x.denominator)

    def contains(self, x) -> bool:
        return True

    def centers(self, i: int) -> list[Fraction]:
        return [Fraction(k, 2 * i) for k in range(2 * i)]

    def wrap(self, lo, hi, lc, hc) -> Region:
        """Image in ``[0, 1)`` of the lifted interval with the given ends."""
        lo, hi = frac(lo), frac(hi)
        length = hi - lo
        if length > 1 or (length == 1 and (lc or hc)):
            return self.carrier()
        if length == 1:
            p = self.normalize(lo)
            return self.carrier().intersect(
                Region([(0, p, True, False), (p, 1, False, False)]))
        shift = lo - self.normalize(lo)
        lo, hi = lo - shift, hi - shift
        if hi < 1:
            return Region.interval(lo, hi, lc, hc)
        if hi == 1:
            parts = [(lo, 1, lc, False)]
            if hc:
                parts.append((0, 0, True, True))
            return Region(parts)
        return Region([(lo, 1, lc, False), (0, hi - 1, True, hc)])

    def ball(self, center, radius) -> Region:
        return self.wrap(center - radius, center + radius, False, False)

    def closure(self, region: Region) -> Region:
        comps = []
        for lo, hi, _, _ in region.components:
            comps.append((lo, hi, True, True))
            if hi == 1:
                comps.append((0, 0, True, True))
        return Region(comps).intersect(self.carrier())

    def dist(self, x, y) -> Fraction:
        d = self.normalize(frac(x) - frac(y))
        return min(d, 1 - d)

    def _probe_points(self, a: Region, b: Region) -> list[Fraction]:
        eb = b.endpoints()
        cands = set(a.endpoints())
        for p in eb:
            cands.add(self.normalize(p + HALF))
            for q in eb:
                cands.add(self.normalize((p + q) / 2))
                cands.add(self.normalize((p + q + 1) / 2))
        return [c for c in cands if a.contains_point(self.normalize(c))]

    def point_to_set(self, x, closed: Region) -> Fraction:
        if closed.contains_point(self.normalize(x)):
            return Fraction(0)
        return min(self.dist(x, e) for e in closed.endpoints())

    def diameter(self, region: Region) -> Fraction:
        if region.is_empty():
            raise MetricError("diameter of an empty region")
        closed = self.closure(region)
        cands = set(closed.endpoints())
        cands.update(self.normalize(e + HALF) for e in list(cands))
        cands = [c for c in cands if closed.contains_point(self.normalize(c))]
        return max(self.dist(p, q) for p in cands for q in cands)


class FiniteMetricSpace(MetricSpace):
    """Labelled finite metric space with an exact rational distance matrix."""

    kind = "finite_metric"

    def __init__(self, labels: Sequence[str], matrix):
        labels = [str(x) for x in labels]
        if len(set(labels)) != len(labels):
            raise MetricError("duplicate point labels")
        n = len(labels)
        if n == 0:
            raise MetricError("empty metric space")
        rows = [[frac(v) for v in row] for row in matrix]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise MetricError("distance matrix must be %dx%d" % (n, n))
        for i in range(n):
            if rows[i][i] != 0:
                raise MetricError("nonzero diagonal at %s" % labels[i])
            for j in range(n):
                if rows[i][j] != rows[j][i]:
                    raise MetricError("asymmetric distance %s,%s" % (labels[i], labels[j]))
                if i != j and rows[i][j] <= 0:
                    raise MetricError("nonpositive distance %s,%s" % (labels[i], labels[j]))
        for i, j, k in itertools.product(range(n), repeat=3):
            if rows[i][k] > rows[i][j] + rows[j][k]:
                raise MetricError("triangle inequality fails at %s,%s,%s"
                                  % (labels[i], labels[j], labels[k]))
        self.labels = tuple(labels)
        self.matrix = tuple(tuple(r) for r in rows)
        self._index = {lab: i for i, lab in enumerate(labels)}

    @classmethod
    def discrete(cls, labels: Sequence[str], distance=3) -> "FiniteMetricSpace":
        n = len(labels)
        return cls(labels, [[0 if i == j else distance for j in range(n)] for i in range(n)])

    def key(self):
        return ("finite", self.labels, self.matrix)

    def __repr__(self):
        return "FiniteMetricSpace(%r)" % (list(self.labels),)

    def __len__(self):
        return len(self.labels)

    def index(self, point) -> int:
        if isinstance(point, int) and 0 <= point < len(self.labels):
            return point
        try:
            return self._index[str(point)]
        except KeyError:
            raise MetricError("unknown point %r" % (point,)) from None

    def normalize(self, x) -> int:
        return self.index(x)

    def contains(self, x) -> bool:
        try:
            self.index(x)
        except MetricError:
            return False
        return True

    def carrier(self) -> PointSet:
        return PointSet(range(len(self.labels)))

    def centers(self, i: int) -> list[int]:
        return list(range(len(self.labels)))

    def ball(self, center, radius) -> PointSet:
        c = self.index(center)
        return PointSet(j for j in range(len(self.labels)) if self.matrix[c][j] < radius)

    def closure(self, region: PointSet) -> PointSet:
        return region

    def point_region(self, x) -> PointSet:
        return PointSet([self.index(x)])

    def dist(self, x, y) -> Fraction:
        return self.matrix[self.index(x)][self.index(y)]

    def point_to_set(self, x, closed: PointSet) -> Fraction:
        return min(self.matrix[x][j] for j in closed.points)

    def _probe_points(self, a: PointSet, b: PointSet):
        return sorted(a.points)

    def diameter(self, region: PointSet) -> Fraction:
        if region.is_empty():
            raise MetricError("diameter of an empty region")
        return max(self.matrix[i][j] for i in region.points for j in region.points)

    def label_of(self, region: PointSet) -> str:
        names = [self.labels[i] for i in sorted(region.points)]
        return names[0] if len(names) == 1 else "{" + ",".join(names) + "}"


INTERVAL = IntervalSpace()
CIRCLE = CircleSpace()


# ---------------------------------------------------------------------------
# distances


def set_distance(a, b, mode: str = "inf", space: MetricSpace | None = None) -> Fraction:
    """Exact ``inf`` or ``hausdorff`` distance between the closures of two sets.

    ``space`` defaults to the unit interval for :class:`Region` arguments and is
    required for :class:`PointSet` arguments.
    """
    if space is None:
        if isinstance(a, PointSet):
            raise MetricError("PointSet distances need the owning space")
        space = INTERVAL
    if a.is_empty() or b.is_empty():
        raise MetricError("distance to an empty set")
    ca, cb = space.closure(a), space.closure(b)
    if mode == "inf":
        if ca.meets(cb):
            return Fraction(0)
        if isinstance(ca, PointSet):
            return min(space.matrix[i][j] for i in ca.points for j in cb.points)
        return min(space.dist(p, q) for p in ca.endpoints() for q in cb.endpoints())
    if mode == "hausdorff":
        return max(_directed(space, ca, cb), _directed(space, cb, ca))
    raise MetricError("unknown distance mode %r" % (mode,))


def _directed(space, ca, cb) -> Fraction:
    return max(space.point_to_set(x, cb) for x in space._probe_points(ca, cb))


# ---------------------------------------------------------------------------
# covers and quotients


@dataclass(frozen=True)
class Cover:
    space: MetricSpace
    n: int
    members: tuple
    radius: Fraction = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(1, self.n))

    def covers_carrier(self) -> bool:
        acc = None
        for m in self.members:
            acc = m if acc is None else acc.union(m)
        return acc is not None and acc == self.space.carrier()


@lru_cache(maxsize=None)
def build_cover(space: MetricSpace, n: int) -> Cover:
    """The cover ``W_n``: all balls of radius ``1/i`` for ``i = 1..n``, deduplicated."""
    if n < 1:
        raise MetricError("cover index must be positive")
    members: list = []
    seen = set()
    for i in range(1, n + 1):
        r = Fraction(1, i)
        for c in space.centers(i):
            b = space.ball(c, r)
            if b not in seen:
                seen.add(b)
                members.append(b)
    cover = Cover(space, n, tuple(members))
    if not cover.covers_carrier():
        raise MetricError("cover does not cover the carrier")
    return cover


def minimal_cover_intersection(cover: Cover, x):
    """Intersection of all cover members containing ``x``."""
    space = cover.space
    if not space.contains(x):
        raise MetricError("point %r is outside the carrier" % (x,))
    x = space.normalize(x)
    acc = None
    for m in cover.members:
        if m.contains_point(x):
            acc = m if acc is None else acc.intersect(m)
    return acc


@dataclass(frozen=True)
class QuotientSpace:
    space: MetricSpace
    n: int
    classes: tuple

    def __len__(self):
        return len(self.classes)

    def class_of(self, x) -> int:
        x = self.space.normalize(x)
        for i, c in enumerate(self.classes):
            if c.contains_point(x):
                return i
        raise MetricError("point %r not in any class" % (x,))

    def closures(self) -> tuple:
        return tuple(self.space.closure(c) for c in self.classes)

    def label(self, i: int) -> str:
        c = self.classes[i]
        if isinstance(c, PointSet):
            return self.space.label_of(c)
        return str(c)

    def labels(self) -> list[str]:
        return [self.label(i) for i in range(len(self.classes))]

    def export(self) -> str:
        lines = []
        for c in self.classes:
            if isinstance(c, PointSet):
                lines.append("points " + " ".join(self.space.labels[i] for i in sorted(c.points)))
            else:
                lines.append(" ; ".join(c.export_lines()))
        return "\n".join(lines) + "\n"


def _pieces(space, cover) -> list:
    if isinstance(space, FiniteMetricSpace):
        return [(PointSet([i]), i) for i in range(len(space))]
    cuts = {Fraction(0)}
    if space.kind == "interval":
        cuts.add(Fraction(1))
    for m in cover.members:
        for e in m.endpoints():
            if space.kind == "circle":
                e = space.normalize(e)
            cuts.add(e)
    cuts = sorted(cuts)
    pieces = []
    for i, c in enumerate(cuts):
        pieces.append((Region.point(c), c))
        nxt = cuts[i + 1] if i + 1 < len(cuts) else (Fraction(1) if space.kind == "circle" else None)
        if nxt is not None:
            pieces.append((Region.open(c, nxt), (c + nxt) / 2))
    return pieces


@lru_cache(maxsize=None)
def quotient(space: MetricSpace, cover: Cover | int) -> QuotientSpace:
    """Partition of the carrier into classes of equal minimal cover intersection."""
    if isinstance(cover, int):
        cover = build_cover(space, cover)
    if cover.space != space:
        raise MetricError("cover was built over a different space")
    groups: dict = {}
    for piece, rep in _pieces(space, cover):
        key = minimal_cover_intersection(cover, rep)
        groups[key] = piece if key not in groups else groups[key].union(piece)
    classes = sorted(groups.values(), key=lambda r: r.sort_key())
    return QuotientSpace(space, cover.n, tuple(classes))


@dataclass(frozen=True)
class ClassMap:
    source: QuotientSpace
    target: QuotientSpace
    mapping: tuple

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def fiber(self, j: int) -> tuple:
        return tuple(i for i, t in enumerate(self.mapping) if t == j)


@lru_cache(maxsize=None)
def bonding_projection(finer: QuotientSpace, coarser: QuotientSpace) -> ClassMap:
    """Send each class of the finer quotient to the coarser class containing it."""
    if finer.space != coarser.space:
        raise MetricError("quotients of different spaces")
    if finer.n < coarser.n:
        raise MetricError("finer cover index %d is below %d" % (finer.n, coarser.n))
    mapping = []
    for i, cls in enumerate(finer.classes):
        hits = [j for j, big in enumerate(coarser.classes) if cls.issubset(big)]
        if len(hits) != 1:
            raise NotNestedError("class %s lies in no single coarser class" % finer.label(i))
        mapping.append(hits[0])
    return ClassMap(finer, coarser, tuple(mapping))


def thread_intersection(chain):
    """Intersect the closures of a compatible chain of classes.

    ``chain`` is a list of ``(QuotientSpace, class_index)`` with increasing
    cover index. Returns ``(region, diameter)``.
    """
    if not chain:
        raise MetricError("empty chain")
    for (q0, c0), (q1, c1) in zip(chain, chain[1:]):
        if q1.n < q0.n:
            raise IncompatibleThreadError("cover indices must increase")
        if bonding_projection(q1, q0)(c1) != c0:
            raise IncompatibleThreadError(
                "class %s at n=%d does not map to %s" % (q1.label(c1), q1.n, q0.label(c0)))
    space = chain[0][0].space
    acc = None
    for q, c in chain:
        closed = space.closure(q.classes[c])
        acc = closed if acc is None else acc.intersect(closed)
    return acc, space.diameter(acc)
