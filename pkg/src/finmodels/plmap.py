"""Piecewise-linear maps between the supported carriers, with exact images.

On one-dimensional domains a map is given by rational breakpoints
``0 = s_0 < ... < s_k = 1`` and values, linear in between. Circle-valued maps
store real lifts; only their values mod 1 matter. Maps out of a finite metric
space are explicit tables.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

from .metric import CircleSpace, FiniteMetricSpace, MetricError, MetricSpace
from .regions import PointSet, Region, frac


class PLMap:
    """Continuous map ``domain -> codomain``; immutable.

    ``basepoint`` marks the distinguished constant map ``C_{y0}``; only a map
    built with that flag projects to the empty model element.
    """

    def __init__(self, domain: MetricSpace, codomain: MetricSpace, *, points=None,
                 table=None, basepoint: bool = False):
        self.domain = domain
        self.codomain = codomain
        self.basepoint = bool(basepoint)
        self.points: tuple = ()
        self.table: tuple = ()
        if isinstance(domain, FiniteMetricSpace):
            if table is None:
                raise MetricError("maps out of a finite space need a table")
            self.table = tuple(self._target(table[lab] if lab in table else table[i])
                               for i, lab in enumerate(domain.labels))
        else:
            if points is None:
                raise MetricError("maps out of a 1-D carrier need breakpoints")
            pts = [(frac(s), self._lift(v)) for s, v in points]
            if len(pts) < 2 or pts[0][0] != 0 or pts[-1][0] != 1:
                raise MetricError("breakpoints must start at 0 and end at 1")
            if any(a[0] >= b[0] for a, b in zip(pts, pts[1:])):
                raise MetricError("breakpoints must be strictly increasing")
            if isinstance(codomain, FiniteMetricSpace):
                if len({v for _, v in pts}) != 1:
                    raise MetricError("a continuous map from a connected carrier "
                                      "to a finite space is constant")
            elif isinstance(domain, CircleSpace):
                gap = pts[-1][1] - pts[0][1]
                if isinstance(codomain, CircleSpace):
                    if gap.denominator != 1:
                        raise MetricError("circle map lift must close up")
                elif gap != 0:
                    raise MetricError("map from the circle must satisfy f(0) = f(1)")
            self.points = tuple(pts)
        if self.basepoint and not self.is_constant():
            raise MetricError("the basepoint map must be constant")

    # construction helpers
    def _lift(self, v):
        if isinstance(self.codomain, FiniteMetricSpace):
            return self.codomain.index(v)
        v = frac(v)
        if not isinstance(self.codomain, CircleSpace) and not 0 <= v <= 1:
            raise MetricError("value %s outside [0,1]" % v)
        return v

    def _target(self, v):
        if isinstance(self.codomain, FiniteMetricSpace):
            return self.codomain.index(v)
        return self._lift(v)

    @classmethod
    def pl(cls, domain, codomain, pairs, basepoint=False) -> "PLMap":
        return cls(domain, codomain, points=pairs, basepoint=basepoint)

    @classmethod
    def from_table(cls, domain, codomain, mapping: Mapping, basepoint=False) -> "PLMap":
        return cls(domain, codomain, table=dict(mapping), basepoint=basepoint)

    @classmethod
    def constant(cls, domain, codomain, value, basepoint=False) -> "PLMap":
        if isinstance(domain, FiniteMetricSpace):
            return cls(domain, codomain, table={lab: value for lab in domain.labels},
                       basepoint=basepoint)
        return cls(domain, codomain, points=[(0, value), (1, value)], basepoint=basepoint)

    @classmethod
    def identity(cls, space) -> "PLMap":
        if isinstance(space, FiniteMetricSpace):
            return cls(space, space, table={lab: lab for lab in space.labels})
        return cls(space, space, points=[(0, 0), (1, 1)])

    # evaluation
    def values(self) -> set:
        if self.table:
            return set(self.table)
        return {self._reduce(v) for _, v in self.points}

    def is_constant(self) -> bool:
        if self.table:
            return len(set(self.table)) == 1
        return len({v for _, v in self.points}) == 1

    def _reduce(self, v):
        return self.codomain.normalize(v) if isinstance(self.codomain, CircleSpace) else v

    def lift(self, s) -> Fraction:
        """Lifted value at ``s`` in ``[0, 1]`` (1-D domains only)."""
        s = frac(s)
        pts = self.points
        for (s0, v0), (s1, v1) in zip(pts, pts[1:]):
            if s0 <= s <= s1:
                return v0 + (v1 - v0) * (s - s0) / (s1 - s0)
        raise MetricError("%s outside [0,1]" % s)

    def __call__(self, x):
        if self.table:
            return self.table[self.domain.index(x)]
        x = self.domain.normalize(x)
        return self._reduce(self.lift(x))

    def breakpoints(self) -> list[Fraction]:
        return [s for s, _ in self.points]

    # images
    def _component_image(self, lo, hi, lc, hc):
        if lo == hi:
            v = self.lift(lo)
            return v, v, True, True
        inner = [s for s in self.breakpoints() if lo < s < hi]
        grid = [lo] + inner + [hi]
        probes = inner + [(a + b) / 2 for a, b in zip(grid, grid[1:])]
        f_lo, f_hi = self.lift(lo), self.lift(hi)
        vals = [self.lift(s) for s in probes]
        vmin = min(vals + [f_lo, f_hi])
        vmax = max(vals + [f_lo, f_hi])

        def attained(target):
            return ((lc and f_lo == target) or (hc and f_hi == target)
                    or any(v == target for v in vals))

        return vmin, vmax, attained(vmin), attained(vmax)

    def image(self, region):
        """Exact image of a region of the domain."""
        if self.table:
            vals = {self.table[i] for i in region.points}
            if isinstance(self.codomain, FiniteMetricSpace):
                return PointSet(vals)
            vals = {self.codomain.normalize(v) for v in vals}
            return Region([(v, v, True, True) for v in vals])
        if isinstance(self.codomain, FiniteMetricSpace):
            return PointSet([self.points[0][1]]) if not region.is_empty() else PointSet()
        out = Region.empty()
        for comp in region.components:
            lo, hi, lc, hc = self._component_image(*comp)
            out = out.union(self.codomain.wrap(lo, hi, lc, hc))
        return out

    def closure_image(self, region):
        """Closure of the image, i.e. the image of the closure."""
        return self.codomain.closure(self.image(self.domain.closure(region)))

    # structure
    def _deg(self) -> Fraction:
        return self.points[-1][1] - self.points[0][1]

    def is_homeomorphism(self) -> bool:
        if self.domain != self.codomain:
            return False
        if self.table:
            return len(set(self.table)) == len(self.table)
        vals = [v for _, v in self.points]
        inc = all(a < b for a, b in zip(vals, vals[1:]))
        dec = all(a > b for a, b in zip(vals, vals[1:]))
        if not (inc or dec):
            return False
        if isinstance(self.domain, CircleSpace):
            return abs(self._deg()) == 1
        return {vals[0], vals[-1]} == {0, 1}

    def lift_eval(self, x) -> Fraction:
        """Lift evaluated on all of R for circle domains (periodic extension)."""
        x = frac(x)
        if not isinstance(self.domain, CircleSpace):
            return self.lift(x)
        k = math.floor(x)
        return self.lift(x - k) + k * self._deg()

    def inverse(self) -> "PLMap":
        if not self.is_homeomorphism():
            raise MetricError("only homeomorphisms are invertible")
        if self.table:
            return PLMap(self.domain, self.domain,
                         table={self.domain.labels[v]: self.domain.labels[i]
                                for i, v in enumerate(self.table)})
        if not isinstance(self.domain, CircleSpace):
            return PLMap(self.domain, self.domain,
                         points=sorted((v, s) for s, v in self.points))
        deg = self._deg()
        pairs = {}
        for k in range(-3, 4):
            for s, v in self.points:
                pairs[v + k * deg] = s + k
        ys = sorted(pairs)
        start = self._inverse_at(0, ys, pairs)
        pts = [(Fraction(0), start)]
        for y in ys:
            if 0 < y < 1:
                pts.append((y, pairs[y]))
        pts.append((Fraction(1), self._inverse_at(1, ys, pairs)))
        return PLMap(self.domain, self.domain, points=pts)

    @staticmethod
    def _inverse_at(y, ys, pairs):
        for a, b in zip(ys, ys[1:]):
            if a <= y <= b:
                xa, xb = pairs[a], pairs[b]
                return xa + (xb - xa) * (y - a) / (b - a)
        raise MetricError("inverse sampling failed")

    def compose(self, inner: "PLMap") -> "PLMap":
        """``self ∘ inner``."""
        if inner.codomain != self.domain:
            raise MetricError("composition domain mismatch")
        if inner.table:
            return PLMap(inner.domain, self.codomain,
                         table={lab: self._label_value(self(v))
                                for lab, v in zip(inner.domain.labels, inner.table)})
        if self.table or isinstance(self.codomain, FiniteMetricSpace):
            raise MetricError("unsupported composition")
        cuts = set(inner.breakpoints())
        outer_bps = self._breaks_on_R(inner)
        for (s0, v0), (s1, v1) in zip(inner.points, inner.points[1:]):
            if v0 == v1:
                continue
            for b in outer_bps:
                if min(v0, v1) < b < max(v0, v1):
                    cuts.add(s0 + (b - v0) * (s1 - s0) / (v1 - v0))
        pts = [(s, self.lift_eval(inner.lift(s))) for s in sorted(cuts)]
        return PLMap(inner.domain, self.codomain, points=pts)

    def _label_value(self, v):
        if isinstance(self.codomain, FiniteMetricSpace):
            return self.codomain.labels[v]
        return v

    def _breaks_on_R(self, inner: "PLMap") -> list[Fraction]:
        bps = self.breakpoints()
        if not isinstance(self.domain, CircleSpace):
            return bps
        vals = [v for _, v in inner.points]
        lo, hi = math.floor(min(vals)) - 1, math.ceil(max(vals)) + 1
        return [b + k for k in range(lo, hi + 1) for b in bps]

    def sup_distance(self, other: "PLMap") -> Fraction:
        if self.domain != other.domain or self.codomain != other.codomain:
            raise MetricError("sup distance needs matching domains")
        if self.table:
            return max(self.codomain.dist(a, b) for a, b in zip(self.table, other.table))
        grid = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        return max(self.codomain.dist(self.lift(s), other.lift(s)) for s in grid)

    def key(self):
        if self.table:
            return ("table", self.table)
        # canonical: drop collinear interior breakpoints
        pts = list(self.points)
        keep = [pts[0]]
        for p, nxt in zip(pts[1:], pts[2:]):
            a = keep[-1]
            if (p[1] - a[1]) * (nxt[0] - a[0]) != (nxt[1] - a[1]) * (p[0] - a[0]):
                keep.append(p)
        keep.append(pts[-1])
        if isinstance(self.codomain, CircleSpace):
            shift = keep[0][1] - self.codomain.normalize(keep[0][1])
            keep = [(s, v - shift) for s, v in keep]
        return ("pl", tuple(keep))

    def __eq__(self, other):
        return (isinstance(other, PLMap) and self.domain == other.domain
                and self.codomain == other.codomain and self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def differs_at(self, other: "PLMap"):
        """A point where the two maps take different values, or None."""
        if self.table:
            for i, (a, b) in enumerate(zip(self.table, other.table)):
                if a != b:
                    return self.domain.labels[i]
            return None
        grid = sorted(set(self.breakpoints()) | set(other.breakpoints()))
        for s in grid:
            if self(s) != other(s):
                return s
        return None

    def export(self) -> str:
        if self.basepoint:
            v = self.table[0] if self.table else self.points[0][1]
            return "basepoint: %s" % (self._label_value(v),)
        if self.table:
            return "table: " + " ".join(
                "%s→%s" % (lab, self._label_value(v)) for lab, v in zip(self.domain.labels, self.table))
        if self.is_constant() and len(self.points) == 2:
            return "const: %s" % (self.points[0][1],)
        return "pl: " + " ".join("(%s,%s)" % (s, v) for s, v in self.points)

    def __repr__(self):
        return "PLMap<%s>" % self.export()


def interpolate(a: PLMap, b: PLMap, weight) -> PLMap:
    """Pointwise convex combination ``(1-w) a + w b`` of two 1-D maps (on lifts)."""
    w = frac(weight)
    if a.table or b.table:
        raise MetricError("tables cannot be interpolated")
    grid = sorted(set(a.breakpoints()) | set(b.breakpoints()))
    return PLMap(a.domain, a.codomain,
                 points=[(s, (1 - w) * a.lift(s) + w * b.lift(s)) for s in grid])


def pl_from_values(domain, codomain, values: Sequence, basepoint=False) -> PLMap:
    """Uniformly spaced breakpoints with the given values."""
    k = len(values) - 1
    return PLMap(domain, codomain, points=[(Fraction(i, k), v) for i, v in enumerate(values)],
                 basepoint=basepoint)
