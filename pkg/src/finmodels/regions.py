"""Exact subsets of one-dimensional carriers and of finite point sets.

A :class:`Region` is a finite union of rational intervals, each stored as a
``(lo, hi, lo_closed, hi_closed)`` tuple of :class:`fractions.Fraction`.
Degenerate intervals ``lo == hi`` are singletons and are always closed.
The canonical form (sorted, merged) gives a decidable equality.

A :class:`PointSet` is the analogue for finite metric spaces; its points are
integer indices into the owning space.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Tuple

Component = Tuple[Fraction, Fraction, bool, bool]


def frac(value) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions; floats are refused."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted: %r" % (value,))
    return Fraction(value)


def _normalize(comp) -> Component | None:
    lo, hi, lc, hc = comp
    lo, hi = frac(lo), frac(hi)
    if lo > hi:
        return None
    if lo == hi:
        return (lo, hi, True, True) if (lc and hc) else None
    return (lo, hi, bool(lc), bool(hc))


def _sort_key(c: Component):
    return (c[0], 0 if c[2] else 1, c[1], 0 if c[3] else 1)


def _touches(a: Component, b: Component) -> bool:
    # a starts no later than b
    if a[1] > b[0]:
        return True
    return a[1] == b[0] and (a[3] or b[2])


def canonical(components: Iterable) -> Tuple[Component, ...]:
    comps = sorted((c for c in map(_normalize, components) if c is not None), key=_sort_key)
    out: list[Component] = []
    for c in comps:
        if out and _touches(out[-1], c):
            lo, hi, lc, hc = out[-1]
            if c[0] == lo:
                lc = lc or c[2]
            if c[1] > hi:
                hi, hc = c[1], c[3]
            elif c[1] == hi:
                hc = hc or c[3]
            out[-1] = (lo, hi, lc, hc)
        else:
            out.append(c)
    return tuple(out)


def _meet(a: Component, b: Component) -> Component | None:
    if a[0] > b[0]:
        lo, lc = a[0], a[2]
    elif a[0] < b[0]:
        lo, lc = b[0], b[2]
    else:
        lo, lc = a[0], a[2] and b[2]
    if a[1] < b[1]:
        hi, hc = a[1], a[3]
    elif a[1] > b[1]:
        hi, hc = b[1], b[3]
    else:
        hi, hc = a[1], a[3] and b[3]
    return _normalize((lo, hi, lc, hc))


def _fmt(x: Fraction) -> str:
    return str(x)


class Region:
    """Immutable finite union of rational intervals in canonical form."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable = ()):
        object.__setattr__(self, "components", canonical(components))

    def __setattr__(self, name, value):
        raise AttributeError("Region is immutable")

    # constructors
    @classmethod
    def point(cls, x) -> "Region":
        x = frac(x)
        return cls([(x, x, True, True)])

    @classmethod
    def open(cls, lo, hi) -> "Region":
        return cls([(lo, hi, False, False)])

    @classmethod
    def closed(cls, lo, hi) -> "Region":
        return cls([(lo, hi, True, True)])

    @classmethod
    def interval(cls, lo, hi, lo_closed: bool, hi_closed: bool) -> "Region":
        return cls([(lo, hi, lo_closed, hi_closed)])

    @classmethod
    def empty(cls) -> "Region":
        return cls()

    # set algebra
    def is_empty(self) -> bool:
        return not self.components

    def union(self, other: "Region") -> "Region":
        return Region(self.components + other.components)

    def intersect(self, other: "Region") -> "Region":
        parts = []
        for a in self.components:
            for b in other.components:
                m = _meet(a, b)
                if m is not None:
                    parts.append(m)
        return Region(parts)

    def issubset(self, other: "Region") -> bool:
        return self.intersect(other) == self

    def meets(self, other: "Region") -> bool:
        return any(_meet(a, b) is not None for a in self.components for b in other.components)

    def closure(self) -> "Region":
        return Region((lo, hi, True, True) for lo, hi, _, _ in self.components)

    def contains_point(self, x) -> bool:
        x = frac(x)
        for lo, hi, lc, hc in self.components:
            if (lo < x or (lc and lo == x)) and (x < hi or (hc and x == hi)):
                return True
        return False

    def endpoints(self) -> list[Fraction]:
        pts = set()
        for lo, hi, _, _ in self.components:
            pts.add(lo)
            pts.add(hi)
        return sorted(pts)

    @property
    def lo(self) -> Fraction:
        return self.components[0][0]

    @property
    def hi(self) -> Fraction:
        return self.components[-1][1]

    def sort_key(self):
        return tuple(_sort_key(c) for c in self.components)

    # dunder
    def __eq__(self, other):
        return isinstance(other, Region) and self.components == other.components

    def __hash__(self):
        return hash(("Region", self.components))

    def __bool__(self):
        return bool(self.components)

    def __repr__(self):
        return "Region(%s)" % str(self)

    def __str__(self):
        if not self.components:
            return "∅"
        return " ∪ ".join(_component_str(c) for c in self.components)

    def export_lines(self) -> list[str]:
        """``point p/q`` / ``open p/q r/s`` (plus closed and half-open variants)."""
        out = []
        for lo, hi, lc, hc in self.components:
            if lo == hi:
                out.append("point %s" % _fmt(lo))
            else:
                kind = {(False, False): "open", (True, True): "closed",
                        (True, False): "closed-open", (False, True): "open-closed"}[(lc, hc)]
                out.append("%s %s %s" % (kind, _fmt(lo), _fmt(hi)))
        return out

    @classmethod
    def from_export(cls, parts: Iterable[str]) -> "Region":
        comps = []
        kinds = {"open": (False, False), "closed": (True, True),
                 "closed-open": (True, False), "open-closed": (False, True)}
        for part in parts:
            tok = part.split()
            if tok[0] == "point" and len(tok) == 2:
                x = Fraction(tok[1])
                comps.append((x, x, True, True))
            elif tok[0] in kinds and len(tok) == 3:
                lc, hc = kinds[tok[0]]
                comps.append((Fraction(tok[1]), Fraction(tok[2]), lc, hc))
            else:
                raise ValueError("bad region component %r" % part)
        return cls(comps)


def _component_str(c: Component) -> str:
    lo, hi, lc, hc = c
    if lo == hi:
        return _fmt(lo)
    return "%s%s,%s%s" % ("[" if lc else "(", _fmt(lo), _fmt(hi), "]" if hc else ")")


class PointSet:
    """Subset of a finite metric space, as a frozenset of point indices."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[int] = ()):
        object.__setattr__(self, "points", frozenset(points))

    def __setattr__(self, name, value):
        raise AttributeError("PointSet is immutable")

    def is_empty(self) -> bool:
        return not self.points

    def union(self, other: "PointSet") -> "PointSet":
        return PointSet(self.points | other.points)

    def intersect(self, other: "PointSet") -> "PointSet":
        return PointSet(self.points & other.points)

    def issubset(self, other: "PointSet") -> bool:
        return self.points <= other.points

    def meets(self, other: "PointSet") -> bool:
        return not self.points.isdisjoint(other.points)

    def closure(self) -> "PointSet":
        return self

    def contains_point(self, x: int) -> bool:
        return x in self.points

    def sort_key(self):
        return tuple(sorted(self.points))

    def __iter__(self):
        return iter(sorted(self.points))

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self):
        return hash(("PointSet", self.points))

    def __bool__(self):
        return bool(self.points)

    def __repr__(self):
        return "PointSet(%s)" % sorted(self.points)
