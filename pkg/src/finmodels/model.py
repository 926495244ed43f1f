"""Finite model stages of a mapping space ``Y^X``.

A stage at index ``(n, m)`` is the power set of the set of class assignments
``X_n -> Y_m`` (``X_n``, ``Y_m`` the cover quotients), ordered by reverse
inclusion so that the empty set is the maximum. Continuous maps project into a
stage, stages are bonded by coarsening, and a computed image ``W`` supports a
retraction.

Elements are either :class:`RectangularMapSet` (a product of per-class allowed
sets, the form every projection and bond produces) or a plain ``frozenset`` of
assignment tuples for arbitrary subsets.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

from .metric import (FiniteMetricSpace, IntervalSpace, MetricSpace, QuotientSpace,
                     bonding_projection, quotient)
from .plmap import PLMap
from .posets import FinitePoset, MonotoneMap

EXHAUSTIVE = "exhaustive"
EXPANSION_BOUND = 10 ** 6


class ModelError(ValueError):
    pass


class TotalOrderViolation(ModelError):
    """Two members of ``2^S ∩ W`` are incomparable under inclusion."""

    def __init__(self, subject, first, second):
        self.subject = subject
        self.pair = (first, second)
        super().__init__("2^S ∩ W is not totally ordered: %r and %r are incomparable"
                         % (first, second))


@total_ordering
@dataclass(frozen=True)
class ModelIndex:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ModelError("model indices must be positive")

    def __le__(self, other: "ModelIndex") -> bool:
        return self.n <= other.n and self.m <= other.m

    def __lt__(self, other: "ModelIndex") -> bool:
        return self <= other and self != other

    def __str__(self):
        return "%d,%d" % (self.n, self.m)

    @classmethod
    def parse(cls, text: str) -> "ModelIndex":
        n, m = text.split(",")
        return cls(int(n), int(m))


def sweep_order(limit: int):
    """Indices ``(n, m) <= (limit, limit)`` by ``n + m``, then ``n``."""
    for total in range(2, 2 * limit + 1):
        for n in range(max(1, total - limit), min(limit, total - 1) + 1):
            yield ModelIndex(n, total - n)


# ---------------------------------------------------------------------------
# elements


class RectangularMapSet:
    """All assignments ``g`` with ``g(E) ∈ allowed[E]``; ``allowed=None`` is ∅."""

    __slots__ = ("allowed",)

    def __init__(self, allowed: Iterable[Iterable[int]] | None):
        if allowed is not None:
            allowed = tuple(frozenset(a) for a in allowed)
            if any(not a for a in allowed):
                allowed = None
        object.__setattr__(self, "allowed", allowed)

    def __setattr__(self, name, value):
        raise AttributeError("RectangularMapSet is immutable")

    def is_empty(self) -> bool:
        return self.allowed is None

    def cardinality(self) -> int:
        return 0 if self.allowed is None else math.prod(len(a) for a in self.allowed)

    def __len__(self):
        return self.cardinality()

    def __contains__(self, g) -> bool:
        return self.allowed is not None and len(g) == len(self.allowed) and all(
            v in a for v, a in zip(g, self.allowed))

    def __iter__(self):
        if self.allowed is None:
            return iter(())
        return itertools.product(*(sorted(a) for a in self.allowed))

    def expand(self, bound: int = EXPANSION_BOUND) -> frozenset:
        if self.cardinality() > bound:
            raise ModelError("expansion of %d selections exceeds the bound %d"
                             % (self.cardinality(), bound))
        return frozenset(self)

    def __eq__(self, other):
        if isinstance(other, RectangularMapSet):
            return self.allowed == other.allowed
        if isinstance(other, frozenset):
            return self.cardinality() == len(other) and all(g in self for g in other)
        return NotImplemented

    def __hash__(self):
        return hash(self.expand()) if self.cardinality() <= 4096 else hash(self.allowed)

    def __repr__(self):
        if self.allowed is None:
            return "RectangularMapSet(∅)"
        return "RectangularMapSet(%s)" % [sorted(a) for a in self.allowed]


EMPTY = RectangularMapSet(None)


def rectangular_hull(elements: frozenset, width: int) -> RectangularMapSet:
    """Smallest rectangular set containing the given assignments."""
    if not elements:
        return EMPTY
    return RectangularMapSet([{g[i] for g in elements} for i in range(width)])


def is_rectangular(element) -> bool:
    if isinstance(element, RectangularMapSet):
        return True
    if not element:
        return True
    width = len(next(iter(element)))
    return rectangular_hull(element, width).cardinality() == len(element)


def cardinality(element) -> int:
    return element.cardinality() if isinstance(element, RectangularMapSet) else len(element)


def is_subset(a, b) -> bool:
    """``a ⊆ b`` for any mix of rectangular and explicit elements."""
    if isinstance(a, RectangularMapSet) and isinstance(b, RectangularMapSet):
        if a.allowed is None:
            return True
        if b.allowed is None:
            return False
        return all(x <= y for x, y in zip(a.allowed, b.allowed))
    if isinstance(a, RectangularMapSet):
        return cardinality(a) <= cardinality(b) and all(g in b for g in a)
    return all(g in b for g in a)


def same_element(a, b) -> bool:
    return cardinality(a) == cardinality(b) and is_subset(a, b)


def model_leq(t, s) -> bool:
    """Stage order: ``t <= s`` iff ``s ⊆ t``; the empty set is the maximum."""
    return is_subset(s, t)


# ---------------------------------------------------------------------------
# stages


@dataclass(frozen=True)
class ModelStage:
    X: MetricSpace
    Y: MetricSpace
    index: ModelIndex
    qx: QuotientSpace
    qy: QuotientSpace
    y0: object
    W: tuple | None = None
    provenance: str | None = None

    @classmethod
    def build(cls, X: MetricSpace, Y: MetricSpace, n: int, m: int, y0=None) -> "ModelStage":
        return _build_stage(X, Y, n, m, default_basepoint(Y) if y0 is None else Y.normalize(y0))

    @property
    def width(self) -> int:
        return len(self.qx)

    def assignment_count(self) -> int:
        return len(self.qy) ** len(self.qx)

    def full(self) -> RectangularMapSet:
        return RectangularMapSet([range(len(self.qy))] * len(self.qx))

    def assignments(self) -> list[tuple]:
        if self.assignment_count() > EXPANSION_BOUND:
            raise ModelError("stage has too many assignments to enumerate")
        return list(itertools.product(range(len(self.qy)), repeat=len(self.qx)))

    def assignment_label(self, g: Sequence[int]) -> str:
        return "[" + " ".join(self.qy.label(j) for j in g) + "]"

    def element_label(self, element) -> str:
        if cardinality(element) == 0:
            return "∅"
        gs = sorted(element) if not isinstance(element, RectangularMapSet) else list(element)
        return "{" + ", ".join(self.assignment_label(g) for g in sorted(gs)) + "}"

    def with_W(self, W: Iterable, provenance: str) -> "ModelStage":
        uniq: list = []
        for T in W:
            if not any(same_element(T, U) for U in uniq):
                uniq.append(T)
        if not any(cardinality(T) == 0 for T in uniq):
            uniq.append(EMPTY)
        uniq.sort(key=lambda T: (cardinality(T), self.element_label(T)))
        return replace(self, W=tuple(uniq), provenance=provenance)

    def check_same(self, other: "ModelStage"):
        if (self.X, self.Y, self.index, self.y0) != (other.X, other.Y, other.index, other.y0):
            raise ModelError("elements come from different stages")


def default_basepoint(Y: MetricSpace):
    return 0 if isinstance(Y, FiniteMetricSpace) else Y.normalize(0)


@lru_cache(maxsize=None)
def _build_stage(X, Y, n, m, y0) -> ModelStage:
    return ModelStage(X, Y, ModelIndex(n, m), quotient(X, n), quotient(Y, m), y0)


@lru_cache(maxsize=None)
def _y_closures(qy: QuotientSpace) -> tuple:
    return qy.closures()


def project(f: PLMap, stage: ModelStage) -> RectangularMapSet:
    """Allowed sets: target classes whose closure meets the closure of ``f(E)``."""
    if f.domain != stage.X or f.codomain != stage.Y:
        raise ModelError("map %r does not go from %r to %r" % (f, stage.X, stage.Y))
    if f.basepoint:
        value = next(iter(f.values()))
        if value != stage.y0:
            raise ModelError("basepoint map at %r but the stage basepoint is %r"
                             % (value, stage.y0))
        return EMPTY
    ycl = _y_closures(stage.qy)
    allowed = []
    for cls in stage.qx.classes:
        img = f.closure_image(cls)
        allowed.append(frozenset(j for j, fc in enumerate(ycl) if img.meets(fc)))
    return RectangularMapSet(allowed)


def bond(S, finer: ModelStage, coarser: ModelStage) -> RectangularMapSet:
    """Coarsen an element of ``finer`` to ``coarser``."""
    if (finer.X, finer.Y) != (coarser.X, coarser.Y):
        raise ModelError("stages of different mapping spaces")
    if not coarser.index <= finer.index:
        raise ModelError("cannot bond %s to %s" % (finer.index, coarser.index))
    if cardinality(S) == 0:
        return EMPTY
    fx = bonding_projection(finer.qx, coarser.qx)
    fy = bonding_projection(finer.qy, coarser.qy)
    allowed = [set() for _ in coarser.qx.classes]
    if isinstance(S, RectangularMapSet):
        for e_fine, targets in enumerate(S.allowed):
            allowed[fx(e_fine)].update(fy(t) for t in targets)
    else:
        for h in S:
            for e_fine, t in enumerate(h):
                allowed[fx(e_fine)].add(fy(t))
    return RectangularMapSet(allowed)


def enumerate_W(stage: ModelStage, family, bound: int = 4096) -> ModelStage:
    """Attach ``W = {project(f)} ∪ {∅}`` computed over a map family.

    ``family=EXHAUSTIVE`` enumerates every set map between two finite metric
    spaces whose quotients are discrete (then every set map is continuous).
    """
    if family == EXHAUSTIVE:
        if not (isinstance(stage.X, FiniteMetricSpace) and isinstance(stage.Y, FiniteMetricSpace)):
            raise ModelError("exhaustive enumeration needs finite metric spaces")
        if any(len(c) != 1 for c in stage.qx.classes + stage.qy.classes):
            raise ModelError("exhaustive enumeration needs singleton-ball covers")
        if stage.assignment_count() > bound:
            raise ModelError("%d maps exceed the bound %d" % (stage.assignment_count(), bound))
        family = list(all_set_maps(stage.X, stage.Y, stage.y0))
        provenance = "exhaustive"
    else:
        family = list(family)
        provenance = "sampled"
    return stage.with_W((project(f, stage) for f in family), provenance)


def all_set_maps(X: FiniteMetricSpace, Y: FiniteMetricSpace, y0) -> Iterable[PLMap]:
    y0 = Y.index(y0)
    for values in itertools.product(range(len(Y)), repeat=len(X)):
        table = {lab: Y.labels[v] for lab, v in zip(X.labels, values)}
        yield PLMap.from_table(X, Y, table, basepoint=all(v == y0 for v in values))


def retract(S, stage: ModelStage):
    """Largest member of ``W`` inside ``S``; the candidates must form a chain."""
    if stage.W is None:
        raise ModelError("stage has no computed W")
    for T in stage.W:
        if same_element(T, S):
            return S
    cands = sorted((T for T in stage.W if is_subset(T, S)), key=cardinality)
    for i, a in enumerate(cands):
        for b in cands[i + 1:]:
            if not is_subset(a, b):
                raise TotalOrderViolation(S, a, b)
    return cands[-1]


def injectivity_witness(f: PLMap, g: PLMap, max_index: int, y0=None):
    """First index (sweep order) where the projections of ``f`` and ``g`` differ."""
    if f.differs_at(g) is None and f.basepoint == g.basepoint:
        return None
    for idx in sweep_order(max_index):
        stage = ModelStage.build(f.domain, f.codomain, idx.n, idx.m, y0)
        if not same_element(project(f, stage), project(g, stage)):
            return idx
    return None


@dataclass(frozen=True)
class TruncatedThread:
    stages: tuple
    elements: tuple

    @classmethod
    def of_map(cls, f: PLMap, indices: Sequence[ModelIndex], y0=None) -> "TruncatedThread":
        stages = tuple(ModelStage.build(f.domain, f.codomain, i.n, i.m, y0) for i in indices)
        return cls(stages, tuple(project(f, s) for s in stages))


def check_thread(thread: TruncatedThread) -> bool:
    """Each element bonds onto its predecessor along a strictly increasing chain."""
    st = thread.stages
    if len(st) != len(thread.elements):
        raise ModelError("one element per stage is required")
    for a, b in zip(st, st[1:]):
        if not a.index < b.index:
            raise ModelError("thread indices must strictly increase")
    return all(same_element(bond(thread.elements[i + 1], st[i + 1], st[i]), thread.elements[i])
               for i in range(len(st) - 1))


def interval_W_pattern(S, stage: ModelStage) -> bool:
    """Block and alternating-containment shape of projections of interval maps.

    Allowed sets must be contiguous runs of the target class chain, and point
    classes ``A_t`` and interval classes ``B_t`` must satisfy
    ``A_0 ⊆ B_0 ⊇ A_1 ⊆ B_1 ⊇ ... ⊇ A_n``.
    """
    if not (type(stage.X) is IntervalSpace and type(stage.Y) is IntervalSpace):
        raise ModelError("the pattern applies to [0,1] -> [0,1] stages only")
    if cardinality(S) == 0:
        return True
    if not isinstance(S, RectangularMapSet):
        if not is_rectangular(S):
            return False
        S = rectangular_hull(S, stage.width)
    for a in S.allowed:
        if max(a) - min(a) + 1 != len(a):
            return False
    sets = S.allowed
    for k in range(0, len(sets) - 1, 2):
        if not (sets[k] <= sets[k + 1] and sets[k + 2] <= sets[k + 1]):
            return False
    return True


# ---------------------------------------------------------------------------
# interchange


def export_element(S, stage: ModelStage) -> str:
    if cardinality(S) == 0:
        return "∅\n"
    if not isinstance(S, RectangularMapSet):
        if not is_rectangular(S):
            return "".join(stage.assignment_label(g) + "\n" for g in sorted(S))
        S = rectangular_hull(S, stage.width)
    lines = []
    for i, a in enumerate(S.allowed):
        lines.append("%s: %s" % (stage.qx.label(i), " | ".join(stage.qy.label(j) for j in sorted(a))))
    return "\n".join(lines) + "\n"


def import_element(text: str, stage: ModelStage):
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if lines == ["∅"]:
        return EMPTY
    ylab = {lab: j for j, lab in enumerate(stage.qy.labels())}
    xlab = stage.qx.labels()
    if lines and lines[0].startswith("["):
        gs = set()
        for ln in lines:
            parts = ln[1:-1].split(" ")
            gs.add(tuple(ylab[p] for p in parts))
        return frozenset(gs)
    if len(lines) != len(xlab):
        raise ModelError("expected %d class lines, got %d" % (len(xlab), len(lines)))
    allowed = []
    for ln, want in zip(lines, xlab):
        head, _, rest = ln.partition(": ")
        if head != want:
            raise ModelError("expected class %s, got %s" % (want, head))
        allowed.append({ylab[p.strip()] for p in rest.split(" | ")})
    return RectangularMapSet(allowed)


# ---------------------------------------------------------------------------
# stage posets


def all_elements(stage: ModelStage, bound: int = 1 << 12) -> list[frozenset]:
    gs = stage.assignments()
    if 1 << len(gs) > bound:
        raise ModelError("stage has 2^%d elements, above the bound" % len(gs))
    out = []
    for r in range(len(gs) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(gs, r))
    return out


def stage_poset(stage: ModelStage, elements: Iterable | None = None) -> FinitePoset:
    """Stage elements (all of them by default) as a poset under reverse inclusion."""
    elems = list(all_elements(stage) if elements is None else elements)
    labels = {stage.element_label(e): e for e in elems}
    sets = {lab: (e.expand() if isinstance(e, RectangularMapSet) else frozenset(e))
            for lab, e in labels.items()}
    return FinitePoset(labels, [(a, b) for a in sets for b in sets if sets[b] <= sets[a]])


def bond_map(finer: ModelStage, coarser: ModelStage, source: FinitePoset | None = None,
             target: FinitePoset | None = None) -> MonotoneMap:
    """The bond between two full stage posets as a monotone map."""
    source = source or stage_poset(finer)
    target = target or stage_poset(coarser)
    lookup = {}
    for e in all_elements(finer):
        lookup[finer.element_label(e)] = coarser.element_label(bond(e, finer, coarser).expand())
    return MonotoneMap.build(source, target, lookup)
