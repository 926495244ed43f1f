"""Isotopies of finite T0-spaces and their factorization into moves.

A :class:`FiniteIsotopy` records, for every point ``q``, which element is sent
to ``q`` over time: a sequence ``x_1, x_2, ...`` with consecutive rational
intervals covering ``[0, 1]``. At a shared endpoint the later element wins.

:func:`decompose_moves` raises a graph section ``f: X -> [0, 1]`` from ``0`` to
``1`` one minimal open set at a time; each raise changes ``k(x) = H_{f(x)}(x)``
by a move. :func:`approximate_isotopy` runs the same machinery on the power
set of a cover quotient, driven by class bijections selected from projections
of a sampled metric isotopy.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .metric import CircleSpace, FiniteMetricSpace, MetricSpace, QuotientSpace, quotient, set_distance
from .model import ModelStage, project
from .plmap import PLMap, interpolate
from .posets import (FinitePoset, Move, PosetAutomorphism, PosetError, is_automorphism, is_move)
from .regions import frac


class IsotopyError(ValueError):
    pass


class InvalidIsotopy(IsotopyError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class ConstructionFailure(IsotopyError):
    """The section sweep could not realize a level change by moves."""

    def __init__(self, time, change):
        self.time = time
        self.change = change
        super().__init__("cannot split the change %s at t=%s into moves" % (change, time))


class NoBijection(IsotopyError):
    """A projection contains no class bijection.

    ``deficient`` is a set of source classes together with the strictly
    smaller set of targets they may reach (a violation of Hall's condition).
    """

    def __init__(self, message, deficient=None):
        self.deficient = deficient
        super().__init__(message)


class InvalidSample(IsotopyError):
    pass


class ResolutionExhausted(IsotopyError):
    def __init__(self, message, skipped=()):
        self.skipped = tuple(skipped)
        super().__init__(message)


# ---------------------------------------------------------------------------
# finite isotopies


@dataclass(frozen=True)
class FiniteIsotopy:
    poset: FinitePoset
    traces: tuple  # (q, ((x_1, lo_1, hi_1), ...)) in element order

    @classmethod
    def from_traces(cls, poset: FinitePoset, traces: Mapping) -> "FiniteIsotopy":
        out = []
        for q in poset.elements:
            if q not in traces:
                raise IsotopyError("no trace for %s" % q)
            out.append((q, tuple((str(x), frac(lo), frac(hi)) for x, lo, hi in traces[q])))
        return cls(poset, tuple(out))

    @classmethod
    def from_levels(cls, poset: FinitePoset, times: Sequence, levels: Sequence[Mapping]) -> "FiniteIsotopy":
        """``H_t = levels[j]`` on ``[times[j], times[j+1])``; ``times[0]`` must be 0."""
        times = [frac(t) for t in times]
        if not times or times[0] != 0 or any(a >= b for a, b in zip(times, times[1:])) \
                or times[-1] >= 1:
            raise IsotopyError("level times must start at 0, increase and stay below 1")
        ends = times[1:] + [Fraction(1)]
        inverses = [{v: k for k, v in dict(lv).items()} for lv in levels]
        traces = {}
        for q in poset.elements:
            seq: list = []
            for inv, lo, hi in zip(inverses, times, ends):
                x = inv[q]
                if seq and seq[-1][0] == x:
                    seq[-1] = (x, seq[-1][1], hi)
                else:
                    seq.append((x, lo, hi))
            traces[q] = seq
        return cls.from_traces(poset, traces)

    @classmethod
    def constant(cls, aut: Mapping | PosetAutomorphism) -> "FiniteIsotopy":
        if isinstance(aut, PosetAutomorphism):
            poset, aut = aut.source, aut.as_dict()
        else:
            raise IsotopyError("constant isotopy needs a PosetAutomorphism")
        return cls.from_levels(poset, [0], [aut])

    def trace(self, q) -> tuple:
        return dict(self.traces)[q]

    def critical_times(self) -> list[Fraction]:
        ts = {Fraction(0)}
        for _, tr in self.traces:
            ts.update(lo for _, lo, _ in tr)
        return sorted(ts)

    def preimage_at(self, q, t) -> str:
        """``H_t^{-1}(q)``, taking the later trace element at a breakpoint."""
        t = frac(t)
        tr = self.trace(q)
        for x, lo, hi in tr:
            if lo <= t < hi:
                return x
        return tr[-1][0]

    def level(self, t) -> dict:
        """``H_t`` as a dict (may be invalid if the data is)."""
        return {self.preimage_at(q, t): q for q in self.poset.elements}

    def export(self) -> str:
        lines = []
        for q, tr in self.traces:
            lines.append("%s: %s" % (q, " ".join("%s [%s,%s]" % (x, lo, hi) for x, lo, hi in tr)))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, poset: FinitePoset, text: str) -> "FiniteIsotopy":
        traces = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            q, sep, rest = line.partition(":")
            if not sep:
                raise IsotopyError("line %d: expected 'q: x_1 [0,a_1] ...'" % lineno)
            tok = rest.split()
            if len(tok) % 2:
                raise IsotopyError("line %d: unpaired trace token" % lineno)
            seq = []
            for x, iv in zip(tok[::2], tok[1::2]):
                if not (iv.startswith("[") and iv.endswith("]")):
                    raise IsotopyError("line %d: bad interval %r" % (lineno, iv))
                lo, hi = iv[1:-1].split(",")
                seq.append((x, Fraction(lo), Fraction(hi)))
            traces[q.strip()] = seq
        return cls.from_traces(poset, traces)


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    diagnostics: tuple = ()

    def __bool__(self):
        return self.valid


def validate_isotopy(H: FiniteIsotopy) -> ValidationResult:
    P = H.poset
    diags = []
    for q, tr in H.traces:
        if not tr:
            diags.append("trace %s: empty" % q)
            continue
        if tr[0][1] != 0 or tr[-1][2] != 1:
            diags.append("trace %s: intervals must run from 0 to 1" % q)
        for i, (x, lo, hi) in enumerate(tr):
            if x not in P:
                diags.append("trace %s: unknown element %s" % (q, x))
            if not lo < hi:
                diags.append("trace %s: empty interval [%s,%s]" % (q, lo, hi))
            if i and tr[i - 1][2] != lo:
                diags.append("trace %s: intervals [%s,%s] and [%s,%s] do not share an endpoint"
                             % (q, tr[i - 1][1], tr[i - 1][2], lo, hi))
            if i and x in P and tr[i - 1][0] in P and P.lt(x, tr[i - 1][0]):
                diags.append("trace %s: downward jump %s -> %s at t=%s" % (q, tr[i - 1][0], x, lo))
    if diags:
        return ValidationResult(False, tuple(diags))
    for t in H.critical_times():
        inv = {q: H.preimage_at(q, t) for q in P.elements}
        if len(set(inv.values())) != len(inv):
            diags.append("level t=%s: not a bijection" % t)
        elif not is_automorphism(P, {x: q for q, x in inv.items()}):
            diags.append("level t=%s: not an automorphism" % t)
    return ValidationResult(not diags, tuple(diags))


def slice_at(H: FiniteIsotopy, t) -> PosetAutomorphism:
    """``H_t``."""
    res = validate_isotopy(H)
    if not res:
        raise InvalidIsotopy(res.diagnostics)
    return PosetAutomorphism.from_dict(H.poset, H.level(t))


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class Step:
    h: PosetAutomorphism
    section_witness: str  # the sections differ only inside U of this element
    time: Fraction
    padding: bool

    @property
    def move(self) -> Move:
        return Move(self.h, is_move(self.h))


@dataclass(frozen=True)
class MoveDecomposition:
    poset: FinitePoset
    sections: tuple  # dicts x -> Fraction, f_0 ... f_N
    ks: tuple  # PosetAutomorphism k_0 ... k_N
    steps: tuple  # Step 1 ... N

    @property
    def moves(self) -> list[Move]:
        """Non-identity factors ``h_1, ..., h_n`` in order of application."""
        return [s.move for s in self.steps if not s.h.is_identity()]

    def composite(self) -> PosetAutomorphism:
        acc = PosetAutomorphism.identity(self.poset)
        for s in self.steps:
            acc = s.h.compose(acc)
        return acc

    def report(self) -> str:
        lines = ["k_0 = %s" % self.ks[0]]
        n = 0
        for s in self.steps:
            if s.h.is_identity():
                continue
            n += 1
            lines.append("h_%d = %s  (move in U_%s, t=%s)" % (n, s.h, s.move.witness, s.time))
        lines.append("k_N = %s" % self.ks[-1])
        chain = {0: "", 1: "h_1 "}.get(n, "h_%d ... h_1 " % n)
        lines.append("identity H_1 = %sH_0: verified" % chain)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "H0": dict(self.ks[0].mapping),
            "H1": dict(self.ks[-1].mapping),
            "moves": [{"map": dict(m.automorphism.mapping), "witness": m.witness}
                      for m in self.moves],
            "intermediate": [dict(k.mapping) for k in self.ks],
            "sections": [{x: str(v) for x, v in f.items()} for f in self.sections],
            "verified": True,
        }


def _orbits(perm: Mapping) -> list[tuple]:
    seen, out = set(), []
    for x in sorted(perm):
        if x in seen or perm[x] == x:
            continue
        orb, y = [], x
        while y not in seen:
            seen.add(y)
            orb.append(y)
            y = perm[y]
        out.append(tuple(sorted(orb)))
    return out


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _block_witness(P: FinitePoset, perm: Mapping, block: frozenset):
    restricted = {x: (perm[x] if x in block else x) for x in P.elements}
    if not is_automorphism(P, restricted):
        return None
    for x in P.elements:
        if block <= P.down(x):
            return x
    return None


def _split_change(P: FinitePoset, perm: Mapping, max_orbits: int = 8):
    """Finest partition of the moved orbits into blocks that are moves."""
    orbits = _orbits(perm)
    if not orbits:
        return []
    if len(orbits) <= max_orbits:
        parts = sorted(_set_partitions(orbits), key=lambda p: -len(p))
    else:
        parts = [[[o] for o in orbits], [orbits]]
    for part in parts:
        blocks = [frozenset(itertools.chain.from_iterable(b)) for b in part]
        wits = [_block_witness(P, perm, b) for b in blocks]
        if all(w is not None for w in wits):
            return sorted(zip(wits, blocks), key=lambda wb: (wb[0], min(wb[1])))
    return None


def decompose_moves(H: FiniteIsotopy) -> MoveDecomposition:
    """Write ``H_1 H_0^{-1}`` as a product of moves via monotone graph sections."""
    res = validate_isotopy(H)
    if not res:
        raise InvalidIsotopy(res.diagnostics)
    P = H.poset
    times = H.critical_times()
    levels = {t: H.level(t) for t in times}
    f = {x: Fraction(0) for x in P.elements}

    def k_of(section) -> PosetAutomorphism:
        assignment = {x: levels_at(section[x])[x] for x in P.elements}
        if len(set(assignment.values())) != len(assignment):
            raise ConstructionFailure(max(section.values()), "graph section hits a trace twice")
        try:
            return PosetAutomorphism.from_dict(P, assignment)
        except PosetError:
            raise ConstructionFailure(max(section.values()), "intermediate map is not an automorphism")

    def levels_at(t):
        best = max(s for s in times if s <= t)
        return levels[best]

    sections = [dict(f)]
    ks = [k_of(f)]
    steps = []
    for prev, tau in zip(times, times[1:]):
        A, B = levels[prev], levels[tau]
        A_inv = {v: k for k, v in A.items()}
        perm = {x: A_inv[B[x]] for x in P.elements}
        blocks = _split_change(P, perm)
        if blocks is None:
            raise ConstructionFailure(tau, ", ".join("%s↦%s" % (x, y) for x, y in sorted(perm.items())
                                                     if x != y))
        for wit, block in blocks:
            for x in block:
                f[x] = tau
            k = k_of(f)
            h = k.compose(ks[-1].inverse())
            sections.append(dict(f))
            ks.append(k)
            steps.append(Step(h, wit, tau, False))
    for m in P.maximal():
        raise_set = [x for x in P.down(m) if f[x] < 1]
        if not raise_set:
            continue
        for x in raise_set:
            f[x] = Fraction(1)
        k = k_of(f)
        sections.append(dict(f))
        ks.append(k)
        steps.append(Step(k.compose(ks[-2].inverse()), m, Fraction(1), True))
    dec = MoveDecomposition(P, tuple(sections), tuple(ks), tuple(steps))
    _verify(dec, H)
    return dec


def _verify(dec: MoveDecomposition, H: FiniteIsotopy):
    P = H.poset
    H0 = PosetAutomorphism.from_dict(P, H.level(0))
    H1 = PosetAutomorphism.from_dict(P, H.level(1))
    if dec.ks[0] != H0 or dec.ks[-1] != H1:
        raise ConstructionFailure(1, "end sections do not reproduce H_0 and H_1")
    if dec.composite().compose(H0) != H1:
        raise ConstructionFailure(1, "composition identity fails")
    if any(v != 0 for v in dec.sections[0].values()) or any(v != 1 for v in dec.sections[-1].values()):
        raise ConstructionFailure(1, "sections must run from 0 to 1")
    for a, b, st in zip(dec.sections, dec.sections[1:], dec.steps):
        changed = {x for x in P.elements if a[x] != b[x]}
        if not changed <= P.down(st.section_witness) or any(a[x] > b[x] for x in P.elements):
            raise ConstructionFailure(st.time, "sections are not raised inside one U_x")
        if is_move(st.h) is None:
            raise ConstructionFailure(st.time, "factor %s is not a move" % st.h)


# ---------------------------------------------------------------------------
# random isotopies (test corpora)


def random_isotopy(P: FinitePoset, rng: random.Random, events: int = 3,
                   autos: Sequence[PosetAutomorphism] | None = None) -> FiniteIsotopy:
    """Random valid isotopy: a random start, then products of moves at random times.

    Events at the same time combine moves with disjoint supports.
    """
    from .posets import automorphisms

    autos = list(autos) if autos is not None else automorphisms(P)
    moves = [a for a in autos if not a.is_identity() and is_move(a) is not None]
    current = rng.choice(autos)
    times = [Fraction(0)]
    levels = [current.as_dict()]
    if not moves:
        return FiniteIsotopy.from_levels(P, times, levels)
    stamps = sorted({Fraction(rng.randint(1, 15), 16) for _ in range(events)})
    for t in stamps:
        chosen = [rng.choice(moves)]
        if rng.random() < 0.5:
            extra = rng.choice(moves)
            if not extra.support() & chosen[0].support():
                chosen.append(extra)
        for m in chosen:
            current = m.compose(current)
        if current.as_dict() != levels[-1]:
            times.append(t)
            levels.append(current.as_dict())
    return FiniteIsotopy.from_levels(P, times, levels)


# ---------------------------------------------------------------------------
# class bijections from metric isotopies


def _max_matching(allowed: Sequence[frozenset], fixed: Mapping[int, int]) -> int:
    """Size of a maximum matching extending ``fixed`` (Kuhn's augmenting paths)."""
    owner: dict[int, int] = {v: u for u, v in fixed.items()}
    size = len(fixed)

    def augment(u, seen):
        for v in sorted(allowed[u]):
            if v in seen or (v in owner and owner[v] in fixed):
                continue
            seen.add(v)
            if v not in owner or augment(owner[v], seen):
                owner[v] = u
                return True
        return False

    for u in range(len(allowed)):
        if u in fixed:
            continue
        if augment(u, set()):
            size += 1
    return size


def hall_violator(allowed: Sequence[frozenset]):
    """Rows ``A`` with ``|N(A)| < |A|``, or None when a perfect matching exists.

    Grows alternating paths from an unmatched row of a maximum matching; the
    rows reached form ``A`` and the columns reached form ``N(A)``.
    """
    owner: dict[int, int] = {}

    def augment(u, seen):
        for v in sorted(allowed[u]):
            if v in seen:
                continue
            seen.add(v)
            if v not in owner or augment(owner[v], seen):
                owner[v] = u
                return True
        return False

    free = [u for u in range(len(allowed)) if not augment(u, set())]
    if not free:
        return None
    rows, cols, stack = {free[0]}, set(), [free[0]]
    while stack:
        for v in allowed[stack.pop()]:
            if v not in cols:
                cols.add(v)
                u = owner[v]
                if u not in rows:
                    rows.add(u)
                    stack.append(u)
    return frozenset(rows), frozenset(cols)


def lexmin_perfect_matching(allowed: Sequence[frozenset], preference=None):
    """Least bijection ``g`` with ``g[i] in allowed[i]``, else None.

    Rows are fixed in order; each row tries its targets sorted by
    ``preference(i, j)`` (default: ``j``) and keeps the first that still
    extends to a perfect matching.
    """
    n = len(allowed)
    rank = preference or (lambda i, j: j)
    fixed: dict[int, int] = {}
    if _max_matching(allowed, fixed) < n:
        return None
    for u in range(n):
        used = set(fixed.values())
        for v in sorted(allowed[u], key=lambda j: rank(u, j)):
            if v in used:
                continue
            fixed[u] = v
            if _max_matching(allowed, fixed) == n:
                break
            del fixed[u]
        else:
            return None
    return tuple(fixed[u] for u in range(n))


def select_bijection(Ht: PLMap, q: QuotientSpace) -> tuple:
    """A class bijection inside the projection of ``Ht``.

    Targets that meet ``Ht(E)`` itself are preferred over targets that only
    meet its closure; remaining ties go to the lower class index.
    """
    if not Ht.is_homeomorphism():
        raise InvalidSample("%r is not a homeomorphism" % (Ht,))
    stage = ModelStage.build(q.space, q.space, q.n, q.n)
    S = project(Ht, stage)
    images = [Ht.image(E) for E in q.classes]

    def preference(i, j):
        return (0 if images[i].meets(q.classes[j]) else 1, j)

    g = lexmin_perfect_matching(S.allowed, preference)
    if g is None:
        rows, cols = hall_violator(S.allowed)
        raise NoBijection("projection of %r at n=%d contains no bijection: classes {%s} reach "
                          "only {%s}" % (Ht, q.n, ", ".join(q.label(i) for i in sorted(rows)),
                                         ", ".join(q.label(j) for j in sorted(cols))),
                          (rows, cols))
    return g


@dataclass(frozen=True)
class MetricIsotopySample:
    times: tuple
    maps: tuple
    modulus: Fraction | None = None

    def __post_init__(self):
        ts = [frac(t) for t in self.times]
        object.__setattr__(self, "times", tuple(ts))
        if len(ts) != len(self.maps) or not ts:
            raise InvalidSample("one map per time is required")
        if ts[0] != 0 or ts[-1] != 1 or any(a >= b for a, b in zip(ts, ts[1:])):
            raise InvalidSample("times must run strictly from 0 to 1")
        for t, m in zip(ts, self.maps):
            if not m.is_homeomorphism():
                raise InvalidSample("sample at t=%s is not a homeomorphism" % t)
        if self.modulus is not None:
            for t, a, b in zip(ts[1:], self.maps, self.maps[1:]):
                if a.sup_distance(b) > self.modulus:
                    raise InvalidSample("samples before t=%s exceed the modulus" % t)

    @property
    def space(self) -> MetricSpace:
        return self.maps[0].domain

    def at(self, t) -> PLMap:
        t = frac(t)
        for (t0, m0), (t1, m1) in zip(zip(self.times, self.maps), zip(self.times[1:], self.maps[1:])):
            if t == t0:
                return m0
            if t0 < t < t1:
                if isinstance(self.space, FiniteMetricSpace):
                    return m0
                m = interpolate(m0, m1, (t - t0) / (t1 - t0))
                if not m.is_homeomorphism():
                    raise InvalidSample("interpolated slice at t=%s is not a homeomorphism" % t)
                return m
        return self.maps[-1]

    def export(self) -> str:
        return "".join("t=%s %s\n" % (t, m.export()) for t, m in zip(self.times, self.maps))


def lift_to_subsets(perm: Sequence[int], subset: frozenset) -> frozenset:
    return frozenset(perm[i] for i in subset)


def compose_perm(outer: Sequence[int], inner: Sequence[int]) -> tuple:
    return tuple(outer[i] for i in inner)


def invert_perm(perm: Sequence[int]) -> tuple:
    out = [0] * len(perm)
    for i, j in enumerate(perm):
        out[j] = i
    return tuple(out)


def powerset_poset(k: int) -> FinitePoset:
    """``2^{0..k-1}`` under reverse inclusion, labelled ``{0,2}`` style."""
    subsets = [frozenset(c) for r in range(k + 1) for c in itertools.combinations(range(k), r)]
    lab = {_subset_label(s): s for s in subsets}
    return FinitePoset(lab, [(a, b) for a in lab for b in lab if lab[b] <= lab[a]])


def _subset_label(s) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}" if s else "∅"


@dataclass(frozen=True)
class LatticeStep:
    time: Fraction
    bijection: tuple  # h_i on classes
    witness: str  # lattice element whose minimal open set carries the move


@dataclass
class IsotopyApproximation:
    n: int
    quotient: QuotientSpace
    grid: tuple
    levels: tuple  # (time, G_t) with consecutive duplicates collapsed
    steps: tuple
    distances: tuple
    mode: str
    cardinality_checks: int = 0
    skipped: tuple = ()  # (n, reason) for indices with no class bijection at some grid time
    explicit: MoveDecomposition | None = field(default=None, repr=False)

    @property
    def moves(self) -> list[tuple]:
        return [s.bijection for s in self.steps]

    def report(self) -> str:
        q = self.quotient
        lines = ["cover index n = %d (%d classes)" % (self.n, len(q))]
        for i, s in enumerate(self.steps, 1):
            moved = ["%s↦%s" % (q.label(a), q.label(b)) for a, b in enumerate(s.bijection) if a != b]
            lines.append("h_%d at t=%s (move of 2^X in U_%s): %s" % (i, s.time, s.witness, ", ".join(moved)))
        worst = max(self.distances) if self.distances else 0
        lines.append("max %s distance = %s" % (self.mode, worst))
        return "\n".join(lines) + "\n"


def _bijections_on_grid(sample, q, grid):
    return [select_bijection(sample.at(t), q) for t in grid]


def _collapse(grid, gs):
    out = []
    for t, g in zip(grid, gs):
        if not out or out[-1][1] != g:
            out.append((t, g))
    return out


def approximate_isotopy(space: MetricSpace, sample: MetricIsotopySample, eps, max_n: int = 64,
                        mode: str = "hausdorff", refine_rounds: int = 3, seed: int = 0,
                        subset_samples: int = 64, explicit_limit: int = 4,
                        min_n: int = 1) -> IsotopyApproximation:
    """Find a cover index whose class bijections approximate ``H_1 H_0^{-1}`` within ``eps``.

    Indices are tried from ``min_n`` upward. On ``[0, 1]`` the coarsest
    quotient already fixes the endpoint classes, so ``min_n`` is how one asks
    for a finer picture.
    """
    eps = frac(eps)
    if eps <= 0:
        raise IsotopyError("eps must be positive")
    if sample.space != space:
        raise InvalidSample("sample maps live on a different space")
    target = sample.maps[-1].compose(sample.maps[0].inverse())
    rng = random.Random(seed)
    skipped = []
    for n in range(min_n, max_n + 1):
        q = quotient(space, n)
        grid = list(sample.times)
        try:
            gs = _bijections_on_grid(sample, q, grid)
        except NoBijection as exc:
            skipped.append((n, str(exc)))
            continue
        if not isinstance(space, FiniteMetricSpace):
            for _ in range(refine_rounds):
                finer = sorted(set(grid) | {(a + b) / 2 for a, b in zip(grid, grid[1:])})
                try:
                    finer_gs = _bijections_on_grid(sample, q, finer)
                except NoBijection as exc:
                    skipped.append((n, str(exc)))
                    break
                stable = [g for _, g in _collapse(finer, finer_gs)] == [g for _, g in _collapse(grid, gs)]
                grid, gs = finer, finer_gs
                if stable:
                    break
            if skipped and skipped[-1][0] == n:
                continue
        levels = _collapse(grid, gs)
        steps = []
        checks = 0
        for (t0, g0), (t1, g1) in zip(levels, levels[1:]):
            h = compose_perm(g1, invert_perm(g0))
            checks += _check_lattice_move(h, rng, subset_samples)
            steps.append(LatticeStep(t1, h, "∅"))
        total = tuple(range(len(q)))
        for s in steps:
            total = compose_perm(s.bijection, total)
        if total != compose_perm(levels[-1][1], invert_perm(levels[0][1])):
            raise ConstructionFailure(1, "class composition identity fails")
        dists = tuple(set_distance(target.image(E), q.classes[total[i]], mode, space)
                      for i, E in enumerate(q.classes))
        if all(d < eps for d in dists):
            explicit = None
            if len(q) <= explicit_limit:
                explicit = _explicit_lattice_decomposition(len(q), levels)
            return IsotopyApproximation(n, q, tuple(grid), tuple(levels), tuple(steps), dists,
                                        mode, checks, tuple(skipped), explicit)
    raise ResolutionExhausted("no cover index in %d..%d meets eps=%s (%d without a class bijection)"
                              % (min_n, max_n, eps, len(skipped)), skipped)


def _check_lattice_move(h: Sequence[int], rng: random.Random, samples: int) -> int:
    """Check the subset extension of ``h`` preserves size and inclusion on sampled subsets."""
    k = len(h)
    for _ in range(samples):
        a = frozenset(i for i in range(k) if rng.random() < 0.5)
        b = a | frozenset(i for i in range(k) if rng.random() < 0.3)
        ha, hb = lift_to_subsets(h, a), lift_to_subsets(h, b)
        if len(ha) != len(a) or not ha <= hb:
            raise ConstructionFailure(0, "subset extension is not a lattice automorphism")
    # the empty set is the maximum, so U_∅ is everything and any automorphism is a move there
    return samples


def _explicit_lattice_decomposition(k: int, levels) -> MoveDecomposition:
    P = powerset_poset(k)
    subsets = {_subset_label(frozenset(c)): frozenset(c) for r in range(k + 1)
               for c in itertools.combinations(range(k), r)}

    def lifted(g):
        return {lab: _subset_label(lift_to_subsets(g, s)) for lab, s in subsets.items()}

    # levels may change exactly at t = 1 (finite samples), so reparametrize
    # level j to time j/k; decompositions only see the order of events
    times = [Fraction(j, len(levels)) for j in range(len(levels))]
    H = FiniteIsotopy.from_levels(P, times, [lifted(g) for _, g in levels])
    return decompose_moves(H)
