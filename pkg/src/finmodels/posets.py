"""Finite T0-spaces as posets: minimal open sets, continuity, automorphisms, moves.

Elements are opaque string labels. The full reflexive-transitive relation is
stored, so order queries are set lookups; the Hasse diagram is derived on
export.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping


class PosetError(ValueError):
    pass


class FinitePoset:
    """Finite partially ordered set with string labels."""

    def __init__(self, elements: Iterable, leq: Iterable, *, close: bool = False):
        elems = sorted({str(e) for e in elements})
        rel = {(str(a), str(b)) for a, b in leq}
        known = set(elems)
        for a, b in rel:
            if a not in known or b not in known:
                raise PosetError("relation mentions unknown element %r" % ((a, b),))
        rel |= {(e, e) for e in elems}
        if close:
            rel = _transitive_closure(elems, rel)
        down: dict = {e: set() for e in elems}
        up: dict = {e: set() for e in elems}
        for a, b in rel:
            if a != b and (b, a) in rel:
                raise PosetError("antisymmetry fails for %s, %s" % (a, b))
            down[b].add(a)
            up[a].add(b)
        for a, b in rel:
            if not down[a] <= down[b]:
                c = min(down[a] - down[b])
                raise PosetError("transitivity fails for %s <= %s <= %s" % (c, a, b))
        self.elements: tuple[str, ...] = tuple(elems)
        self.relation: frozenset = frozenset(rel)
        self._down = {e: frozenset(v) for e, v in down.items()}
        self._up = {e: frozenset(v) for e, v in up.items()}

    @classmethod
    def from_order(cls, elements: Iterable, leq) -> "FinitePoset":
        """Build from a predicate ``leq(a, b)`` on the given element labels."""
        elems = list(elements)
        return cls(elems, [(a, b) for a in elems for b in elems if leq(a, b)])

    @classmethod
    def from_covers(cls, elements: Iterable, covers: Iterable) -> "FinitePoset":
        return cls(elements, covers, close=True)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._down

    def __eq__(self, other):
        return (isinstance(other, FinitePoset) and self.elements == other.elements
                and self.relation == other.relation)

    def __hash__(self):
        return hash((self.elements, self.relation))

    def __repr__(self):
        return "FinitePoset(%d elements)" % len(self.elements)

    def leq(self, a, b) -> bool:
        return (a, b) in self.relation

    def lt(self, a, b) -> bool:
        return a != b and (a, b) in self.relation

    def comparable(self, a, b) -> bool:
        return (a, b) in self.relation or (b, a) in self.relation

    def _check(self, x):
        if x not in self._down:
            raise PosetError("unknown element %r" % (x,))

    def down(self, x) -> frozenset:
        self._check(x)
        return self._down[x]

    def up(self, x) -> frozenset:
        self._check(x)
        return self._up[x]

    def is_down_set(self, subset) -> bool:
        s = set(subset)
        return all(self._down[x] <= s for x in s)

    def maximal(self, subset=None) -> list[str]:
        s = set(self.elements if subset is None else subset)
        return [x for x in self.elements if x in s and not any(self.lt(x, y) for y in s)]

    def minimal(self, subset=None) -> list[str]:
        s = set(self.elements if subset is None else subset)
        return [x for x in self.elements if x in s and not any(self.lt(y, x) for y in s)]

    def hasse_edges(self) -> list[tuple[str, str]]:
        """Covering pairs ``(a, b)``, ``a < b`` with nothing strictly between."""
        edges = []
        for a, b in sorted(self.relation):
            if a != b and len(self._up[a] & self._down[b]) == 2:
                edges.append((a, b))
        return edges

    def rank(self, x) -> int:
        return len(self._down[x]) - 1

    # interchange
    def to_json(self) -> str:
        leq = [[a, b] for a, b in sorted(self.relation)]
        return json.dumps({"elements": list(self.elements), "leq": leq}, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "FinitePoset":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PosetError("poset document is not valid JSON: %s" % exc) from None
        if not isinstance(doc, dict) or set(doc) != {"elements", "leq"}:
            raise PosetError("poset document needs exactly the keys 'elements' and 'leq'")
        elems = doc["elements"]
        if not isinstance(elems, list) or not all(isinstance(e, str) for e in elems):
            raise PosetError("'elements' must be a list of strings")
        if len(set(elems)) != len(elems):
            raise PosetError("duplicate element labels")
        pairs = doc["leq"]
        if not isinstance(pairs, list) or not all(
                isinstance(p, list) and len(p) == 2 and all(isinstance(v, str) for v in p)
                for p in pairs):
            raise PosetError("'leq' must be a list of [a, b] string pairs")
        poset = cls(elems, [tuple(p) for p in pairs])
        if poset.relation != frozenset(tuple(p) for p in pairs):
            raise PosetError("'leq' must list the full reflexive-transitive relation")
        return poset

    def to_dot(self, name: str = "hasse") -> str:
        lines = ["digraph %s {" % name]
        for e in self.elements:
            lines.append("  %s;" % _dot_id(e))
        for a, b in self.hasse_edges():
            lines.append("  %s -> %s;" % (_dot_id(a), _dot_id(b)))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_id(label: str) -> str:
    return '"%s"' % label.replace("\\", "\\\\").replace('"', '\\"')


def _transitive_closure(elems, rel):
    rel = set(rel)
    for k in elems:
        for i in elems:
            if (i, k) in rel:
                for j in elems:
                    if (k, j) in rel:
                        rel.add((i, j))
    return rel


def chain(labels) -> FinitePoset:
    labels = [str(x) for x in labels]
    return FinitePoset.from_covers(labels, list(zip(labels, labels[1:])))


def antichain(labels) -> FinitePoset:
    return FinitePoset(labels, [])


def minimal_open(poset: FinitePoset, x) -> frozenset:
    """``U_x``: the down-set of ``x``."""
    return poset.down(x)


def closure_of(poset: FinitePoset, x) -> frozenset:
    """``F_x``: the up-set of ``x``, the closure of ``{x}``."""
    return poset.up(x)


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class MonotoneMap:
    source: FinitePoset
    target: FinitePoset
    mapping: tuple  # pairs (x, f(x)) in source element order

    @classmethod
    def build(cls, source: FinitePoset, target: FinitePoset, assignment: Mapping,
              check: bool = True) -> "MonotoneMap":
        missing = [x for x in source.elements if x not in assignment]
        if missing:
            raise PosetError("assignment is not total, missing %s" % missing)
        bad = [assignment[x] for x in source.elements if assignment[x] not in target]
        if bad:
            raise PosetError("assignment leaves the target: %s" % bad)
        m = cls(source, target, tuple((x, assignment[x]) for x in source.elements))
        if check and not is_continuous(m):
            raise PosetError("map is not order preserving")
        return m

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def __call__(self, x):
        return self.as_dict()[x]

    def compose(self, inner: "MonotoneMap") -> "MonotoneMap":
        """``self ∘ inner``."""
        mine = self.as_dict()
        return MonotoneMap(inner.source, self.target,
                           tuple((x, mine[y]) for x, y in inner.mapping))

    def is_identity(self) -> bool:
        return all(x == y for x, y in self.mapping)

    def support(self) -> frozenset:
        return frozenset(x for x, y in self.mapping if x != y)


def is_continuous(m) -> bool:
    """Order preservation; accepts a :class:`MonotoneMap` or ``(source, target, dict)``."""
    if isinstance(m, MonotoneMap):
        src, tgt, f = m.source, m.target, m.as_dict()
    else:
        src, tgt, f = m
    return all(tgt.leq(f[a], f[b]) for a, b in src.relation)


def is_continuous_topological(source: FinitePoset, target: FinitePoset, f: Mapping) -> bool:
    """Preimages of all down-sets are down-sets (brute force over open sets)."""
    opens = _down_sets(target)
    return all(source.is_down_set([x for x in source.elements if f[x] in u]) for u in opens)


def _down_sets(poset: FinitePoset) -> list[frozenset]:
    out = []
    elems = poset.elements
    for mask in range(1 << len(elems)):
        s = {elems[i] for i in range(len(elems)) if mask >> i & 1}
        if poset.is_down_set(s):
            out.append(frozenset(s))
    return out


class PosetAutomorphism(MonotoneMap):
    """Bijective monotone self-map with monotone inverse."""

    @classmethod
    def from_dict(cls, poset: FinitePoset, assignment: Mapping) -> "PosetAutomorphism":
        f = {x: assignment[x] for x in poset.elements}
        if sorted(f.values()) != list(poset.elements):
            raise PosetError("assignment is not a bijection")
        inv = {v: k for k, v in f.items()}
        if not (is_continuous((poset, poset, f)) and is_continuous((poset, poset, inv))):
            raise PosetError("not an automorphism")
        return cls(poset, poset, tuple((x, f[x]) for x in poset.elements))

    @classmethod
    def identity(cls, poset: FinitePoset) -> "PosetAutomorphism":
        return cls(poset, poset, tuple((x, x) for x in poset.elements))

    def inverse(self) -> "PosetAutomorphism":
        inv = {y: x for x, y in self.mapping}
        return PosetAutomorphism(self.source, self.source,
                                 tuple((x, inv[x]) for x in self.source.elements))

    def compose(self, inner: "MonotoneMap") -> "PosetAutomorphism":
        m = MonotoneMap.compose(self, inner)
        return PosetAutomorphism(m.source, m.target, m.mapping)

    def __str__(self):
        moved = ["%s↦%s" % (x, y) for x, y in self.mapping if x != y]
        return "id" if not moved else ", ".join(moved)


def is_automorphism(poset: FinitePoset, assignment: Mapping) -> bool:
    try:
        PosetAutomorphism.from_dict(poset, assignment)
    except (PosetError, KeyError):
        return False
    return True


def automorphisms(poset: FinitePoset, bound: int = 10) -> list[PosetAutomorphism]:
    """All automorphisms, in lexicographic order of image tuples.

    Backtracking assigns elements in label order; candidates must match the
    sizes of down- and up-sets and preserve order with earlier assignments.
    """
    n = len(poset)
    if n > bound:
        raise PosetError("poset has %d elements, above the bound %d" % (n, bound))
    elems = poset.elements
    sig = {x: (len(poset.down(x)), len(poset.up(x))) for x in elems}
    out: list[PosetAutomorphism] = []
    f: dict = {}
    used: set = set()

    def extend(i):
        if i == n:
            out.append(PosetAutomorphism(poset, poset, tuple((x, f[x]) for x in elems)))
            return
        x = elems[i]
        for y in elems:
            if y in used or sig[y] != sig[x]:
                continue
            ok = True
            for z in elems[:i]:
                if poset.leq(z, x) != poset.leq(f[z], y) or poset.leq(x, z) != poset.leq(y, f[z]):
                    ok = False
                    break
            if ok:
                f[x] = y
                used.add(y)
                extend(i + 1)
                used.discard(y)
                del f[x]

    extend(0)
    return out


@dataclass(frozen=True)
class Move:
    automorphism: PosetAutomorphism
    witness: str


def is_move(aut: PosetAutomorphism):
    """Least-labelled ``x`` whose minimal open set contains the support, else None."""
    poset = aut.source
    supp = aut.support()
    for x in poset.elements:
        if supp <= poset.down(x):
            return x
    return None


def as_move(aut: PosetAutomorphism) -> Move:
    w = is_move(aut)
    if w is None:
        raise PosetError("automorphism %s is not a move" % aut)
    return Move(aut, w)
