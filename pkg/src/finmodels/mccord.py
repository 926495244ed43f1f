"""McCord's correspondence between finite T0-spaces and simplicial complexes.

``order_complex`` sends a poset to the complex of its chains, ``face_poset``
sends a complex to its simplices ordered by inclusion, and
``order_complex(face_poset(K))`` is the barycentric subdivision of ``K`` as a
literally labelled complex. Homology is integral (Smith normal form).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .homology import elementary_divisors
from .posets import FinitePoset, MonotoneMap, is_continuous


class ComplexError(ValueError):
    pass


def simplex_label(simplex: Iterable[str]) -> str:
    """Barycenter label of a simplex: its sorted vertex set, e.g. ``{a,b}``."""
    return "{" + ",".join(sorted(simplex)) + "}"


class SimplicialComplex:
    """Finite abstract simplicial complex on string vertex labels."""

    def __init__(self, vertices: Iterable, simplices: Iterable[Iterable]):
        verts = sorted({str(v) for v in vertices})
        faces: set[frozenset] = set()
        for s in simplices:
            s = frozenset(str(v) for v in s)
            if not s:
                continue
            if not s <= set(verts):
                raise ComplexError("simplex %s uses unknown vertices" % sorted(s))
            if s in faces:
                continue
            for r in range(1, len(s) + 1):
                faces.update(frozenset(c) for c in itertools.combinations(sorted(s), r))
        faces.update(frozenset([v]) for v in verts)
        self.vertices: tuple[str, ...] = tuple(verts)
        self.simplices: frozenset[frozenset] = frozenset(faces)

    @classmethod
    def simplex(cls, vertices: Iterable) -> "SimplicialComplex":
        vs = list(vertices)
        return cls(vs, [vs])

    @classmethod
    def boundary_of_simplex(cls, vertices: Iterable) -> "SimplicialComplex":
        vs = list(vertices)
        return cls(vs, [c for c in itertools.combinations(vs, len(vs) - 1)])

    def __eq__(self, other):
        return (isinstance(other, SimplicialComplex) and self.vertices == other.vertices
                and self.simplices == other.simplices)

    def __hash__(self):
        return hash((self.vertices, self.simplices))

    def __repr__(self):
        return "SimplicialComplex(%d vertices, f=%s)" % (len(self.vertices), self.f_vector())

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def faces(self, k: int) -> list[tuple[str, ...]]:
        """``k``-simplices as sorted vertex tuples, in lexicographic order."""
        return sorted(tuple(sorted(s)) for s in self.simplices if len(s) == k + 1)

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.dimension + 1)
        for s in self.simplices:
            counts[len(s) - 1] += 1
        return tuple(counts)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def maximal_simplices(self) -> list[tuple[str, ...]]:
        out = [s for s in self.simplices if not any(s < t for t in self.simplices)]
        return sorted(tuple(sorted(s)) for s in out)

    def to_json(self) -> str:
        return json.dumps({"vertices": list(self.vertices),
                           "simplices": [list(s) for s in self.maximal_simplices()]},
                          ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "SimplicialComplex":
        doc = json.loads(text)
        if not isinstance(doc, dict) or set(doc) != {"vertices", "simplices"}:
            raise ComplexError("complex document needs the keys 'vertices' and 'simplices'")
        return cls(doc["vertices"], doc["simplices"])


# ---------------------------------------------------------------------------
# functors


def order_complex(poset: FinitePoset) -> SimplicialComplex:
    """Complex whose simplices are the nonempty chains of ``poset``."""
    chains: list[tuple[str, ...]] = []

    def grow(current: tuple[str, ...], top: str):
        chains.append(current)
        for y in sorted(poset.up(top)):
            if y != top:
                grow(current + (y,), y)

    for x in poset.elements:
        grow((x,), x)
    return SimplicialComplex(poset.elements, chains)


def face_poset(K: SimplicialComplex) -> FinitePoset:
    """Simplices of ``K`` labelled by vertex sets, ordered by inclusion."""
    labels = {simplex_label(s): s for s in K.simplices}
    return FinitePoset(labels, [(a, b) for a in labels for b in labels
                                if labels[a] <= labels[b]])


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    """Flags of faces of ``K``, enumerated directly from the simplices."""

    @lru_cache(maxsize=None)
    def flags_ending_at(s: frozenset) -> tuple[tuple[frozenset, ...], ...]:
        out = [(s,)]
        for r in range(1, len(s)):
            for face in itertools.combinations(sorted(s), r):
                out.extend(f + (s,) for f in flags_ending_at(frozenset(face)))
        return tuple(out)

    simplices = []
    for s in K.simplices:
        for flag in flags_ending_at(s):
            simplices.append([simplex_label(f) for f in flag])
    vertices = [simplex_label(s) for s in K.simplices]
    return SimplicialComplex(vertices, simplices)


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: tuple  # pairs (v, psi(v)) in source vertex order

    @classmethod
    def build(cls, source: SimplicialComplex, target: SimplicialComplex,
              assignment: Mapping) -> "SimplicialMap":
        m = cls(source, target, tuple((v, assignment[v]) for v in source.vertices))
        for s in source.simplices:
            if m.image(s) not in target.simplices:
                raise ComplexError("image of %s is not a simplex" % sorted(s))
        return m

    def as_dict(self) -> dict:
        return dict(self.vertex_map)

    def image(self, simplex) -> frozenset:
        f = self.as_dict()
        return frozenset(f[v] for v in simplex)

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        f = self.as_dict()
        return SimplicialMap(inner.source, self.target,
                             tuple((v, f[w]) for v, w in inner.vertex_map))


def induced_simplicial_map(phi: MonotoneMap) -> SimplicialMap:
    """The map of order complexes given by ``phi`` on vertices."""
    if not is_continuous(phi):
        raise ComplexError("map is not order preserving")
    return SimplicialMap.build(order_complex(phi.source), order_complex(phi.target),
                               phi.as_dict())


def induced_poset_map(psi: SimplicialMap) -> MonotoneMap:
    """The map of face posets ``σ ↦ ψ(σ)``."""
    src, tgt = face_poset(psi.source), face_poset(psi.target)
    assignment = {simplex_label(s): simplex_label(psi.image(s)) for s in psi.source.simplices}
    return MonotoneMap.build(src, tgt, assignment)


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def report(self) -> str:
        lines = []
        for k, (b, tors) in enumerate(zip(self.betti, self.torsion)):
            parts = []
            if b:
                parts.append("Z" if b == 1 else "Z^%d" % b)
            parts.extend("Z/%d" % t for t in tors)
            lines.append("H_%d = %s" % (k, " ⊕ ".join(parts) if parts else "0"))
        return "\n".join(lines) + "\n"

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))


def boundary_entries(K: SimplicialComplex, k: int):
    """Sparse ``∂_k : C_k -> C_{k-1}`` as ``(row, col, value)`` triples."""
    rows = {s: i for i, s in enumerate(K.faces(k - 1))}
    entries = []
    for j, s in enumerate(K.faces(k)):
        for pos in range(len(s)):
            face = s[:pos] + s[pos + 1:]
            entries.append((rows[face], j, -1 if pos % 2 else 1))
    return entries, len(rows), len(K.faces(k))


def homology(K: SimplicialComplex, max_dim: int = 6) -> HomologyResult:
    """Unreduced integral homology with torsion."""
    top = K.dimension
    if top > max_dim:
        raise ComplexError("complex dimension %d exceeds the bound %d" % (top, max_dim))
    sizes = [len(K.faces(k)) for k in range(top + 1)]
    divisors = {}
    for k in range(1, top + 1):
        entries, nr, nc = boundary_entries(K, k)
        divisors[k] = elementary_divisors(entries, nr, nc)
    betti, torsion = [], []
    for k in range(top + 1):
        rank_out = len(divisors.get(k, ()))
        rank_in = len(divisors.get(k + 1, ()))
        betti.append(sizes[k] - rank_out - rank_in)
        torsion.append(tuple(d for d in divisors.get(k + 1, ()) if d > 1))
    return HomologyResult(tuple(betti), tuple(torsion))


def chain_map(psi: SimplicialMap, k: int) -> dict[tuple[int, int], int]:
    """Sparse matrix of the induced chain map in degree ``k``."""
    f = psi.as_dict()
    rows = {s: i for i, s in enumerate(psi.target.faces(k))}
    out = {}
    for j, s in enumerate(psi.source.faces(k)):
        img = [f[v] for v in s]
        if len(set(img)) < len(img):
            continue
        order = sorted(range(len(img)), key=lambda p: img[p])
        sign = _perm_sign(order)
        out[(rows[tuple(sorted(img))], j)] = sign
    return out


def _perm_sign(perm: list[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign
