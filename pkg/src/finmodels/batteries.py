"""Acceptance batteries: worked examples and property suites with oracles.

Each battery returns a :class:`BatteryResult`; the ``suite`` command and the
acceptance tests both run :func:`run_all`. Oracles here are deliberately
computed by a different route from the code under test (hand-written class
lists, brute-force enumeration, direct flag enumeration).
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .isotopy import (MetricIsotopySample, approximate_isotopy, decompose_moves, lift_to_subsets,
                      random_isotopy)
from .mccord import (SimplicialComplex, barycentric_subdivision, face_poset, homology,
                     order_complex)
from .metric import INTERVAL, FiniteMetricSpace, quotient, thread_intersection
from .model import (EMPTY, EXHAUSTIVE, ModelStage, RectangularMapSet, TotalOrderViolation, bond,
                    cardinality, enumerate_W, injectivity_witness, is_subset, project, retract,
                    same_element, stage_poset)
from .plmap import PLMap
from .posets import FinitePoset, automorphisms, is_move
from .regions import Region


@dataclass(frozen=True)
class BatteryResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return "%s %s: %s" % ("PASS" if self.passed else "FAIL", self.name, self.detail)


F = Fraction


# ---------------------------------------------------------------------------
# corpora


def random_pl_map(rng: random.Random, monotone: bool, pieces: int = 4, denom: int = 24) -> PLMap:
    values = [F(rng.randint(0, denom), denom) for _ in range(pieces + 1)]
    if monotone:
        values.sort()
    return PLMap.pl(INTERVAL, INTERVAL, [(F(i, pieces), v) for i, v in enumerate(values)])


def pl_corpus(seed: int = 0, size: int = 25) -> list[PLMap]:
    rng = random.Random(seed)
    maps = [random_pl_map(rng, True) for _ in range(size)]
    while len(maps) < 2 * size:
        f = random_pl_map(rng, False)
        vals = [v for _, v in f.points]
        if not (vals == sorted(vals) or vals == sorted(vals, reverse=True)):
            maps.append(f)
    return maps


def posets_up_to_iso(max_size: int = 4) -> list[FinitePoset]:
    """One representative per isomorphism class, by brute force over relations."""
    out = []
    for k in range(1, max_size + 1):
        pairs = list(itertools.combinations(range(k), 2))
        seen = set()
        for orient in itertools.product((0, 1, 2), repeat=len(pairs)):
            rel = {(i, i) for i in range(k)}
            for (i, j), o in zip(pairs, orient):
                if o == 1:
                    rel.add((i, j))
                elif o == 2:
                    rel.add((j, i))
            if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2):
                continue
            canon = min(tuple(sorted((p[a], p[b]) for a, b in rel))
                        for p in itertools.permutations(range(k)))
            if canon in seen:
                continue
            seen.add(canon)
            labels = "abcdefgh"
            out.append(FinitePoset(labels[:k], [(labels[a], labels[b]) for a, b in canon]))
    return out


def two_point(d=F(1, 2)) -> FiniteMetricSpace:
    return FiniteMetricSpace(["p", "q"], [[0, d], [d, 0]])


# ---------------------------------------------------------------------------
# criteria


def formula_classes(n: int) -> list[Region]:
    """Points ``t/n`` and open intervals ``(k/n, (k+1)/n)``, listed by hand."""
    out = [Region.point(F(t, n)) for t in range(n + 1)]
    out += [Region.open(F(k, n), F(k + 1, n)) for k in range(n)]
    return sorted(out, key=lambda r: r.sort_key())


def criterion_1(max_n: int = 32) -> BatteryResult:
    q2 = quotient(INTERVAL, 2)
    want2 = [Region.point(0), Region.open(0, F(1, 2)), Region.point(F(1, 2)),
             Region.open(F(1, 2), 1), Region.point(1)]
    ok2 = list(q2.classes) == want2
    bad = []
    for n in range(1, max_n + 1):
        q = quotient(INTERVAL, n)
        if list(q.classes) != formula_classes(n):
            bad.append((n, len(q)))
    detail = "W_2 classes %s; " % ("match" if ok2 else "differ: %s" % q2.labels())
    if bad:
        detail += "class count differs from 2n+1 for %d of %d indices, first n=%d has %d classes" % (
            len(bad), max_n, bad[0][0], bad[0][1])
    else:
        detail += "2n+1 classes for all n <= %d" % max_n
    return BatteryResult("criterion 1 (cover quotient of [0,1])", ok2 and not bad, detail)


EXAMPLE_G = [  # g_1 ... g_12 with classes 0, (0,1), 1 written as 0, 1, 2
    (0, 0, 1), (0, 0, 2), (0, 1, 1), (0, 1, 2), (0, 2, 1), (0, 2, 2),
    (1, 0, 1), (1, 0, 2), (1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2),
]


def criterion_2() -> BatteryResult:
    stage = ModelStage.build(INTERVAL, INTERVAL, 1, 1)
    S = project(PLMap.identity(INTERVAL), stage)
    want = [frozenset({0, 1}), frozenset({0, 1, 2}), frozenset({1, 2})]
    labels_ok = stage.qx.labels() == ["0", "(0,1)", "1"]
    ok = (labels_ok and isinstance(S, RectangularMapSet) and list(S.allowed) == want
          and S.cardinality() == 12 and S.expand() == frozenset(EXAMPLE_G))
    return BatteryResult("criterion 2 (projection of the identity at (1,1))", ok,
                         "allowed %s, cardinality %d" % ([sorted(a) for a in S.allowed],
                                                         S.cardinality()))


def criterion_3(seed: int = 0) -> BatteryResult:
    maps = pl_corpus(seed)
    coarse = [(n, m) for n in range(1, 5) for m in range(1, 5)]
    fine = [(n, m) for n in range(4, 7) for m in range(4, 7)]
    stages = {ix: ModelStage.build(INTERVAL, INTERVAL, *ix) for ix in set(coarse + fine)}
    total = failures = 0
    first = None
    for k, f in enumerate(maps):
        proj = {ix: project(f, st) for ix, st in stages.items()}
        for a in fine:
            for b in coarse:
                total += 1
                if not same_element(bond(proj[a], stages[a], stages[b]), proj[b]):
                    failures += 1
                    first = first or (k, a, b)
    return BatteryResult("criterion 3 (bond after project equals project)", failures == 0,
                         "%d/%d commuting squares over %d maps%s" % (
                             total - failures, total, len(maps),
                             "" if first is None else ", first failure %s" % (first,)))


def retraction_stage():
    X = FiniteMetricSpace.discrete(["x1", "x2"])
    Y = FiniteMetricSpace.discrete(["y1", "y2", "y3"])
    return enumerate_W(ModelStage.build(X, Y, 1, 1), EXHAUSTIVE)


def criterion_4(seed: int = 0, samples: int = 10 ** 4, archive: Path | None = None) -> BatteryResult:
    stage = retraction_stage()
    coarse = enumerate_W(ModelStage.build(stage.X, stage.Y, 1, 1), EXHAUSTIVE)
    fine = enumerate_W(ModelStage.build(stage.X, stage.Y, 2, 2), EXHAUSTIVE)
    gs = stage.assignments()
    rects = [EMPTY] + [RectangularMapSet(a) for a in itertools.product(
        [frozenset(c) for r in (1, 2, 3) for c in itertools.combinations(range(3), r)], repeat=2)]
    rng = random.Random(seed)
    general = [frozenset(g for g in gs if rng.random() < 0.5) for _ in range(samples)]
    violations, retracted = [], {}
    sub_ok = proj_ok = diag_ok = True
    for S in rects + general:
        try:
            r = retract(S, stage)
        except TotalOrderViolation as exc:
            violations.append(exc)
            continue
        retracted[S if isinstance(S, frozenset) else S.expand()] = r
        sub_ok &= is_subset(r, S)
        try:
            diag_ok &= same_element(bond(retract(S, fine), fine, coarse),
                                    retract(bond(S, fine, coarse), coarse))
        except TotalOrderViolation as exc:
            violations.append(exc)
    for T in stage.W:
        proj_ok &= same_element(retract(T, stage), T)
    items = list(retracted.items())
    mono_ok = all(is_subset(ra, rb) for (a, ra), (b, rb) in itertools.product(items[:300], repeat=2)
                  if a <= b)
    if violations and archive is not None:
        v = violations[0]
        archive.write_text(json.dumps({
            "stage": "2x3 discrete, index 1,1",
            "S": stage.element_label(v.subject if isinstance(v.subject, frozenset)
                                     else v.subject.expand()),
            "incomparable": [stage.element_label(x.expand() if isinstance(x, RectangularMapSet)
                                                 else x) for x in v.pair],
        }, ensure_ascii=False, indent=1) + "\n")
    ok = sub_ok and proj_ok and mono_ok and diag_ok and not violations
    detail = ("|W| = %d; subset %s, identity on W %s, monotone %s, diagram %s; "
              "%d of %d elements raise TotalOrderViolation" % (
                  len(stage.W), sub_ok, proj_ok, mono_ok, diag_ok, len(violations),
                  len(rects) + len(general)))
    if violations:
        a, b = (stage.element_label(x) for x in violations[0].pair)
        detail += ", first incomparable pair %s and %s" % (a, b)
    return BatteryResult("criterion 4 (retraction onto W)", ok, detail)


def mccord_corpus() -> dict[str, SimplicialComplex]:
    return {
        "edge": SimplicialComplex.simplex("ab"),
        "triangle boundary": SimplicialComplex.boundary_of_simplex("abc"),
        "full triangle": SimplicialComplex.simplex("abc"),
        "two disjoint edges": SimplicialComplex("abcd", ["ab", "cd"]),
        "tetrahedron boundary": SimplicialComplex.boundary_of_simplex("abcd"),
    }


def criterion_5() -> BatteryResult:
    bad = [name for name, K in mccord_corpus().items()
           if order_complex(face_poset(K)) != barycentric_subdivision(K)]
    return BatteryResult("criterion 5 (order complex of face poset)", not bad,
                         "all %d complexes agree" % len(mccord_corpus()) if not bad
                         else "differ: %s" % bad)


def stage_poset_corpus(limit: int = 14) -> dict[str, FinitePoset]:
    out = {}
    for k, l in [(1, 1), (1, 2), (1, 3), (2, 1), (3, 1)]:
        X = FiniteMetricSpace.discrete(["x%d" % i for i in range(1, k + 1)])
        Y = FiniteMetricSpace.discrete(["y%d" % i for i in range(1, l + 1)])
        P = stage_poset(ModelStage.build(X, Y, 1, 1))
        if len(P) <= limit:
            out["full %dx%d" % (k, l)] = P
    for k, l in [(2, 2), (2, 3), (3, 2)]:
        X = FiniteMetricSpace.discrete(["x%d" % i for i in range(1, k + 1)])
        Y = FiniteMetricSpace.discrete(["y%d" % i for i in range(1, l + 1)])
        st = enumerate_W(ModelStage.build(X, Y, 1, 1), EXHAUSTIVE)
        P = stage_poset(st, [T.expand() if isinstance(T, RectangularMapSet) else T for T in st.W])
        if len(P) <= limit:
            out["W %dx%d" % (k, l)] = P
    return out


def criterion_6() -> BatteryResult:
    problems = []
    if homology(SimplicialComplex.simplex("a")).betti != (1,):
        problems.append("point")
    if homology(SimplicialComplex.boundary_of_simplex("abc")).betti != (1, 1):
        problems.append("triangle boundary")
    corpus = stage_poset_corpus()
    for name, P in corpus.items():
        K = order_complex(P)
        h = homology(K)
        cone = h.betti[0] == 1 and not any(h.betti[1:]) and not any(h.torsion)
        hs = homology(barycentric_subdivision(K))
        if not cone or (hs.betti, hs.torsion) != (h.betti, h.torsion):
            problems.append(name)
    return BatteryResult("criterion 6 (homology)", not problems,
                         "%d stage posets acyclic and subdivision invariant" % len(corpus)
                         if not problems else "failing: %s" % problems)


def criterion_7(seed: int = 0, pairs: int = 20, max_index: int = 64) -> BatteryResult:
    rng = random.Random(seed)
    worst, missing = None, 0
    done = 0
    while done < pairs:
        f = random_pl_map(rng, rng.random() < 0.5)
        g = random_pl_map(rng, rng.random() < 0.5)
        if f == g:
            continue
        done += 1
        idx = injectivity_witness(f, g, max_index)
        if idx is None:
            missing += 1
        elif worst is None or (idx.n + idx.m) > (worst.n + worst.m):
            worst = idx
    return BatteryResult("criterion 7 (injectivity witness)", missing == 0,
                         "%d/%d pairs separated, latest witness %s" % (pairs - missing, pairs, worst))


def criterion_8(seed: int = 0, points: int = 10, depth: int = 16) -> BatteryResult:
    rng = random.Random(seed)
    bad = []
    for _ in range(points):
        x = F(rng.randint(0, 1000), 1000)
        chain = [(quotient(INTERVAL, n), quotient(INTERVAL, n).class_of(x)) for n in range(1, depth + 1)]
        region, diam = thread_intersection(chain)
        if not region.contains_point(x) or diam > F(2, depth):
            bad.append((x, diam))
    return BatteryResult("criterion 8 (threads shrink to points)", not bad,
                         "%d points, diameters <= 2/%d" % (points, depth) if not bad
                         else "failing: %s" % bad)


def criterion_9(seed: int = 0, per_poset: int = 100) -> BatteryResult:
    rng = random.Random(seed)
    posets = posets_up_to_iso(4)
    total = failures = moves = 0
    for P in posets:
        autos = automorphisms(P)
        for _ in range(per_poset):
            H = random_isotopy(P, rng, events=rng.randint(1, 4), autos=autos)
            total += 1
            try:
                dec = decompose_moves(H)
            except ValueError:
                failures += 1
                continue
            acc = dec.ks[0]
            for mv in dec.moves:
                acc = mv.automorphism.compose(acc)
                if is_move(mv.automorphism) is None:
                    failures += 1
            moves += len(dec.moves)
            if acc.as_dict() != H.level(1):
                failures += 1
    return BatteryResult("criterion 9 (isotopies factor into moves)", failures == 0,
                         "%d isotopies on %d posets, %d moves, %d failures" % (
                             total, len(posets), moves, failures))


def criterion_10(max_n: int = 64) -> BatteryResult:
    g = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), F(1, 4)), (1, 1)])
    sample = MetricIsotopySample((0, 1), (PLMap.identity(INTERVAL), g))
    eps = F(1, 10)
    try:
        res = approximate_isotopy(INTERVAL, sample, eps, max_n=max_n)
    except ValueError as exc:
        return BatteryResult("criterion 10 (metric isotopy pipeline)", False, str(exc))
    ok = all(d < eps for d in res.distances)
    if res.explicit is not None:
        q = res.quotient
        for step, mv in zip(res.steps, res.explicit.moves):
            lifted = mv.automorphism.as_dict()
            restricted = tuple(int(lifted["{%d}" % i][1:-1]) for i in range(len(q)))
            ok &= restricted == step.bijection and is_move(mv.automorphism) is not None
        ok &= len(res.explicit.moves) == len(res.steps)
    return BatteryResult("criterion 10 (metric isotopy pipeline)", ok,
                         "n = %d, %d moves, max distance %s < %s" % (
                             res.n, len(res.steps), max(res.distances), eps))


# ---------------------------------------------------------------------------
# property batteries


def property_round_trips() -> BatteryResult:
    from .io import parse_map_corpus, export_map_corpus, parse_quotient
    from .model import export_element, import_element

    ok = True
    for n in (1, 2, 5):
        q = quotient(INTERVAL, n)
        ok &= parse_quotient(INTERVAL, n, q.export()).classes == q.classes
    maps = pl_corpus(1, 5)
    ok &= parse_map_corpus(export_map_corpus(maps), INTERVAL, INTERVAL) == maps
    stage = ModelStage.build(INTERVAL, INTERVAL, 2, 2)
    for f in maps:
        S = project(f, stage)
        ok &= same_element(import_element(export_element(S, stage), stage), S)
    for P in posets_up_to_iso(3):
        ok &= FinitePoset.from_json(P.to_json()) == P
    for K in mccord_corpus().values():
        ok &= SimplicialComplex.from_json(K.to_json()) == K
    return BatteryResult("property: interchange round trips", ok, "quotients, maps, elements, "
                         "posets and complexes")


def property_lattice_moves(k: int = 4, seed: int = 0) -> BatteryResult:
    """Permutations of the classes extend to cardinality preserving moves of 2^X."""
    from .isotopy import powerset_poset, _subset_label
    from .posets import PosetAutomorphism

    P = powerset_poset(k)
    subsets = {lab: frozenset(int(c) for c in lab[1:-1].split(",")) if lab != "∅" else frozenset()
               for lab in P.elements}
    ok = True
    for perm in itertools.permutations(range(k)):
        a = PosetAutomorphism.from_dict(
            P, {lab: _subset_label(lift_to_subsets(perm, s)) for lab, s in subsets.items()})
        ok &= is_move(a) == "∅" or a.is_identity()
        ok &= all(len(subsets[a(lab)]) == len(subsets[lab]) for lab in P.elements)
    return BatteryResult("property: class permutations are lattice moves", ok,
                         "all %d permutations of %d classes" % (len(list(itertools.permutations(range(k)))), k))


def property_projection_bijections(seed: int = 0) -> BatteryResult:
    """select_bijection stays inside the projection, cross-checked by brute force."""
    from .isotopy import NoBijection, select_bijection

    g = PLMap.pl(INTERVAL, INTERVAL, [(0, 0), (F(1, 2), F(1, 4)), (1, 1)])
    flip = PLMap.pl(INTERVAL, INTERVAL, [(0, 1), (1, 0)])
    ok = True
    seen = []
    for f in (PLMap.identity(INTERVAL), g, flip):
        for n in (1, 2, 3):
            q = quotient(INTERVAL, n)
            S = project(f, ModelStage.build(INTERVAL, INTERVAL, n, n))
            brute = [p for p in itertools.permutations(range(len(q))) if p in S]
            try:
                b = select_bijection(f, q)
            except NoBijection:
                ok &= not brute
                seen.append("none")
                continue
            ok &= b in S and b in brute
            seen.append("found")
    return BatteryResult("property: class bijections lie in projections", ok,
                         "%d cases (%s with a bijection)" % (len(seen), seen.count("found")))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]
PROPERTIES = [property_round_trips, property_lattice_moves, property_projection_bijections]


def _call(fn, seed, archive_dir):
    if fn is criterion_4:
        arch = archive_dir / "retraction_witness.json" if archive_dir else None
        return fn(seed=seed, archive=arch)
    if "seed" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
        return fn(seed=seed)
    return fn()


def run_all(seed: int = 0, archive_dir: Path | None = None, workers: int = 1) -> list[BatteryResult]:
    """Run every battery; ``workers > 1`` spreads them over processes.

    Results come back in battery order whatever the scheduling.
    """
    fns = CRITERIA + PROPERTIES
    if workers <= 1:
        return [_call(fn, seed, archive_dir) for fn in fns]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_call, fn, seed, archive_dir) for fn in fns]
        return [f.result() for f in futures]
