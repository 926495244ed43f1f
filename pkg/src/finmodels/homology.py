"""Integer elementary divisors of sparse integer matrices.

Unit pivots are eliminated first on a sparse row representation; whatever is
left (typically tiny) goes through a dense Smith normal form.
"""
from __future__ import annotations

from typing import Iterable


def elementary_divisors(entries: Iterable[tuple[int, int, int]], nrows: int, ncols: int) -> list[int]:
    """Nonzero diagonal of the Smith normal form, ascending, as positive ints."""
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for i, j, v in entries:
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    divisors: list[int] = []

    while True:
        pivot = None
        for i, row in rows.items():
            for j, v in row.items():
                if v in (1, -1):
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        prow = rows.pop(i)
        inv = prow[j]  # ±1 is its own inverse
        for r in list(cols.get(j, ())):
            if r == i:
                continue
            row = rows[r]
            c = row[j] * inv
            for k, v in prow.items():
                nv = row.get(k, 0) - c * v
                if nv:
                    row[k] = nv
                    cols.setdefault(k, set()).add(r)
                else:
                    row.pop(k, None)
                    cols[k].discard(r)
            if not row:
                del rows[r]
        for k in prow:
            cols[k].discard(i)
        cols.pop(j, None)
        divisors.append(1)

    live_cols = sorted({j for row in rows.values() for j in row})
    if live_cols:
        idx = {j: k for k, j in enumerate(live_cols)}
        dense = []
        for row in rows.values():
            line = [0] * len(live_cols)
            for j, v in row.items():
                line[idx[j]] = v
            dense.append(line)
        divisors.extend(smith_diagonal(dense))
    return sorted(divisors)


def smith_diagonal(matrix: list[list[int]]) -> list[int]:
    """Dense Smith normal form; returns the nonzero invariant factors."""
    a = [row[:] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    out = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        out.append(abs(a[t][t]))
        t += 1
    return out


def rank_over_q(matrix: list[list[int]]) -> int:
    """Rank by fraction-free Gaussian elimination (an independent cross-check)."""
    from fractions import Fraction

    a = [[Fraction(x) for x in row] for row in matrix]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][c]:
                f = a[r][c] / a[rank][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank
