"""Exact integer linear algebra for homology: Smith normal form.

Matrices are sparse dicts (row, col) -> nonzero int.  The strategy is a
sparsity-preserving elimination pass using unit pivots (these never create
torsion and keep entries small), followed by a classical dense Smith pass
with the divisibility chain on the usually tiny residual block.  Everything
runs over Python's arbitrary-precision integers; no floats anywhere.
"""

import heapq
from collections import deque


def _singleton_cascade(rows, cols, work=None):
    """Eliminate unit pivots sitting in singleton rows or columns.

    Such pivots never create fill, and each elimination can expose new
    singletons, so a worklist clears long chains of them in linear time.
    Returns the rank gained.  A seed worklist skips the initial scan.
    """
    if work is None:
        work = deque()
        for r, row in rows.items():
            if len(row) == 1:
                work.append(("r", r))
        for c, col in cols.items():
            if len(col) == 1:
                work.append(("c", c))
    rank = 0
    while work:
        kind, key = work.popleft()
        if kind == "r":
            row = rows.get(key)
            if row is None or len(row) != 1:
                continue
            pr = key
            pc, pv = next(iter(row.items()))
        else:
            col = cols.get(key)
            if col is None or len(col) != 1:
                continue
            pc = key
            pr, pv = next(iter(col.items()))
        if pv not in (1, -1):
            continue
        pivot_row = rows.pop(pr)
        for c in pivot_row:
            col = cols[c]
            del col[pr]
            if not col:
                del cols[c]
            elif len(col) == 1:
                work.append(("c", c))
        for r in list(cols.get(pc, {})):
            other = rows[r]
            f = other[pc] * pv
            for c, v in pivot_row.items():
                nv = other.get(c, 0) - f * v
                if nv:
                    other[c] = nv
                    cols.setdefault(c, {})[r] = nv
                else:
                    if c in other:
                        del other[c]
                        col = cols[c]
                        del col[r]
                        if not col:
                            del cols[c]
                        elif len(col) == 1:
                            work.append(("c", c))
            if not other:
                del rows[r]
            elif len(other) == 1:
                work.append(("r", r))
        rank += 1
    return rank


def _unit_pivot_eliminate(mat):
    """Eliminate with +-1 pivots, preferring minimal fill.  Returns (rank, residue).

    A singleton-pivot cascade handles the bulk of boundary-style matrices
    first; the remainder uses a lazy heap keyed by the Markowitz fill
    estimate, revalidating stale entries on pop.
    """
    rows = {}
    cols = {}
    for (r, c), v in mat.items():
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, {})[r] = v
    rank = _singleton_cascade(rows, cols)
    heap = [(len(row), r) for r, row in rows.items()]
    heapq.heapify(heap)
    while heap:
        size, pr = heapq.heappop(heap)
        row = rows.get(pr)
        if row is None:
            continue
        if len(row) > size:
            heapq.heappush(heap, (len(row), pr))
            continue
        # cheapest unit pivot within the shortest row
        pc = pv = None
        best = None
        for c, v in row.items():
            if v in (1, -1):
                deg = len(cols[c])
                if best is None or deg < best:
                    best, pc, pv = deg, c, v
        if pc is None:
            continue  # re-pushed if a later update touches this row
        pivot_row = rows.pop(pr)
        for c in pivot_row:
            col = cols[c]
            col.pop(pr, None)
            if not col:
                del cols[c]
        for r in list(cols.get(pc, {})):
            other = rows[r]
            f = other[pc] * pv  # pv is its own inverse
            for c, v in pivot_row.items():
                nv = other.get(c, 0) - f * v
                if nv:
                    other[c] = nv
                    cols.setdefault(c, {})[r] = nv
                else:
                    if c in other:
                        del other[c]
                        col = cols[c]
                        del col[r]
                        if not col:
                            del cols[c]
            if not other:
                del rows[r]
            else:
                heapq.heappush(heap, (len(other), r))
        rank += 1
    residue = {}
    for r, row in rows.items():
        for c, v in row.items():
            residue[(r, c)] = v
    return rank, residue


def _dense_smith(mat):
    """Diagonal of the Smith form of a small dense matrix, as a sorted list."""
    if not mat:
        return []
    rows = sorted({r for r, _ in mat})
    cols = sorted({c for _, c in mat})
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    m, n = len(rows), len(cols)
    a = [[0] * n for _ in range(m)]
    for (r, c), v in mat.items():
        a[ri[r]][ci[c]] = v
    diag = []
    t = 0
    while t < m and t < n:
        # locate a minimal nonzero pivot in the remaining block
        pr = pc = -1
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, pr, pc = v, i, j
        if best is None:
            break
        a[t], a[pr] = a[pr], a[t]
        for row in a:
            row[t], row[pc] = row[pc], row[t]
        while True:
            # clear column t
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    for j in range(t, n):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        done = False
            # clear row t
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for i in range(t, m):
                            a[i][t], a[i][j] = a[i][j], a[i][t]
                        done = False
            if done:
                break
        # enforce divisibility of later entries by the pivot
        p = a[t][t]
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % p:
                    for jj in range(t, n):
                        a[t][jj] += a[i][jj]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        diag.append(abs(p))
        t += 1
    return diag


def smith_diagonal(mat):
    """Nonzero Smith normal form diagonal of a sparse integer matrix."""
    rank1, residue = _unit_pivot_eliminate(mat)
    return [1] * rank1 + _dense_smith(residue)


def rank_and_torsion(mat, nrows, ncols):
    """(rank, torsion coefficients > 1) of a sparse matrix of the given shape."""
    diag = smith_diagonal(mat)
    if len(diag) > min(nrows, ncols):
        raise AssertionError("Smith rank exceeds matrix shape")
    return len(diag), tuple(d for d in diag if d > 1)


def bareiss_rank(mat, nrows, ncols):
    """Fraction-free Gaussian rank, an independent cross-check on the SNF rank."""
    if not mat:
        return 0
    rows = sorted({r for r, _ in mat})
    cols = sorted({c for _, c in mat})
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    m, n = len(rows), len(cols)
    a = [[0] * n for _ in range(m)]
    for (r, c), v in mat.items():
        a[ri[r]][ci[c]] = v
    rank = 0
    prev = 1
    for t in range(min(m, n)):
        pr = next((i for i in range(rank, m) if any(a[i][rank:])), None)
        if pr is None:
            break
        pc = next(j for j in range(rank, n) if a[pr][j])
        a[rank], a[pr] = a[pr], a[rank]
        for row in a:
            row[rank], row[pc] = row[pc], row[rank]
        p = a[rank][rank]
        for i in range(rank + 1, m):
            for j in range(rank + 1, n):
                a[i][j] = (p * a[i][j] - a[i][rank] * a[rank][j]) // prev
            a[i][rank] = 0
        prev = p
        rank += 1
    return rank
