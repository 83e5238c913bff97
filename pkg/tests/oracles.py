"""Independent oracles used to freeze expected values in the test suite.

Everything here is deliberately primitive: brute-force enumeration and
textbook chain complexes, sharing as little code as possible with the
library under test.
"""

from fractions import Fraction
from itertools import permutations, product


def count_injections(m, n):
    """|I(m, n)| by brute force over all image tuples."""
    return sum(
        1
        for img in product(range(1, n + 1), repeat=m)
        if len(set(img)) == m
    )


def rational_rank(rows, ncols):
    """Row reduction over the rationals; rows are dense lists."""
    mat = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    col = 0
    while rank < len(mat) and col < ncols:
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            col += 1
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col] / pv
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        col += 1
    return rank


def group_homology(elements, mul, unit, top):
    """Integral group homology H_k for k <= top via the bar complex.

    C_k = Z[G^k]; the boundary alternates multiplying adjacent entries and
    dropping the ends.  Returns dict k -> (rank, sorted torsion list).
    """
    import sys
    import os
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
    from ispaces.zlinalg import rank_and_torsion

    idx = {g: i for i, g in enumerate(elements)}
    chains = [list(product(elements, repeat=k)) for k in range(top + 2)]

    def boundary(k):
        """Matrix of d: C_k -> C_{k-1} as dict (row, col) -> int."""
        rows = {t: i for i, t in enumerate(chains[k - 1])}
        mat = {}
        for col, tup in enumerate(chains[k]):
            entries = {}
            for i in range(k + 1):
                if i == 0:
                    face = tup[1:]
                elif i == k:
                    face = tup[:-1]
                else:
                    face = tup[: i - 1] + (mul(tup[i - 1], tup[i]),) + tup[i + 1:]
                entries[rows[face]] = entries.get(rows[face], 0) + (-1) ** i
            for r, v in entries.items():
                if v:
                    mat[(r, col)] = v
        return mat

    out = {}
    ranks = {}
    tors = {}
    for k in range(1, top + 2):
        n_rows = len(chains[k - 1])
        n_cols = len(chains[k])
        r, t = rank_and_torsion(boundary(k), n_rows, n_cols)
        ranks[k] = r
        tors[k] = t
    for k in range(top + 1):
        n_k = len(chains[k])
        rk = ranks.get(k, 0)
        rk1 = ranks.get(k + 1, 0)
        torsion = tuple(t for t in tors.get(k + 1, ()) if t > 1)
        out[k] = (n_k - rk - rk1, tuple(sorted(torsion)))
    return out


def sigma2_homology(top):
    """H_*(Sigma_2; Z): Z, then Z/2 in odd degrees, 0 in positive even."""
    return group_homology([0, 1], lambda a, b: (a + b) % 2, 0, top)


def comma_under_counts(n, N):
    """(objects, morphisms) of (n under I<=N) by brute force."""
    injs = {
        (a, b): [
            img
            for img in permutations(range(1, b + 1), a)
        ]
        for a in range(N + 1)
        for b in range(N + 1)
    }
    objects = [(m, img) for m in range(N + 1) for img in injs[(n, m)]]
    morphisms = 0
    for (m1, f) in objects:
        for (m2, h) in objects:
            for g in injs[(m1, m2)]:
                if tuple(g[v - 1] for v in f) == h:
                    morphisms += 1
    return len(objects), morphisms


def decomposition_counts(n):
    """(objects, morphisms) of the two-fold decomposition category over n."""
    injs = {}
    for a in range(n + 1):
        for b in range(n + 1):
            injs[(a, b)] = list(permutations(range(1, b + 1), a))
    objects = [
        ((n1, n2), img)
        for n1 in range(n + 1)
        for n2 in range(n + 1 - n1)
        for img in injs[(n1 + n2, n)]
    ]
    morphisms = 0
    for ((n1, n2), a) in objects:
        for ((m1, m2), b) in objects:
            for f1 in injs[(n1, m1)]:
                for f2 in injs[(n2, m2)]:
                    block = tuple(f1) + tuple(v + m1 for v in f2)
                    if tuple(b[v - 1] for v in block) == a:
                        morphisms += 1
    return len(objects), morphisms


def subsets_of(n):
    """All subsets of {1..n} in the library's level ordering."""
    from itertools import combinations
    return [frozenset(s) for k in range(n + 1)
            for s in combinations(range(1, n + 1), k)]
