"""Finite simplicial sets in degeneracy normal form.

A simplicial set is stored through its nondegenerate simplices only.  Every
simplex is a `SimplexRef`: a strictly decreasing word of degeneracy indices
applied to a nondegenerate base simplex (the unique Eilenberg-Zilber normal
form).  Face and degeneracy operators act on refs through the simplicial
identities, so validity checks, chain complexes and homology never enumerate
more than the nondegenerate content plus the words needed for a given
dimension.

Integer homology is computed from the normalized chain complex by Smith
normal form over arbitrary-precision integers; see `zlinalg`.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, NamedTuple, Optional

from .util import DisjointSet
from .zlinalg import rank_and_torsion


class SimplexRef(NamedTuple):
    """A possibly-degenerate simplex: s_{j1}...s_{jr} applied to a base.

    `degs` is strictly decreasing.  The dimension of the ref is
    base_dim + len(degs).
    """

    degs: tuple
    base_dim: int
    base_id: int

    @property
    def dim(self):
        return self.base_dim + len(self.degs)

    @property
    def is_nondegenerate(self):
        return not self.degs


def nd_ref(k, x):
    return SimplexRef((), k, x)


def apply_s(i, ref):
    """Degeneracy s_i applied to a ref, renormalized."""
    degs = (
        tuple(j + 1 for j in ref.degs if j >= i)
        + (i,)
        + tuple(j for j in ref.degs if j < i)
    )
    return SimplexRef(degs, ref.base_dim, ref.base_id)


def apply_word(word, ref):
    """Apply s_{word[0]} o ... o s_{word[-1]} to a ref."""
    for j in reversed(word):
        ref = apply_s(j, ref)
    return ref


@dataclass(frozen=True)
class SSet:
    """Finite simplicial set: nondegenerate simplex counts plus face refs.

    card[k] is the number of nondegenerate k-simplices (ids 0..card[k]-1).
    face maps (k, x, i) to the SimplexRef of d_i x, for 1 <= k, 0 <= i <= k.
    `complete` asserts that the untruncated object has no nondegenerate
    simplices above top_dim, so homology in every degree is trustworthy.
    """

    card: tuple
    face: dict
    complete: bool = False
    basepoint: Optional[int] = None

    @property
    def top_dim(self):
        return len(self.card) - 1

    def n_nondeg(self, k):
        if 0 <= k <= self.top_dim:
            return self.card[k]
        return 0

    def nondeg(self, k):
        return [nd_ref(k, x) for x in range(self.n_nondeg(k))]

    def all_simplices(self, k):
        """All k-simplices (degenerate included), deterministically ordered."""
        out = []
        for m in range(min(k, self.top_dim) + 1):
            r = k - m
            for x in range(self.card[m]):
                for word in combinations(range(k - 1, -1, -1), r):
                    out.append(SimplexRef(word, m, x))
        out.sort()
        return out

    def d(self, i, ref):
        """Face d_i of a ref, renormalized via the simplicial identities."""
        word = ref.degs
        out = []
        k = i
        for idx, j in enumerate(word):
            if k == j or k == j + 1:
                res = SimplexRef(word[idx + 1:], ref.base_dim, ref.base_id)
                break
            if k < j:
                out.append(j - 1)
            else:
                out.append(j)
                k -= 1
        else:
            res = self.face[(ref.base_dim, ref.base_id, k)]
        return apply_word(out, res)

    def s(self, i, ref):
        return apply_s(i, ref)

    def vertices_of(self, ref):
        """Vertex ids of a simplex, in simplex order."""
        k = ref.dim
        verts = []
        for j in range(k + 1):
            v = ref
            for i in range(k, j, -1):
                v = self.d(i, v)
            for _ in range(j):
                v = self.d(0, v)
            verts.append(v.base_id)
        return tuple(verts)

    def size(self):
        return sum(self.card)


def point(based=True):
    return SSet((1,), {}, complete=True, basepoint=0 if based else None)


def empty_sset():
    return SSet((0,), {}, complete=True)


def discrete(n, basepoint=None):
    """Discrete simplicial set on n vertices."""
    return SSet((n,), {}, complete=True, basepoint=basepoint)


def standard_simplex(n):
    """Delta^n: nondegenerate k-simplices are (k+1)-subsets of {0..n}."""
    simp = [sorted(combinations(range(n + 1), k + 1)) for k in range(n + 1)]
    index = [{s: i for i, s in enumerate(level)} for level in simp]
    face = {}
    for k in range(1, n + 1):
        for x, s in enumerate(simp[k]):
            for i in range(k + 1):
                t = s[:i] + s[i + 1:]
                face[(k, x, i)] = nd_ref(k - 1, index[k - 1][t])
    return SSet(tuple(len(level) for level in simp), face, complete=True)


def simplicial_circle():
    """S^1 = Delta^1 / boundary: one vertex, one nondegenerate edge."""
    face = {(1, 0, 0): nd_ref(0, 0), (1, 0, 1): nd_ref(0, 0)}
    return SSet((1, 1), face, complete=True, basepoint=0)


def sphere(n):
    """S^n as Delta^n collapsed along its boundary (n >= 1)."""
    dn = standard_simplex(n)
    sub = {k: set(range(dn.card[k])) for k in range(n)}
    sub[n] = set()
    return quotient(dn, sub)[0]


def validate_sset(X):
    """Diagnostics for the normal-form and simplicial-identity invariants."""
    bad = []
    for (k, x, i), ref in X.face.items():
        if not (0 <= k <= X.top_dim and 0 <= x < X.card[k] and 0 <= i <= k):
            bad.append(f"face key out of range: {(k, x, i)}")
            continue
        if ref.dim != k - 1:
            bad.append(f"face {(k, x, i)} has dimension {ref.dim}, wanted {k-1}")
            continue
        if list(ref.degs) != sorted(ref.degs, reverse=True) or len(set(ref.degs)) != len(ref.degs):
            bad.append(f"face {(k, x, i)} degeneracy word not strictly decreasing")
        if ref.degs and (ref.degs[0] > k - 2 or ref.degs[-1] < 0):
            bad.append(f"face {(k, x, i)} degeneracy index out of range")
        if not (0 <= ref.base_dim <= X.top_dim and 0 <= ref.base_id < X.card[ref.base_dim]):
            bad.append(f"face {(k, x, i)} base simplex missing")
    for k in range(1, X.top_dim + 1):
        for x in range(X.card[k]):
            for i in range(k + 1):
                if (k, x, i) not in X.face:
                    bad.append(f"missing face ({k}, {x}, {i})")
    if bad:
        return bad
    for k in range(2, X.top_dim + 1):
        for x in range(X.card[k]):
            r = nd_ref(k, x)
            for j in range(1, k + 1):
                dj = X.d(j, r)
                for i in range(j):
                    if X.d(i, dj) != X.d(j - 1, X.d(i, r)):
                        bad.append(
                            f"identity d_{i} d_{j} != d_{j-1} d_{i} at simplex ({k}, {x})"
                        )
    if X.basepoint is not None and not (0 <= X.basepoint < X.card[0]):
        bad.append("basepoint out of range")
    return bad


# ---------------------------------------------------------------------------
# Generic normalization of an explicit simplex table.
# ---------------------------------------------------------------------------

@dataclass
class NormTable:
    """A normalized SSet together with the dictionary raw -> SimplexRef."""

    sset: SSet
    ref_of: dict
    raw_of: dict  # (k, id) -> raw cell

    def ref(self, raw):
        return self.ref_of[raw]


def normalize_table(cells, face_fn, deg_fn, top_dim, complete=False, based_raw=None):
    """Build a normal-form SSet from an explicit simplex table.

    cells[k] lists ALL k-simplices (hashable, orderable) for k <= top_dim;
    face_fn(k, x, i) and deg_fn(k, x, i) return cells.  Ids are assigned in
    the given order of `cells`, which therefore fixes the canonical ids.
    """
    ref_of = {}
    raw_of = {}
    card = []
    face = {}
    for k in range(top_dim + 1):
        n = 0
        for raw in cells[k]:
            if raw in ref_of:
                continue
            hit = None
            for i in range(k):
                y = face_fn(k, raw, i + 1)
                if deg_fn(k - 1, y, i) == raw:
                    hit = (i, y)
                    break
            if hit is not None:
                i, y = hit
                ref_of[raw] = apply_s(i, ref_of[y])
            else:
                ref_of[raw] = nd_ref(k, n)
                raw_of[(k, n)] = raw
                if k >= 1:
                    for i in range(k + 1):
                        face[(k, n, i)] = ref_of[face_fn(k, raw, i)]
                n += 1
        card.append(n)
    bp = None
    if based_raw is not None:
        r = ref_of[based_raw]
        if r.dim != 0:
            raise ValueError("basepoint raw cell is not a vertex")
        bp = r.base_id
    return NormTable(SSet(tuple(card), face, complete=complete, basepoint=bp), ref_of, raw_of)


# ---------------------------------------------------------------------------
# Maps of simplicial sets.
# ---------------------------------------------------------------------------

@dataclass
class SMap:
    """Map of simplicial sets, stored on nondegenerate source simplices."""

    src: SSet
    dst: SSet
    table: dict  # (k, id) -> SimplexRef in dst

    def __call__(self, ref):
        img = self.table[(ref.base_dim, ref.base_id)]
        return apply_word(ref.degs, img)

    def compose(self, other):
        """self o other."""
        if other.dst is not self.src and other.dst != self.src:
            raise ValueError("composition mismatch")
        table = {k: self(v) for k, v in other.table.items()}
        return SMap(other.src, self.dst, table)

    def is_injective(self, dim_bound=None):
        top = self.src.top_dim if dim_bound is None else min(dim_bound, self.src.top_dim)
        for k in range(top + 1):
            seen = set()
            for ref in self.src.all_simplices(k):
                img = self(ref)
                if img in seen:
                    return False
                seen.add(img)
        return True

    def validate(self):
        bad = []
        for k in range(self.src.top_dim + 1):
            for x in range(self.src.card[k]):
                if (k, x) not in self.table:
                    bad.append(f"missing image of ({k}, {x})")
                    continue
                if self.table[(k, x)].dim != k:
                    bad.append(f"image of ({k}, {x}) has wrong dimension")
        if bad:
            return bad
        for k in range(1, self.src.top_dim + 1):
            for x in range(self.src.card[k]):
                r = nd_ref(k, x)
                for i in range(k + 1):
                    if self(self.src.d(i, r)) != self.dst.d(i, self(r)):
                        bad.append(f"does not commute with d_{i} at ({k}, {x})")
        return bad


def identity_map(X):
    table = {}
    for k in range(X.top_dim + 1):
        for x in range(X.card[k]):
            table[(k, x)] = nd_ref(k, x)
    return SMap(X, X, table)


def map_from_tables(src_tab, dst_tab, raw_fn):
    """SMap between two NormTable outputs given a map of raw cells."""
    table = {}
    for (k, x), raw in src_tab.raw_of.items():
        table[(k, x)] = dst_tab.ref_of[raw_fn(k, raw)]
    return SMap(src_tab.sset, dst_tab.sset, table)


# ---------------------------------------------------------------------------
# Products.
# ---------------------------------------------------------------------------

@dataclass
class ProductData:
    sset: SSet
    table: NormTable
    proj1: SMap
    proj2: SMap

    def pair_ref(self, ra, rb):
        """Ref of the product simplex with components ra, rb."""
        return self.table.ref_of[(ra, rb)]


def product(X, Y, dim_bound=None):
    """Categorical product, by shuffle decomposition of simplex pairs."""
    natural = X.top_dim + Y.top_dim
    top = natural if dim_bound is None else min(dim_bound, natural)
    if dim_bound is not None and dim_bound > natural and not (X.complete and Y.complete):
        raise ValueError("requested dimension exceeds available skeleta")
    cells = [
        [(ra, rb) for ra in X.all_simplices(k) for rb in Y.all_simplices(k)]
        for k in range(top + 1)
    ]

    def face_fn(k, raw, i):
        ra, rb = raw
        return (X.d(i, ra), Y.d(i, rb))

    def deg_fn(k, raw, i):
        ra, rb = raw
        return (apply_s(i, ra), apply_s(i, rb))

    based = None
    if X.basepoint is not None and Y.basepoint is not None:
        based = (nd_ref(0, X.basepoint), nd_ref(0, Y.basepoint))
    tab = normalize_table(
        cells, face_fn, deg_fn, top,
        complete=X.complete and Y.complete and top == natural,
        based_raw=based,
    )
    p1 = {}
    p2 = {}
    for (k, x), (ra, rb) in tab.raw_of.items():
        p1[(k, x)] = ra
        p2[(k, x)] = rb
    return ProductData(
        tab.sset, tab,
        SMap(tab.sset, X, p1), SMap(tab.sset, Y, p2),
    )


def pairing_map(prod, f, g):
    """(f, g): Z -> X x Y from maps f: Z -> X, g: Z -> Y."""
    table = {}
    for k in range(f.src.top_dim + 1):
        for x in range(f.src.card[k]):
            ra, rb = f(nd_ref(k, x)), g(nd_ref(k, x))
            table[(k, x)] = normalize_pair_ref(prod, ra, rb)
    return SMap(f.src, prod.sset, table)


def normalize_pair_ref(prod, ra, rb):
    """Locate the pair (ra, rb) as a SimplexRef of the product."""
    common = set(ra.degs) & set(rb.degs)
    if not common:
        return prod.table.ref_of[(ra, rb)]
    i = min(common)
    X, Y = prod.proj1.dst, prod.proj2.dst
    inner = normalize_pair_ref(prod, X.d(i + 1, ra), Y.d(i + 1, rb))
    return apply_s(i, inner)


# ---------------------------------------------------------------------------
# Quotients.
# ---------------------------------------------------------------------------

def subcomplex_closed(X, sub):
    """Check that `sub` (dict dim -> set of nondeg ids) is face-closed."""
    for k in range(1, X.top_dim + 1):
        for x in sub.get(k, ()):
            for i in range(k + 1):
                ref = X.face[(k, x, i)]
                if ref.base_id not in sub.get(ref.base_dim, ()):
                    return False
    return True


def quotient(X, sub):
    """Collapse a face-closed subcomplex to a basepoint.

    Returns (based SSet, function mapping old refs to new refs).  The
    basepoint is vertex 0 of the result; `sub` must be nonempty.
    """
    if not any(sub.get(k) for k in range(X.top_dim + 1)):
        raise ValueError("quotient by an empty subcomplex has no basepoint")
    if not subcomplex_closed(X, sub):
        raise ValueError("subcomplex is not closed under faces")
    newid = {}
    card = []
    for k in range(X.top_dim + 1):
        n = 1 if k == 0 else 0
        for x in range(X.card[k]):
            if x not in sub.get(k, ()):
                newid[(k, x)] = n
                n += 1
        card.append(n)

    def push(ref):
        if ref.base_id in sub.get(ref.base_dim, ()):
            return SimplexRef(tuple(range(ref.dim - 1, -1, -1)), 0, 0)
        return SimplexRef(ref.degs, ref.base_dim, newid[(ref.base_dim, ref.base_id)])

    face = {}
    for k in range(1, X.top_dim + 1):
        for x in range(X.card[k]):
            if x in sub.get(k, ()):
                continue
            for i in range(k + 1):
                face[(k, newid[(k, x)], i)] = push(X.face[(k, x, i)])
    return SSet(tuple(card), face, complete=X.complete, basepoint=0), push


# ---------------------------------------------------------------------------
# Bisimplicial sets and diagonals.
# ---------------------------------------------------------------------------

@dataclass
class BiSSet:
    """Explicit bisimplicial table: all cells in bidegrees (p, q) <= bound.

    Faces and degeneracies are callables (p, q, cell, i) -> cell acting in
    the horizontal or vertical direction.
    """

    cells: dict  # (p, q) -> list of raw cells
    fh: Callable
    fv: Callable
    dh: Callable
    dv: Callable
    bound: tuple  # (P, Q)

    def validate(self, sample=None):
        bad = []
        P, Q = self.bound
        for p in range(P + 1):
            for q in range(Q + 1):
                for cell in self.cells[(p, q)]:
                    if p >= 1 and q >= 1:
                        for i in range(p + 1):
                            for j in range(q + 1):
                                a = self.fv(p - 1, q, self.fh(p, q, cell, i), j)
                                b = self.fh(p, q - 1, self.fv(p, q, cell, j), i)
                                if a != b:
                                    bad.append(f"fh/fv do not commute at {(p, q)}")
                    if p >= 2:
                        for j in range(1, p + 1):
                            dj = self.fh(p, q, cell, j)
                            for i in range(j):
                                if self.fh(p - 1, q, dj, i) != self.fh(
                                    p - 1, q, self.fh(p, q, cell, i), j - 1
                                ):
                                    bad.append(f"horizontal identity fails at {(p, q)}")
                    if q >= 2:
                        for j in range(1, q + 1):
                            dj = self.fv(p, q, cell, j)
                            for i in range(j):
                                if self.fv(p, q - 1, dj, i) != self.fv(
                                    p, q - 1, self.fv(p, q, cell, i), j - 1
                                ):
                                    bad.append(f"vertical identity fails at {(p, q)}")
        return bad

    def diag(self, complete=False, based_raw=None):
        """Diagonal simplicial set, renormalized."""
        top = min(self.bound)
        cells = [list(self.cells[(k, k)]) for k in range(top + 1)]

        def face_fn(k, cell, i):
            return self.fv(k - 1, k, self.fh(k, k, cell, i), i)

        def deg_fn(k, cell, i):
            return self.dv(k + 1, k, self.dh(k, k, cell, i), i)

        return normalize_table(cells, face_fn, deg_fn, top, complete=complete,
                               based_raw=based_raw)


def external_product(X, Y, bound=None):
    """The bisimplicial set (p, q) -> X_p x Y_q."""
    P = X.top_dim + Y.top_dim if bound is None else bound
    cells = {}
    for p in range(P + 1):
        for q in range(P + 1):
            cells[(p, q)] = [
                (ra, rb) for ra in X.all_simplices(p) for rb in Y.all_simplices(q)
            ]
    return BiSSet(
        cells,
        fh=lambda p, q, c, i: (X.d(i, c[0]), c[1]),
        fv=lambda p, q, c, i: (c[0], Y.d(i, c[1])),
        dh=lambda p, q, c, i: (apply_s(i, c[0]), c[1]),
        dv=lambda p, q, c, i: (c[0], apply_s(i, c[1])),
        bound=(P, P),
    )


def diag(B, complete=False):
    """Diagonal of a bisimplicial set as a plain SSet."""
    return B.diag(complete=complete).sset


# ---------------------------------------------------------------------------
# Nerves of finite categories.
# ---------------------------------------------------------------------------

def nerve(C, D):
    """Nerve of a finite category, truncated at dimension D.

    k-simplices are composable chains c_0 -> ... -> c_k; identities give the
    degeneracies.  The result is marked complete when no nondegenerate
    D-chain exists (all longer chains are then degenerate as well).
    """
    if C.validate():
        raise ValueError("composition table is not a category: " + "; ".join(C.validate()))
    cells = [[("o", obj) for obj in sorted(C.objects)]]
    chains = [[()]]
    for k in range(1, D + 1):
        level = []
        for chain in chains[k - 1]:
            if k == 1:
                level.extend((f,) for f in sorted(C.morphisms))
            else:
                end = C.dst[chain[-1]]
                level.extend(chain + (f,) for f in sorted(C.morphisms) if C.src[f] == end)
        chains.append(level)
        cells.append([("c", ch) for ch in level])

    def face_fn(k, raw, i):
        ch = raw[1]
        if k == 1:
            return ("o", C.dst[ch[0]] if i == 0 else C.src[ch[0]])
        if i == 0:
            return ("c", ch[1:])
        if i == k:
            return ("c", ch[:-1])
        return ("c", ch[:i - 1] + (C.comp[(ch[i], ch[i - 1])],) + ch[i + 1:])

    def deg_fn(k, raw, i):
        if k == 0:
            return ("c", (C.ident[raw[1]],))
        ch = raw[1]
        obj = C.src[ch[i]] if i < k else C.dst[ch[-1]]
        return ("c", ch[:i] + (C.ident[obj],) + ch[i:])

    tab = normalize_table(cells, face_fn, deg_fn, D)
    complete = D > 0 and tab.sset.card[D] == 0
    sset = SSet(tab.sset.card, tab.sset.face, complete=complete)
    return NormTable(sset, tab.ref_of, tab.raw_of)


# ---------------------------------------------------------------------------
# Path components.
# ---------------------------------------------------------------------------

def pi0(X):
    """Partition of the vertex set by the coequalizer of d_0, d_1.

    Returns a dict vertex -> representative (smallest vertex id in class).
    """
    ds = DisjointSet()
    for v in range(X.card[0]):
        ds.add(v)
    for e in range(X.n_nondeg(1)):
        r = nd_ref(1, e)
        ds.union(X.d(0, r).base_id, X.d(1, r).base_id)
    return ds.canonicalize()


def pi0_classes(X):
    reps = pi0(X)
    return sorted(set(reps.values()))


def component_subcomplex(X, rep):
    """Full subcomplex on the component of the given pi0 representative.

    Returns (SSet, ref translation function).  All structure above dimension
    0 is carried along; components never share simplices.
    """
    reps = pi0(X)
    keep = [{x for x in range(X.card[0]) if reps[x] == rep}]
    newid = [{}, ]
    for x in sorted(keep[0]):
        newid[0][x] = len(newid[0])
    card = [len(newid[0])]
    face = {}
    for k in range(1, X.top_dim + 1):
        keep.append(set())
        newid.append({})
        for x in range(X.card[k]):
            v0 = X.vertices_of(nd_ref(k, x))[0]
            if reps[v0] == rep:
                keep[k].add(x)
                newid[k][x] = len(newid[k])
        card.append(len(newid[k]))
        for x in sorted(keep[k]):
            for i in range(k + 1):
                ref = X.face[(k, x, i)]
                face[(k, newid[k][x], i)] = SimplexRef(
                    ref.degs, ref.base_dim, newid[ref.base_dim][ref.base_id]
                )

    def push(ref):
        return SimplexRef(ref.degs, ref.base_dim, newid[ref.base_dim][ref.base_id])

    return SSet(tuple(card), face, complete=X.complete), push


# ---------------------------------------------------------------------------
# Chains and homology.
# ---------------------------------------------------------------------------

@dataclass
class ChainComplex:
    """Normalized chains: basis counts and sparse integer boundary maps."""

    counts: list
    boundaries: list  # boundaries[k]: dict (row, col) -> int, d_k: C_k -> C_{k-1}

    def validate(self):
        bad = []
        for k in range(2, len(self.counts)):
            prod = {}
            for (r, c), v in self.boundaries[k].items():
                for (r2, c2), w in self.boundaries[k - 1].items():
                    if c2 == r:
                        prod[(r2, c)] = prod.get((r2, c), 0) + v * w
            if any(v != 0 for v in prod.values()):
                bad.append(f"boundary squared nonzero in degree {k}")
        return bad


def chain_complex(X, top=None):
    top = X.top_dim if top is None else min(top, X.top_dim)
    counts = [X.n_nondeg(k) for k in range(top + 1)]
    boundaries = [{}]
    for k in range(1, top + 1):
        mat = {}
        for x in range(counts[k]):
            for i in range(k + 1):
                ref = X.face[(k, x, i)]
                if ref.is_nondegenerate:
                    key = (ref.base_id, x)
                    mat[key] = mat.get(key, 0) + (-1) ** i
        boundaries.append({k: v for k, v in mat.items() if v})
    return ChainComplex(counts, boundaries)


@dataclass
class HomologyReport:
    """Integral homology by degree: free rank and sorted torsion coefficients."""

    groups: dict  # k -> (rank, tuple of torsion coefficients)
    skeleton_dim: int
    complete: bool
    stable: Optional[bool] = None
    meta: dict = field(default_factory=dict)

    def group(self, k):
        return self.groups.get(k, (0, ()))

    def pretty(self, k):
        rank, tors = self.group(k)
        parts = ["Z"] * rank + [f"Z/{t}" for t in tors]
        return " + ".join(parts) if parts else "0"


def homology(X, d_report):
    """Integral homology of the normalized chains, degrees <= d_report.

    Requires the skeleton through dimension d_report + 1 unless X is marked
    complete.
    """
    if not X.complete and X.top_dim < d_report + 1:
        raise ValueError(
            f"homology through degree {d_report} needs simplices up to dimension "
            f"{d_report + 1}; have {X.top_dim} and no completeness guarantee"
        )
    cx = chain_complex(X, top=min(d_report + 1, X.top_dim))
    groups = {}
    ranks = {}
    tors = {}
    for k in range(1, len(cx.counts)):
        r, t = rank_and_torsion(cx.boundaries[k], cx.counts[k - 1], cx.counts[k])
        ranks[k] = r
        tors[k] = t
    for k in range(d_report + 1):
        n_k = cx.counts[k] if k < len(cx.counts) else 0
        rk = ranks.get(k, 0)
        rk1 = ranks.get(k + 1, 0)
        groups[k] = (n_k - rk - rk1, tuple(tors.get(k + 1, ())))
    return HomologyReport(groups, X.top_dim, X.complete)


def reduced_homology_trivial(X, d_report):
    """True iff X is connected with vanishing homology in degrees 1..d_report."""
    rep = homology(X, d_report)
    if rep.group(0) != (1, ()):
        return False
    return all(rep.group(k) == (0, ()) for k in range(1, d_report + 1))


def map_cone_homology(f, d_report):
    """Homology of the mapping cone of the induced map of normalized chains.

    Vanishing through degree D+1 certifies that f induces isomorphisms on
    H_k for k <= D and a surjection in degree D+1.
    """
    X, Y = f.src, f.dst
    top = min(d_report + 1, max(X.top_dim + 1, Y.top_dim))
    cx = chain_complex(X, top=min(top - 1, X.top_dim)) if top >= 1 else chain_complex(X, top=0)
    cy = chain_complex(Y, top=min(top, Y.top_dim))

    def cnt(c, k):
        return c.counts[k] if 0 <= k < len(c.counts) else 0

    def bnd(c, k):
        return c.boundaries[k] if 1 <= k < len(c.boundaries) else {}

    counts = [cnt(cx, k - 1) + cnt(cy, k) for k in range(top + 1)]
    boundaries = [{}]
    for k in range(1, top + 1):
        mat = {}
        offr = cnt(cx, k - 2)
        offc = cnt(cx, k - 1)
        for (r, c), v in bnd(cx, k - 1).items():
            mat[(r, c)] = -v
        for x in range(cnt(cx, k - 1)):
            img = f(nd_ref(k - 1, x))
            if img.is_nondegenerate:
                key = (offr + img.base_id, x)
                mat[key] = mat.get(key, 0) + 1
        for (r, c), v in bnd(cy, k).items():
            mat[(offr + r, offc + c)] = mat.get((offr + r, offc + c), 0) + v
        boundaries.append({k2: v for k2, v in mat.items() if v})
    groups = {}
    ranks = {}
    tors = {}
    for k in range(1, top + 1):
        r, t = rank_and_torsion(boundaries[k], counts[k - 1], counts[k])
        ranks[k] = r
        tors[k] = t
    for k in range(top):
        groups[k] = (counts[k] - ranks.get(k, 0) - ranks.get(k + 1, 0),
                     tuple(tors.get(k + 1, ())))

    def known_nondeg(Z, k):
        if k <= Z.top_dim:
            return Z.n_nondeg(k)
        return 0 if Z.complete else None

    # the top group is certifiable when the cone provably vanishes above it
    above_x = known_nondeg(X, top)
    above_y = known_nondeg(Y, top + 1)
    if above_x == 0 and above_y == 0:
        groups[top] = (counts[top] - ranks.get(top, 0), ())
    return groups


def map_is_homology_iso(f, d_report):
    """True iff f induces H_k-isomorphisms for k <= d_report.

    Certified through the mapping cone; needs skeleta through d_report + 2 on
    the target side (or completeness) to also see injectivity in top degree.
    """
    groups = map_cone_homology(f, d_report + 1)
    return all(groups.get(k, (0, ())) == (0, ()) for k in range(d_report + 2))


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------

def sset_to_json(X):
    faces = {}
    for (k, x, i), ref in sorted(X.face.items()):
        faces[f"{k}/{x}/{i}"] = {"deg": list(ref.degs), "base": ref.base_id}
    payload = {
        "top_dim": X.top_dim,
        "simplices": [list(range(X.card[k])) for k in range(X.top_dim + 1)],
        "faces": faces,
    }
    if X.basepoint is not None:
        payload["basepoint"] = X.basepoint
    return payload


def sset_from_json(payload):
    card = tuple(len(level) for level in payload["simplices"])
    face = {}
    for key, val in payload["faces"].items():
        k, x, i = (int(t) for t in key.split("/"))
        degs = tuple(val["deg"])
        face[(k, x, i)] = SimplexRef(degs, k - 1 - len(degs), val["base"])
    return SSet(card, face, basepoint=payload.get("basepoint"))


def sset_to_dot(X, name="sset"):
    """DOT export of the 1-skeleton."""
    lines = [f"graph {name} {{"]
    for v in range(X.card[0]):
        lines.append(f'  v{v} [label="{v}"];')
    for e in range(X.n_nondeg(1)):
        r = nd_ref(1, e)
        a, b = X.d(1, r).base_id, X.d(0, r).base_id
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines)
