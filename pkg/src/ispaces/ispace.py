"""Truncated diagram spaces over the injection category.

An ISpaceT assigns a finite simplicial set to every level 0..N and a
structure map to every injection between levels.  The module provides the
standard constructors (free, power, constant), the box product as an
explicit colimit over decomposition categories with union-find canonical
representatives, Bousfield-Kan homotopy colimits over the injection
category and over its subset-inclusion subcategory, latching objects,
flatness certificates, the level-shift functor R with its comparison map,
and the semistability diagnostic.
"""

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Optional

from . import icat
from .icat import Injection, TruncatedI, compose, concat, identity, subset_inclusion
from .simplicial import (
    NormTable,
    SMap,
    SSet,
    SimplexRef,
    apply_s,
    discrete,
    identity_map,
    map_cone_homology,
    map_from_tables,
    nd_ref,
    normalize_pair_ref,
    normalize_table,
    pi0,
    product,
    quotient,
    validate_sset,
)
from .util import DisjointSet


@dataclass
class ISpaceT:
    """Functor from the truncated injection category to simplicial sets."""

    N: int
    levels: tuple  # SSet per level 0..N
    maps: dict  # Injection -> SMap

    def level(self, n):
        return self.levels[n]

    def act(self, alpha):
        if alpha not in self.maps and alpha.image == tuple(range(1, alpha.src + 1)) \
                and alpha.src == alpha.dst:
            return identity_map(self.levels[alpha.src])
        return self.maps[alpha]

    def act_ref(self, alpha, ref):
        return self.act(alpha)(ref)

    def is_based(self):
        return all(X.basepoint is not None for X in self.levels)

    def validate(self, exhaustive=True):
        """Functoriality and well-formedness diagnostics."""
        bad = []
        cat = TruncatedI(self.N)
        for n in cat.objects:
            bad += [f"level {n}: {msg}" for msg in validate_sset(self.levels[n])]
        for alpha in cat.arrows():
            f = self.act(alpha)
            if f.src is not self.levels[alpha.src] or f.dst is not self.levels[alpha.dst]:
                if f.src != self.levels[alpha.src] or f.dst != self.levels[alpha.dst]:
                    bad.append(f"map at {alpha} has wrong endpoints")
                    continue
            bad += [f"map at {alpha}: {msg}" for msg in f.validate()]
        if bad:
            return bad
        for n in cat.objects:
            f = self.act(identity(n))
            for k in range(self.levels[n].top_dim + 1):
                for x in range(self.levels[n].card[k]):
                    if f(nd_ref(k, x)) != nd_ref(k, x):
                        bad.append(f"identity at level {n} does not act trivially")
        if not exhaustive:
            return bad
        for beta in cat.arrows():
            for alpha in cat.arrows():
                if alpha.dst != beta.src:
                    continue
                lhs = self.act(compose(beta, alpha))
                g, f = self.act(beta), self.act(alpha)
                for key in f.table:
                    if lhs.table[key] != g(f.table[key]):
                        bad.append(f"functoriality fails at {beta} after {alpha}")
                        break
        if self.is_based():
            for alpha in cat.arrows():
                f = self.act(alpha)
                src_bp = nd_ref(0, self.levels[alpha.src].basepoint)
                if f(src_bp).base_id != self.levels[alpha.dst].basepoint:
                    bad.append(f"basepoint not preserved by {alpha}")
        return bad


def restrict(X, N1):
    """Truncate to a smaller bound."""
    if N1 > X.N:
        raise ValueError("cannot extend a truncation")
    maps = {a: f for a, f in X.maps.items() if a.dst <= N1}
    return ISpaceT(N1, X.levels[: N1 + 1], maps)


def _discrete_ispace(N, points, act_point, basepoints=None):
    """ISpaceT with discrete levels from a point-level action function."""
    levels = tuple(
        discrete(len(points[n]), basepoint=None if basepoints is None else basepoints[n])
        for n in range(N + 1)
    )
    index = [{p: i for i, p in enumerate(points[n])} for n in range(N + 1)]
    maps = {}
    for alpha in TruncatedI(N).arrows():
        table = {
            (0, i): nd_ref(0, index[alpha.dst][act_point(alpha, p)])
            for i, p in enumerate(points[alpha.src])
        }
        maps[alpha] = SMap(levels[alpha.src], levels[alpha.dst], table)
    return ISpaceT(N, levels, maps)


def terminal_ispace(N, based=False):
    """The monoidal unit: one point in every level."""
    return _discrete_ispace(
        N,
        [[()] for _ in range(N + 1)],
        lambda alpha, p: (),
        basepoints=[0] * (N + 1) if based else None,
    )


def free_ispace(n, N):
    """F_n: level k is the discrete set of injections n -> k."""
    if n > N:
        raise ValueError("generator level exceeds the truncation")
    points = [icat.enumerate_injections(n, k) for k in range(N + 1)]
    return _discrete_ispace(N, points, lambda alpha, f: compose(alpha, f))


def constant_ispace(V, N):
    """Constant diagram at a fixed simplicial set; every map the identity."""
    ident = identity_map(V)
    maps = {alpha: ident for alpha in TruncatedI(N).arrows()}
    return ISpaceT(N, tuple(V for _ in range(N + 1)), maps)


def collapsing_ispace(N):
    """Level 1 has two points that every later structure map merges.

    The canonical non-flat example: X(1) -> X(2) is not injective.
    """
    points = [[0] if n != 1 else [0, 1] for n in range(N + 1)]

    def act_point(alpha, p):
        # only the identity of level 1 keeps the two points apart
        return p if alpha.src == alpha.dst == 1 else 0

    return _discrete_ispace(N, points, act_point)


def power_ispace(K, N, dim_bound=None):
    """K^bullet: level n is the n-fold product of a based simplicial set.

    Injections act by routing coordinate i to slot alpha(i) and filling the
    remaining slots with the basepoint.
    """
    if K.basepoint is None:
        raise ValueError("power construction needs a based simplicial set")
    tables = []
    for n in range(N + 1):
        natural = n * K.top_dim
        top = natural if dim_bound is None else min(dim_bound, natural)
        cells = [
            [tup for tup in iproduct(*[K.all_simplices(k)] * n)]
            for k in range(top + 1)
        ]

        def face_fn(k, raw, i):
            return tuple(K.d(i, r) for r in raw)

        def deg_fn(k, raw, i):
            return tuple(apply_s(i, r) for r in raw)

        bp = tuple(nd_ref(0, K.basepoint) for _ in range(n))
        tables.append(
            normalize_table(cells, face_fn, deg_fn, top,
                            complete=K.complete and top == natural, based_raw=bp)
        )
    levels = tuple(t.sset for t in tables)
    maps = {}
    for alpha in TruncatedI(N).arrows():
        src_t, dst_t = tables[alpha.src], tables[alpha.dst]
        base = nd_ref(0, K.basepoint)

        def push(k, raw, alpha=alpha, base=base):
            word = tuple(range(k - 1, -1, -1))
            filler = SimplexRef(word, 0, base.base_id) if k else base
            out = [filler] * alpha.dst
            for i, r in enumerate(raw):
                out[alpha(i + 1) - 1] = r
            return tuple(out)

        maps[alpha] = map_from_tables(src_t, dst_t, push)
    return ISpaceT(N, levels, maps)


# ---------------------------------------------------------------------------
# Box products.
# ---------------------------------------------------------------------------

def _compositions(total_max, parts):
    """All tuples of `parts` nonnegative ints with sum <= total_max."""
    if parts == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _compositions(total_max - first, parts - 1):
            yield (first,) + rest


@dataclass
class BoxLevel:
    """One level of a box product: normalized colimit plus class data."""

    n: int
    table: NormTable
    canon: list  # per dim: dict raw -> canonical raw

    def canon_raw(self, dim, raw):
        return self.canon[dim][raw]

    def ref(self, dim, raw):
        return self.table.ref_of[self.canon[dim][raw]]


@dataclass
class BoxISpace:
    """Box product of I-spaces with its colimit-class bookkeeping.

    Raw cells at level n, dimension k are triples (nvec, alpha_image, xrefs)
    with alpha an injection sum(nvec) -> n and xrefs a k-simplex per factor.
    """

    space: ISpaceT
    data: list  # BoxLevel per level
    factors: tuple
    dim_bound: int

    def class_ref(self, n, raw):
        dim = raw[2][0].dim if raw[2] else self._empty_dim(raw)
        return self.data[n].ref(dim, raw)

    def _empty_dim(self, raw):
        raise ValueError("zero-factor raw cells carry no dimension")


def _box_face(factors, raw, i):
    nvec, alpha, xrefs = raw
    return (nvec, alpha, tuple(f.level(m).d(i, r) for f, m, r in zip(factors, nvec, xrefs)))


def _box_deg(factors, raw, i):
    nvec, alpha, xrefs = raw
    return (nvec, alpha, tuple(apply_s(i, r) for r in xrefs))


def box_multi(factors, dim_bound, based=False):
    """Multi-factor box product as an explicit colimit, levelwise.

    Each level n is the colimit over decompositions (nvec, alpha) of the
    product of the factor levels, with the relations generated by all
    morphisms of the decomposition category; the canonical representative of
    a class is its lexicographically smallest raw cell.
    """
    k_factors = len(factors)
    N = min(f.N for f in factors)
    if k_factors == 0:
        unit = terminal_ispace(N, based=based)
        data = [
            BoxLevel(n, NormTable(unit.level(n), {}, {}), [])
            for n in range(N + 1)
        ]
        return BoxISpace(unit, data, (), dim_bound)
    if k_factors == 1:
        return _box_single(factors[0], dim_bound, based=based)
    hom_cache = {}

    def homs(m, n):
        if (m, n) not in hom_cache:
            hom_cache[(m, n)] = icat.enumerate_injections(m, n)
        return hom_cache[(m, n)]

    data = []
    for n in range(N + 1):
        objects = [
            (nvec, a)
            for nvec in _compositions(n, k_factors)
            for a in homs(sum(nvec), n)
        ]
        canon = []
        cells_by_dim = []
        for dim in range(dim_bound + 1):
            ds = DisjointSet()
            raws = []
            simp = {}
            for nvec, a in objects:
                simp_lists = [factors[i].level(nvec[i]).all_simplices(dim) for i in range(k_factors)]
                simp[(nvec, a)] = simp_lists
                for xs in iproduct(*simp_lists):
                    raw = (nvec, a.image, xs)
                    ds.add(raw)
                    raws.append(raw)
            for mvec, b in objects:
                for nvec in iproduct(*[range(m + 1) for m in mvec]):
                    for fs in iproduct(*[homs(nvec[i], mvec[i]) for i in range(k_factors)]):
                        a = compose(b, icat.concat_many(fs))
                        for xs in iproduct(*[factors[i].level(nvec[i]).all_simplices(dim)
                                             for i in range(k_factors)]):
                            ys = tuple(
                                factors[i].act(fs[i])(xs[i]) for i in range(k_factors)
                            )
                            ds.union((nvec, a.image, xs), (mvec, b.image, ys))
            canon.append(ds.canonicalize())
        reps = [sorted(set(canon[dim].values())) for dim in range(dim_bound + 1)]

        def face_fn(k, raw, i, canon=canon):
            return canon[k - 1][_box_face(factors, raw, i)]

        def deg_fn(k, raw, i, canon=canon):
            return canon[k + 1][_box_deg(factors, raw, i)]

        based_raw = None
        if based:
            nvec0 = (0,) * k_factors
            a0 = next(a for a in homs(0, n))
            xs0 = tuple(nd_ref(0, factors[i].level(0).basepoint) for i in range(k_factors))
            based_raw = canon[0][(nvec0, a0.image, xs0)]
        tab = normalize_table(reps, face_fn, deg_fn, dim_bound, based_raw=based_raw)
        data.append(BoxLevel(n, tab, canon))
    levels = tuple(d.table.sset for d in data)
    maps = {}
    for alpha in TruncatedI(N).arrows():
        src, dst = data[alpha.src], data[alpha.dst]
        table = {}
        for (k, x), raw in src.table.raw_of.items():
            nvec, a_img, xs = raw
            a2 = compose(alpha, Injection(sum(nvec), alpha.src, a_img))
            table[(k, x)] = dst.ref(k, (nvec, a2.image, xs))
        maps[alpha] = SMap(levels[alpha.src], levels[alpha.dst], table)
    return BoxISpace(ISpaceT(N, levels, maps), data, tuple(factors), dim_bound)


def _box_single(X, dim_bound, based=False):
    """One-factor box product: canonically the I-space itself.

    The class of ((m,), alpha, (x,)) is X(alpha)(x); representatives live at
    the identity decomposition, so the colimit is X(n) on the nose.
    """
    data = []
    for n in range(X.N + 1):
        canon = []
        ref_of = {}
        raw_of = {}
        top = min(dim_bound, max(X.level(n).top_dim, 0))
        for dim in range(dim_bound + 1):
            cdict = {}
            for m in range(n + 1):
                for a in icat.enumerate_injections(m, n):
                    for x in X.level(m).all_simplices(dim):
                        img = X.act(a)(x)
                        raw = ((m,), a.image, (x,))
                        key = ((n,), identity(n).image, (img,))
                        cdict[raw] = key
                        ref_of[key] = img
            canon.append(cdict)
        for k in range(X.level(n).top_dim + 1):
            for x in range(X.level(n).card[k]):
                raw_of[(k, x)] = ((n,), identity(n).image, (nd_ref(k, x),))
        data.append(BoxLevel(n, NormTable(X.level(n), ref_of, raw_of), canon))
    return BoxISpace(X, data, (X,), dim_bound)


def box(X, Y, dim_bound=None):
    """Two-factor box product."""
    if dim_bound is None:
        dim_bound = max(max(L.top_dim for L in X.levels),
                        max(L.top_dim for L in Y.levels)) + 1
    return box_multi((X, Y), dim_bound)


def rho(BXY, dim_bound=None):
    """The comparison box(X, Y) -> X x Y induced by the two projections."""
    X, Y = BXY.factors
    if dim_bound is None:
        dim_bound = BXY.dim_bound
    prods = []
    maps = {}
    for n in range(BXY.space.N + 1):
        P = product(X.level(n), Y.level(n))
        prods.append(P)
        table = {}
        for (k, x), raw in BXY.data[n].table.raw_of.items():
            nvec, a_img, (rx, ry) = raw
            a = Injection(sum(nvec), n, a_img)
            ax = compose(a, subset_inclusion(nvec[0], a.src))
            ay = compose(a, Injection(nvec[1], a.src,
                                      range(nvec[0] + 1, nvec[0] + nvec[1] + 1)))
            table[(k, x)] = normalize_pair_ref(P, X.act(ax)(rx), Y.act(ay)(ry))
        maps[n] = SMap(BXY.space.level(n), P.sset, table)
    return prods, maps


# ---------------------------------------------------------------------------
# Homotopy colimits.
# ---------------------------------------------------------------------------

def _chain_cells(X, S, arrows_of):
    """Raw cells of the simplicial replacement diagonal, dims 0..S.

    A raw s-cell is (levels, arrows, x): levels m_0 >= ... >= m_s, arrows[i]
    the image tuple of an injection m_{i+1} -> m_i, and x an s-simplex of
    X(m_s).  The diagram is evaluated at the small end of the chain.
    """
    cells = []
    chains = [[((m,), ()) for m in range(X.N + 1)]]
    for s in range(1, S + 1):
        level = []
        for levels, arrows in chains[s - 1]:
            for m in range(levels[-1] + 1):
                for f in arrows_of(m, levels[-1]):
                    level.append((levels + (m,), arrows + (f.image,)))
        chains.append(level)
    for s in range(S + 1):
        cells.append(
            [(lv, ar, x) for (lv, ar) in chains[s] for x in X.level(lv[-1]).all_simplices(s)]
        )
    return cells


def _hocolim_face(X, raw, i):
    levels, arrows, x = raw
    s = len(levels) - 1
    if s == 0:
        raise ValueError("vertices have no faces")
    if i == 0:
        return (levels[1:], arrows[1:], X.level(levels[-1]).d(0, x))
    if i == s:
        f = Injection(levels[s], levels[s - 1], arrows[s - 1])
        moved = X.act(f)(x)
        return (levels[:-1], arrows[:-1], X.level(levels[s - 1]).d(s, moved))
    f = compose(
        Injection(levels[i], levels[i - 1], arrows[i - 1]),
        Injection(levels[i + 1], levels[i], arrows[i]),
    )
    new_arrows = arrows[: i - 1] + (f.image,) + arrows[i + 1:]
    new_levels = levels[:i] + levels[i + 1:]
    return (new_levels, new_arrows, X.level(levels[-1]).d(i, x))


def _hocolim_deg(X, raw, i):
    levels, arrows, x = raw
    m = levels[i]
    new_levels = levels[: i + 1] + levels[i:]
    new_arrows = arrows[:i] + (identity(m).image,) + arrows[i:]
    return (new_levels, new_arrows, apply_s(i, x))


def _hocolim(X, S, arrows_of, based):
    cells = _chain_cells(X, S, arrows_of)
    tab = normalize_table(
        cells,
        lambda k, raw, i: _hocolim_face(X, raw, i),
        lambda k, raw, i: _hocolim_deg(X, raw, i),
        S,
    )
    if not based:
        return tab
    return _based_quotient(X, tab)


def _based_quotient(X, tab):
    """Collapse the copy of the index nerve sitting under the basepoints."""
    if not X.is_based():
        raise ValueError("based homotopy colimit needs a based diagram")
    sub = {}
    for (k, x), raw in tab.raw_of.items():
        levels, arrows, xref = raw
        bp = X.level(levels[-1]).basepoint
        if xref.base_dim == 0 and xref.base_id == bp:
            sub.setdefault(k, set()).add(x)
    Q, push = quotient(tab.sset, sub)
    ref_of = {raw: push(r) for raw, r in tab.ref_of.items()}
    raw_of = {}
    for (k, x), raw in tab.raw_of.items():
        r = push(SimplexRef((), k, x))
        if r.is_nondegenerate:
            raw_of[(r.base_dim, r.base_id)] = raw
    return NormTable(Q, ref_of, raw_of)


def hocolim_I(X, S, based=False):
    """Bousfield-Kan homotopy colimit over the truncated injection category."""
    tab = _hocolim(X, S, TruncatedI(X.N).hom, based)
    return tab


def hocolim_N(X, S, based=False):
    """Homotopy colimit over the subset-inclusion subcategory 0 < 1 < ... < N."""
    def arrows_of(m, n):
        return [subset_inclusion(m, n)]

    return _hocolim(X, S, arrows_of, based)


def hocolim_N_to_I_map(X, S):
    """The canonical comparison between the two homotopy colimits."""
    tn = hocolim_N(X, S)
    ti = hocolim_I(X, S)
    f = map_from_tables(tn, ti, lambda k, raw: raw)
    return f, tn, ti


def hocolim_map(phi, src_space, dst_space, S, over="I", based=False):
    """Induced map of homotopy colimits from a level natural transformation.

    phi is a dict n -> SMap from src_space(n) to dst_space(n).
    """
    def incl_only(m, n):
        return [subset_inclusion(m, n)]

    src_arrows = TruncatedI(src_space.N).hom if over == "I" else incl_only
    dst_arrows = TruncatedI(dst_space.N).hom if over == "I" else incl_only
    ts = _hocolim(src_space, S, src_arrows, based)
    td = _hocolim(dst_space, S, dst_arrows, based)

    def push(k, raw):
        levels, ar, x = raw
        return (levels, ar, phi[levels[-1]](x))

    return map_from_tables(ts, td, push), ts, td


# ---------------------------------------------------------------------------
# Latching objects.
# ---------------------------------------------------------------------------

def latching(X, n, dim_bound=None):
    """Colimit of X over the proper injections into n, with its map to X(n).

    Returns (SSet, SMap into X(n)).
    """
    if dim_bound is None:
        dim_bound = max((X.level(m).top_dim for m in range(n)), default=0)
    canon = []
    objects = [(m, a) for m in range(n) for a in icat.enumerate_injections(m, n)]
    for dim in range(dim_bound + 1):
        ds = DisjointSet()
        for m, a in objects:
            for x in X.level(m).all_simplices(dim):
                ds.add((m, a.image, x))
        for m, a in objects:
            for m2 in range(m):
                for f in icat.enumerate_injections(m2, m):
                    a2 = compose(a, f)
                    for x in X.level(m2).all_simplices(dim):
                        ds.union((m2, a2.image, x), (m, a.image, X.act(f)(x)))
        canon.append(ds.canonicalize())
    reps = [sorted(set(c.values())) for c in canon]

    def face_fn(k, raw, i):
        m, a_img, x = raw
        return canon[k - 1][(m, a_img, X.level(m).d(i, x))]

    def deg_fn(k, raw, i):
        m, a_img, x = raw
        return canon[k + 1][(m, a_img, apply_s(i, x))]

    tab = normalize_table(reps, face_fn, deg_fn, dim_bound)
    table = {}
    for (k, x), (m, a_img, xref) in tab.raw_of.items():
        table[(k, x)] = X.act(Injection(m, n, a_img))(xref)
    return tab.sset, SMap(tab.sset, X.level(n), table)


# ---------------------------------------------------------------------------
# Flatness.
# ---------------------------------------------------------------------------

@dataclass
class FlatCertificate:
    """Verdict plus a replayable witness when flatness fails."""

    flat: bool
    witness: Optional[dict] = None

    def replay(self, X):
        """Re-run the cited check; True iff the violation reproduces."""
        if self.flat:
            return True
        w = self.witness
        if w["kind"] == "non-injective":
            alpha = Injection(*w["alpha"])
            f = X.act(alpha)
            return f(w["pair"][0]) == f(w["pair"][1])
        l, m, n = w["triple"]
        inter, middle = _flat_images(X, l, m, n, w["dim"])
        return inter != middle


def _flat_images(X, l, m, n, dim):
    total = l + m + n
    first = X.act(subset_inclusion(l + m, total))
    last = X.act(Injection(m + n, total, range(l + 1, total + 1)))
    middle = X.act(Injection(m, total, range(l + 1, l + m + 1)))
    im1 = {first(r) for r in X.level(l + m).all_simplices(dim)}
    im2 = {last(r) for r in X.level(m + n).all_simplices(dim)}
    im3 = {middle(r) for r in X.level(m).all_simplices(dim)}
    return im1 & im2, im3


def is_flat(X):
    """Injectivity of all structure maps plus the image-intersection test."""
    for alpha in TruncatedI(X.N).arrows():
        f = X.act(alpha)
        for k in range(X.level(alpha.src).top_dim + 1):
            seen = {}
            for ref in X.level(alpha.src).all_simplices(k):
                img = f(ref)
                if img in seen:
                    return FlatCertificate(False, {
                        "kind": "non-injective",
                        "alpha": (alpha.src, alpha.dst, alpha.image),
                        "pair": (seen[img], ref),
                    })
                seen[img] = ref
    for l in range(1, X.N + 1):
        for m in range(X.N + 1 - l):
            for n in range(1, X.N + 1 - l - m):
                top = X.level(l + m + n).top_dim
                for dim in range(top + 1):
                    inter, middle = _flat_images(X, l, m, n, dim)
                    if inter != middle:
                        return FlatCertificate(False, {
                            "kind": "intersection",
                            "triple": (l, m, n),
                            "dim": dim,
                        })
    return FlatCertificate(True)


# ---------------------------------------------------------------------------
# The level-shift functor R and semistability.
# ---------------------------------------------------------------------------

def R_functor(X):
    """RX(n) = X(1 + n) at truncation N - 1, with the comparison map j_X.

    Returns (RX, j) where j is a dict n -> SMap X(n) -> RX(n) induced by the
    injections n -> 1 + n missing the first element.
    """
    if X.N < 1:
        raise ValueError("level shift needs truncation at least 1")
    N1 = X.N - 1
    levels = tuple(X.level(1 + n) for n in range(N1 + 1))
    maps = {}
    for alpha in TruncatedI(N1).arrows():
        maps[alpha] = X.act(concat(identity(1), alpha))
    RX = ISpaceT(N1, levels, maps)
    j = {}
    for n in range(N1 + 1):
        shift = Injection(n, 1 + n, range(2, n + 2))
        j[n] = X.act(shift)
    return RX, j


def iterate_R(X, k):
    out = X
    js = []
    for _ in range(k):
        out, j = R_functor(out)
        js.append(j)
    return out, js


@dataclass
class SemistabilityVerdict:
    verdict: str  # evidence-for | refuted | inconclusive
    witness: Optional[dict] = None
    detail: dict = field(default_factory=dict)


def _pi0_map_bijective(f):
    src_reps = pi0(f.src)
    dst_reps = pi0(f.dst)
    image = {}
    for v in range(f.src.card[0]):
        image[src_reps[v]] = dst_reps[f(nd_ref(0, v)).base_id]
    n_src = len(set(src_reps.values()))
    n_dst = len(set(dst_reps.values()))
    injective = len(set(image.values())) == n_src
    surjective = len(set(image.values())) == n_dst
    return injective and surjective, n_src, n_dst


def _semistability_run(X, D):
    """Single-truncation checks; returns list of (name, passed, data)."""
    S = D + 2
    results = []
    f, tn, ti = hocolim_N_to_I_map(X, S)
    ok, a, b = _pi0_map_bijective(f)
    results.append(("pi0-N-vs-I", ok, {"pi0_N": a, "pi0_I": b}))
    cone = map_cone_homology(f, D + 1)
    hom_ok = all(cone.get(k, (0, ())) == (0, ()) for k in range(D + 2))
    results.append(("homology-N-vs-I", hom_ok, {"cone": {k: v for k, v in cone.items()}}))
    if X.N >= 1:
        RX, j = R_functor(X)
        Xr = restrict(X, X.N - 1)
        g, _, _ = hocolim_map(j, Xr, RX, S, over="N")
        okj, aj, bj = _pi0_map_bijective(g)
        results.append(("pi0-jX", okj, {"pi0_src": aj, "pi0_dst": bj}))
        cone_j = map_cone_homology(g, D + 1)
        hj = all(cone_j.get(k, (0, ())) == (0, ()) for k in range(D + 2))
        results.append(("homology-jX", hj, {"cone": {k: v for k, v in cone_j.items()}}))
    return results


def semistability_diagnostic(X, D=1):
    """Three-valued verdict from two successive truncations.

    Refuted when the same named check fails at both truncations; evidence-for
    when everything passes at both; inconclusive otherwise.  Truncated
    computation can never certify semistability.
    """
    if X.N < 2:
        return SemistabilityVerdict("inconclusive",
                                    detail={"reason": "need truncation >= 2"})
    res_hi = _semistability_run(X, D)
    res_lo = _semistability_run(restrict(X, X.N - 1), D)
    detail = {"at_N": res_hi, "at_N_minus_1": res_lo}
    lo = dict((name, ok) for name, ok, _ in res_lo)
    for name, ok, data in res_hi:
        if not ok and lo.get(name) is False:
            return SemistabilityVerdict(
                "refuted", witness={"check": name, "data": data}, detail=detail)
    if all(ok for _, ok, _ in res_hi) and all(ok for _, ok, _ in res_lo):
        return SemistabilityVerdict("evidence-for", detail=detail)
    return SemistabilityVerdict("inconclusive", detail=detail)


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------

def ispace_to_json(X):
    from .simplicial import sset_to_json

    action = {}
    for alpha, f in sorted(X.maps.items()):
        key = f"{alpha.src}->{alpha.dst}:" + ",".join(map(str, alpha.image))
        action[key] = {
            f"{k}/{x}": {"deg": list(r.degs), "base_dim": r.base_dim, "base": r.base_id}
            for (k, x), r in sorted(f.table.items())
        }
    return {
        "trunc": X.N,
        "levels": [sset_to_json(L) for L in X.levels],
        "action": action,
    }
