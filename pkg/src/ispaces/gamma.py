"""Segal-style repackagings of commutative diagram-space monoids.

A GammaSpaceT assigns a based simplicial set to every finite based set k+
up to a bound, with functorial actions of based maps.  The monoid extraction
evaluates based homotopy colimits of box powers; based maps act by deleting,
multiplying and rerouting the box factors.  The module also provides
representables, the special/very-special verdicts, prolongation along a
based simplicial set, the two-variable smash extraction, and the
Eckmann-Hilton coincidence check on components.
"""

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Optional

from .icat import TruncatedI
from .simplicial import (
    SMap,
    SimplexRef,
    apply_s,
    discrete,
    map_cone_homology,
    map_from_tables,
    nd_ref,
    normalize_pair_ref,
    normalize_table,
    pi0,
    point,
    product,
)
from .ispace import _hocolim, box_multi
from .cmon import CommMonoidPres, _vec_add, unit_verdicts


def based_maps(k, l):
    """All based functions k+ -> l+, as length-k tuples over 0..l."""
    return sorted(iproduct(*[range(l + 1)] * k))


def compose_based(psi, phi):
    """psi after phi, for based maps given as image tuples."""
    return tuple(psi[v - 1] if v else 0 for v in phi)


def identity_based(k):
    return tuple(range(1, k + 1))


@dataclass
class GammaSpaceT:
    """Based functor on finite based sets up to a bound, evaluated lazily.

    `act_fn(phi, k, l)` builds the SMap for a based map phi: k+ -> l+; built
    maps are cached.
    """

    K: int
    values: list
    act_fn: Callable
    _cache: dict = field(default_factory=dict, repr=False)

    def act(self, phi, k, l):
        key = (phi, k, l)
        if key not in self._cache:
            self._cache[key] = self.act_fn(phi, k, l)
        return self._cache[key]

    def validate(self, K_check=None):
        bad = []
        if self.values[0].size() != 1:
            bad.append("value at 0+ is not a point")
        K = self.K if K_check is None else min(K_check, self.K)
        for k in range(K + 1):
            for l in range(K + 1):
                for phi in based_maps(k, l):
                    f = self.act(phi, k, l)
                    bad += [f"map {phi}: {m}" for m in f.validate()]
                    bp = self.values[k].basepoint
                    if f(nd_ref(0, bp)).base_id != self.values[l].basepoint:
                        bad.append(f"map {phi} not based")
        if bad:
            return bad
        for k in range(K + 1):
            f = self.act(identity_based(k), k, k)
            for key, ref in f.table.items():
                if ref != nd_ref(*key):
                    bad.append(f"identity does not act trivially at {k}+")
                    break
        for k in range(K + 1):
            for l in range(K + 1):
                for m in range(K + 1):
                    for phi in based_maps(k, l):
                        for psi in based_maps(l, m):
                            lhs = self.act(compose_based(psi, phi), k, m)
                            a = self.act(phi, k, l)
                            b = self.act(psi, l, m)
                            for key in a.table:
                                if lhs.table[key] != b(a.table[key]):
                                    bad.append(
                                        f"functoriality fails at {psi} after {phi}")
                                    break
        return bad


def representable(k, K):
    """The discrete functor of based maps out of k+."""
    if k > K:
        raise ValueError("representing object exceeds the bound")
    values = []
    index = []
    for l in range(K + 1):
        maps_l = based_maps(k, l)
        idx = {m: i for i, m in enumerate(maps_l)}
        zero = tuple(0 for _ in range(k))
        values.append(discrete(len(maps_l), basepoint=idx[zero]))
        index.append(idx)

    def act_fn(phi, a, b):
        table = {}
        for m, i in index[a].items():
            table[(0, i)] = nd_ref(0, index[b][compose_based(phi, m)])
        return SMap(values[a], values[b], table)

    return GammaSpaceT(K, values, act_fn)


# ---------------------------------------------------------------------------
# Extraction from a commutative monoid.
# ---------------------------------------------------------------------------

def _power_ref_raw(box, n, ref):
    """Raw box cell of a possibly-degenerate simplex of a power level."""
    raw = box.data[n].table.raw_of[(ref.base_dim, ref.base_id)]
    nvec, a_img, xs = raw
    for j in reversed(ref.degs):
        xs = tuple(apply_s(j, r) for r in xs)
    return (nvec, a_img, xs)


def _apply_based_to_raw(A, phi, l, raw, n):
    """Push a k-factor box raw cell along a based map phi: k+ -> l+.

    Factors sent to the basepoint are deleted; factors in the same fiber are
    multiplied in order; the decomposition injection is rerouted blockwise.
    """
    nvec, a_img, xs = raw
    k = len(nvec)
    offsets = [0]
    for t in nvec:
        offsets.append(offsets[-1] + t)
    new_nvec = []
    new_xs = []
    image = []
    dim = xs[0].dim if xs else 0
    for j in range(1, l + 1):
        fiber = [i for i in range(k) if phi[i] == j]
        total = sum(nvec[i] for i in fiber)
        acc = None
        lev = 0
        for i in fiber:
            if acc is None:
                acc, lev = xs[i], nvec[i]
            else:
                acc = A.mul(lev, nvec[i], acc, xs[i])
                lev += nvec[i]
        if acc is None:
            acc = A.unit_ref(dim)
        new_nvec.append(total)
        new_xs.append(acc)
        for i in fiber:
            image.extend(a_img[offsets[i]: offsets[i] + nvec[i]])
    return (tuple(new_nvec), tuple(image), tuple(new_xs))


def gamma_of_monoid(A, K, S, dim_bound=None):
    """The functor k+ -> based homotopy colimit of the k-fold box power.

    The one-variable value shares the code path of the based homotopy
    colimit of the carrier itself; based maps act on box factors via the
    monoid multiplication.
    """
    if dim_bound is None:
        dim_bound = S
    boxes = [None]
    for k in range(1, K + 1):
        boxes.append(box_multi(tuple(A.space for _ in range(k)), dim_bound,
                               based=True))
    cat_hom = TruncatedI(A.N).hom
    tabs = [None]
    for k in range(1, K + 1):
        tabs.append(_hocolim(boxes[k].space, S, cat_hom, True))
    values = [point()] + [t.sset for t in tabs[1:]]

    def act_fn(phi, k, l):
        if k == 0:
            bp = values[l].basepoint
            return SMap(values[0], values[l], {(0, 0): nd_ref(0, bp)})
        if l == 0:
            table = {}
            for d in range(values[k].top_dim + 1):
                for x in range(values[k].card[d]):
                    table[(d, x)] = SimplexRef(
                        tuple(range(d - 1, -1, -1)), 0, 0)
            return SMap(values[k], values[0], table)

        def push(d, raw):
            levels, arrows, xref = raw
            n = levels[-1]
            raw_box = _power_ref_raw(boxes[k], n, xref)
            moved = _apply_based_to_raw(A, phi, l, raw_box, n)
            dim = xref.dim
            new_ref = boxes[l].data[n].ref(dim, moved)
            return (levels, arrows, new_ref)

        return map_from_tables(tabs[k], tabs[l], push)

    gam = GammaSpaceT(K, values, act_fn)
    gam.boxes = boxes
    gam.tabs = tabs
    gam.monoid = A
    return gam


# ---------------------------------------------------------------------------
# Special and very special verdicts.
# ---------------------------------------------------------------------------

def projection_map(k, l, which):
    """p1 or p2: (k+l)+ -> k+ or l+."""
    if which == 1:
        return tuple(list(range(1, k + 1)) + [0] * l)
    return tuple([0] * k + list(range(1, l + 1)))


@dataclass
class SpecialVerdict:
    verdict: str  # special-evidence | refuted | inconclusive
    witness: Optional[dict] = None
    very_special: Optional[str] = None  # yes | refuted | unknown
    very_special_witness: Optional[dict] = None
    detail: dict = field(default_factory=dict)


def _pairing_bounded(prod, big, p1, p2, top):
    """(p1, p2): big -> prod, tabulated only through the given dimension."""
    table = {}
    for k in range(min(top, big.top_dim) + 1):
        for x in range(big.card[k]):
            ra, rb = p1(nd_ref(k, x)), p2(nd_ref(k, x))
            table[(k, x)] = normalize_pair_ref(prod, ra, rb)
    return SMap(big, prod, table)


def _min_levels(X, k):
    """Least diagram level carrying a vertex of each component of X(k+).

    Available when the functor records its homotopy-colimit provenance;
    returns None otherwise.
    """
    tabs = getattr(X, "tabs", None)
    if tabs is None:
        return None
    reps = pi0(X.values[k])
    out = {}
    for (d, v), raw in tabs[k].raw_of.items():
        if d != 0:
            continue
        levels, _, _ = raw
        c = reps[v]
        out[c] = min(out.get(c, levels[-1]), levels[-1])
    bp = X.values[k].basepoint
    if bp is not None:
        # the quotient keeps a single arbitrary raw for the collapsed vertex
        out[reps[bp]] = 0
    return out


def _pi0_pair_bijective(X, k, l):
    """Components of X((k+l)+) against component pairs of the factors.

    With colimit provenance, the target is restricted to pairs jointly
    representable within the level bound; truncation makes the unrestricted
    surjection unattainable for positively graded monoids.
    """
    big = X.values[k + l]
    a, b = X.values[k], X.values[l]
    p1 = X.act(projection_map(k, l, 1), k + l, k)
    p2 = X.act(projection_map(k, l, 2), k + l, l)
    ra, rb, rbig = pi0(a), pi0(b), pi0(big)
    image = {}
    for v in range(big.card[0]):
        image[rbig[v]] = (ra[p1(nd_ref(0, v)).base_id], rb[p2(nd_ref(0, v)).base_id])
    mla, mlb = _min_levels(X, k), _min_levels(X, l)
    if mla is None or mlb is None:
        n_pairs = len(set(ra.values())) * len(set(rb.values()))
    else:
        N = X.monoid.N
        n_pairs = sum(1 for ca in set(ra.values()) for cb in set(rb.values())
                      if mla[ca] + mlb[cb] <= N)
    inj = len(set(image.values())) == len(image)
    surj = len(set(image.values())) == n_pairs
    return inj and surj, len(image), n_pairs


def pi0_monoid_of_gamma(X):
    """The fold-induced monoid on components of the value at 1+.

    Products are defined through components of the value at 2+ when the
    projection pairing reaches them; the result is a presentation over the
    non-basepoint component classes.
    """
    one = X.values[1]
    two = X.values[2]
    fold = X.act((1, 1), 2, 1)
    p1 = X.act(projection_map(1, 1, 1), 2, 1)
    p2 = X.act(projection_map(1, 1, 2), 2, 1)
    r1 = pi0(one)
    unit_cls = r1[one.basepoint]
    gens = sorted(c for c in set(r1.values()) if c != unit_cls)
    gi = {c: i for i, c in enumerate(gens)}

    def evec(c):
        v = [0] * len(gens)
        if c != unit_cls:
            v[gi[c]] = 1
        return tuple(v)

    rels = set()
    for v in range(two.card[0]):
        a = r1[p1(nd_ref(0, v)).base_id]
        b = r1[p2(nd_ref(0, v)).base_id]
        c = r1[fold(nd_ref(0, v)).base_id]
        lhs = _vec_add(evec(a), evec(b))
        rhs = evec(c)
        if lhs != rhs:
            rels.add(tuple(sorted((lhs, rhs))))
    pres = CommMonoidPres([str(g) for g in gens], sorted(rels))
    class_vec = {c: evec(c) for c in sorted(set(r1.values()))}
    return pres, class_vec


def is_special(X, D=0, unit_bound=4):
    """Evidence verdict for the Segal condition at the truncation.

    Checks that the projections induce component bijections (and homology
    isomorphisms through degree D when D is positive) for all k + l within
    the bound, then tests whether the fold monoid on components is a group.
    """
    detail = {}
    witness = None
    for k in range(1, X.K):
        for l in range(1, X.K + 1 - k):
            ok, got, want = _pi0_pair_bijective(X, k, l)
            detail[f"pi0({k},{l})"] = {"classes": got, "pairs": want, "ok": ok}
            if not ok and witness is None:
                witness = {"check": "pi0", "pair": (k, l),
                           "classes": got, "expected_pairs": want}
            if D >= 1 and ok:
                big = X.values[k + l]
                top = min(D + 2, X.values[k].top_dim + X.values[l].top_dim)
                P = product(X.values[k], X.values[l], dim_bound=top)
                p1 = X.act(projection_map(k, l, 1), k + l, k)
                p2 = X.act(projection_map(k, l, 2), k + l, l)
                f = _pairing_bounded(P, big, p1, p2, top)
                cone = map_cone_homology(f, D + 1)
                iso = all(cone.get(i, (0, ())) == (0, ())
                          for i in range(D + 2))
                detail[f"homology({k},{l})"] = {
                    "cone": cone, "ok": iso}
                if not iso and witness is None:
                    witness = {"check": "homology", "pair": (k, l), "cone": cone}
    verdict = "special-evidence" if witness is None else "refuted"
    vs = "unknown"
    vs_witness = None
    if X.K >= 2:
        pres, class_vec = pi0_monoid_of_gamma(X)
        uv = unit_verdicts(pres, vectors=sorted(set(class_vec.values())),
                           bound=unit_bound)
        if uv.resolved():
            non_units = [c for c, v in class_vec.items() if not uv.is_unit(v)]
            if non_units:
                vs = "refuted"
                vs_witness = {"non_unit_classes": non_units,
                              "witness": uv.status[class_vec[non_units[0]]]}
            else:
                vs = "yes"
        detail["pi0_monoid"] = pres.to_json()
    return SpecialVerdict(verdict, witness, vs, vs_witness, detail)


# ---------------------------------------------------------------------------
# Prolongation.
# ---------------------------------------------------------------------------

def prolong(X, Kbase, dim_bound=None):
    """Evaluate a Gamma-space on a based simplicial set, then take diagonals.

    The based set of s-simplices of the argument is identified with c+ by
    listing the basepoint-degenerate simplex first and the rest in a fixed
    order; structure maps of the argument act through the functor.
    """
    if Kbase.basepoint is None:
        raise ValueError("prolongation needs a based argument")
    if dim_bound is None:
        dim_bound = X.K
    sizes = []
    orders = []
    for s in range(dim_bound + 1):
        simps = Kbase.all_simplices(s)
        bp = SimplexRef(tuple(range(s - 1, -1, -1)), 0, Kbase.basepoint)
        rest = sorted(r for r in simps if r != bp)
        orders.append({r: i + 1 for i, r in enumerate(rest)} | {bp: 0})
        sizes.append(len(rest))
        if len(rest) > X.K:
            raise ValueError(
                f"argument has {len(rest)} non-basepoint simplices in "
                f"dimension {s}; bound is {X.K}")

    def op_map(s, t, op):
        """Based map (sizes[s])+ -> (sizes[t])+ induced by a simplex operator."""
        inv = {i: r for r, i in orders[s].items()}
        return tuple(orders[t][op(inv[i])] for i in range(1, sizes[s] + 1))

    cells = [
        [(s, r) for r in X.values[sizes[s]].all_simplices(s)]
        for s in range(dim_bound + 1)
    ]

    def face_fn(s, raw, i):
        _, ref = raw
        phi = op_map(s, s - 1, lambda r: Kbase.d(i, r))
        f = X.act(phi, sizes[s], sizes[s - 1])
        return (s - 1, X.values[sizes[s - 1]].d(i, f(ref)))

    def deg_fn(s, raw, i):
        _, ref = raw
        phi = op_map(s, s + 1, lambda r: apply_s(i, r))
        f = X.act(phi, sizes[s], sizes[s + 1])
        return (s + 1, apply_s(i, f(ref)))

    bp0 = (0, nd_ref(0, X.values[sizes[0]].basepoint))
    tab = normalize_table(cells, face_fn, deg_fn, dim_bound, based_raw=bp0)
    return tab.sset


# ---------------------------------------------------------------------------
# Two-variable smash extraction and the Eckmann-Hilton check.
# ---------------------------------------------------------------------------

def smash_index(k, l):
    """Lexicographic identification of k+ smash l+ with (k*l)+."""
    def pair_to_point(i, j):
        if i == 0 or j == 0:
            return 0
        return (i - 1) * l + j

    return pair_to_point


@dataclass
class BiGammaT:
    """Two-variable based functor obtained by smashing the arguments."""

    K: int
    gamma: GammaSpaceT

    def value(self, k, l):
        return self.gamma.values[k * l]

    def act1(self, phi, k, l, k2):
        """Action of phi: k+ -> k2+ in the first variable."""
        sm_src = smash_index(k, l)
        sm_dst = smash_index(k2, l)
        image = []
        for i in range(1, k + 1):
            for j in range(1, l + 1):
                image.append(sm_dst(phi[i - 1], j))
        return self.gamma.act(tuple(image), k * l, k2 * l)

    def act2(self, k, phi, l, l2):
        sm_dst = smash_index(k, l2)
        image = []
        for i in range(1, k + 1):
            for j in range(1, l + 1):
                image.append(sm_dst(i, phi[j - 1]))
        return self.gamma.act(tuple(image), k * l, k * l2)

    def validate(self):
        bad = []
        for k in range(self.K + 1):
            if self.value(k, 0).size() != 1 or self.value(0, k).size() != 1:
                bad.append(f"value at ({k}+, 0+) is not a point")
        return bad


def bi_gamma_from(A, K, S):
    """BiGammaT with values A_Gamma(k+ smash l+)."""
    gam = gamma_of_monoid(A, K * K, S)
    return BiGammaT(K, gam)


@dataclass
class EckmannHiltonReport:
    passed: bool
    products: dict  # (class a, class b) -> (row product, column product)
    witness: Optional[dict] = None


def eckmann_hilton_check(X):
    """Compare the two fold products on components of the (1+, 1+) value.

    Requires the component pairings through (2+, 1+) and (1+, 2+) to be
    bijective onto pairs; refuses with a witness otherwise.  Then both
    products are computed on every representable class pair and compared.
    """
    for (k, l, which) in ((2, 1, "rows"), (1, 2, "columns")):
        ok, got, want, _ = _bi_pairing_ok(X, k, l)
        if not ok:
            raise ValueError(f"bi-special component pairing fails for {which}: "
                             f"{got} classes vs {want} pairs")
    prod_row = _fold_products(X, 2, 1)
    prod_col = _fold_products(X, 1, 2)
    products = {}
    witness = None
    for key in sorted(set(prod_row) | set(prod_col)):
        a = prod_row.get(key)
        b = prod_col.get(key)
        products[key] = (a, b)
        if a is not None and b is not None and a != b and witness is None:
            witness = {"pair": key, "row": a, "column": b}
    passed = witness is None and products
    return EckmannHiltonReport(bool(passed), products, witness)


def _bi_pairing_ok(X, k, l):
    big = X.value(k, l)
    one = X.value(1, 1)
    if k == 2:
        pa = X.act1((1, 0), 2, 1, 1)
        pb = X.act1((0, 1), 2, 1, 1)
    else:
        pa = X.act2(1, (1, 0), 2, 1)
        pb = X.act2(1, (0, 1), 2, 1)
    rbig, r1 = pi0(big), pi0(one)
    image = {}
    for v in range(big.card[0]):
        image[rbig[v]] = (r1[pa(nd_ref(0, v)).base_id], r1[pb(nd_ref(0, v)).base_id])
    ml = _min_levels(X.gamma, 1)
    if ml is None:
        n_pairs = len(set(r1.values())) ** 2
    else:
        N = X.gamma.monoid.N
        n_pairs = sum(1 for a in set(r1.values()) for b in set(r1.values())
                      if ml[a] + ml[b] <= N)
    distinct = len(set(image.values()))
    ok = distinct == len(image) == n_pairs
    return ok, len(image), n_pairs, image


def _fold_products(X, k, l):
    """Partial product table on (1+,1+)-components via the (k,l) fold."""
    big = X.value(k, l)
    one = X.value(1, 1)
    if k == 2:
        fold = X.act1((1, 1), 2, 1, 1)
    else:
        fold = X.act2(1, (1, 1), 2, 1)
    _, _, _, image = _bi_pairing_ok(X, k, l)
    rbig, r1 = pi0(big), pi0(one)
    table = {}
    for v in range(big.card[0]):
        pair = image[rbig[v]]
        table[pair] = r1[fold(nd_ref(0, v)).base_id]
    return table
