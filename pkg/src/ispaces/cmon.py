"""Commutative monoids in truncated diagram spaces.

A CIMonoidT is an ISpaceT carrier with a unit vertex in level 0 and a
multiplication defined on pairs of equal-dimension simplices, landing in the
level-sum space.  The module provides the subsets model of the free monoid
on a degree-one generator, filtered models of ordinary commutative monoids,
presentations of the component monoid with Grothendieck groups and unit
detection, bar constructions, and the three-term comparison between the bar
construction of the diagram monoid and of its homotopy colimit.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations
from itertools import product as iproduct
from typing import Callable, Optional

from . import icat
from .icat import Injection, TruncatedI, compose, concat, identity, shuffle, subset_inclusion
from .simplicial import (
    NormTable,
    SMap,
    SSet,
    SimplexRef,
    apply_s,
    apply_word,
    discrete,
    homology,
    map_cone_homology,
    map_from_tables,
    nd_ref,
    normalize_table,
    pi0,
    pi0_classes,
)
from .ispace import (
    ISpaceT,
    _chain_cells,
    _discrete_ispace,
    _hocolim,
    _hocolim_deg,
    _hocolim_face,
    hocolim_I,
    is_flat,
    restrict,
    terminal_ispace,
)
from .util import DisjointSet
from .zlinalg import rank_and_torsion


def _full_word(k):
    return tuple(range(k - 1, -1, -1))


@dataclass
class CIMonoidT:
    """Commutative monoid object for the box product, at truncation N.

    mul(m, n, rx, ry) takes two simplices of equal dimension in levels m and
    n with m + n <= N and returns a simplex of level m + n.  It must commute
    with faces and degeneracies taken in both arguments simultaneously.
    """

    space: ISpaceT
    unit: int  # vertex id in level 0
    mul: Callable
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def N(self):
        return self.space.N

    def unit_ref(self, dim=0):
        return SimplexRef(_full_word(dim), 0, self.unit)

    def level(self, n):
        return self.space.level(n)


def validate_monoid(A, dim_bound=1):
    """Unitality, associativity, commutativity and naturality diagnostics."""
    bad = A.space.validate()
    if bad:
        return bad
    X = A.space
    N = A.N
    for m in range(N + 1):
        for n in range(N + 1 - m):
            for k in range(dim_bound + 1):
                for rx in X.level(m).all_simplices(k):
                    for ry in X.level(n).all_simplices(k):
                        p = A.mul(m, n, rx, ry)
                        if p.dim != k:
                            bad.append(f"mul({m},{n}) changes dimension")
                            continue
                        if k >= 1:
                            for i in range(k + 1):
                                lhs = X.level(m + n).d(i, p)
                                rhs = A.mul(m, n, X.level(m).d(i, rx),
                                            X.level(n).d(i, ry))
                                if lhs != rhs:
                                    bad.append(f"mul({m},{n}) does not commute with d_{i}")
                        tau = X.act(shuffle(m, n))
                        if tau(p) != A.mul(n, m, ry, rx):
                            bad.append(f"commutativity fails at ({m},{n})")
    for n in range(N + 1):
        for k in range(dim_bound + 1):
            u = A.unit_ref(k)
            for ry in X.level(n).all_simplices(k):
                if A.mul(0, n, u, ry) != ry:
                    bad.append(f"left unit fails at level {n}")
                if A.mul(n, 0, ry, u) != ry:
                    bad.append(f"right unit fails at level {n}")
    for m in range(N + 1):
        for n in range(N + 1 - m):
            for p_ in range(N + 1 - m - n):
                for k in range(dim_bound + 1):
                    for rx in X.level(m).all_simplices(k):
                        for ry in X.level(n).all_simplices(k):
                            for rz in X.level(p_).all_simplices(k):
                                a = A.mul(m + n, p_, A.mul(m, n, rx, ry), rz)
                                b = A.mul(m, n + p_, rx, A.mul(n, p_, ry, rz))
                                if a != b:
                                    bad.append(
                                        f"associativity fails at ({m},{n},{p_})")
    cat = TruncatedI(N)
    for alpha in cat.arrows():
        for beta in cat.arrows():
            if alpha.dst + beta.dst > N:
                continue
            both = X.act(concat(alpha, beta))
            fa, fb = X.act(alpha), X.act(beta)
            for k in range(dim_bound + 1):
                for rx in X.level(alpha.src).all_simplices(k):
                    for ry in X.level(beta.src).all_simplices(k):
                        lhs = both(A.mul(alpha.src, beta.src, rx, ry))
                        rhs = A.mul(alpha.dst, beta.dst, fa(rx), fb(ry))
                        if lhs != rhs:
                            bad.append(f"naturality fails at ({alpha},{beta})")
    return sorted(set(bad))


# ---------------------------------------------------------------------------
# Discrete constructors.
# ---------------------------------------------------------------------------

def discrete_monoid(N, points, act_point, mul_point, unit_point, name=""):
    """CIMonoidT with discrete levels built from point-level data.

    points[n] lists the vertices of level n; the unit must appear in level 0
    and be fixed as basepoint of every level it maps into.
    """
    space = _discrete_ispace(N, points, act_point,
                             basepoints=[pts.index(act_point(
                                 icat.subset_inclusion(0, n), unit_point))
                                 for n, pts in enumerate(points)])
    index = [{p: i for i, p in enumerate(points[n])} for n in range(N + 1)]

    def mul(m, n, rx, ry):
        if rx.degs != ry.degs:
            raise ValueError("discrete multiplication needs equal degeneracy words")
        v = index[m + n][mul_point(m, n, points[m][rx.base_id], points[n][ry.base_id])]
        return SimplexRef(rx.degs, 0, v)

    return CIMonoidT(space, index[0][unit_point], mul, name=name)


def c1(N):
    """The free commutative monoid on one degree-one generator: subsets model.

    Level n is the discrete set of subsets of {1..n}; injections act by
    direct image; multiplication shifts the second subset past the first
    level and takes the union.
    """
    points = [
        [frozenset(s) for k in range(n + 1)
         for s in combinations(range(1, n + 1), k)]
        for n in range(N + 1)
    ]

    def act_point(alpha, s):
        return frozenset(alpha(i) for i in s)

    def mul_point(m, n, s, t):
        return s | frozenset(i + m for i in t)

    return discrete_monoid(N, points, act_point, mul_point, frozenset(), name="C1")


def monoid_ispace(elements, add, degree, unit, N, name=""):
    """Filtered model of an ordinary commutative monoid.

    An element appears in level n once its degree is at most n; injections
    act as identity inclusions.  This preserves the component monoid, its
    Grothendieck group and its units; the model is intentionally not flat
    when any element has positive degree.
    """
    if degree(unit) != 0:
        raise ValueError("unit must have degree 0")
    for e in elements:
        if degree(e) < 0:
            raise ValueError("degrees must be nonnegative")
    points = [[e for e in elements if degree(e) <= n] for n in range(N + 1)]
    return discrete_monoid(
        N, points, lambda alpha, e: e,
        lambda m, n, x, y: add(x, y), unit, name=name)


def sec52_monoid(N):
    """The monoid {0, 0', 1, 2, ...} with 0'+0' = 0 and 0'+n = n for n >= 1.

    0 and 0' have degree 0; a positive element k has degree k.  Its group
    completion is the integers.
    """
    elements = ["0", "0p"] + [str(k) for k in range(1, N + 1)]

    def add(x, y):
        if x == "0":
            return y
        if y == "0":
            return x
        if x == "0p" and y == "0p":
            return "0"
        if x == "0p":
            return y
        if y == "0p":
            return x
        return str(int(x) + int(y))

    def degree(e):
        return 0 if e in ("0", "0p") else int(e)

    return monoid_ispace(elements, add, degree, "0", N, name="M52")


def integers_monoid(N):
    """Filtered model of the group of integers, graded by absolute value."""
    elements = list(range(-N, N + 1))
    return monoid_ispace(elements, lambda x, y: x + y, abs, 0, N, name="Z")


def cyclic2_monoid(N):
    """Genuinely constant model of the order-two group; this one is flat."""
    return monoid_ispace([0, 1], lambda x, y: (x + y) % 2, lambda e: 0, 0, N,
                         name="Z2")


# ---------------------------------------------------------------------------
# Free commutative monoids on an I-space.
# ---------------------------------------------------------------------------

def free_cmonoid(X, dim_bound=1):
    """Symmetrized box powers of X with word concatenation, truncated.

    Words are truncated at length N; the truncation is exact when X(0) is
    empty, because a length-k word then needs level at least k.  The carrier
    records `word_truncation_exact` in the monoid metadata.
    """
    N = X.N
    exact = X.level(0).size() == 0
    data = []
    for n in range(N + 1):
        canon = []
        for dim in range(dim_bound + 1):
            ds = DisjointSet()
            objects = [
                (nvec, a)
                for k in range(N + 1)
                for nvec in _compositions_exact(n, k)
                for a in icat.enumerate_injections(sum(nvec), n)
            ]
            for nvec, a in objects:
                for xs in iproduct(*[X.level(m).all_simplices(dim) for m in nvec]):
                    ds.add((nvec, a.image, xs))
            for mvec, b in objects:
                k = len(mvec)
                for nvec in iproduct(*[range(m + 1) for m in mvec]):
                    for fs in iproduct(*[icat.enumerate_injections(nvec[i], mvec[i])
                                         for i in range(k)]):
                        a = compose(b, icat.concat_many(fs))
                        for xs in iproduct(*[X.level(nvec[i]).all_simplices(dim)
                                             for i in range(k)]):
                            ys = tuple(X.act(fs[i])(xs[i]) for i in range(k))
                            ds.union((nvec, a.image, xs), (mvec, b.image, ys))
                # permutation relations quotient by the symmetric group
                for perm in permutations(range(k)):
                    if perm == tuple(range(k)):
                        continue
                    blockperm = _block_permutation(mvec, perm)
                    a = compose(b, blockperm)
                    nvec2 = tuple(mvec[perm[i]] for i in range(k))
                    for xs in iproduct(*[X.level(m).all_simplices(dim) for m in mvec]):
                        xs2 = tuple(xs[perm[i]] for i in range(k))
                        ds.union((nvec2, a.image, xs2), (mvec, b.image, xs))
            canon.append(ds.canonicalize())
        data.append(canon)
    reps = [[sorted(set(c[dim].values())) for dim in range(dim_bound + 1)]
            for c in data]
    tables = []
    for n in range(N + 1):
        canon = data[n]

        def face_fn(k, raw, i, n=n, canon=canon):
            nvec, a_img, xs = raw
            return canon[k - 1][(nvec, a_img,
                                 tuple(X.level(m).d(i, r) for m, r in zip(nvec, xs)))]

        def deg_fn(k, raw, i, n=n, canon=canon):
            nvec, a_img, xs = raw
            return canon[k + 1][(nvec, a_img, tuple(apply_s(i, r) for r in xs))]

        tables.append(normalize_table(reps[n], face_fn, deg_fn, dim_bound))
    levels = tuple(t.sset for t in tables)
    maps = {}
    for alpha in TruncatedI(N).arrows():
        table = {}
        for (k, x), raw in tables[alpha.src].raw_of.items():
            nvec, a_img, xs = raw
            a2 = compose(alpha, Injection(sum(nvec), alpha.src, a_img))
            key = data[alpha.dst][k][(nvec, a2.image, xs)]
            table[(k, x)] = tables[alpha.dst].ref_of[key]
        maps[alpha] = SMap(levels[alpha.src], levels[alpha.dst], table)
    space = ISpaceT(N, levels, maps)

    def mul(m, n, rx, ry):
        rawx = _word_raw(tables, m, rx)
        rawy = _word_raw(tables, n, ry)
        nvec = rawx[0] + rawy[0]
        ax = Injection(sum(rawx[0]), m, rawx[1])
        ay = Injection(sum(rawy[0]), n, rawy[1])
        a = concat(ax, ay)
        if len(nvec) > N:
            raise ValueError("word-length truncation overflow")
        raw = (nvec, a.image, rawx[2] + rawy[2])
        dim = rx.dim
        key = data[m + n][dim][raw]
        ref = tables[m + n].ref_of[key]
        if ref.dim < dim:
            # the empty word carries no simplex data; its raw cell is shared
            # across dimensions and normalizes to the unit vertex
            ref = SimplexRef(_full_word(dim), ref.base_dim, ref.base_id)
        return ref

    unit_key = data[0][0][((), (), ())]
    unit_id = tables[0].ref_of[unit_key].base_id
    mon = CIMonoidT(space, unit_id, mul, name="free",
                    meta={"word_truncation_exact": exact})
    mon.meta["tables"] = tables
    mon.meta["canon"] = data
    return mon


def _word_raw(tables, n, ref):
    """Raw word cell for a possibly-degenerate simplex of a free monoid level."""
    nvec, a_img, xs = tables[n].raw_of[(ref.base_dim, ref.base_id)]
    for j in reversed(ref.degs):
        xs = tuple(apply_s(j, r) for r in xs)
    return (nvec, a_img, xs)


def _compositions_exact(n, k):
    """Tuples of k nonnegative ints with sum at most n."""
    if k == 0:
        yield ()
        return
    for first in range(n + 1):
        for rest in _compositions_exact(n - first, k - 1):
            yield (first,) + rest


def _block_permutation(mvec, perm):
    """Injection permuting the blocks of sizes mvec according to perm.

    Maps the concatenation ordered by perm back into the original order:
    block perm[i] of the source lands on block perm[i] of the target.
    """
    offsets = [0]
    for m in mvec:
        offsets.append(offsets[-1] + m)
    image = []
    for i in range(len(mvec)):
        b = perm[i]
        image.extend(range(offsets[b] + 1, offsets[b] + mvec[b] + 1))
    return Injection(offsets[-1], offsets[-1], image)


# ---------------------------------------------------------------------------
# Component monoids and their presentations.
# ---------------------------------------------------------------------------

@dataclass
class CommMonoidPres:
    """Finite presentation of a commutative monoid.

    Relations are pairs of exponent vectors over the generators; the
    congruence they generate identifies the two sides.
    """

    generators: list
    relations: list  # list of (vec, vec), each a tuple of nonnegative ints

    def validate(self):
        bad = []
        g = len(self.generators)
        for u, v in self.relations:
            if len(u) != g or len(v) != g:
                bad.append(f"relation arity mismatch: {(u, v)}")
            if any(t < 0 for t in u + v):
                bad.append(f"negative exponent: {(u, v)}")
        return bad

    def to_json(self):
        return {"gens": [str(g) for g in self.generators],
                "rels": [[list(u), list(v)] for u, v in self.relations]}


def merged_classes(A):
    """Colimit of the level component sets along all injections.

    Returns (rep function on (level, vertex), sorted list of class reps,
    unit class rep).
    """
    ds = DisjointSet()
    level_reps = [pi0(A.level(n)) for n in range(A.N + 1)]
    for n in range(A.N + 1):
        for v in range(A.level(n).card[0]):
            ds.add((n, level_reps[n][v]))
    for alpha in TruncatedI(A.N).arrows():
        f = A.space.act(alpha)
        for v in range(A.level(alpha.src).card[0]):
            img = f(nd_ref(0, v)).base_id
            ds.union((alpha.src, level_reps[alpha.src][v]),
                     (alpha.dst, level_reps[alpha.dst][img]))
    rep = ds.canonicalize()

    def cls(n, v):
        return rep[(n, level_reps[n][v])]

    classes = sorted(set(rep.values()))
    return cls, classes, cls(0, A.unit)


def pi0_monoid(A):
    """Presentation of the component monoid of the homotopy colimit.

    Generators are the merged non-unit component classes; relations record
    every product of vertices with level sum at most N, then the
    presentation is minimized by eliminating definable generators and
    dropping relations derivable from the rest.

    Returns (CommMonoidPres, class-to-vector map keyed by class rep).
    """
    cls, classes, unit_cls = merged_classes(A)
    gens = [c for c in classes if c != unit_cls]
    gi = {c: i for i, c in enumerate(gens)}

    def evec(c):
        v = [0] * len(gens)
        if c != unit_cls:
            v[gi[c]] = 1
        return tuple(v)

    rels = set()
    for m in range(A.N + 1):
        for n in range(A.N + 1 - m):
            for x in range(A.level(m).card[0]):
                for y in range(A.level(n).card[0]):
                    p = A.mul(m, n, nd_ref(0, x), nd_ref(0, y))
                    lhs = _vec_add(evec(cls(m, x)), evec(cls(n, y)))
                    rhs = evec(cls(m + n, p.base_id))
                    if lhs != rhs:
                        rels.add(tuple(sorted((lhs, rhs))))
    pres = CommMonoidPres(list(gens), sorted(rels))
    pres, subst = _minimize_presentation(pres)
    class_vec = {c: _substitute(evec(c), subst, len(pres.generators))
                 for c in classes}
    return pres, class_vec


def _vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _minimize_presentation(pres):
    """Eliminate generators defined by a relation, then prune relations.

    Returns the reduced presentation plus the substitution map old-generator
    index -> vector over the surviving generators.
    """
    gens = list(pres.generators)
    rels = [tuple(sorted((u, v))) for u, v in pres.relations]
    subst = {i: tuple(1 if j == i else 0 for j in range(len(gens)))
             for i in range(len(gens))}
    changed = True
    while changed:
        changed = False
        for u, v in sorted(set(rels)):
            for a, b in ((u, v), (v, u)):
                if sum(a) == 1 and max(a) == 1:
                    i = a.index(1)
                    if b[i] == 0:
                        # generator i is definable as the word b
                        rels = [tuple(sorted((_elim(x, i, b), _elim(y, i, b))))
                                for x, y in rels]
                        for k in subst:
                            subst[k] = _elim(subst[k], i, b)
                        changed = True
                        break
            if changed:
                break
    live = sorted({j for vec in subst.values() for j, t in enumerate(vec) if t}
                  | {j for u, v in rels if u != v
                     for j, t in enumerate(_vec_add(u, v)) if t})
    proj = {j: k for k, j in enumerate(live)}

    def shrink(vec):
        return tuple(vec[j] for j in live)

    rels = sorted({(shrink(u), shrink(v)) for u, v in rels if u != v})
    new_gens = [gens[j] for j in live]
    subst = {i: shrink(v) for i, v in subst.items()}
    rels = _prune_relations(rels, len(new_gens))
    return CommMonoidPres(new_gens, rels), subst


def _elim(vec, i, word):
    """Replace generator i by `word` inside an exponent vector."""
    t = vec[i]
    out = list(vec)
    out[i] = 0
    for j, w in enumerate(word):
        out[j] += t * w
    return tuple(out)


def _substitute(vec, subst, g):
    out = (0,) * g
    for i, t in enumerate(vec):
        for _ in range(t):
            out = _vec_add(out, subst[i])
    return out


def _prune_relations(rels, g, step_bound=6):
    """Drop relations derivable from the others by bounded rewriting."""
    kept = list(rels)
    i = 0
    while i < len(kept):
        cand = kept[i]
        rest = kept[:i] + kept[i + 1:]
        if rest and _congruent(cand[0], cand[1], rest, step_bound):
            kept = rest
        else:
            i += 1
    return kept


def _congruent(u, v, rels, step_bound):
    """Bounded decision of u ~ v under the congruence generated by rels."""
    seen = {u}
    frontier = [u]
    for _ in range(step_bound):
        new = []
        for w in frontier:
            for a, b in rels:
                for src, dst in ((a, b), (b, a)):
                    if all(w[j] >= src[j] for j in range(len(w))):
                        w2 = tuple(w[j] - src[j] + dst[j] for j in range(len(w)))
                        if w2 == v:
                            return True
                        if w2 not in seen:
                            seen.add(w2)
                            new.append(w2)
        frontier = new
        if not frontier:
            break
    return v in seen


def grothendieck_group(pres):
    """Universal abelian group of the presented monoid: (rank, torsion)."""
    g = len(pres.generators)
    mat = {}
    for c, (u, v) in enumerate(pres.relations):
        for j in range(g):
            if u[j] != v[j]:
                mat[(j, c)] = u[j] - v[j]
    r, tors = rank_and_torsion(mat, g, len(pres.relations))
    return g - r, tors


# ---------------------------------------------------------------------------
# Units.
# ---------------------------------------------------------------------------

@dataclass
class UnitVerdict:
    """Per-class unit status with replayable witnesses."""

    status: dict  # vector -> ("unit", inverse vec) | ("non-unit", grading) | ("unknown",)

    def is_unit(self, vec):
        return self.status[vec][0] == "unit"

    def resolved(self):
        return all(s[0] != "unknown" for s in self.status.values())


def unit_verdicts(pres, vectors=None, bound=4, grading_cap=3):
    """Classify monoid elements as units or non-units, or report unknown.

    A unit witness is an inverse word; a non-unit witness is an additive
    grading into the naturals that respects all relations and is positive on
    the element.  Both are replayable.
    """
    g = len(pres.generators)
    if vectors is None:
        vectors = [tuple(1 if j == i else 0 for j in range(g)) for i in range(g)]
    zero = (0,) * g
    gradings = _relation_gradings(pres, grading_cap)
    status = {}
    for vec in vectors:
        if vec == zero:
            status[vec] = ("unit", zero)
            continue
        inv = _find_inverse(pres, vec, bound)
        if inv is not None:
            status[vec] = ("unit", inv)
            continue
        phi = next((p for p in gradings if _dot(p, vec) > 0), None)
        if phi is not None:
            status[vec] = ("non-unit", phi)
        else:
            status[vec] = ("unknown",)
    return UnitVerdict(status)


def _dot(p, v):
    return sum(a * b for a, b in zip(p, v))


def _relation_gradings(pres, cap):
    """All small additive functionals to the naturals killing the relations."""
    g = len(pres.generators)
    if g == 0 or (cap + 1) ** g > 200000:
        return []
    out = []
    for phi in iproduct(*[range(cap + 1)] * g):
        if any(phi) and all(_dot(phi, u) == _dot(phi, v) for u, v in pres.relations):
            out.append(phi)
    return out


def _find_inverse(pres, vec, bound):
    """Search words w with vec + w congruent to zero, small lengths first."""
    g = len(pres.generators)
    zero = (0,) * g
    words = [zero]
    for total in range(bound + 1):
        for w in _words_of_length(g, total):
            if _congruent(_vec_add(vec, w), zero, pres.relations, bound + 2):
                return w
    return None


def _words_of_length(g, total):
    if g == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _words_of_length(g - 1, total - first):
            yield (first,) + rest


def is_grouplike(A, bound=4):
    """True iff every component class of the monoid is a unit."""
    pres, class_vec = pi0_monoid(A)
    verdict = unit_verdicts(pres, vectors=sorted(set(class_vec.values())),
                            bound=bound)
    if not verdict.resolved():
        unknown = [v for v, s in verdict.status.items() if s[0] == "unknown"]
        raise ValueError(f"unit search unresolved for classes {unknown}")
    return all(verdict.is_unit(v) for v in class_vec.values())


@dataclass
class UnitsReport:
    units_monoid: "CIMonoidT"
    inclusion: dict  # level -> SMap
    unit_classes: list
    nonunit_classes: list
    level_split: dict  # n -> (unit vertex ids, non-unit vertex ids)
    closed_under_mul: bool
    absorption: bool


def units(A, bound=4):
    """The submonoid of unit components, with the complement decomposition.

    Refuses when any component class remains unresolved by the bounded unit
    search.
    """
    pres, class_vec = pi0_monoid(A)
    cls, classes, unit_cls = merged_classes(A)
    verdict = unit_verdicts(pres, vectors=sorted(set(class_vec.values())),
                            bound=bound)
    if not verdict.resolved():
        unknown = [c for c in classes if verdict.status[class_vec[c]][0] == "unknown"]
        raise ValueError(f"unresolved unit verdicts for classes {unknown}")
    unit_classes = [c for c in classes if verdict.is_unit(class_vec[c])]
    nonunit_classes = [c for c in classes if c not in unit_classes]
    level_split = {}
    keep = []
    for n in range(A.N + 1):
        us, nus = [], []
        for v in range(A.level(n).card[0]):
            (us if cls(n, v) in unit_classes else nus).append(v)
        level_split[n] = (us, nus)
        keep.append(us)
    # restricted carrier: unit components only (discrete data is enough for
    # vertices; higher simplices follow their first vertex's component)
    sub_levels = []
    newid = []
    for n in range(A.N + 1):
        ids = {}
        keep_by_dim = [set(keep[n])]
        X = A.level(n)
        for v in keep[n]:
            ids[(0, v)] = len([w for w in keep[n] if w < v])
        card = [len(keep[n])]
        face = {}
        for k in range(1, X.top_dim + 1):
            kept_k = []
            for x in range(X.card[k]):
                v0 = X.vertices_of(nd_ref(k, x))[0]
                if v0 in keep[n]:
                    ids[(k, x)] = len(kept_k)
                    kept_k.append(x)
            keep_by_dim.append(set(kept_k))
            card.append(len(kept_k))
            for x in kept_k:
                for i in range(k + 1):
                    ref = X.face[(k, x, i)]
                    face[(k, ids[(k, x)], i)] = SimplexRef(
                        ref.degs, ref.base_dim, ids[(ref.base_dim, ref.base_id)])
        bp = None
        if X.basepoint is not None and X.basepoint in keep[n]:
            bp = ids[(0, X.basepoint)]
        sub_levels.append(SSet(tuple(card), face, complete=X.complete, basepoint=bp))
        newid.append(ids)
    incl = {}
    for n in range(A.N + 1):
        table = {}
        for (k, x), new in newid[n].items():
            table[(k, new)] = nd_ref(k, x)
        incl[n] = SMap(sub_levels[n], A.level(n), table)
    maps = {}
    for alpha in TruncatedI(A.N).arrows():
        f = A.space.act(alpha)
        table = {}
        for (k, x), new in newid[alpha.src].items():
            img = f(nd_ref(k, x))
            table[(k, new)] = SimplexRef(
                img.degs, img.base_dim,
                newid[alpha.dst][(img.base_dim, img.base_id)])
        maps[alpha] = SMap(sub_levels[alpha.src], sub_levels[alpha.dst], table)
    space = ISpaceT(A.N, tuple(sub_levels), maps)

    def mul(m, n, rx, ry):
        px = incl[m](rx)
        py = incl[n](ry)
        p = A.mul(m, n, px, py)
        return SimplexRef(p.degs, p.base_dim,
                          newid[m + n][(p.base_dim, p.base_id)])

    closed = True
    for m in range(A.N + 1):
        for n in range(A.N + 1 - m):
            for x in level_split[m][0]:
                for y in level_split[n][0]:
                    p = A.mul(m, n, nd_ref(0, x), nd_ref(0, y))
                    if cls(m + n, p.base_id) not in unit_classes:
                        closed = False
    absorption = True
    for m in range(A.N + 1):
        for n in range(A.N + 1 - m):
            for x in level_split[m][1]:
                for y in range(A.level(n).card[0]):
                    p = A.mul(m, n, nd_ref(0, x), nd_ref(0, y))
                    if cls(m + n, p.base_id) in unit_classes:
                        absorption = False
    units_monoid = CIMonoidT(space, newid[0][(0, A.unit)], mul,
                             name=A.name + "-units")
    return UnitsReport(units_monoid, incl, unit_classes, nonunit_classes,
                       level_split, closed, absorption)


def monoid_map_on_pi0(f_levels, A, B):
    """Induced map of component monoids from level maps of a monoid map."""
    pres_a, vec_a = pi0_monoid(A)
    pres_b, vec_b = pi0_monoid(B)
    cls_a, classes_a, _ = merged_classes(A)
    cls_b, _, _ = merged_classes(B)
    gen_image = {}
    for n in range(A.N + 1):
        for v in range(A.level(n).card[0]):
            c = cls_a(n, v)
            img = f_levels[n](nd_ref(0, v)).base_id
            gen_image[c] = vec_b[cls_b(n, img)]
    return pres_a, vec_a, pres_b, gen_image


def is_virtually_surjective(f_levels, A, B):
    """True iff the induced map of Grothendieck groups is surjective."""
    pres_a, vec_a, pres_b, gen_image = monoid_map_on_pi0(f_levels, A, B)
    gb = len(pres_b.generators)
    mat = {}
    col = 0
    for c, (u, v) in enumerate(pres_b.relations):
        for j in range(gb):
            if u[j] != v[j]:
                mat[(j, col)] = u[j] - v[j]
        col += 1
    # images of the source generators, written in the target generators
    for i, g in enumerate(pres_a.generators):
        vec = gen_image.get(g)
        if vec is None:
            continue
        for j in range(gb):
            if vec[j]:
                mat[(j, col)] = vec[j]
        col += 1
    r, tors = rank_and_torsion(mat, gb, col)
    return r == gb and not tors


# ---------------------------------------------------------------------------
# Bar constructions.
# ---------------------------------------------------------------------------

def _power_canon(X, k, n, dim):
    """Canonical-representative dictionary for k-fold box power cells.

    Cells are (nvec, alpha_image, xrefs) with k blocks at level n and all
    components of the given dimension; relations come from factorwise
    injections between decompositions.
    """
    ds = DisjointSet()
    objects = [
        (nvec, a)
        for nvec in _compositions_exact(n, k)
        for a in icat.enumerate_injections(sum(nvec), n)
    ]
    for nvec, a in objects:
        for xs in iproduct(*[X.level(m).all_simplices(dim) for m in nvec]):
            ds.add((nvec, a.image, xs))
    for mvec, b in objects:
        for nvec in iproduct(*[range(m + 1) for m in mvec]):
            for fs in iproduct(*[icat.enumerate_injections(nvec[i], mvec[i])
                                 for i in range(k)]):
                a = compose(b, icat.concat_many(fs))
                for xs in iproduct(*[X.level(nvec[i]).all_simplices(dim)
                                     for i in range(k)]):
                    ys = tuple(X.act(fs[i])(xs[i]) for i in range(k))
                    ds.union((nvec, a.image, xs), (mvec, b.image, ys))
    return ds.canonicalize()


def _bar_face_raw(A, raw, i):
    """Horizontal bar face on a raw cell whose components are already faced."""
    nvec, a_img, xs = raw
    k = len(nvec)
    if i == 0:
        return (nvec[1:], a_img[nvec[0]:], xs[1:])
    if i == k:
        return (nvec[:-1], a_img[: sum(nvec) - nvec[-1]], xs[:-1])
    merged = A.mul(nvec[i - 1], nvec[i], xs[i - 1], xs[i])
    nv = nvec[: i - 1] + (nvec[i - 1] + nvec[i],) + nvec[i + 1:]
    return (nv, a_img, xs[: i - 1] + (merged,) + xs[i + 1:])


def _bar_deg_raw(A, raw, i, new_dim):
    """Horizontal bar degeneracy: insert an empty unit block at position i."""
    nvec, a_img, xs = raw
    u = A.unit_ref(new_dim)
    return (nvec[:i] + (0,) + nvec[i:], a_img, xs[:i] + (u,) + xs[i:])


@dataclass
class BarISpace:
    """Realized bar construction B(A) as an I-space with class bookkeeping."""

    monoid: CIMonoidT
    space: ISpaceT
    tables: list  # NormTable per level
    canon: list  # per level: canon dict per bar degree
    S: int

    def raw_ref(self, n, raw):
        k = len(raw[0])
        return self.tables[n].ref_of[self.canon[n][k][raw]]

    def ref_raw(self, n, ref):
        """Raw bar cell of a possibly-degenerate simplex of level n."""
        raw = self.tables[n].raw_of[(ref.base_dim, ref.base_id)]
        dim = ref.base_dim
        for j in reversed(ref.degs):
            nvec, a_img, xs = raw
            raw = (nvec, a_img, tuple(apply_s(j, r) for r in xs))
            raw = _bar_deg_raw(self.monoid, raw, j, dim + 1)
            dim += 1
        return raw


def bar(A, S, left=None, right=None):
    """Two-sided bar construction, realized levelwise by the diagonal.

    Only one-point modules are supported (the default); the result is then
    the classifying-space bar construction B(A).  Degree k of the underlying
    simplicial object is the k-fold box power of the carrier; the diagonal
    has its k-simplices in bar degree k.
    """
    for mod in (left, right):
        if mod is None:
            continue
        if any(L.size() != 1 for L in mod.levels):
            raise ValueError("only one-point bar modules are supported")
    X = A.space
    N = A.N
    canon = []
    tables = []
    for n in range(N + 1):
        cn = [_power_canon(X, k, n, k) for k in range(S + 1)]
        cells = [sorted(set(cn[k].values())) for k in range(S + 1)]

        def face_fn(k, raw, i, cn=cn):
            nvec, a_img, xs = raw
            faced = (nvec, a_img,
                     tuple(X.level(m).d(i, r) for m, r in zip(nvec, xs)))
            return cn[k - 1][_bar_face_raw(A, faced, i)]

        def deg_fn(k, raw, i, cn=cn):
            nvec, a_img, xs = raw
            degged = (nvec, a_img, tuple(apply_s(i, r) for r in xs))
            return cn[k + 1][_bar_deg_raw(A, degged, i, k + 1)]

        base = cn[0][((), (), ())]
        tables.append(normalize_table(cells, face_fn, deg_fn, S, based_raw=base))
        canon.append(cn)
    levels = tuple(t.sset for t in tables)
    maps = {}
    for alpha in TruncatedI(N).arrows():
        table = {}
        for (k, x), raw in tables[alpha.src].raw_of.items():
            nvec, a_img, xs = raw
            a2 = compose(alpha, Injection(sum(nvec), alpha.src, a_img))
            deg = len(nvec)
            key = canon[alpha.dst][deg][(nvec, a2.image, xs)]
            table[(k, x)] = tables[alpha.dst].ref_of[key]
        maps[alpha] = SMap(levels[alpha.src], levels[alpha.dst], table)
    space = ISpaceT(N, levels, maps)
    return BarISpace(A, space, tables, canon, S)


def bar_monoid(B):
    """B(A) as a commutative monoid, by blockwise interleaving.

    The product of two bar cells of equal degree multiplies corresponding
    blocks with the monoid multiplication and routes the interleaved blocks
    through the block shuffle.
    """
    A = B.monoid

    def mul(m, n, rx, ry):
        rawx = B.ref_raw(m, rx)
        rawy = B.ref_raw(n, ry)
        nv1, a1_img, xs = rawx
        nv2, a2_img, ys = rawy
        k = len(nv1)
        if len(nv2) != k:
            raise ValueError("bar cells of unequal degree")
        a1 = Injection(sum(nv1), m, a1_img)
        a2 = Injection(sum(nv2), n, a2_img)
        both = concat(a1, a2)
        off1 = [0]
        for t in nv1:
            off1.append(off1[-1] + t)
        off2 = [0]
        for t in nv2:
            off2.append(off2[-1] + t)
        image = []
        for i in range(k):
            image.extend(range(off1[i] + 1, off1[i] + nv1[i] + 1))
            image.extend(range(sum(nv1) + off2[i] + 1,
                               sum(nv1) + off2[i] + nv2[i] + 1))
        psi = Injection(sum(nv1) + sum(nv2), sum(nv1) + sum(nv2), image)
        gamma = compose(both, psi)
        nvec = tuple(nv1[i] + nv2[i] for i in range(k))
        zs = tuple(A.mul(nv1[i], nv2[i], xs[i], ys[i]) for i in range(k))
        return B.raw_ref(m + n, (nvec, gamma.image, zs))

    unit_id = B.space.level(0).basepoint
    return CIMonoidT(B.space, unit_id, mul, name=A.name + "-bar")


def bar_degree_space(A, k, dim_bound=1):
    """The degree-k piece of the simplicial bar object, as an I-space."""
    from .ispace import box_multi

    return box_multi(tuple(A.space for _ in range(k)), dim_bound).space


# ---------------------------------------------------------------------------
# The bar construction of the homotopy colimit.
# ---------------------------------------------------------------------------

def _chain_mul(A, z, w):
    """Monoid product on raw homotopy-colimit cells, by chain block sum."""
    lv1, ar1, x = z
    lv2, ar2, y = w
    lv = tuple(a + b for a, b in zip(lv1, lv2))
    ar = tuple(
        concat(Injection(lv1[i + 1], lv1[i], ar1[i]),
               Injection(lv2[i + 1], lv2[i], ar2[i])).image
        for i in range(len(ar1))
    )
    return (lv, ar, A.mul(lv1[-1], lv2[-1], x, y))


def _chain_unit(A, s):
    return ((0,) * (s + 1), ((),) * s, A.unit_ref(s))


def _hocolim_raws(X, S):
    return _chain_cells(X, S, TruncatedI(X.N).hom)


def bar_of_hocolim(A, K):
    """B of the simplicial monoid A_hI, truncated by total head level.

    Diagonal k-simplices are k-tuples of raw k-cells of the homotopy colimit
    whose top chain levels sum to at most N; bar faces multiply adjacent
    entries with the chainwise block-sum product.
    """
    X = A.space
    N = A.N
    raws = _hocolim_raws(X, K)

    def head(z):
        return z[0][0]

    cells = [[()]]
    for k in range(1, K + 1):
        level = []
        _tuples_bounded(raws[k], k, N, (), level, head)
        cells.append(level)

    def face_fn(k, raw, i):
        faced = tuple(_hocolim_face(X, z, i) for z in raw)
        if i == 0:
            return faced[1:]
        if i == k:
            return faced[:-1]
        merged = _chain_mul(A, faced[i - 1], faced[i])
        return faced[: i - 1] + (merged,) + faced[i + 1:]

    def deg_fn(k, raw, i):
        degged = tuple(_hocolim_deg(X, z, i) for z in raw)
        return degged[:i] + (_chain_unit(A, k + 1),) + degged[i:]

    return normalize_table(cells, face_fn, deg_fn, K, based_raw=())


def _tuples_bounded(pool, k, budget, prefix, out, weight):
    if k == 0:
        out.append(prefix)
        return
    for z in pool:
        w = weight(z)
        if w <= budget:
            _tuples_bounded(pool, k - 1, budget - w, prefix + (z,), out, weight)


def two_sided_bar_of_hocolim(A, K):
    """B(BI, A_hI, BI) with BI the nerve of the truncated injection category.

    Cells carry a leading and a trailing nerve chain; the outer bar faces
    absorb the boundary monoid entries into the nerve chains by block sum.
    """
    X = A.space
    N = A.N
    T = terminal_ispace(N)
    raws = _hocolim_raws(X, K)
    t_raws = _hocolim_raws(T, K)

    def head(z):
        return z[0][0]

    cells = []
    for k in range(K + 1):
        inner = []
        _tuples_bounded(raws[k], k, N, (), inner, head)
        level = []
        for c0 in t_raws[k]:
            for zs in inner:
                budget = N - head(c0) - sum(head(z) for z in zs)
                if budget < 0:
                    continue
                for c1 in t_raws[k]:
                    if head(c1) <= budget:
                        level.append((c0, zs, c1))
        cells.append(level)

    def t_strip(z):
        lv, ar, x = z
        return (lv, ar, SimplexRef(_full_word(x.dim), 0, 0))

    def face_fn(k, raw, i):
        c0, zs, c1 = raw
        c0f = _hocolim_face(T, c0, i)
        c1f = _hocolim_face(T, c1, i)
        zf = tuple(_hocolim_face(X, z, i) for z in zs)
        if i == 0:
            return (_chain_concat(c0f, t_strip(zf[0])), zf[1:], c1f)
        if i == k:
            return (c0f, zf[:-1], _chain_concat(t_strip(zf[-1]), c1f))
        merged = _chain_mul(A, zf[i - 1], zf[i])
        return (c0f, zf[: i - 1] + (merged,) + zf[i + 1:], c1f)

    def deg_fn(k, raw, i):
        c0, zs, c1 = raw
        unit = _chain_unit(A, k + 1)
        zd = tuple(_hocolim_deg(X, z, i) for z in zs)
        return (_hocolim_deg(T, c0, i), zd[:i] + (unit,) + zd[i:],
                _hocolim_deg(T, c1, i))

    zero_chain = ((0,), (), nd_ref(0, 0))
    return normalize_table(cells, face_fn, deg_fn, K,
                           based_raw=(zero_chain, (), zero_chain))


def _chain_concat(c, d):
    lv1, ar1, x = c
    lv2, ar2, y = d
    lv = tuple(a + b for a, b in zip(lv1, lv2))
    ar = tuple(
        concat(Injection(lv1[i + 1], lv1[i], ar1[i]),
               Injection(lv2[i + 1], lv2[i], ar2[i])).image
        for i in range(len(ar1))
    )
    return (lv, ar, SimplexRef(_full_word(len(lv) - 1), 0, 0))


# ---------------------------------------------------------------------------
# Group-completion comparisons.
# ---------------------------------------------------------------------------

def restrict_monoid(A, N1):
    return CIMonoidT(restrict(A.space, N1), A.unit, A.mul, name=A.name,
                     meta=dict(A.meta))


@dataclass
class BarComparisonReport:
    """Homology of the three bar-side spaces and the two comparison maps."""

    homology: dict  # "left" | "middle" | "right" -> HomologyReport
    pi0: dict  # term -> component count
    map_iso: dict  # "middle_to_left" | "middle_to_right" -> bool
    cones: dict  # map name -> cone homology groups
    stable: Optional[bool] = None
    trunc: int = 0


def _bar_comparison_once(A, D):
    K = D + 2
    B = bar(A, K)
    left_tab = _hocolim(B.space, K, TruncatedI(A.N).hom, False)
    middle_tab = two_sided_bar_of_hocolim(A, K)
    right_tab = bar_of_hocolim(A, K)

    def to_right(k, raw):
        return raw[1]

    def to_left(k, raw):
        c0, zs, c1 = raw
        lv = tuple(c0[0][i] + sum(z[0][i] for z in zs) + c1[0][i]
                   for i in range(k + 1))
        ar = []
        for i in range(k):
            parts = [Injection(c0[0][i + 1], c0[0][i], c0[1][i])]
            parts += [Injection(z[0][i + 1], z[0][i], z[1][i]) for z in zs]
            parts.append(Injection(c1[0][i + 1], c1[0][i], c1[1][i]))
            ar.append(icat.concat_many(parts).image)
        tail = lv[-1]
        nvec = tuple(z[0][-1] for z in zs)
        offset = c0[0][-1]
        image = []
        for t in nvec:
            image.extend(range(offset + 1, offset + t + 1))
            offset += t
        xref = B.raw_ref(tail, (nvec, tuple(image), tuple(z[2] for z in zs)))
        return (lv, tuple(ar), xref)

    f_right = map_from_tables(middle_tab, right_tab, to_right)
    f_left = map_from_tables(middle_tab, left_tab, to_left)
    reports = {
        "left": homology(left_tab.sset, D),
        "middle": homology(middle_tab.sset, D),
        "right": homology(right_tab.sset, D),
    }
    pi0_counts = {
        "left": len(pi0_classes(left_tab.sset)),
        "middle": len(pi0_classes(middle_tab.sset)),
        "right": len(pi0_classes(right_tab.sset)),
    }
    cones = {}
    iso = {}
    for name, f in (("middle_to_left", f_left), ("middle_to_right", f_right)):
        cone = map_cone_homology(f, D + 1)
        cones[name] = cone
        iso[name] = all(cone.get(k, (0, ())) == (0, ()) for k in range(D + 2))
    return BarComparisonReport(reports, pi0_counts, iso, cones, trunc=A.N)


def bar_comparison(A, D):
    """Three-term comparison at truncations N and N-1, with stability flag.

    Refuses when the carrier is not flat, since the comparison is only
    meaningful under that hypothesis.
    """
    cert = is_flat(A.space)
    if not cert.flat:
        raise ValueError(f"carrier is not flat: {cert.witness}")
    hi = _bar_comparison_once(A, D)
    if A.N >= 2:
        lo = _bar_comparison_once(restrict_monoid(A, A.N - 1), D)
        hi.stable = all(
            hi.homology[t].groups == lo.homology[t].groups for t in hi.homology
        ) and hi.map_iso == lo.map_iso
    return hi


def classifying_space_homology(A, D):
    """Homology of the bar construction of the homotopy colimit alone.

    Available without flatness; this is the group-completion observable for
    filtered monoid models whose carrier fails the flatness certificate.
    """
    tab = bar_of_hocolim(A, D + 1)
    return homology(tab.sset, D), tab


def iterated_bar_spectrum(A, n_max, D):
    """Based homotopy colimits of the iterated bar constructions.

    Entry k is the based homotopy colimit over the injection category of the
    k-fold bar construction, reported with homology through degree D.
    """
    out = []
    cur = A
    for k in range(n_max + 1):
        tab = _hocolim(cur.space, D + 1, TruncatedI(cur.N).hom, True)
        out.append((tab.sset, homology(tab.sset, D)))
        if k < n_max:
            cur = bar_monoid(bar(cur, D + 2))
    return out


def cimonoid_to_json(A, dim_bound=1):
    from .ispace import ispace_to_json

    payload = ispace_to_json(A.space)
    payload["unit"] = A.unit
    mult = {}
    for m in range(A.N + 1):
        for n in range(A.N + 1 - m):
            pairs = {}
            for rx in A.level(m).all_simplices(0):
                for ry in A.level(n).all_simplices(0):
                    p = A.mul(m, n, rx, ry)
                    pairs[f"{rx.base_id},{ry.base_id}"] = p.base_id
            mult[f"{m},{n}"] = pairs
    payload["mult"] = mult
    return payload
