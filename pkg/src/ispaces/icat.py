"""The category of finite sets and injections, truncated at a top object.

Objects are 0, 1, ..., N standing for the sets {1, ..., n}.  An injection is
stored as its image tuple: alpha maps i to image[i - 1].  Concatenation is
the block sum, and the block shuffles tau interchange the summands.
"""

from dataclasses import dataclass, field
from itertools import permutations

from .util import DisjointSet


class Injection(tuple):
    """Injection {1..src} -> {1..dst}; entry i - 1 holds the image of i."""

    __slots__ = ()

    def __new__(cls, src, dst, image):
        image = tuple(image)
        if len(image) != src or len(set(image)) != src:
            raise ValueError(f"not an injection: {image}")
        if any(not 1 <= v <= dst for v in image):
            raise ValueError(f"image out of range for dst={dst}: {image}")
        self = super().__new__(cls, (src, dst, image))
        return self

    @property
    def src(self):
        return self[0]

    @property
    def dst(self):
        return self[1]

    @property
    def image(self):
        return self[2]

    def __call__(self, i):
        return self.image[i - 1]

    def __repr__(self):
        return f"Injection({self.src}->{self.dst}, {self.image})"


def identity(n):
    return Injection(n, n, range(1, n + 1))


def subset_inclusion(m, n):
    """The standard inclusion {1..m} -> {1..n}."""
    return Injection(m, n, range(1, m + 1))


def compose(g, f):
    """g after f."""
    if f.dst != g.src:
        raise ValueError("composition mismatch")
    return Injection(f.src, g.dst, (g(f(i)) for i in range(1, f.src + 1)))


def concat(f, g):
    """Block sum f + g: acts as f on the first block, shifted g on the second."""
    image = f.image + tuple(v + f.dst for v in g.image)
    return Injection(f.src + g.src, f.dst + g.dst, image)


def concat_many(fs):
    out = identity(0)
    for f in fs:
        out = concat(out, f)
    return out


def shuffle(m, n):
    """The block transposition {1..m+n} -> {1..n+m} swapping the summands."""
    image = tuple(range(n + 1, n + m + 1)) + tuple(range(1, n + 1))
    return Injection(m + n, n + m, image)


def enumerate_injections(m, n):
    """All injections m -> n in lexicographic image order."""
    if m > n:
        return []
    return sorted(Injection(m, n, p) for p in permutations(range(1, n + 1), m))


@dataclass(frozen=True)
class TruncatedI:
    """The full subcategory on objects 0..N, with cached morphism tables."""

    N: int
    _homs: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def objects(self):
        return range(self.N + 1)

    def hom(self, m, n):
        key = (m, n)
        if key not in self._homs:
            self._homs[key] = enumerate_injections(m, n)
        return self._homs[key]

    def arrows(self):
        for m in self.objects:
            for n in self.objects:
                yield from self.hom(m, n)

    def as_fincategory(self):
        morphisms = list(self.arrows())
        comp = {}
        for g in morphisms:
            for f in morphisms:
                if f.dst == g.src:
                    comp[(g, f)] = compose(g, f)
        return FinCategory(
            objects=list(self.objects),
            morphisms=morphisms,
            src={f: f.src for f in morphisms},
            dst={f: f.dst for f in morphisms},
            comp=comp,
            ident={n: identity(n) for n in self.objects},
        )


@dataclass
class FinCategory:
    """Finite category as explicit tables.

    comp maps (g, f) to g o f for every composable pair; ident maps each
    object to its identity morphism.
    """

    objects: list
    morphisms: list
    src: dict
    dst: dict
    comp: dict
    ident: dict

    def validate(self):
        bad = []
        for obj in self.objects:
            e = self.ident.get(obj)
            if e is None or self.src.get(e) != obj or self.dst.get(e) != obj:
                bad.append(f"bad identity at object {obj}")
        for f in self.morphisms:
            if self.src[f] not in self.objects or self.dst[f] not in self.objects:
                bad.append(f"morphism {f} has endpoints outside the object set")
        for g in self.morphisms:
            for f in self.morphisms:
                if self.dst[f] != self.src[g]:
                    continue
                gf = self.comp.get((g, f))
                if gf is None:
                    bad.append(f"missing composite of {g} after {f}")
                    continue
                if self.src[gf] != self.src[f] or self.dst[gf] != self.dst[g]:
                    bad.append(f"composite of {g} after {f} has wrong endpoints")
        if bad:
            return bad
        for f in self.morphisms:
            if self.comp[(f, self.ident[self.src[f]])] != f:
                bad.append(f"right unit fails at {f}")
            if self.comp[(self.ident[self.dst[f]], f)] != f:
                bad.append(f"left unit fails at {f}")
        for h in self.morphisms:
            for g in self.morphisms:
                if self.dst[g] != self.src[h]:
                    continue
                hg = self.comp[(h, g)]
                for f in self.morphisms:
                    if self.dst[f] != self.src[g]:
                        continue
                    if self.comp[(hg, f)] != self.comp[(h, self.comp[(g, f)])]:
                        bad.append(f"associativity fails at ({h}, {g}, {f})")
        return bad

    def is_connected(self):
        ds = DisjointSet()
        for obj in self.objects:
            ds.add(obj)
        for f in self.morphisms:
            ds.union(self.src[f], self.dst[f])
        return len(set(ds.find(o) for o in self.objects)) <= 1


def comma_under(n, N):
    """The comma category of objects under n inside the truncation at N.

    Objects are injections n -> m with m <= N; a morphism from alpha to beta
    is an injection g with g o alpha = beta.
    """
    cat = TruncatedI(N)
    objects = [f for m in cat.objects for f in cat.hom(n, m)]
    morphisms = []
    src = {}
    dst = {}
    for a in objects:
        for b in objects:
            for g in cat.hom(a.dst, b.dst):
                if compose(g, a) == b:
                    key = (a, b, g)
                    morphisms.append(key)
                    src[key] = a
                    dst[key] = b
    comp = {}
    for m2 in morphisms:
        for m1 in morphisms:
            if dst[m1] == src[m2]:
                comp[(m2, m1)] = (src[m1], dst[m2], compose(m2[2], m1[2]))
    ident = {a: (a, a, identity(a.dst)) for a in objects}
    return FinCategory(objects, morphisms, src, dst, comp, ident)


def comma_concat(n):
    """The category of decompositions over n: objects ((n1, n2), alpha).

    Objects are pairs of levels with an injection alpha: n1 + n2 -> n; a
    morphism to ((m1, m2), beta) is a pair of injections (f1, f2) with
    beta o (f1 + f2) = alpha.  This orients morphisms as refinements into
    beta, matching the colimit formula for the two-fold box product.
    """
    objects = []
    for n1 in range(n + 1):
        for n2 in range(n + 1 - n1):
            for a in enumerate_injections(n1 + n2, n):
                objects.append(((n1, n2), a))
    morphisms = []
    src = {}
    dst = {}
    for (nv, a) in objects:
        for (mv, b) in objects:
            for f1 in enumerate_injections(nv[0], mv[0]):
                for f2 in enumerate_injections(nv[1], mv[1]):
                    if compose(b, concat(f1, f2)) == a:
                        key = ((nv, a), (mv, b), (f1, f2))
                        morphisms.append(key)
                        src[key] = (nv, a)
                        dst[key] = (mv, b)
    comp = {}
    for m2 in morphisms:
        for m1 in morphisms:
            if dst[m1] == src[m2]:
                f1 = compose(m2[2][0], m1[2][0])
                f2 = compose(m2[2][1], m1[2][1])
                comp[(m2, m1)] = (src[m1], dst[m2], (f1, f2))
    ident = {
        (nv, a): ((nv, a), (nv, a), (identity(nv[0]), identity(nv[1])))
        for (nv, a) in objects
    }
    return FinCategory(objects, morphisms, src, dst, comp, ident)


def injection_to_json(f):
    return {"src": f.src, "dst": f.dst, "image": list(f.image)}


def injection_from_json(payload):
    return Injection(payload["src"], payload["dst"], payload["image"])
