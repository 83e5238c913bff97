import pytest

from ispaces.cmon import c1, cyclic2_monoid, pi0_monoid, sec52_monoid
from ispaces.gamma import (
    GammaSpaceT,
    based_maps,
    bi_gamma_from,
    compose_based,
    eckmann_hilton_check,
    gamma_of_monoid,
    is_special,
    pi0_monoid_of_gamma,
    prolong,
    representable,
    smash_index,
)
from ispaces.simplicial import (
    SMap,
    discrete,
    homology,
    nd_ref,
    pi0_classes,
    point,
    simplicial_circle,
    validate_sset,
)


def test_based_map_enumeration():
    assert len(based_maps(1, 2)) == 3
    assert len(based_maps(2, 1)) == 4
    assert compose_based((1, 0), (2, 2)) == (0, 0)


def test_representable_levels_and_functoriality():
    R = representable(1, 3)
    assert [v.card[0] for v in R.values] == [1, 2, 3, 4]
    assert R.validate(K_check=2) == []
    R2 = representable(2, 2)
    assert R2.values[1].card[0] == 4


def test_gamma_of_monoid_basics():
    G = gamma_of_monoid(c1(2), 2, 2)
    assert G.values[0].size() == 1
    for v in G.values:
        assert validate_sset(v) == []
    assert G.validate(K_check=2) == []


def test_gamma_value_one_is_based_hocolim():
    from ispaces.ispace import hocolim_I

    A = c1(2)
    G = gamma_of_monoid(A, 2, 2)
    direct = hocolim_I(A.space, 2, based=True)
    assert G.values[1].card == direct.sset.card


def test_gamma_pi0_classes_of_c1():
    G = gamma_of_monoid(c1(3), 2, 1)
    assert len(pi0_classes(G.values[1])) == 4


def test_gamma_fold_monoid_matches_pi0_monoid():
    A = c1(2)
    G = gamma_of_monoid(A, 2, 2)
    pres_fold, _ = pi0_monoid_of_gamma(G)
    pres_direct, _ = pi0_monoid(A)
    assert len(pres_fold.generators) == len(pres_direct.generators) + 1
    # the fold presentation lists each truncation class; relations reduce
    # them to powers of the degree-one generator
    assert len(pres_fold.relations) >= 1


def test_special_evidence_for_c1():
    G = gamma_of_monoid(c1(3), 3, 2)
    sv = is_special(G, D=0)
    assert sv.verdict == "special-evidence"
    assert sv.very_special == "refuted"
    assert sv.very_special_witness is not None


def test_special_refuted_for_broken_functor():
    # X(2+) a point cannot project onto a 2-point X(1+) squared
    values = [point(), discrete(2, basepoint=0), point()]
    bp = SMap(values[2], values[1], {(0, 0): nd_ref(0, 0)})

    def act_fn(phi, k, l):
        if l == 1 and k == 2:
            return bp
        table = {(0, x): nd_ref(0, 0 if l != 1 else min(x, 1))
                 for x in range(values[k].card[0])}
        return SMap(values[k], values[l], table)

    X = GammaSpaceT(2, values, act_fn)
    sv = is_special(X, D=0)
    assert sv.verdict == "refuted"
    assert sv.witness["pair"] == (1, 1)


def test_special_for_constant_point():
    values = [point(), point(), point()]

    def act_fn(phi, k, l):
        return SMap(values[k], values[l], {(0, 0): nd_ref(0, 0)})

    X = GammaSpaceT(2, values, act_fn)
    sv = is_special(X, D=0)
    assert sv.verdict == "special-evidence"
    assert sv.very_special == "yes"


def test_very_special_for_group_model():
    G = gamma_of_monoid(cyclic2_monoid(2), 2, 2)
    sv = is_special(G, D=0)
    assert sv.verdict == "special-evidence"
    assert sv.very_special == "yes"


def test_smash_identification():
    sm = smash_index(2, 2)
    assert sm(0, 1) == 0 and sm(1, 0) == 0
    seen = {sm(i, j) for i in (1, 2) for j in (1, 2)}
    assert seen == {1, 2, 3, 4}


def test_bi_gamma_values():
    A = c1(2)
    X = bi_gamma_from(A, 2, 2)
    assert X.value(1, 1).card == X.gamma.values[1].card
    assert X.value(2, 2).card == X.gamma.values[4].card
    assert X.validate() == []


@pytest.mark.parametrize("build", [lambda: c1(2), lambda: sec52_monoid(2)])
def test_eckmann_hilton_products_coincide(build):
    X = bi_gamma_from(build(), 2, 2)
    rep = eckmann_hilton_check(X)
    assert rep.passed
    assert rep.witness is None


def test_prolong_representable_recovers_argument():
    S1 = simplicial_circle()
    P = prolong(representable(1, 3), S1, dim_bound=3)
    assert P.card[:2] == (1, 1)
    h = homology(P, 1)
    assert h.group(1) == (1, ())


def test_prolong_c1_circle_h1():
    S1 = simplicial_circle()
    for N in (2, 3):
        G = gamma_of_monoid(c1(N), 3, 2)
        P = prolong(G, S1, dim_bound=2)
        assert len(pi0_classes(P)) == 1
        assert homology(P, 1).group(1) == (1, ())


def test_prolong_refuses_oversized_argument():
    # the circle has two degenerate non-basepoint 2-simplices, exceeding a
    # functor bounded at 1+
    with pytest.raises(ValueError):
        prolong(representable(1, 1), simplicial_circle(), dim_bound=2)
