import pytest

from ispaces.cmon import (
    CommMonoidPres,
    bar,
    bar_comparison,
    bar_monoid,
    c1,
    classifying_space_homology,
    cyclic2_monoid,
    free_cmonoid,
    grothendieck_group,
    integers_monoid,
    is_grouplike,
    iterated_bar_spectrum,
    merged_classes,
    monoid_map_on_pi0,
    pi0_monoid,
    restrict_monoid,
    sec52_monoid,
    unit_verdicts,
    units,
    validate_monoid,
)
from ispaces.ispace import free_ispace, hocolim_I
from ispaces.simplicial import homology, pi0_classes

from oracles import sigma2_homology


def test_monoid_axioms_on_models():
    for build in (lambda: c1(2), lambda: sec52_monoid(2),
                  lambda: integers_monoid(2), lambda: cyclic2_monoid(2)):
        A = build()
        assert validate_monoid(A) == []


def test_c1_pi0_presentation_is_free():
    pres, _ = pi0_monoid(c1(3))
    assert len(pres.generators) == 1
    assert pres.relations == []


def test_m52_pi0_presentation():
    pres, _ = pi0_monoid(sec52_monoid(3))
    assert len(pres.generators) == 2
    # 0' is 2-torsion and absorbed by the positive part
    assert len(pres.relations) == 2


def test_merged_classes_c1():
    A = c1(3)
    _, classes, unit_cls = merged_classes(A)
    assert len(classes) == 4
    assert unit_cls in classes


def test_grothendieck_groups():
    assert grothendieck_group(CommMonoidPres(["g"], [])) == (1, ())
    two = CommMonoidPres(["a", "b"], [((0, 2), (0, 0)), ((1, 1), (1, 0))])
    assert grothendieck_group(two) == (1, ())
    tor = CommMonoidPres(["t"], [((2,), (0,))])
    assert grothendieck_group(tor) == (0, (2,))


def test_unit_verdicts_with_witnesses():
    pres = CommMonoidPres(["a", "b"], [((1, 1), (0, 0))])
    uv = unit_verdicts(pres)
    assert uv.is_unit((1, 0)) and uv.is_unit((0, 1))
    free = CommMonoidPres(["g"], [])
    uv2 = unit_verdicts(free)
    assert uv2.status[(1,)][0] == "non-unit"


def test_grouplike_detection():
    assert is_grouplike(cyclic2_monoid(2))
    assert is_grouplike(integers_monoid(2))
    assert not is_grouplike(c1(2))


def test_units_of_m52():
    rep = units(sec52_monoid(3))
    assert len(rep.unit_classes) == 2
    assert rep.closed_under_mul
    assert rep.absorption
    assert validate_monoid(rep.units_monoid) == []
    assert is_grouplike(rep.units_monoid)
    for n, f in rep.inclusion.items():
        assert f.validate() == [], n


def test_units_decomposition_covers_everything():
    A = sec52_monoid(3)
    rep = units(A)
    for n in range(A.N + 1):
        us, nus = rep.level_split[n]
        assert sorted(us + nus) == list(range(A.level(n).card[0]))


def test_free_cmonoid_on_f1_matches_subsets_model():
    C = free_cmonoid(free_ispace(1, 3))
    A = c1(3)
    for n in range(4):
        assert C.space.level(n).card[0] == A.space.level(n).card[0]
    assert validate_monoid(C) == []


def test_bsigma2_component_homology():
    from ispaces.scenarios import RunConfig, run_scenario

    r = run_scenario("c1-bsigma2", RunConfig(trunc=3, deg=1))
    assert r.passed(), r.checks
    oracle = sigma2_homology(1)
    assert oracle[1] == (0, (2,))


def test_bar_construction_validates():
    A = c1(2)
    B = bar(A, 2)
    M = bar_monoid(B)
    assert validate_monoid(M) == []


def test_bar_of_hocolim_connected_with_h1_z():
    for build in (lambda: c1(2), lambda: sec52_monoid(2)):
        h, tab = classifying_space_homology(build(), 1)
        assert len(pi0_classes(tab.sset)) == 1
        assert h.group(1) == (1, ())


def test_bar_comparison_refuses_non_flat():
    with pytest.raises(ValueError):
        bar_comparison(sec52_monoid(2), 1)


def test_bar_comparison_c1_small():
    rep = bar_comparison(c1(2), 1)
    assert rep.pi0 == {"left": 1, "middle": 1, "right": 1}
    for term in ("left", "middle", "right"):
        assert rep.homology[term].group(1) == (1, ())
    assert rep.map_iso == {"middle_to_left": True, "middle_to_right": True}


def test_restrict_monoid_truncates():
    A = restrict_monoid(c1(3), 2)
    assert A.N == 2
    assert validate_monoid(A) == []


def test_monoid_map_on_pi0_inclusion_of_units():
    A = sec52_monoid(2)
    rep = units(A)
    f = {n: rep.inclusion[n] for n in range(A.N + 1)}
    _, _, _, gen_image = monoid_map_on_pi0(f, rep.units_monoid, A)
    # both unit classes land in the two degree-zero classes of the target
    assert len(set(gen_image.values())) == 2


def test_iterated_bar_first_two_levels():
    out = iterated_bar_spectrum(cyclic2_monoid(2), 1, 1)
    assert len(out) == 2
    # level 0: the based colimit of the constant Z/2 diagram is connected
    # only after one bar step
    assert out[1][1].group(0) == (1, ())


def test_grothendieck_matches_bar_h1():
    # the first homology of the classifying space recovers the group
    # completion for the subset model and the filtered integers model
    for build, expect in ((lambda: c1(2), (1, ())),
                          (lambda: integers_monoid(2), (1, ()))):
        A = build()
        pres, _ = pi0_monoid(A)
        assert grothendieck_group(pres) == expect
        h, _ = classifying_space_homology(A, 1)
        assert h.group(1) == expect
