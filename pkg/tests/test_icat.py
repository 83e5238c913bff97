import pytest

from ispaces.icat import (
    Injection,
    TruncatedI,
    comma_concat,
    comma_under,
    compose,
    concat,
    concat_many,
    enumerate_injections,
    identity,
    injection_from_json,
    injection_to_json,
    shuffle,
    subset_inclusion,
)

from oracles import comma_under_counts, count_injections, decomposition_counts


def test_injection_rejects_bad_data():
    with pytest.raises(ValueError):
        Injection(2, 3, (1, 1))
    with pytest.raises(ValueError):
        Injection(2, 2, (1, 3))


def test_hom_counts_match_brute_force():
    cat = TruncatedI(4)
    for m in range(5):
        for n in range(5):
            assert len(cat.hom(m, n)) == count_injections(m, n)


def test_composition_and_units():
    f = Injection(2, 3, (3, 1))
    g = Injection(3, 4, (2, 4, 1))
    gf = compose(g, f)
    assert gf.image == (1, 2)
    assert compose(identity(3), f) == f
    assert compose(f, identity(2)) == f


def test_concat_is_block_sum():
    f = subset_inclusion(1, 2)
    g = Injection(1, 1, (1,))
    assert concat(f, g).image == (1, 3)
    assert concat_many([f, g, f]).image == (1, 3, 4)


def test_shuffle_swaps_blocks():
    t = shuffle(2, 1)
    assert t.image == (2, 3, 1)
    # tau is its own inverse up to the opposite shuffle
    assert compose(shuffle(1, 2), t) == identity(3)


def test_truncated_category_validates():
    cat = TruncatedI(2).as_fincategory()
    assert cat.validate() == []
    assert cat.is_connected()


@pytest.mark.parametrize("n,N", [(0, 2), (1, 2), (1, 3), (2, 3)])
def test_comma_under_matches_oracle(n, N):
    cat = comma_under(n, N)
    assert cat.validate() == []
    objs, mors = comma_under_counts(n, N)
    assert len(cat.objects) == objs
    assert len(cat.morphisms) == mors


@pytest.mark.parametrize("n", [1, 2])
def test_decomposition_category_matches_oracle(n):
    cat = comma_concat(n)
    assert cat.validate() == []
    objs, mors = decomposition_counts(n)
    assert len(cat.objects) == objs
    assert len(cat.morphisms) == mors


def test_enumeration_is_sorted_and_complete():
    injs = enumerate_injections(2, 3)
    assert injs == sorted(injs)
    assert len(injs) == 6
    assert enumerate_injections(3, 2) == []


def test_injection_json_round_trip():
    f = Injection(2, 4, (4, 1))
    assert injection_from_json(injection_to_json(f)) == f


# ---------------------------------------------------------------------------
# Integer linear algebra.
# ---------------------------------------------------------------------------

def test_smith_diagonal_divisibility():
    from ispaces.zlinalg import smith_diagonal

    mat = {(0, 0): 2, (0, 1): 4, (1, 0): 4, (1, 1): 4}
    diag = [d for d in smith_diagonal(mat) if d]
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    assert diag == [2, 4]


def test_rank_and_torsion_known_matrix():
    from ispaces.zlinalg import rank_and_torsion

    # the boundary matrix of RP^2's 2-cell in cellular homology
    mat = {(0, 0): 2}
    rank, tors = rank_and_torsion(mat, 1, 1)
    assert rank == 1
    assert tors == (2,)


def test_bareiss_agrees_with_smith_on_random_sparse():
    import random

    from ispaces.zlinalg import bareiss_rank, rank_and_torsion

    rng = random.Random(7)
    for _ in range(20):
        nrows, ncols = rng.randint(1, 6), rng.randint(1, 6)
        mat = {}
        for r in range(nrows):
            for c in range(ncols):
                if rng.random() < 0.4:
                    mat[(r, c)] = rng.randint(-5, 5)
        mat = {k: v for k, v in mat.items() if v}
        rank, _ = rank_and_torsion(dict(mat), nrows, ncols)
        assert rank == bareiss_rank(dict(mat), nrows, ncols)
