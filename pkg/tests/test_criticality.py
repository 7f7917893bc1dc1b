import pytest

from stanext import (
    ChainConfig,
    VARIANTS,
    beta,
    build_poset,
    classify,
    collection_dim,
    ell_splitting_pairs,
    iter_extensions,
    maximal_splitting_pair,
    mixed_elements,
    pair_criticality,
    splitting_pairs,
)
from stanext.criticality import (
    CLASS_CRITICAL,
    CLASS_SUPERCRITICAL,
    DegenerateInstance,
    EmptyCollection,
    NotEllSplitting,
    beta_mask,
    pair_excess,
    sharp_critical_pairs,
)
from stanext.poset import popcount


def beta_oracle(p, c, i):
    """Membership straight from the slice conditions on the closed relation."""
    chain = set(c.chain)
    out = set()
    for z in range(p.n):
        if z in chain:
            continue
        below = i >= 1 and p.less(z, c.chain[i - 1])
        above = i + 1 <= c.k and p.less(c.chain[i], z)
        if i < 0 or i > c.k:
            continue
        if not below and not above:
            out.add(z)
    return out


def test_beta_closure_example(closure_instance):
    p, c = closure_instance.poset, closure_instance.config
    assert beta(p, c, 1) == {1, 2}          # y2, y3
    assert beta(p, c, 1) == beta_oracle(p, c, 1)


def test_beta_sharp_example(sharp_instance):
    p, c = sharp_instance.poset, sharp_instance.config
    # y2 is above x2 but not above x3, so it stays in the slice
    assert beta(p, c, 2) == {1, 2, 3} == beta_oracle(p, c, 2)
    assert beta(p, c, -1) == set() == beta(p, c, c.k + 1)
    for i in range(c.k + 1):
        assert beta(p, c, i) == beta_oracle(p, c, i)


def test_beta_total_order():
    p = build_poset(4, [(0, 1), (1, 2), (2, 3)])
    c = ChainConfig((1, 2), (2, 3), 1)
    for i in range(c.k + 1):
        assert len(beta(p, c, i)) <= 1


def test_collection_dim(sharp_instance):
    p, c = sharp_instance.poset, sharp_instance.config
    assert collection_dim(p, c, [0, 3]) == 3     # only y3 strictly between x1, x3
    assert collection_dim(p, c, range(0, c.k + 1)) == p.n - c.k
    with pytest.raises(EmptyCollection):
        collection_dim(p, c, [])


def test_collection_dim_no_gaps():
    # no element strictly between consecutive chain members: full dimension
    p = build_poset(5, [(0, 1)])
    c = ChainConfig((0, 1), (2, 4), 2)
    assert collection_dim(p, c, [0, 1, 2]) == 3
    assert collection_dim(p, c, [0, 2]) == 3   # dropping the middle costs nothing here


def test_classify_examples(sharp_instance, closure_instance):
    assert classify(*_pc(sharp_instance)) == CLASS_CRITICAL
    assert classify(*_pc(closure_instance)) == CLASS_SUPERCRITICAL


def _pc(inst):
    return inst.poset, inst.config


def test_classify_k1_positive_counts():
    # with all three families nonempty the single-mover case is supercritical
    p = build_poset(3, [])
    c = ChainConfig((0,), (2,), 1)
    assert classify(p, c) == CLASS_SUPERCRITICAL


def test_classify_k1_not_always_supercritical():
    # two elements above the mover squeezed against the top: the defining
    # inequality fails at level 2 even though the middle family is nonempty
    p = build_poset(5, [(4, 0), (4, 1)])
    c = ChainConfig((4,), (3,), 1)
    from stanext.linext import all_counts

    assert all_counts(p, c)[1] > 0
    assert classify(p, c) == CLASS_CRITICAL


def test_classify_undefined():
    # an element pinned between two adjacent chain slots leaves no extension
    p = build_poset(3, [(0, 1), (1, 2)])
    c = ChainConfig((0, 2), (1, 2), None)
    with pytest.raises(DegenerateInstance):
        classify(p, c)


def test_splitting_pairs_k1():
    c = ChainConfig((0,), (2,), 1)
    assert splitting_pairs(c) == [(-1, 1), (0, 2)]
    assert ell_splitting_pairs(c) == []


def test_splitting_pairs_exclusion():
    c = ChainConfig((0, 1, 2), (2, 4, 6), 2)
    pairs = splitting_pairs(c)
    assert (-1, 4) not in pairs                  # the full span is excluded
    assert all(0 <= r + 1 < s <= 4 for r, s in pairs)
    assert ell_splitting_pairs(c) == [(-1, 3), (0, 3), (0, 4)]


def test_pair_criticality_sharp_example(sharp_instance):
    p, c = _pc(sharp_instance)
    assert pair_criticality(p, c, (0, 3)) == "sharp_critical"
    assert sharp_critical_pairs(p, c) == [(-1, 3), (0, 3), (0, 4)]
    with pytest.raises(NotEllSplitting):
        pair_criticality(p, c, (1, 3))


def test_pair_criticality_supercritical():
    # nothing between any chain members and plenty of slack
    p = build_poset(7, [(0, 1)])
    c = ChainConfig((0, 1), (2, 5), 2)
    for pair in ell_splitting_pairs(c):
        excess = pair_excess(p, c, pair)
        assert pair_criticality(p, c, pair) == (
            "supercritical" if excess >= 2 else "sharp_critical"
        )


def test_maximal_pair(sharp_instance):
    assert maximal_splitting_pair(*_pc(sharp_instance)) == (0, 3)
    p = build_poset(5, [])
    c = ChainConfig((0,), (3,), 1)
    assert maximal_splitting_pair(p, c) is None


def test_maximal_pair_regions(sharp_instance):
    from stanext.criticality import maximal_pair_regions

    pair, outer, inner = maximal_pair_regions(*_pc(sharp_instance))
    assert pair == (0, 3)
    assert inner == {2}                          # y3 strictly between x1 and x3
    assert outer == {0, 1, 3}


def test_collection_dim_accepts_multiplicity_map(sharp_instance):
    p, c = _pc(sharp_instance)
    assert collection_dim(p, c, {0: 1, 3: 1}) == collection_dim(p, c, [0, 3]) == 3


def test_mixed_elements_unique_on_maximal(sharp_instance):
    p, c = _pc(sharp_instance)
    pair = maximal_splitting_pair(p, c)
    for v in VARIANTS:
        for place in iter_extensions(p, c, v):
            assert len(mixed_elements(p, c, place, pair, v)) == 1


def test_mixed_elements_window_excess(small_instances):
    # for every splitting pair with the mover strictly inside, each extension
    # holds exactly (slice size - interval size) mixed elements
    for p, c in small_instances:
        for pair in ell_splitting_pairs(c):
            r, s = pair
            support = tuple(range(0, r + 1)) + tuple(range(s, c.k + 1))
            union = 0
            for j in support:
                union |= beta_mask(p, c, j)
            excess = popcount(union) - sum(
                c.position(j + 1, p.n) - c.position(j, p.n) - 1 for j in support
            )
            for v in VARIANTS:
                for place in iter_extensions(p, c, v):
                    assert len(mixed_elements(p, c, place, pair, v)) == excess


def test_mixed_nonempty_for_middle_family(sharp_instance):
    p, c = _pc(sharp_instance)
    for pair in splitting_pairs(c):
        for place in iter_extensions(p, c, "equal"):
            assert mixed_elements(p, c, place, pair, "equal")
