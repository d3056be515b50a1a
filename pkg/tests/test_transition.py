import itertools

import pytest
from hypothesis import given, strategies as st

from smoothind.filtration import intersection_shape, p_power
from smoothind.cohomology import Block, blocks_of_degree
from smoothind.rootdata import Cocharacter, GroupProfile, build_root_system, enumerate_dominant, i0, make_profile, top_dimension
from smoothind.transition import (
    QueryError,
    TransitionQuery,
    block_fate,
    diagonal_vanishing,
    ext_table,
    factor_rank,
    greedy_block,
    nonvanishing_witness,
    res_is_zero_for_all_z,
    strict_inclusion_check,
    transition_factor_ranks,
    vanishing_table,
)

A1 = make_profile("A", 1, 3)
A2 = make_profile("A", 2, 3)
G2 = make_profile("G", 2, 3)
TRIV = GroupProfile(build_root_system("T", 0), p=3, torus_rank=0)


def test_factor_rank_examples():
    assert factor_rank(4, 4, 2, 2, 3) == 2 * 2 * 3
    assert factor_rank(4, 6, 2, 2, 3) == 0
    assert factor_rank(4, 5, 1, 2, 1) == 1
    with pytest.raises(QueryError):
        factor_rank(5, 4, 1, 1, 1)


@given(st.integers(1, 10), st.integers(0, 8), st.integers(0, 8), st.integers(1, 3), st.integers(1, 2), st.integers(1, 2))
def test_factor_rank_monotone_in_target(s, g1, g2, e, f, delta):
    t1, t2 = s + min(g1, g2), s + max(g1, g2)
    assert factor_rank(s, t1, delta, e, f) >= factor_rank(s, t2, delta, e, f)


def test_block_fate_center_dies():
    z = Cocharacter((0,))
    q = TransitionQuery(A1, 1, 1, 2, z, 1)
    fate = block_fate(q, Block((0,), 1, (0,)))
    assert fate.factor_ranks[1] == 0
    assert not fate.survives


@given(st.integers(0, 6), st.integers(1, 3))
def test_block_fate_positive_root_dies(k, steps):
    for alpha_index in range(3):
        c = [0, 0, 0]
        c[alpha_index] = 1
        z = Cocharacter((k, 2 * k))
        q = TransitionQuery(A2, 1, 2, 2 + steps, z, 1)
        assert not block_fate(q, Block((0, 0, 0), 0, tuple(c))).survives


def test_block_fate_deep_z_full_negative_block():
    m, n, n_prime = 1, 1, 3
    z = Cocharacter((n_prime - m,) * 2)
    q = TransitionQuery(A2, m, n, n_prime, z, i0(A2))
    fate = block_fate(q, Block((1, 1, 1), 0, (0, 0, 0)))
    assert fate.source_levels[:3] == (m, m, m) == fate.target_levels[:3]
    assert fate.survives
    assert fate.rank == 1


def test_block_fate_identity_when_nothing_moves():
    q0 = lambda i: TransitionQuery(A2, 1, 2, 2, Cocharacter((0, 0)), i)
    for i in range(top_dimension(A2) + 1):
        for blk in blocks_of_degree(A2, i):
            fate = block_fate(q0(i), blk)
            assert fate.survives
            assert fate.factor_ranks == A2.factor_dims


def test_query_validation():
    with pytest.raises(QueryError, match="dominant"):
        TransitionQuery(A1, 1, 1, 2, Cocharacter((-1,)), 0)
    with pytest.raises(QueryError):
        TransitionQuery(A1, 2, 1, 3, Cocharacter((0,)), 0)
    with pytest.raises(QueryError, match="m > e"):
        TransitionQuery(make_profile("A", 1, 2), 1, 2, 4, Cocharacter((0,)), 0)
    ram = make_profile("A", 1, 3, e=2)
    assert not TransitionQuery(ram, 2, 2, 3, Cocharacter((0,)), 0).in_standard_regime
    assert TransitionQuery(ram, 2, 2, 4, Cocharacter((0,)), 0).in_standard_regime


def test_res_is_zero_examples():
    for prof in (A1, A2, G2):
        z, cert = res_is_zero_for_all_z(prof, i0(prof) + 1, 1, 1, 2)
        assert z and cert["argument"] == "level-shift"
        assert all(k["rank"] == 0 for k in cert["killing_factors"])
        assert not res_is_zero_for_all_z(prof, i0(prof), 1, 1, 2)[0]
        z, cert = res_is_zero_for_all_z(prof, top_dimension(prof) + 1, 1, 1, 2)
        assert z and cert["argument"] == "vacuous"


def test_res_is_zero_refuses_small_gap():
    ram = make_profile("A", 1, 3, e=2)
    with pytest.raises(QueryError, match="symbolic"):
        res_is_zero_for_all_z(ram, 2, 2, 2, 3)


def test_partial_gap_ranks_are_computed_per_z():
    ram = make_profile("A", 1, 3, e=2)
    ranks = transition_factor_ranks(ram, 2, 2, 3, Cocharacter((0,)))
    assert ranks == (1, 1, 1)


def test_witness_examples():
    w0 = nonvanishing_witness(A1, 0, 1, 1, 2)
    assert w0.block.degree == 0 and w0.fate.survives
    w = nonvanishing_witness(A1, 1, 1, 1, 2)
    assert w.block == Block((1,), 0, (0,))
    assert w.z.coefficients[0] >= 1 and w.fate.survives
    assert nonvanishing_witness(A1, 2, 1, 1, 2) is None


def test_greedy_a2_against_exhaustive_search():
    blk = greedy_block(A2, 2)
    assert blk.a == (1, 1, 0) and blk.b == 0 and blk.c == (0, 0, 0)
    z = nonvanishing_witness(A2, 2, 1, 1, 2).z
    q = TransitionQuery(A2, 1, 1, 2, z, 2)
    survivors = [b for b in blocks_of_degree(A2, 2) if block_fate(q, b).survives]
    assert blk in survivors
    assert all(b.b == 0 and not any(b.c) for b in survivors)


def test_greedy_respects_capacity():
    prof = make_profile("C", 2, 3, f=2)
    for i in range(i0(prof) + 1):
        blk = greedy_block(prof, i)
        assert blk.degree == i
        assert all(x <= prof.root_dim(a) for x, a in zip(blk.a, prof.neg_roots))
        filled = [x == prof.root_dim(a) for x, a in zip(blk.a, prof.neg_roots)]
        # filled roots form a prefix of the listing
        assert filled == sorted(filled, reverse=True)


def test_vanishing_table_a1():
    t = vanishing_table(A1, 1)
    assert t.nonvanishing[:4] == [True, True, False, False]
    doc = t.to_json()
    assert doc["i0"] == 1 and doc["d"] == 3
    assert "witness" in doc["table"][0] and "certificate" in doc["table"][2]
    assert len(doc["table"][1]["witness"]["ladder"]) == 2


def test_vanishing_table_g2():
    t = vanishing_table(G2, 1)
    assert t.nonvanishing == [i <= 6 for i in range(16)]


def test_vanishing_table_rejects_bad_m():
    with pytest.raises(ValueError, match="m ∈ eℕ"):
        vanishing_table(make_profile("A", 1, 3, e=2), 3)
    with pytest.raises(ValueError, match="m > e if p = 2"):
        vanishing_table(make_profile("A", 1, 2), 1)


def test_ext_table_relabels():
    e = ext_table(A2, 1)
    v = vanishing_table(A2, 1).to_json()
    assert [r["ext_nonzero"] for r in e["table"]] == [r["nonvanishing"] for r in v["table"]]
    assert [r["ext_degree"] for r in e["table"]] == [r["i"] for r in v["table"]]


def test_diagonal_vanishing_examples(catalog_profile):
    prof = catalog_profile
    n = 2 * prof.e
    assert not diagonal_vanishing(prof, 0, n)
    assert diagonal_vanishing(prof, 1, n)
    assert diagonal_vanishing(prof, top_dimension(prof), n)


def test_diagonal_blocks_have_a_dead_factor():
    for z in enumerate_dominant(A2, 3):
        here = intersection_shape(A2, 2, 2, z)
        there = intersection_shape(A2, 3, 3, z)
        assert p_power(here) == there
        ranks = [factor_rank(a, b, d, 1, 1) for a, b, d in zip(here.levels, there.levels, A2.factor_dims_F)]
        for i in range(1, top_dimension(A2) + 1):
            for blk in blocks_of_degree(A2, i):
                assert any(idx > 0 and r == 0 for idx, r in zip(blk.indices, ranks))


def test_strict_inclusion():
    ok, cert = strict_inclusion_check(A2, 1, 1, 2)
    assert ok and cert["factor"] == "center"
    assert (cert["source_level"], cert["target_level"]) == (1, 2)
    ok, _ = strict_inclusion_check(TRIV, 1, 1, 2)
    assert not ok


def test_monotone_death_exhaustive():
    """A block dead at n -> n' stays dead at n -> n'' for n'' >= n'."""
    for z in enumerate_dominant(A2, 2):
        for i in range(top_dimension(A2) + 1):
            for blk in blocks_of_degree(A2, i):
                fates = [block_fate(TransitionQuery(A2, 1, 1, npr, z, i), blk).survives for npr in (1, 2, 3, 4)]
                for a, b in itertools.pairwise(fates):
                    assert a or not b
