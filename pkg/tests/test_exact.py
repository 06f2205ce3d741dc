from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from container_lab.exact import (
    GUARD_ENV,
    GuardExceeded,
    IndependenceTable,
    conditional_expected_size,
    conditional_subset_prob,
    independent_sets,
    independent_sets_direct,
    _backtrack,
    mc_prob_independent,
    partition_function,
    prob_independent,
)
from container_lab.generators import gen_random_mixed, gen_triangles
from container_lab.hypergraph import Hypergraph, full_set, set_key, is_independent, members, vset

from conftest import EDGE, HALF, STAR, hg


def brute(H, p):
    """(Pr(independent), E[|V_p| ; independent]) by direct enumeration of 2^n."""
    n = H.n
    total = size = Fraction(0)
    for mask in range(1 << n):
        if is_independent(H, mask):
            k = mask.bit_count()
            w = p**k * (1 - p) ** (n - k)
            total += w
            size += k * w
    return total, size


def test_independent_sets_examples():
    assert list(independent_sets(EDGE)) == [0, 1, 2]
    assert len(list(independent_sets(Hypergraph(3)))) == 8
    # triangle-free subgraphs of K_4: 64 minus those containing a triangle
    T = gen_triangles(4)
    expected = sum(1 for m in range(64) if not any(e & ~m == 0 for e in T.edges))
    assert len(list(independent_sets(T))) == expected == 41


def test_independent_sets_canonical_order():
    sets = list(independent_sets(STAR))
    assert sets == sorted(sets, key=lambda m: (m.bit_count(), members(m)))
    assert sets[0] == 0


def test_partition_function_examples():
    assert partition_function(EDGE, 1).z == 3
    assert partition_function(EDGE, 2).z == 5
    lam = Fraction(2, 7)
    assert partition_function(Hypergraph(5), lam).z == (1 + lam) ** 5


def test_prob_independent_examples():
    assert prob_independent(EDGE, HALF) == Fraction(3, 4)
    assert prob_independent(Hypergraph(4), Fraction(1, 3)) == 1
    assert prob_independent(EDGE, Fraction(2, 3)) == Fraction(5, 9)


def test_conditional_subset_prob_examples():
    assert conditional_subset_prob(EDGE, HALF, vset([0])) == Fraction(1, 3)
    p = Fraction(2, 5)
    assert conditional_subset_prob(Hypergraph(4), p, vset([1, 3])) == p**2
    assert conditional_subset_prob(STAR, HALF, vset([0])) == Fraction(1, 9)
    assert conditional_subset_prob(EDGE, HALF, vset([0, 1])) == 0


def test_conditional_expected_size_examples():
    assert conditional_expected_size(EDGE, HALF) == Fraction(2, 3)
    p = Fraction(3, 7)
    assert conditional_expected_size(Hypergraph(6), p) == 6 * p
    assert conditional_expected_size(hg(3, [0], [1], [2]), p) == 0


def test_non_minimal_edges_regression():
    # a superset edge next to its own subset edge must not hide free vertices
    H = hg(11, [9], [2, 9], [4, 9], [5, 8], [6, 7], [5, 9, 10])
    p = Fraction(9, 10)
    pr, size = brute(H, p)
    assert prob_independent(H, p) == pr
    assert conditional_expected_size(H, p) == size / pr
    assert partition_function(hg(3, [0], [0, 1]), 1).z == 4


def test_mc_examples():
    assert mc_prob_independent(Hypergraph(3), HALF, 1000, 5).estimate == 1.0
    assert mc_prob_independent(Hypergraph(3), HALF, 1000, 6).estimate == 1.0
    est = mc_prob_independent(EDGE, HALF, 100_000, 7)
    sigma = (0.75 * 0.25 / 100_000) ** 0.5
    assert abs(est.estimate - 0.75) <= 4 * sigma
    assert est.estimate == mc_prob_independent(EDGE, HALF, 100_000, 7).estimate


def test_guard(monkeypatch):
    big = Hypergraph(30, [[0, 1]])
    with pytest.raises(GuardExceeded):
        partition_function(big, 1)
    monkeypatch.setenv(GUARD_ENV, "40")
    assert partition_function(big, 1).z == 3 * 2**28


def test_probability_range_errors():
    with pytest.raises(ValueError):
        prob_independent(EDGE, Fraction(3, 2))
    with pytest.raises(ValueError):
        conditional_subset_prob(EDGE, 0, 1)


def test_fast_enumeration_matches_direct():
    for seed in range(30):
        H = gen_random_mixed(9, 8, 4, seed)
        assert list(independent_sets(H)) == list(independent_sets_direct(H))


def test_backtracking_matches_direct():
    for seed in range(30):
        H = gen_random_mixed(10, 9, 4, seed)
        if seed % 3 == 0:
            H = Hypergraph.from_masks(10, set(H.edges) | {vset([seed % 10])})
        assert sorted(_backtrack(H), key=set_key) == list(independent_sets_direct(H))


def test_independence_table_force_and_forbid():
    table = IndependenceTable.from_hypergraph(STAR, HALF)
    assert Fraction(table.total(), 2**4) == prob_independent(STAR, HALF)
    forced = table.copy()
    forced.force(vset([0]))  # remaining sets must stay independent with 0 added
    assert forced.total() == sum(1 for m in range(16) if is_independent(STAR, m | 1))
    table.forbid(vset([1, 2]))
    assert Fraction(table.total(), 2**4) == prob_independent(hg(4, [0, 1], [0, 2], [0, 3], [1, 2]), HALF)


def test_independence_table_large_denominators():
    # b^n beyond int64 switches to exact object arithmetic
    H = gen_random_mixed(20, 10, 3, 1)
    p = Fraction(1, 10)
    table = IndependenceTable.from_hypergraph(H, p)
    assert Fraction(table.total(), 10**20) == prob_independent(H, p)


hyper = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(1, (1 << n) - 1), max_size=6)))
rationals = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=20)


@settings(max_examples=150, deadline=None)
@given(hyper, rationals)
def test_engine_matches_enumeration(data, p):
    n, masks = data
    H = Hypergraph.from_masks(n, masks)
    pr, size = brute(H, p)
    assert prob_independent(H, p) == pr
    if pr:
        assert conditional_expected_size(H, p) == size / pr


@settings(max_examples=100, deadline=None)
@given(hyper, rationals, st.integers(0, 255))
def test_conditional_subset_matches_enumeration(data, p, L):
    n, masks = data
    H = Hypergraph.from_masks(n, masks)
    L &= full_set(n)
    pr, _ = brute(H, p)
    if not pr:
        return
    num = sum(p ** m.bit_count() * (1 - p) ** (n - m.bit_count())
              for m in range(1 << n) if m & L == L and is_independent(H, m))
    assert conditional_subset_prob(H, p, L) == num / pr


@settings(max_examples=100, deadline=None)
@given(hyper, rationals)
def test_expected_size_is_sum_of_marginals(data, p):
    n, masks = data
    H = Hypergraph.from_masks(n, masks)
    if not prob_independent(H, p):
        return
    marginals = sum(conditional_subset_prob(H, p, 1 << v) for v in range(n))
    assert conditional_expected_size(H, p) == marginals


@given(hyper)
def test_partition_at_one_counts_independent_sets(data):
    n, masks = data
    H = Hypergraph.from_masks(n, masks)
    count = sum(1 for m in range(1 << n) if is_independent(H, m))
    assert partition_function(H, 1).z == count == len(list(independent_sets(H)))
