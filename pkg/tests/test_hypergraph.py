from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from container_lab.generators import gen_triangles
from container_lab.hypergraph import (
    Hypergraph,
    covers,
    degree,
    full_set,
    is_antichain,
    is_independent,
    link,
    max_degree,
    members,
    minimal_elements,
    restrict,
    set_key,
    size_slice,
    strip_link,
    submasks,
    unblocked_vertices,
    up_set_contains,
    vset,
    weight,
)

from conftest import hg


def test_weight_examples():
    assert weight(Hypergraph(3), Fraction(1, 2)) == 0
    assert weight(hg(3, [0, 1], [0, 1, 2]), Fraction(1, 2)) == Fraction(3, 8)
    assert weight(gen_triangles(4), Fraction(1, 72)) == Fraction(1, 93312)


def test_link_examples():
    assert link(hg(4, [0, 1, 2], [0, 3]), vset([0])) == hg(4, [1, 2], [3])
    assert link(hg(3, [0, 1]), vset([2])).edges == ()
    assert link(hg(4, [0, 1, 2], [0, 1, 3]), vset([0, 1])) == hg(4, [2], [3])


def test_strip_link_examples():
    assert strip_link(hg(4, [0, 1, 2], [3]), vset([0])) == hg(4, [1, 2], [3])
    assert strip_link(hg(3, [0, 1], [0, 2]), vset([0])) == hg(3, [1], [2])
    degenerate = strip_link(hg(1, [0]), vset([0]))
    assert degenerate.has_empty_edge and degenerate.edges == (0,)


def test_restrict_examples():
    assert restrict(hg(3, [0, 1], [1, 2]), vset([1, 2])) == hg(3, [1, 2])
    H = gen_triangles(4)
    assert restrict(H, H.vertices) == H
    assert restrict(hg(3, [0, 1, 2]), vset([0, 1])).edges == ()


def test_size_slice():
    H = hg(3, [0], [0, 1], [0, 1, 2])
    assert size_slice(H, 2, 3) == hg(3, [0, 1], [0, 1, 2])


def test_covers_examples():
    assert covers(hg(3, [0, 1]), hg(3, [0, 1, 2]))
    assert not covers(hg(4, [2, 3]), hg(4, [0, 1, 2]))
    assert covers(Hypergraph(3), Hypergraph(3))
    assert not covers(Hypergraph(3), hg(3, [0]))


def test_minimal_elements_examples():
    assert minimal_elements(hg(3, [0], [0, 1], [1, 2])) == hg(3, [0], [1, 2])
    A = hg(3, [0, 1], [1, 2])
    assert minimal_elements(A) == A
    assert minimal_elements(hg(4, [0, 1], [0, 1, 2], [0, 1, 3])) == hg(4, [0, 1])


def test_is_antichain_examples():
    assert is_antichain(hg(3, [0, 1], [1, 2]))
    assert not is_antichain(hg(2, [0], [0, 1]))
    assert is_antichain(Hypergraph(0))


def test_degree_examples():
    H = hg(4, [0, 1, 2], [0, 1, 3])
    assert degree(H, vset([0, 1])) == 2
    assert max_degree(H, 2) == 2
    assert max_degree(H, 1) == 2
    assert max_degree(H, 3) == 1


def test_is_independent_examples():
    assert is_independent(hg(2, [0, 1]), vset([0]))
    assert not is_independent(hg(2, [0, 1]), vset([0, 1]))
    assert is_independent(Hypergraph(5), full_set(5))


def test_unblocked_vertices_examples():
    assert unblocked_vertices(hg(3, [0], [1, 2])) == vset([1, 2])
    assert unblocked_vertices(Hypergraph(5)) == full_set(5)
    assert unblocked_vertices(hg(3, [0], [1], [2])) == 0


def test_canonical_order_is_size_then_lex():
    masks = [vset(s) for s in ([2], [0, 1], [0], [1, 2], [0, 2], [])]
    ordered = sorted(masks, key=set_key)
    assert [list(members(m)) for m in ordered] == [[], [0], [2], [0, 1], [0, 2], [1, 2]]
    assert hg(3, [1, 2], [0]).edges == (vset([0]), vset([1, 2]))


def test_rejects_bad_edges():
    with pytest.raises(ValueError):
        Hypergraph(2, [[0, 2]])
    with pytest.raises(ValueError):
        Hypergraph(2, [[]])


def test_duplicates_merge():
    assert hg(3, [0, 1], [1, 0]).e == 1


edges_st = st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(1, (1 << n) - 1), max_size=10)))


@given(edges_st)
def test_minimal_elements_is_antichain_covering(data):
    n, masks = data
    H = Hypergraph.from_masks(n, masks)
    M = minimal_elements(H)
    assert is_antichain(M)
    assert covers(M, H) and covers(H, M)
    assert set(M.edges) <= set(H.edges)


@given(edges_st, st.integers(0, 127))
def test_up_set_matches_covers(data, F):
    n, masks = data
    H = Hypergraph.from_masks(n, masks)
    F &= full_set(n)
    assert up_set_contains(H.edge_set, F) == any(e & ~F == 0 for e in H.edges)
    assert is_independent(H, F) == (not up_set_contains(H.edge_set, F))


@given(st.integers(0, 255))
def test_submasks_enumerates_every_subset(mask):
    subs = list(submasks(mask))
    assert len(subs) == 1 << mask.bit_count()
    assert all(s & ~mask == 0 for s in subs)
    assert len(list(submasks(mask, proper=True, nonempty=True))) == max(0, (1 << mask.bit_count()) - 2)
