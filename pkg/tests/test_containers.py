from fractions import Fraction

import pytest

from container_lab.containers import (
    INSIDE,
    OUTSIDE,
    AlgorithmParams,
    DeterminismError,
    ParameterError,
    build_cover_container,
    build_family,
    build_hardcore_container,
    build_interpolating_container,
    select_cover_branch,
    select_hardcore_vertex,
    select_interpolating_set,
)
from container_lab.exact import GuardExceeded, independent_sets
from container_lab.generators import (
    gen_aps,
    gen_complete_graph,
    gen_random_uniform,
    gen_triangles,
    random_independent_sets,
)
from container_lab.hypergraph import Hypergraph, covers, full_set, members, restrict, vset, weight
from container_lab.lemmas import verify_cover, verify_hardcore, verify_interpolating

from conftest import EDGE, HALF, STAR, hg

K100 = gen_complete_graph(100)


# -- cover mode --------------------------------------------------------------


def test_select_cover_branch_examples():
    assert select_cover_branch(K100, Fraction(1, 32)) == (2, vset([0]))
    assert select_cover_branch(Hypergraph(5), Fraction(1, 32)) is None


def test_select_cover_branch_ignores_stop_test():
    # K_66 passes the heavy-link test even though we only ask for the choice
    assert select_cover_branch(gen_complete_graph(66), Fraction(1, 32)) == (2, vset([0]))


def test_cover_edgeless_instance():
    out = build_cover_container(Hypergraph(7), AlgorithmParams.cover(Fraction(1, 8)), 0)
    assert (out.S, out.C, out.rounds) == (0, full_set(7), 0)
    assert out.G.edges == ()


def test_cover_triangles_stop_immediately():
    H = gen_triangles(4)
    params = AlgorithmParams.cover(Fraction(1, 72))
    for I in list(independent_sets(H))[:12]:
        out = build_cover_container(H, params, I)
        assert (out.S, out.C, out.rounds) == (0, full_set(6), 0)
        assert out.G == H


def test_k100_golden_trace():
    out = build_cover_container(K100, AlgorithmParams.cover(Fraction(1, 32)), 0)
    assert out.rounds == 35
    assert out.S == 0
    assert list(members(out.C)) == list(range(35, 100))
    assert out.G == restrict(K100, out.C)
    assert out.G.e == 2080
    assert weight(out.G, Fraction(1, 32)) == Fraction(65, 32) == Fraction(1, 32) * 65
    assert [t.branch for t in out.trace] == [OUTSIDE] * 35
    assert [list(members(t.chosen)) for t in out.trace] == [[v] for v in range(35)]


def test_cover_inside_branch_records_fingerprint():
    out = build_cover_container(K100, AlgorithmParams.cover(Fraction(1, 32)), vset([0]))
    assert out.trace[0].branch == INSIDE and out.S == vset([0])
    assert out.C & vset([0])


def test_cover_parameter_errors():
    H = gen_triangles(4)
    with pytest.raises(ParameterError):
        build_family(H, AlgorithmParams.cover(Fraction(1, 4)))
    with pytest.raises(ParameterError):
        build_family(hg(3, [0], [1, 2]), AlgorithmParams.cover(Fraction(1, 100)))
    with pytest.raises(ParameterError):
        build_family(H, AlgorithmParams.cover(Fraction(1, 72), stop_rule="logr", K=2))


def test_non_independent_input_rejected():
    with pytest.raises(ValueError):
        build_family(EDGE, AlgorithmParams.cover(Fraction(1, 32)), [vset([0, 1])])


def test_family_k100_fingerprint_bound():
    p = Fraction(1, 32)
    fam = build_family(K100, AlgorithmParams.cover(p), random_independent_sets(K100, 40, 3) + [0])
    for S, C, G in fam.entries():
        assert S.bit_count() <= 8 * 4 * p * 100
        assert covers(G, restrict(K100, C))


def test_logr_rule_runs():
    report, fam = verify_cover(K100, AlgorithmParams.cover(Fraction(1, 32), "logr", 2),
                               random_independent_sets(K100, 20, 1) + [0])
    assert report.passed, report.summary()
    assert len(fam) >= 1


# relaxed p: dense small instances where the per-round checks actually fire


def complete_uniform(m, r):
    from itertools import combinations

    return Hypergraph(m, combinations(range(m), r))


# The stop test needs roughly e(H) p^(r-1) > |V|, so only dense instances run
# rounds; for r = 4 that takes tens of thousands of edges and is left out.
DENSE = {
    "K24": gen_complete_graph(24),
    "K40": gen_complete_graph(40),
    "random2-24": gen_random_uniform(24, 2, 240, 5),
    "random2-30": gen_random_uniform(30, 2, 400, 8),
    "complete3-32": complete_uniform(32, 3),
}


@pytest.mark.parametrize("name", sorted(DENSE))
def test_relaxed_cover_stress(name):
    H = DENSE[name]
    p = Fraction(1, 4 * H.r)
    report, fam = verify_cover(H, AlgorithmParams.cover(p, relaxed=True), guard=64)
    assert report.passed, report.summary()
    assert report.count("cover.choice") > 0
    assert report.count("cover.small-links") > 0
    assert len(fam) > 1


# -- hardcore mode -----------------------------------------------------------


def test_select_hardcore_vertex_examples():
    assert select_hardcore_vertex(STAR, HALF, HALF) == 0
    assert select_hardcore_vertex(EDGE, HALF, HALF) is None
    assert select_hardcore_vertex(Hypergraph(4), HALF, HALF) is None


def test_hardcore_examples():
    params = AlgorithmParams.hardcore(HALF, HALF)
    out = build_hardcore_container(Hypergraph(5), params, 0)
    assert (out.S, out.C, out.rounds) == (0, full_set(5), 0)
    out = build_hardcore_container(STAR, params, vset([0]))
    assert (out.S, out.C, out.rounds) == (vset([0]), vset([0]), 1)
    out = build_hardcore_container(STAR, params, 0)
    assert (out.S, out.C, out.rounds) == (0, vset([1, 2, 3]), 1)
    assert out.trace[0].branch == OUTSIDE


def test_hardcore_star_family():
    fam = build_family(STAR, AlgorithmParams.hardcore(HALF, HALF))
    assert [(S, C) for S, C, _ in fam.entries()] == [(0, vset([1, 2, 3])), (vset([0]), vset([0]))]


def test_hardcore_parameter_errors():
    with pytest.raises(ParameterError):
        build_family(STAR, AlgorithmParams.hardcore(HALF, Fraction(1, 4)))
    with pytest.raises(ParameterError):
        build_family(STAR, AlgorithmParams(HALF, "hardcore"))


def test_hardcore_beyond_table_limit():
    H = Hypergraph(22, [[i, i + 1] for i in range(21)])
    params = AlgorithmParams.hardcore(Fraction(1, 4), Fraction(1, 4))
    report, fam = verify_hardcore(H, params, [0, vset([0, 2, 4])], per_round=False)
    assert report.passed, report.summary()


# -- interpolating mode ------------------------------------------------------


def test_select_interpolating_examples():
    assert select_interpolating_set(Hypergraph(3), HALF, HALF) is None
    assert select_interpolating_set(EDGE, HALF, HALF) is None
    assert select_interpolating_set(STAR, HALF, HALF) == vset([0])


def test_interpolating_examples():
    params = AlgorithmParams.interpolating(HALF, HALF)
    out = build_interpolating_container(Hypergraph(3), params, 0)
    assert (out.S, out.C, out.G.edges) == (0, full_set(3), ())
    blocked = hg(2, [0])
    for p, d in ((HALF, HALF), (Fraction(1, 5), Fraction(1, 3))):
        out = build_interpolating_container(blocked, AlgorithmParams.interpolating(p, d), 0)
        assert (out.S, out.C, out.G.edges) == (0, vset([1]), ())
    for I in (0, 1, 2):
        out = build_interpolating_container(EDGE, params, I)
        assert (out.S, out.C) == (0, vset([0, 1]))
        assert out.G == EDGE


def test_interpolating_guard():
    with pytest.raises(GuardExceeded):
        build_family(Hypergraph(21), AlgorithmParams.interpolating(Fraction(1, 4), Fraction(1, 4)), [0])


# -- families ----------------------------------------------------------------


def test_edgeless_family_single_entry():
    for params in (AlgorithmParams.cover(Fraction(1, 8)), AlgorithmParams.hardcore(HALF, HALF),
                   AlgorithmParams.interpolating(HALF, HALF)):
        fam = build_family(Hypergraph(4), params)
        assert [(S, C) for S, C, _ in fam.entries()] == [(0, full_set(4))]
        assert len(fam.assignment) == 16


def test_family_is_deterministic_across_input_orders():
    H = gen_aps(12, 3)
    params = AlgorithmParams.interpolating(Fraction(1, 8), Fraction(1, 4))
    inputs = list(independent_sets(H))
    a = build_family(H, params, inputs)
    b = build_family(H, params, list(reversed(inputs)))
    assert a.outputs.keys() == b.outputs.keys()
    assert all(a.outputs[S].C == b.outputs[S].C for S in a.outputs)
    assert a.assignment == b.assignment


def test_determinism_error_is_an_algorithm_error():
    assert issubclass(DeterminismError, RuntimeError)


def test_verifiers_pass_on_small_instances():
    H = gen_aps(10, 3)
    r1, _ = verify_hardcore(H, AlgorithmParams.hardcore(Fraction(1, 8), Fraction(1, 4)))
    r2, _ = verify_interpolating(H, AlgorithmParams.interpolating(Fraction(1, 8), Fraction(1, 4)))
    assert r1.passed and r2.passed
