"""Seeded instance corpora and the verification suites that run over them.

Every suite takes an explicit seed and returns a :class:`VerificationReport`;
the same suite functions back the ``verify`` command and the acceptance tests.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .bounds import (
    EfficientParams,
    check_efficient_conclusion,
    check_packaged_conclusion,
    construct_cover_details,
    crosscheck_hcl4_implies_hcl1,
    harris_bound,
    janson_bound,
    key_inequality_check,
    lymb_sum,
    prob_upper_bound_holds,
)
from .containers import AlgorithmParams
from .exact import (
    conditional_expected_size,
    conditional_subset_prob,
    independent_sets,
    mc_prob_independent,
    partition_function,
    prob_independent,
)
from .generators import (
    gen_aps,
    gen_complete_graph,
    gen_decreasing_family_instance,
    gen_power_set_instance,
    gen_random_mixed,
    gen_random_uniform,
    gen_triangles,
    random_independent_sets,
)
from .hypergraph import Hypergraph, covers, is_antichain, members, minimal_elements, weight
from .lemmas import verify_cover, verify_hardcore, verify_interpolating
from .report import VerificationReport, set_witness

__all__ = [
    "Instance",
    "SUITES",
    "ENUMERATION_LIMIT",
    "cover_corpus",
    "hardcore_corpus",
    "interpolating_corpus",
    "inputs_for",
    "suite_cover",
    "suite_hardcore",
    "suite_interpolating",
    "suite_prop21",
    "suite_prop23",
    "suite_janson",
    "suite_lymb",
    "suite_efficient",
    "suite_packaged",
    "suite_crosscheck",
    "suite_oracle",
    "run_suite",
]

ENUMERATION_LIMIT = 18
SAMPLED_INPUTS = 100


@dataclass(frozen=True)
class Instance:
    name: str
    H: Hypergraph
    meta: dict = field(default_factory=dict, compare=False)


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"corpus:{tag}:{seed}")


def inputs_for(H: Hypergraph, seed: int, limit: int = ENUMERATION_LIMIT) -> Optional[list[int]]:
    """``None`` (meaning: every independent set) for small instances, else seeded samples."""
    if H.n <= limit:
        return None
    return random_independent_sets(H, SAMPLED_INPUTS, seed)


# ---------------------------------------------------------------------------
# corpora


def cover_corpus(seed: int = 0, count: int = 200) -> list[Instance]:
    """Uniform instances: random r-graphs, triangle and 3-AP hypergraphs, complete graphs."""
    rng = _rng(seed, "cover")
    out: list[Instance] = []
    for n in range(3, 7):
        out.append(Instance(f"triangles-{n}", gen_triangles(n)))
    for n in range(3, 21):
        out.append(Instance(f"aps-{n}-3", gen_aps(n, 3)))
    for n in (2, 3, 5, 8, 12, 20, 33, 50, 66, 70, 80, 90, 100, 110, 120):
        out.append(Instance(f"K{n}", gen_complete_graph(n)))
    i = 0
    while len(out) < count:
        r = (2, 3, 4)[i % 3]
        small = i % 2 == 0
        n = rng.randint(r + 2, 14) if small else rng.randint(19, 60)
        cap = math.comb(n, r)
        m = rng.randint(1, min(cap, 4 * n if small else 6 * n))
        s = rng.randrange(1 << 30)
        out.append(Instance(f"uniform-{n}-{r}-{m}-{s}", gen_random_uniform(n, r, m, s),
                            {"n": n, "r": r, "m": m, "seed": s}))
        i += 1
    return out


def hardcore_corpus(seed: int = 0, count: int = 100) -> list[Instance]:
    """Mixed-size (mostly non-uniform) instances on at most 18 vertices, plus the star."""
    rng = _rng(seed, "hardcore")
    from .generators import gen_star, gen_matching

    out = [Instance("star-3", gen_star(3)), Instance("matching-4", gen_matching(4)),
           Instance("empty-6", Hypergraph(6)), Instance("triangles-4", gen_triangles(4))]
    while len(out) < count:
        n = rng.randint(3, 18 if len(out) % 10 == 0 else 12)
        m = rng.randint(1, 2 * n)
        s = rng.randrange(1 << 30)
        out.append(Instance(f"mixed-{n}-{m}-{s}", gen_random_mixed(n, m, 3, s), {"n": n, "m": m, "seed": s}))
    return out


def interpolating_corpus(seed: int = 0, count: int = 50) -> list[Instance]:
    rng = _rng(seed, "interpolating")
    out = [Instance("edge", Hypergraph(2, [[0, 1]])), Instance("blocked", Hypergraph(2, [[0]])),
           Instance("triangles-4", gen_triangles(4)), Instance("aps-9-3", gen_aps(9, 3))]
    while len(out) < count:
        n = rng.randint(3, 14)
        if len(out) % 2:
            r = rng.choice((2, 3))
            m = rng.randint(1, min(math.comb(n, r), 3 * n))
            s = rng.randrange(1 << 30)
            out.append(Instance(f"uniform-{n}-{r}-{m}-{s}", gen_random_uniform(n, r, m, s)))
        else:
            m = rng.randint(1, 2 * n)
            s = rng.randrange(1 << 30)
            out.append(Instance(f"mixed-{n}-{m}-{s}", gen_random_mixed(n, m, 3, s)))
    return out


# ---------------------------------------------------------------------------
# container suites


def suite_cover(instances: Iterable[Instance], seed: int = 0, p_values: Optional[Callable] = None,
                per_round: bool = True, relaxed: bool = False) -> VerificationReport:
    """Cover-mode lemma checks at ``p = 1/(8r^2)`` and ``1/(16r^2)`` (or ``p_values(r)``)."""
    report = VerificationReport("cover-lemmas")
    runs = 0
    for inst in instances:
        H = inst.H
        r = max(H.r, 1)
        ps = p_values(r) if p_values else (Fraction(1, 8 * r * r), Fraction(1, 16 * r * r))
        inputs = inputs_for(H, seed)
        for p in ps:
            verify_cover(H, AlgorithmParams.cover(p, relaxed=relaxed), inputs, per_round=per_round, report=report)
            runs += 1
    report.notes.append(f"{runs} runs")
    return report


HARDCORE_PARAMS = ((Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 8), Fraction(1, 4)), (Fraction(1, 10), Fraction(1, 2)))


def suite_hardcore(instances: Iterable[Instance], seed: int = 0, params=HARDCORE_PARAMS) -> VerificationReport:
    report = VerificationReport("hardcore-lemmas")
    runs = 0
    for inst in instances:
        inputs = inputs_for(inst.H, seed)
        for p, delta in params:
            verify_hardcore(inst.H, AlgorithmParams.hardcore(p, delta), inputs, report=report)
            runs += 1
    report.notes.append(f"{runs} runs")
    return report


INTERPOLATING_PARAMS = ((Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 8), Fraction(1, 2)))


def suite_interpolating(instances: Iterable[Instance], seed: int = 0, params=INTERPOLATING_PARAMS,
                        crosscheck: bool = True) -> VerificationReport:
    report = VerificationReport("interpolating-lemmas")
    for inst in instances:
        H = inst.H
        for p, delta in params:
            verify_interpolating(H, AlgorithmParams.interpolating(p, delta), report=report)
        if crosscheck and H.is_uniform:
            report.merge(suite_crosscheck([inst]))
    return report


def suite_crosscheck(instances: Iterable[Instance], seed: int = 0) -> VerificationReport:
    report = VerificationReport("crosscheck")
    for inst in instances:
        H = inst.H
        if not H.is_uniform:
            continue
        r = max(H.r, 1)
        for p in (Fraction(1, 8 * r * r), Fraction(1, 16 * r * r)):
            report.merge(crosscheck_hcl4_implies_hcl1(H, p))
    return report


# ---------------------------------------------------------------------------
# probability suites


PROP23_P = (Fraction(1, 10), Fraction(1, 3), Fraction(1, 2), Fraction(9, 10))


def suite_prop23(count: int = 500, seed: int = 0, equality_n: int = 8) -> VerificationReport:
    """Key inequality on random decreasing families, and equality on the power-set families."""
    report = VerificationReport("prop23")
    rng = _rng(seed, "prop23")
    desc = "log Pr(V_p in family) >= (|V| - E[|V_p| | family]/p) log(1-p)"
    for i in range(count):
        n = rng.randint(1, 12)
        density = Fraction(rng.randint(0, 8), 8)
        s = rng.randrange(1 << 30)
        H = gen_decreasing_family_instance(n, density, s)
        p = PROP23_P[i % len(PROP23_P)]
        k = key_inequality_check(H, p)
        report.record("key-inequality", k.holds, lambda: {"n": n, "density": density, "seed": s, "p": p}, desc)
    for U in range(1 << equality_n):
        H = gen_power_set_instance(equality_n, U)
        for p in (Fraction(1, 3), Fraction(1, 2)):
            k = key_inequality_check(H, p)
            report.record("key-inequality.equality", k.holds and k.equality, lambda: set_witness(U=U, p=p),
                          "power-set families attain equality")
    return report


def _uniform_small(rng: random.Random, rs=(2, 3), n_max: int = 14) -> tuple[Hypergraph, dict]:
    r = rng.choice(rs)
    n = rng.randint(r + 1, n_max)
    m = rng.randint(1, min(math.comb(n, r), 3 * n))
    s = rng.randrange(1 << 30)
    return gen_random_uniform(n, r, m, s), {"n": n, "r": r, "m": m, "seed": s}


def suite_prop21(count: int = 100, seed: int = 0) -> VerificationReport:
    """Constructive cover: covers H, certified upper bound on Pr; Harris product lower bound."""
    report = VerificationReport("prop21")
    rng = _rng(seed, "prop21")
    for _ in range(count):
        H, meta = _uniform_small(rng)
        r = H.r
        p = Fraction(1, rng.choice((4 * r + 1, 6 * r, 8 * r, 16 * r)))
        built = construct_cover_details(H, p)
        G = built.G
        prob = prob_independent(H, p)
        w = weight(G, p / (4 * r * r))
        report.record("prop21.covers", covers(G, H), lambda: dict(meta, p=p), "constructed family covers H")
        report.record("prop21.antichain", is_antichain(G), lambda: dict(meta, p=p), "constructed family is an antichain")
        report.record("prop21.upper", prob_upper_bound_holds(prob, -w / 8), lambda: dict(meta, p=p, prob=prob, w=w),
                      "Pr(V_p independent) <= exp(-w_{p/(4r^2)}(G)/8), certified")
        report.record("prop21.weight-chain", 2 * built.mu >= w, lambda: dict(meta, p=p),
                      "w_{p/(4r^2)}(G) <= 2 e(H') p^r")
        # Harris: any cover gives a lower bound; test the constructed cover and H itself
        for name, cover in (("constructed", G), ("self", H)):
            if p < Fraction(1, 2):
                hb = harris_bound(cover, p)
                report.record("prop21.harris-product", prob >= hb.product,
                              lambda: dict(meta, p=p, cover=name), "Pr >= prod(1 - p^|A|) over a cover")
                report.record("prop21.harris-exp", hb.product_dominates_exp(),
                              lambda: dict(meta, p=p, cover=name), "prod(1 - p^|A|) >= exp(-2 w_p(G)), certified")
    return report


def suite_janson(count: int = 100, seed: int = 0) -> VerificationReport:
    report = VerificationReport("janson")
    rng = _rng(seed, "janson")
    for i in range(count):
        n = rng.randint(2, 14)
        m = rng.randint(1, 2 * n)
        s = rng.randrange(1 << 30)
        G = gen_random_mixed(n, m, 4, s)
        for p in (Fraction(1, 10), Fraction(1, 3), Fraction(1, 2), Fraction(4, 5)):
            jb = janson_bound(G, p)
            prob = prob_independent(G, p)
            report.record("janson.upper", jb.dominates(prob), lambda: {"n": n, "m": m, "seed": s, "p": p},
                          "Pr(C_p independent in G) <= exp(-mu^2/(2 Delta*)), certified")
            report.record("janson.diagonal", jb.delta_star >= jb.mu, lambda: {"seed": s, "p": p},
                          "Delta* includes the diagonal terms")
    return report


def suite_lymb(count: int = 500, seed: int = 0) -> VerificationReport:
    report = VerificationReport("lymb")
    rng = _rng(seed, "lymb")
    for _ in range(count):
        n = rng.randint(1, 16)
        m = rng.randint(0, 3 * n)
        s = rng.randrange(1 << 30)
        A = minimal_elements(gen_random_mixed(n, m, n, s))
        total = lymb_sum(A)
        report.record("lymb.sum", total <= 1, lambda: {"n": n, "m": m, "seed": s, "sum": total},
                      "sum of 1/C(|X|,|A|) over an antichain is at most 1")
    return report


def suite_oracle(count: int = 200, mc_count: int = 50, seed: int = 0, samples: int = 20000) -> VerificationReport:
    """Exact engine against brute-force enumeration; Monte Carlo within 4 sigma of exact."""
    report = VerificationReport("oracle")
    rng = _rng(seed, "oracle")
    for i in range(count):
        n = rng.randint(1, 10)
        m = rng.randint(0, 6)
        s = rng.randrange(1 << 30)
        H = gen_random_mixed(n, m, n, s)
        indep = list(independent_sets_brute(H))
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        p = Fraction(rng.randint(1, 9), 10)
        meta = {"n": n, "m": m, "seed": s}
        z = sum((lam ** I.bit_count() for I in indep), Fraction(0))
        report.record("oracle.partition", partition_function(H, lam).z == z, lambda: dict(meta, lam=lam),
                      "partition function equals the enumeration sum")
        pr = sum((p ** I.bit_count() * (1 - p) ** (n - I.bit_count()) for I in indep), Fraction(0))
        report.record("oracle.prob", prob_independent(H, p) == pr, lambda: dict(meta, p=p),
                      "Pr(V_p independent) equals the enumeration sum")
        L = rng.randrange(1 << n) if n else 0
        num = sum((p ** I.bit_count() * (1 - p) ** (n - I.bit_count()) for I in indep if I & L == L), Fraction(0))
        report.record("oracle.conditional", conditional_subset_prob(H, p, L) == num / pr,
                      lambda: dict(meta, p=p, L=list(members(L))), "conditional subset probability")
        ex = sum((I.bit_count() * p ** I.bit_count() * (1 - p) ** (n - I.bit_count()) for I in indep),
                 Fraction(0)) / pr
        report.record("oracle.expected-size", conditional_expected_size(H, p) == ex, lambda: dict(meta, p=p),
                      "conditional expected size")
        report.record("oracle.count", len(indep) == len(list(independent_sets(H))), lambda: meta,
                      "fast enumeration agrees with brute force")
    for i in range(mc_count):
        n = rng.randint(2, 14)
        m = rng.randint(1, 10)
        s = rng.randrange(1 << 30)
        H = gen_random_mixed(n, m, 4, s)
        p = Fraction(rng.randint(1, 9), 10)
        exact = prob_independent(H, p)
        est = mc_prob_independent(H, p, samples, s)
        sigma = math.sqrt(float(exact) * (1 - float(exact)) / samples)
        ok = abs(est.estimate - float(exact)) <= 4 * sigma + 1e-12
        report.record("oracle.monte-carlo", ok, lambda: {"n": n, "seed": s, "p": p, "estimate": est.estimate,
                                                         "exact": float(exact)}, "MC within 4 sigma of exact")
    return report


def independent_sets_brute(H: Hypergraph):
    from .exact import independent_sets_direct

    return independent_sets_direct(H)


# ---------------------------------------------------------------------------
# derivation suites on fixed instances


def suite_efficient(seed: int = 0) -> VerificationReport:
    report = VerificationReport("efficient")
    H = gen_complete_graph(1000)
    params = EfficientParams(Fraction(3, 10), 2)
    # all 1001 independent sets: the empty set and the singletons
    report.merge(check_efficient_conclusion(H, params, None, guard=H.n + 1))
    return report


def suite_packaged(seed: int = 0, trials: int = 1000) -> VerificationReport:
    report = VerificationReport("packaged")
    K100 = gen_complete_graph(100)
    report.merge(check_packaged_conclusion(K100, Fraction(1, 32), trials, seed,
                                           random_independent_sets(K100, SAMPLED_INPUTS, seed)))
    report.merge(check_packaged_conclusion(gen_triangles(5), Fraction(1, 72), trials, seed))
    return report


SUITES = ("cover-lemmas", "hardcore-lemmas", "interpolating-lemmas", "prop21", "prop23", "janson", "lymb",
          "efficient", "packaged", "crosscheck", "oracle")


def run_suite(name: str, *, seed: int = 0, count: Optional[int] = None) -> VerificationReport:
    """Run a named suite over its default seeded corpus."""
    if name == "cover-lemmas":
        return suite_cover(cover_corpus(seed, count or 200), seed)
    if name == "hardcore-lemmas":
        return suite_hardcore(hardcore_corpus(seed, count or 100), seed)
    if name == "interpolating-lemmas":
        return suite_interpolating(interpolating_corpus(seed, count or 50), seed, crosscheck=False)
    if name == "crosscheck":
        return suite_crosscheck([i for i in interpolating_corpus(seed, count or 50) if i.H.is_uniform], seed)
    if name == "prop21":
        return suite_prop21(count or 100, seed)
    if name == "prop23":
        return suite_prop23(count or 500, seed)
    if name == "janson":
        return suite_janson(count or 100, seed)
    if name == "lymb":
        return suite_lymb(count or 500, seed)
    if name == "efficient":
        return suite_efficient(seed)
    if name == "packaged":
        return suite_packaged(seed, count or 1000)
    if name == "oracle":
        return suite_oracle(count or 200, seed=seed)
    raise KeyError(name)
