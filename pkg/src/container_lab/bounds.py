"""Auxiliary bounds and constructions: Harris, the constructive cover, Janson,
LYMB, the key inequality, and checkers for derived container statements."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb, floor
from typing import Optional

from .certified import exp_bounds, log_ge_scaled
from .containers import AlgorithmParams, ParameterError, build_family
from .exact import conditional_expected_size, prob_independent
from .hypergraph import (
    Hypergraph,
    covers,
    is_antichain,
    max_degree,
    members,
    minimal_elements,
    restrict,
    submasks,
    weight,
)
from .report import VerificationReport, set_witness

__all__ = [
    "HarrisBound",
    "harris_bound",
    "lambda_table",
    "CoverConstruction",
    "construct_cover",
    "construct_cover_details",
    "JansonBound",
    "janson_bound",
    "lymb_sum",
    "KeyInequality",
    "key_inequality_check",
    "EfficientParams",
    "supersaturation_holds",
    "efficient_assumptions_hold",
    "check_efficient_conclusion",
    "check_packaged_conclusion",
    "crosscheck_hcl4_implies_hcl1",
    "prob_upper_bound_holds",
]


# ---------------------------------------------------------------------------
# Harris


@dataclass(frozen=True)
class HarrisBound:
    """Lower bounds on Pr(V_p independent) for any H covered by ``G``.

    ``product`` is the exact product of ``1 - p^|A|``; ``weight`` is
    ``w_p(G)``, giving the weaker bound ``exp(-2 weight)``.
    """

    weight: Fraction
    product: Fraction
    p: Fraction

    def exp_lower(self) -> Fraction:
        """A rational lower bound on ``exp(-2 w_p(G))``."""
        return exp_bounds(-2 * self.weight)[0]

    def product_dominates_exp(self) -> bool:
        """Certified ``product >= exp(-2 w)`` (holds since p < 1/2)."""
        return self.product >= exp_bounds(-2 * self.weight)[1]


def harris_bound(G: Hypergraph, p) -> HarrisBound:
    p = Fraction(p)
    if not 0 < p < Fraction(1, 2):
        raise ValueError(f"need 0 < p < 1/2, got {p}")
    if G.has_empty_edge:
        raise ValueError("the cover must not contain the empty set")
    product = Fraction(1)
    for s, c in Counter(e.bit_count() for e in G.edges).items():
        product *= (1 - p**s) ** c
    return HarrisBound(weight(G, p), product, p)


# ---------------------------------------------------------------------------
# constructive cover


def lambda_table(r: int) -> dict[int, Fraction]:
    return {ell: Fraction(1, 4 ** min(ell, r - ell)) for ell in range(1, r + 1)}


@dataclass(frozen=True)
class CoverConstruction:
    G: Hypergraph
    H_prime: Hypergraph
    caps: dict[int, int]
    p: Fraction

    @property
    def mu(self) -> Fraction:
        r = max((e.bit_count() for e in self.H_prime.edges), default=0)
        return self.H_prime.e * self.p**r


def _caps(r: int, p: Fraction) -> dict[int, int]:
    lam = lambda_table(r)
    return {ell: floor(lam[ell] / comb(r, ell) * p ** (ell - r)) for ell in range(1, r + 1)}


def construct_cover_details(H: Hypergraph, p) -> CoverConstruction:
    """Greedy maximal degree-capped subgraph ``H'`` and the derived cover.

    ``H'`` takes edges in canonical order whenever every degree cap
    ``floor(lambda_l / C(r,l) * p^(l-r))`` still holds; the cover is the set
    of minimal sets whose ``H'``-degree sits exactly at its cap.
    """
    p = Fraction(p)
    if not H.is_uniform:
        raise ParameterError("the constructive cover needs a uniform hypergraph")
    r = H.r
    if not H.edges:
        return CoverConstruction(Hypergraph(H.n), Hypergraph(H.n), {}, p)
    if not 0 < p < Fraction(1, 4 * r):
        raise ParameterError(f"need 0 < p < 1/(4r) = {Fraction(1, 4 * r)}, got {p}")
    caps = _caps(r, p)
    deg: Counter[int] = Counter()
    kept = []
    for e in H.edges:
        subs = list(submasks(e, nonempty=True))
        if all(deg[t] < caps[t.bit_count()] for t in subs):
            kept.append(e)
            for t in subs:
                deg[t] += 1
    at_cap = [t for t, c in deg.items() if c == caps[t.bit_count()]]
    G = minimal_elements(Hypergraph.from_masks(H.n, at_cap))
    H_prime = Hypergraph.from_masks(H.n, kept)
    if not covers(G, H):
        raise AssertionError("constructed family does not cover H")
    if weight(G, p / (4 * r * r)) > 2 * H_prime.e * p**r:
        raise AssertionError("constructed cover violates the weight chain")
    return CoverConstruction(G, H_prime, caps, p)


def construct_cover(H: Hypergraph, p) -> Hypergraph:
    return construct_cover_details(H, p).G


def prob_upper_bound_holds(prob: Fraction, exponent: Fraction) -> bool:
    """Certified ``prob <= exp(exponent)``: compared against the lower enclosure."""
    return prob <= exp_bounds(exponent)[0]


# ---------------------------------------------------------------------------
# Janson


@dataclass(frozen=True)
class JansonBound:
    mu: Fraction
    delta_star: Fraction
    lower: Fraction  # rational enclosure of exp(-mu^2 / (2 delta_star))
    upper: Fraction

    @property
    def exponent(self) -> Fraction:
        if self.mu == 0:
            return Fraction(0)
        return -self.mu**2 / (2 * self.delta_star)

    def dominates(self, prob: Fraction) -> bool:
        """Certified ``prob <= bound``."""
        return prob <= self.lower

    def __float__(self) -> float:
        return float((self.lower + self.upper) / 2)


def janson_bound(G: Hypergraph, p) -> JansonBound:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} is outside [0, 1]")
    mu = weight(G, p)
    if mu == 0:
        return JansonBound(Fraction(0), Fraction(0), Fraction(1), Fraction(1))
    incident: dict[int, list[int]] = {}
    for e in G.edges:
        for v in members(e):
            incident.setdefault(v, []).append(e)
    by_union: Counter[int] = Counter()
    for a in G.edges:
        partners = set()
        for v in members(a):
            partners.update(incident[v])
        for b in partners:
            by_union[(a | b).bit_count()] += 1
    delta_star = sum((c * p**k for k, c in by_union.items()), Fraction(0))
    lo, hi = exp_bounds(-mu**2 / (2 * delta_star))
    return JansonBound(mu, delta_star, lo, hi)


# ---------------------------------------------------------------------------
# LYMB


def lymb_sum(A: Hypergraph, ground: Optional[int] = None) -> Fraction:
    """Sum of ``1 / C(|X|, |A|)`` over the antichain ``A`` with ``X`` the ground set."""
    if not is_antichain(A):
        raise ValueError("LYMB sums are defined for antichains only")
    size = A.n if ground is None else ground.bit_count()
    if ground is not None and any(e & ~ground for e in A.edges):
        raise ValueError("antichain member outside the ground set")
    return sum((Fraction(1, comb(size, e.bit_count())) for e in A.edges), Fraction(0))


# ---------------------------------------------------------------------------
# key inequality for decreasing families


@dataclass(frozen=True)
class KeyInequality:
    """``log Pr(V_p independent) >= exponent * log(1 - p)``."""

    prob: Fraction
    expected_size: Fraction
    base: Fraction  # 1 - p
    exponent: Fraction
    holds: bool
    equality: bool

    @property
    def lhs_certificate(self) -> Fraction:
        return self.prob

    @property
    def rhs_certificate(self) -> tuple[Fraction, Fraction]:
        """``(base, exponent)``: the right side is ``base ** exponent``."""
        return self.base, self.exponent


def key_inequality_check(H: Hypergraph, p, *, guard: Optional[int] = None) -> KeyInequality:
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValueError(f"need 0 < p < 1, got {p}")
    if H.has_empty_edge:
        raise ValueError("a hypergraph with an empty edge has no independent sets")
    prob = prob_independent(H, p, guard=guard)
    expected = conditional_expected_size(H, p, guard=guard)
    x = H.n - expected / p
    if x < 0:
        raise AssertionError(f"conditional expectation {expected} exceeds p|V|")
    holds = log_ge_scaled(prob, 1 - p, x)
    equality = False
    if x.denominator <= 64:
        equality = prob**x.denominator == (1 - p) ** x.numerator
    return KeyInequality(prob, expected, 1 - p, x, holds, equality)


# ---------------------------------------------------------------------------
# supersaturation and derived statements


@dataclass(frozen=True)
class EfficientParams:
    tau: Fraction
    K: Fraction

    def __post_init__(self):
        object.__setattr__(self, "tau", Fraction(self.tau))
        object.__setattr__(self, "K", Fraction(self.K))
        if not 0 < self.tau < 1:
            raise ParameterError("tau must lie in (0, 1)")


def supersaturation_holds(H_S: Hypergraph, container_size: int, p) -> bool:
    """True iff ``max_degree(H_S, l) < p^(l-1) e(H_S) / container_size`` for every l in 2..r."""
    p = Fraction(p)
    if not H_S.edges:
        raise ValueError("the condition is degenerate for an empty hypergraph")
    if not H_S.is_uniform:
        raise ValueError("supersaturation is defined for uniform hypergraphs")
    if container_size < 1:
        raise ValueError("container size must be positive")
    e = H_S.e
    return all(max_degree(H_S, ell) * container_size < p ** (ell - 1) * e for ell in range(2, H_S.r + 1))


def efficient_assumptions_hold(H: Hypergraph, params: EfficientParams) -> bool:
    if not H.edges:
        raise ValueError("the degree assumptions need a nonempty hypergraph")
    if not H.is_uniform:
        raise ParameterError("the degree assumptions need a uniform hypergraph")
    r, K, tau = H.r, params.K, params.tau
    if K < r:
        raise ParameterError(f"K={K} must be at least r={r}")
    base = tau / (32 * K * r * r)
    ratio = Fraction(H.e, H.n)
    return all(max_degree(H, ell) <= K * base ** (ell - 1) * ratio for ell in range(1, r + 1))


def _family(H, params, inputs, guard):
    return build_family(H, params, inputs, guard=guard)


def check_efficient_conclusion(H: Hypergraph, params: EfficientParams, inputs=None, *,
                               guard: Optional[int] = None) -> VerificationReport:
    """Run cover mode at ``p = tau / (8 r^2)`` and check fingerprint and container sizes."""
    if not efficient_assumptions_hold(H, params):
        raise ParameterError("the degree assumptions fail for this hypergraph")
    r = H.r
    p = params.tau / (8 * r * r)
    family = _family(H, AlgorithmParams.cover(p), inputs, guard)
    report = VerificationReport("efficient")
    n = H.n
    for S, C, _G in family.entries():
        report.record("efficient.small-fingerprint", S.bit_count() <= params.tau * n,
                      lambda: set_witness(S=S), "|S| <= tau |V|")
        report.record("efficient.small-container", C.bit_count() <= (1 - 1 / (2 * params.K)) * n,
                      lambda: set_witness(S=S, C_size=C.bit_count()), "|C| <= (1 - 1/(2K)) |V|")
    for I, S in family.assignment.items():
        C = family.outputs[S].C
        report.record("efficient.contained", S & ~I == 0 and I & ~C == 0,
                      lambda: set_witness(I=I, S=S), "S within I within C")
    report.notes.append(f"p = {p}; {len(family)} fingerprints over {len(family.assignment)} inputs")
    return report


def _random_subhypergraph(edges: list[int], rng: random.Random) -> list[int]:
    k = rng.randint(1, len(edges))
    return rng.sample(edges, k)


def check_packaged_conclusion(H: Hypergraph, p, trials: int, seed: int, inputs=None, *,
                              guard: Optional[int] = None) -> VerificationReport:
    """Certificate plus random spot-check that no container admits a supersaturated subhypergraph.

    The certificate is the cover: ``w_p(G) <= p|C|`` with ``G`` covering
    ``H[C]`` rules out every such subhypergraph.  ``trials`` random nonempty
    subhypergraphs of ``H[C]`` are also tested directly, spread over the
    containers in fingerprint order.
    """
    p = Fraction(p)
    report = VerificationReport("packaged")
    report.declare("packaged.certificate", "G covers H[C] and w_p(G) <= p|C|")
    report.declare("packaged.spot-check", "sampled subhypergraphs of H[C] are not supersaturated")
    family = _family(H, AlgorithmParams.cover(p), inputs, guard)
    r = max(H.r, 1)
    rng = random.Random(f"packaged:{seed}")
    entries = family.entries()
    with_edges = []
    for S, C, G in entries:
        HC = restrict(H, C)
        ok = covers(G, HC) and weight(G, p) <= p * C.bit_count() and all(e.bit_count() >= 2 for e in G.edges)
        report.record("packaged.certificate", ok, lambda: set_witness(S=S, C=C))
        report.record("packaged.small-fingerprint", S.bit_count() <= 8 * r * r * p * H.n,
                      lambda: set_witness(S=S), "|S| <= 8 r^2 p |V|")
        if HC.edges:
            with_edges.append((S, C, list(HC.edges)))
    if with_edges:
        for t in range(trials):
            S, C, edges = with_edges[t % len(with_edges)]
            sub = _random_subhypergraph(edges, rng)
            H_S = Hypergraph.from_masks(H.n, sub)
            ok = not supersaturation_holds(H_S, C.bit_count(), p)
            report.record("packaged.spot-check", ok, lambda: set_witness(S=S, edges=[list(members(e)) for e in sub]))
    else:
        report.notes.append("no container spans an edge; spot-check is vacuous")
    return report


def crosscheck_hcl4_implies_hcl1(H: Hypergraph, p, inputs=None, *, guard: Optional[int] = None) -> VerificationReport:
    """Interpolating mode at ``q = 2rp``, ``delta = 1/(4r)`` must yield small minimal covers."""
    p = Fraction(p)
    report = VerificationReport("crosscheck")
    report.declare("crosscheck.cover-weight", "minimal cover has w_p <= p|C|")
    report.declare("crosscheck.small-fingerprint", "|S| <= q|V|/delta = 8 r^2 p |V|")
    if not H.edges:
        report.notes.append("edgeless hypergraph: nothing to check")
        report.record("crosscheck.cover-weight", True)
        report.record("crosscheck.small-fingerprint", True)
        return report
    if not H.is_uniform:
        raise ParameterError("the cross-check needs a uniform hypergraph")
    r = H.r
    if not 0 < p <= Fraction(1, 8 * r * r):
        raise ParameterError(f"need 0 < p <= 1/(8r^2), got {p}")
    q, delta = 2 * r * p, Fraction(1, 4 * r)
    family = _family(H, AlgorithmParams.interpolating(q, delta), inputs, guard)
    for S, C, G in family.entries():
        Gmin = minimal_elements(G)
        report.record("crosscheck.cover-weight", weight(Gmin, p) <= p * C.bit_count(),
                      lambda: set_witness(S=S, C=C, weight=weight(Gmin, p)))
        report.record("crosscheck.covers", covers(Gmin, restrict(H, C)), lambda: set_witness(S=S, C=C))
        report.record("crosscheck.small-fingerprint", S.bit_count() * delta <= q * H.n,
                      lambda: set_witness(S=S))
    return report
