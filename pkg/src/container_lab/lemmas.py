"""Per-round and per-output checks of the container algorithms' guarantees.

Each ``verify_*`` function runs a family build with an observer attached and
returns a :class:`VerificationReport`.  Check identifiers name the property
being tested; the mapping to lemma statements is given in the README.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil
from typing import Iterable, Optional

import numpy as np

from .certified import log_bounds, log_ge_scaled
from .containers import (
    COVER,
    HARDCORE,
    INTERPOLATING,
    LOGR,
    STANDARD,
    AlgorithmParams,
    ContainerFamily,
    build_family,
)
from .exact import (
    IndependenceTable,
    independence_indicator,
    prob_independent,
)
from .hypergraph import (
    Hypergraph,
    covers,
    full_set,
    is_independent,
    members,
    restrict,
    strip_link,
    submasks,
    up_set_contains,
    weight,
)
from .report import VerificationReport, set_witness

__all__ = [
    "CoverObserver",
    "HardcoreObserver",
    "InterpolatingObserver",
    "verify_cover",
    "verify_hardcore",
    "verify_interpolating",
    "hardcore_tight_container",
    "LEMMA4_EQUIVALENCE_LIMIT",
]

LEMMA4_EQUIVALENCE_LIMIT = 12

DESCRIPTIONS = {
    "cover.antichain": "working hypergraph is an antichain in every round",
    "cover.upset-growth": "up-set strictly grows; new edges lie outside the old up-set",
    "cover.input-consistent": "S_i within I within C_i and I independent in every round",
    "cover.new-edges-uniform": "new edges are u-uniform with u < s_i",
    "cover.small-links": "w_p(link_L H_i^s) <= 1/(2r) for 1 <= |L| < s < r",
    "cover.heavy-vertex": "a vertex link of weight >= 1/r exists whenever the stop test fails",
    "cover.choice": "chosen L is heavy, not an edge, at the least heavy slice, inclusion-maximal",
    "cover.weight-increase": "w_p(H^{<r}) grows by >= 1/(8r) on inside rounds and never drops",
    "cover.contained": "S within I within C",
    "cover.small-fingerprint": "|S| within the fingerprint bound",
    "cover.covers": "G covers H[C]",
    "cover.min-edge-size": "every edge of G has at least two vertices",
    "cover.cover-weight": "w_p(G) <= p|C| (or the relaxed logr stop condition)",
    "family.determinism": "equal fingerprints give equal containers; reruns on S reproduce them",
    "hardcore.input-consistent": "S_i within I, I independent in H_i",
    "hardcore.fingerprint-absorbing": "I' independent in H_i iff S_i + I' is",
    "hardcore.prob-decrease": "P_{i+1} <= (1-delta)^[v_i in I] P_i",
    "hardcore.rounds": "J <= |V|",
    "hardcore.small-fingerprint": "delta |S| <= p |V|",
    "hardcore.tight-container": "Pr(S + C_p independent) >= (1-p)^(delta |C \\ S|)",
    "hardcore.contained": "S within I within C",
    "interp.input-consistent": "S_i within I, I independent in H_i",
    "interp.disjoint-fingerprint": "edges of H_i avoid S_i",
    "interp.prob-decrease": "P_{i+1} <= (1-delta)^([L_i in I] |L_i|) P_i",
    "interp.contained": "S within I within C",
    "interp.small-fingerprint": "delta |S| <= p |V|",
    "interp.covers": "G covers H[C]",
    "interp.min-edge-size": "every edge of G has at least two vertices",
    "interp.disjoint-cover": "edges of G avoid S",
    "interp.conditional-lower": "Pr(L in C_p | C_p independent in G) >= ((1-delta) p)^|L| for L independent in G",
}


def _record(report: VerificationReport, check: str, ok: bool, witness=None) -> bool:
    return report.record(check, ok, witness, DESCRIPTIONS.get(check, ""))


# ---------------------------------------------------------------------------
# cover mode


class CoverObserver:
    """Per-round checks for cover mode, run on the live working state."""

    def __init__(self, report: VerificationReport):
        self.report = report
        self._pending_weight: Optional[Fraction] = None

    def _low_weight(self, builder, state) -> Fraction:
        p, r = builder.p, builder.r
        return sum((len(es) * p**s for s, es in state.by_size.items() if s < r), Fraction(0))

    def start(self, builder, state, group):
        rep = self.report
        H = builder.H
        _record(rep, "cover.antichain", H.is_uniform, lambda: {"round": 0})
        for I in group:
            _record(rep, "cover.input-consistent", is_independent(H, I), lambda: set_witness(I=I, round=0))

    def before(self, builder, state, q, inside, F, group):
        rep = self.report
        p, r = builder.p, builder.r
        L, s = q.chosen, q.s
        rnd = {"L": list(members(L)), "s": s}

        # the least heavy slice, a heavy non-edge, and nothing heavier above it
        heavy = builder.heavy_sets(state, s)
        ok = L in heavy and L not in state.all_edges
        ok = ok and not any(builder.heavy_sets(state, t) for t in range(2, s))
        ok = ok and not any(t != L and t & L == L for t in heavy)
        _record(rep, "cover.choice", ok, lambda: dict(rnd))

        # a heavy vertex link exists at weight 1/r
        c = (full_set(builder.n) & ~state.blocked)
        found = False
        for size, d in state.deg.items():
            need = ceil(Fraction(1, r) / p ** (size - 1))
            if any(t.bit_count() == 1 and t & c and cnt >= need for t, cnt in d.items()):
                found = True
                break
        _record(rep, "cover.heavy-vertex", found, lambda: dict(rnd))

        # new edges: nonempty, uniform below s, outside the current up-set
        sizes = {f.bit_count() for f in F}
        _record(rep, "cover.new-edges-uniform", len(sizes) == 1 and min(sizes) < s,
                lambda: dict(rnd, sizes=sorted(sizes)))
        fresh = bool(F) and not any(up_set_contains(state.all_edges, f) for f in F)
        _record(rep, "cover.upset-growth", fresh, lambda: dict(rnd))

        for I in group:
            ok = state.S & ~I == 0 and (L & ~I == 0) == inside
            _record(rep, "cover.input-consistent", ok, lambda: set_witness(I=I, L=L))
        self._pending_weight = self._low_weight(builder, state)

    def after(self, builder, state, q, inside, F, removed, group):
        rep = self.report
        p, r = builder.p, builder.r
        L = q.chosen
        edges = state.all_edges

        # antichain: nothing in the new hypergraph sits strictly inside or above a new edge
        bad = None
        for f in F:
            if f not in edges or any(g in edges for g in submasks(f, proper=True)) or state.supersets(f) != {f}:
                bad = f
                break
        _record(rep, "cover.antichain", bad is None, lambda: set_witness(L=L, edge=bad))
        if removed:
            ok = all(any(f & e == f for f in F) for e in removed)
            _record(rep, "cover.upset-growth", ok, lambda: set_witness(L=L))

        for I in group:
            ok = state.S & ~I == 0 and not any(f & ~I == 0 for f in F)
            _record(rep, "cover.input-consistent", ok, lambda: set_witness(I=I, L=L))

        # small links below the top slice
        worst = None
        for s, d in state.deg.items():
            if s >= r:
                continue
            for t, cnt in d.items():
                if cnt * p ** (s - t.bit_count()) > Fraction(1, 2 * r):
                    worst = (s, t)
                    break
            if worst:
                break
        _record(rep, "cover.small-links", worst is None,
                lambda: {"s": worst[0], "L": list(members(worst[1]))})

        before = self._pending_weight
        after = self._low_weight(builder, state)
        gain = Fraction(1, 8 * r) if inside else Fraction(0)
        _record(rep, "cover.weight-increase", after >= before + gain,
                lambda: {"L": list(members(L)), "before": before, "after": after})

    def finish(self, builder, state, output, group):
        pass


def _cover_output_checks(report: VerificationReport, H: Hypergraph, params: AlgorithmParams,
                         family: ContainerFamily) -> None:
    p = params.p
    r = max(H.r, 1)
    n = H.n
    if params.stop_rule == LOGR:
        log_lo = log_bounds(Fraction(r))[0] if r > 1 else Fraction(0)
        s_bound = 16 * r * log_lo * p * n
    else:
        s_bound = 8 * r * r * p * n
    for S, C, G in family.entries():
        _record(report, "cover.small-fingerprint", S.bit_count() <= s_bound,
                lambda: set_witness(S=S, bound=s_bound))
        _record(report, "cover.covers", covers(G, restrict(H, C)), lambda: set_witness(S=S, C=C))
        _record(report, "cover.min-edge-size", all(e.bit_count() >= 2 for e in G.edges), lambda: set_witness(S=S))
        w = weight(G, p)
        if params.stop_rule == STANDARD:
            ok = w <= p * C.bit_count()
        else:
            ok = w <= p * C.bit_count() * log_bounds(Fraction(r))[1] / r or \
                C.bit_count() <= (1 - 1 / (2 * params.K)) * n
        _record(report, "cover.cover-weight", ok, lambda: set_witness(S=S, C=C, weight=w))
    for I, S in family.assignment.items():
        C = family.outputs[S].C
        _record(report, "cover.contained", S & ~I == 0 and I & ~C == 0, lambda: set_witness(I=I, S=S, C=C))
    _record(report, "family.determinism", True)


def verify_cover(H: Hypergraph, params: AlgorithmParams, inputs: Optional[Iterable[int]] = None, *,
                 per_round: bool = True, guard: Optional[int] = None, time_limit: Optional[float] = None,
                 report: Optional[VerificationReport] = None) -> tuple[VerificationReport, ContainerFamily]:
    """Build the cover-mode family over ``inputs`` (default: all independent sets) and check it.

    A determinism violation raised by the family builder is recorded as a
    failed ``family.determinism`` check rather than propagated.
    """
    report = report if report is not None else VerificationReport("cover-lemmas")
    if params.mode != COVER:
        raise ValueError("verify_cover needs cover-mode parameters")
    observer = CoverObserver(report) if per_round else None
    family = _guarded_family(report, H, params, inputs, observer, guard, time_limit)
    if family is not None:
        _cover_output_checks(report, H, params, family)
    return report, family


def _guarded_family(report, H, params, inputs, observer, guard, time_limit):
    from .containers import DeterminismError

    try:
        return build_family(H, params, inputs, observer=observer, guard=guard, time_limit=time_limit)
    except DeterminismError as exc:
        _record(report, "family.determinism", False, {"error": str(exc)})
        return None


# ---------------------------------------------------------------------------
# hard-core mode


def _table_prob_ratio_ok(before_total: int, after_total: int, factor: Fraction) -> bool:
    return after_total * factor.denominator <= factor.numerator * before_total


class HardcoreObserver:
    def __init__(self, report: VerificationReport):
        self.report = report
        self._before_total: Optional[int] = None

    def _total(self, builder, state) -> Fraction:
        if state.table is not None:
            return Fraction(state.table.total())
        return prob_independent(state.hypergraph(), builder.p)

    def start(self, builder, state, group):
        for I in group:
            _record(self.report, "hardcore.input-consistent", is_independent(builder.H, I), lambda: set_witness(I=I))

    def before(self, builder, state, q, inside, F, group):
        self._before_total = self._total(builder, state)
        for I in group:
            ok = state.S & ~I == 0 and (q.chosen & ~I == 0) == inside
            _record(self.report, "hardcore.input-consistent", ok, lambda: set_witness(I=I, v=q.chosen))

    def after(self, builder, state, q, inside, F, removed, group):
        rep = self.report
        after = self._total(builder, state)
        factor = (1 - builder.delta) if inside else Fraction(1)
        _record(rep, "hardcore.prob-decrease", after <= factor * self._before_total,
                lambda: set_witness(v=q.chosen, inside=inside))
        H_i = state.hypergraph()
        for I in group:
            _record(rep, "hardcore.input-consistent", state.S & ~I == 0 and is_independent(H_i, I),
                    lambda: set_witness(I=I, v=q.chosen))
        if builder.n <= LEMMA4_EQUIVALENCE_LIMIT:
            _record(rep, "hardcore.fingerprint-absorbing", _absorbing(H_i, state.S, state.table),
                    lambda: set_witness(S=state.S))

    def finish(self, builder, state, output, group):
        _record(self.report, "hardcore.rounds", output.rounds <= builder.n, lambda: {"rounds": output.rounds})


def _absorbing(H_i: Hypergraph, S: int, table: Optional[IndependenceTable]) -> bool:
    indep = independence_indicator(H_i)
    if table is not None and not np.array_equal(indep, table.indep):
        return False
    idx = np.arange(1 << H_i.n, dtype=np.int64) | S
    return bool(np.array_equal(indep, indep[idx]))


def hardcore_tight_container(H: Hypergraph, S: int, C: int, p, delta, *, guard: Optional[int] = None) -> bool:
    """Exact check of ``Pr(S + C_p independent in H) >= (1-p)^(delta |C \\ S|)``."""
    p, delta = Fraction(p), Fraction(delta)
    rest = C & ~S
    reduced = strip_link(restrict(H, C), S)
    if reduced.has_empty_edge:
        return False
    prob = prob_independent(reduced, p, ground=rest, guard=guard)
    if prob == 0:
        return False
    return log_ge_scaled(prob, 1 - p, delta * rest.bit_count())


def verify_hardcore(H: Hypergraph, params: AlgorithmParams, inputs: Optional[Iterable[int]] = None, *,
                    per_round: bool = True, guard: Optional[int] = None,
                    report: Optional[VerificationReport] = None) -> tuple[VerificationReport, ContainerFamily]:
    report = report if report is not None else VerificationReport("hardcore-lemmas")
    if params.mode != HARDCORE:
        raise ValueError("verify_hardcore needs hardcore-mode parameters")
    observer = HardcoreObserver(report) if per_round else None
    family = _guarded_family(report, H, params, inputs, observer, guard, None)
    if family is None:
        return report, family
    p, delta = params.p, params.delta
    for S, C, _G in family.entries():
        _record(report, "hardcore.small-fingerprint", delta * S.bit_count() <= p * H.n, lambda: set_witness(S=S))
        _record(report, "hardcore.tight-container", hardcore_tight_container(H, S, C, p, delta, guard=guard),
                lambda: set_witness(S=S, C=C))
    for I, S in family.assignment.items():
        C = family.outputs[S].C
        _record(report, "hardcore.contained", S & ~I == 0 and I & ~C == 0, lambda: set_witness(I=I, S=S, C=C))
    _record(report, "family.determinism", True)
    return report, family


# ---------------------------------------------------------------------------
# interpolating mode


class InterpolatingObserver:
    def __init__(self, report: VerificationReport):
        self.report = report
        self._before_total: Optional[int] = None

    def start(self, builder, state, group):
        for I in group:
            _record(self.report, "interp.input-consistent", is_independent(builder.H, I), lambda: set_witness(I=I))

    def before(self, builder, state, q, inside, F, group):
        self._before_total = state.table.total()
        for I in group:
            ok = state.S & ~I == 0 and (q.chosen & ~I == 0) == inside
            _record(self.report, "interp.input-consistent", ok, lambda: set_witness(I=I, L=q.chosen))

    def after(self, builder, state, q, inside, F, removed, group):
        rep = self.report
        after = state.table.total()
        factor = (1 - builder.delta) ** q.chosen.bit_count() if inside else Fraction(1)
        _record(rep, "interp.prob-decrease", _table_prob_ratio_ok(self._before_total, after, factor),
                lambda: set_witness(L=q.chosen, inside=inside))
        _record(rep, "interp.disjoint-fingerprint", not any(e & state.S for e in state.edges),
                lambda: set_witness(S=state.S))
        for I in group:
            ok = state.S & ~I == 0 and not any(e & ~I == 0 for e in state.edges)
            _record(rep, "interp.input-consistent", ok, lambda: set_witness(I=I, L=q.chosen))

    def finish(self, builder, state, output, group):
        pass


def _conditional_lower_ok(G: Hypergraph, C: int, p: Fraction, delta: Fraction) -> tuple[bool, Optional[int]]:
    """Every L independent in G inside C has conditional probability >= ((1-delta) p)^|L|."""
    n = G.n
    table = IndependenceTable.from_hypergraph(G, p)
    outside = full_set(n) & ~C
    for v in members(outside):
        table.forbid(1 << v)
    total = table.total()
    f = table.superset_masses()
    ratio = (1 - delta) * p
    c, d = ratio.numerator, ratio.denominator
    # masses carry the factor (1-p)^|V \ C| on both sides, so conditioning on C is exact
    for L in submasks(C, nonempty=True):
        if not table.indep[L]:
            continue
        k = L.bit_count()
        if int(f[L]) * d**k < c**k * total:
            return False, L
    return True, None


def verify_interpolating(H: Hypergraph, params: AlgorithmParams, inputs: Optional[Iterable[int]] = None, *,
                         per_round: bool = True, guard: Optional[int] = None,
                         report: Optional[VerificationReport] = None) -> tuple[VerificationReport, ContainerFamily]:
    report = report if report is not None else VerificationReport("interpolating-lemmas")
    if params.mode != INTERPOLATING:
        raise ValueError("verify_interpolating needs interpolating-mode parameters")
    observer = InterpolatingObserver(report) if per_round else None
    family = _guarded_family(report, H, params, inputs, observer, guard, None)
    if family is None:
        return report, family
    p, delta = params.p, params.delta
    for S, C, G in family.entries():
        _record(report, "interp.small-fingerprint", delta * S.bit_count() <= p * H.n, lambda: set_witness(S=S))
        _record(report, "interp.covers", covers(G, restrict(H, C)), lambda: set_witness(S=S, C=C))
        _record(report, "interp.min-edge-size", all(e.bit_count() >= 2 for e in G.edges), lambda: set_witness(S=S))
        _record(report, "interp.disjoint-cover", not any(e & S for e in G.edges), lambda: set_witness(S=S))
        ok, L = _conditional_lower_ok(G, C, p, delta)
        _record(report, "interp.conditional-lower", ok, lambda: set_witness(S=S, C=C, L=L))
    for I, S in family.assignment.items():
        C = family.outputs[S].C
        _record(report, "interp.contained", S & ~I == 0 and I & ~C == 0, lambda: set_witness(I=I, S=S, C=C))
    _record(report, "family.determinism", True)
    return report, family
