"""The three container-building algorithms and the family builder.

Each algorithm interrogates an independent set ``I`` only through queries of
the form "is ``L`` a subset of ``I``?".  The answers fully determine the run,
so a whole family of inputs is processed as one decision tree: inputs that
agree on every answer so far share state, and the state is forked only when
a query splits them.  A single-input run is the degenerate one-leaf case.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterable, Optional, Protocol

import numpy as np

from .certified import log_bounds
from .exact import (
    GuardExceeded,
    IndependenceTable,
    _popcounts,
    conditional_subset_prob,
    independent_sets,
)
from .hypergraph import (
    Hypergraph,
    full_set,
    is_independent,
    members,
    restrict,
    set_key,
    submasks,
)

__all__ = [
    "AlgorithmParams",
    "TraceStep",
    "ContainerOutput",
    "ContainerFamily",
    "ParameterError",
    "AlgorithmError",
    "DeterminismError",
    "WatchdogError",
    "INSIDE",
    "OUTSIDE",
    "select_cover_branch",
    "build_cover_container",
    "select_hardcore_vertex",
    "build_hardcore_container",
    "select_interpolating_set",
    "build_interpolating_container",
    "build_family",
    "explore",
    "make_builder",
]

INSIDE = "inside_I"
OUTSIDE = "outside_I"

COVER, HARDCORE, INTERPOLATING = "cover", "hardcore", "interpolating"
STANDARD, LOGR = "standard", "logr"

INTERPOLATING_GUARD = 20


class ParameterError(ValueError):
    """Parameters outside the range an algorithm is defined for."""


class AlgorithmError(RuntimeError):
    """An internal guarantee of an algorithm failed (indicates a bug)."""


class DeterminismError(AlgorithmError):
    """Equal fingerprints led to different containers."""


class WatchdogError(RuntimeError):
    pass


@dataclass(frozen=True)
class AlgorithmParams:
    p: Fraction
    mode: str = COVER
    delta: Optional[Fraction] = None
    stop_rule: str = STANDARD
    K: Optional[Fraction] = None
    relaxed: bool = False  # cover mode: accept p <= 1/(4r), where the per-round guarantees still hold

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if self.delta is not None:
            object.__setattr__(self, "delta", Fraction(self.delta))
        if self.K is not None:
            object.__setattr__(self, "K", Fraction(self.K))
        if self.mode not in (COVER, HARDCORE, INTERPOLATING):
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.stop_rule not in (STANDARD, LOGR):
            raise ParameterError(f"unknown stop rule {self.stop_rule!r}")

    @classmethod
    def cover(cls, p, stop_rule: str = STANDARD, K=None, relaxed: bool = False) -> "AlgorithmParams":
        return cls(p=p, mode=COVER, stop_rule=stop_rule, K=K, relaxed=relaxed)

    @classmethod
    def hardcore(cls, p, delta) -> "AlgorithmParams":
        return cls(p=p, mode=HARDCORE, delta=delta)

    @classmethod
    def interpolating(cls, p, delta) -> "AlgorithmParams":
        return cls(p=p, mode=INTERPOLATING, delta=delta)

    def validate(self, H: Hypergraph) -> None:
        p = self.p
        if self.mode == COVER:
            if not H.is_uniform:
                raise ParameterError("cover mode needs a uniform hypergraph")
            r = max(H.r, 1)
            cap = Fraction(1, 4 * r) if self.relaxed else Fraction(1, 8 * r * r)
            if not 0 < p <= cap:
                raise ParameterError(f"p must satisfy 0 < p <= {cap} (r={r}), got {p}")
            if self.stop_rule == LOGR:
                if self.K is None or self.K < r:
                    raise ParameterError(f"the logr stop rule needs K >= r = {r}")
        else:
            if self.delta is None:
                raise ParameterError(f"{self.mode} mode needs delta")
            if not 0 < p <= self.delta < 1:
                raise ParameterError(f"need 0 < p <= delta < 1, got p={p}, delta={self.delta}")
            if self.stop_rule != STANDARD:
                raise ParameterError("stop rules other than 'standard' only apply to cover mode")


@dataclass(frozen=True)
class TraceStep:
    round: int
    chosen: int
    s: Optional[int]
    branch: str
    fingerprint_size_after: int

    def to_dict(self) -> dict:
        out = {"round": self.round, "chosen": list(members(self.chosen)), "branch": self.branch,
               "fingerprint_size_after": self.fingerprint_size_after}
        if self.s is not None:
            out["s"] = self.s
        return out


@dataclass(frozen=True)
class ContainerOutput:
    S: int
    C: int
    G: Optional[Hypergraph]
    trace: tuple[TraceStep, ...]

    @property
    def rounds(self) -> int:
        return len(self.trace)

    def same_container(self, other: "ContainerOutput") -> bool:
        return self.C == other.C and self.G == other.G


@dataclass(frozen=True)
class Query:
    chosen: int
    s: Optional[int] = None


class Observer(Protocol):
    def start(self, builder, state, group: list[int]) -> None: ...

    def before(self, builder, state, query: Query, inside: bool, F: frozenset[int], group: list[int]) -> None: ...

    def after(self, builder, state, query: Query, inside: bool, F: frozenset[int], removed: frozenset[int],
              group: list[int]) -> None: ...

    def finish(self, builder, state, output: ContainerOutput, group: list[int]) -> None: ...


# ---------------------------------------------------------------------------
# cover mode


class CoverState:
    """Mutable working hypergraph for cover mode, with per-slice link counts.

    ``deg[s][T]`` is the number of size-``s`` edges strictly containing the
    nonempty set ``T``; these are the only sets with a nonzero link weight.
    """

    __slots__ = ("n", "by_size", "all_edges", "incidence", "deg", "blocked", "S")

    def __init__(self, n: int, edges: Iterable[int] = (), S: int = 0):
        self.n = n
        self.by_size: dict[int, set[int]] = {}
        self.all_edges: set[int] = set()
        self.incidence: dict[int, set[int]] = {}
        self.deg: dict[int, dict[int, int]] = {}
        self.blocked = 0
        self.S = S
        for e in edges:
            self.add(e)

    def copy(self) -> "CoverState":
        new = CoverState.__new__(CoverState)
        new.n = self.n
        new.by_size = {k: v.copy() for k, v in self.by_size.items()}
        new.all_edges = self.all_edges.copy()
        new.incidence = {k: v.copy() for k, v in self.incidence.items()}
        new.deg = {k: v.copy() for k, v in self.deg.items()}
        new.blocked = self.blocked
        new.S = self.S
        return new

    def add(self, e: int) -> None:
        if e in self.all_edges:
            return
        k = e.bit_count()
        self.by_size.setdefault(k, set()).add(e)
        self.all_edges.add(e)
        for v in members(e):
            self.incidence.setdefault(v, set()).add(e)
        if k == 1:
            self.blocked |= e
        else:
            d = self.deg.setdefault(k, {})
            for t in submasks(e, proper=True, nonempty=True):
                d[t] = d.get(t, 0) + 1

    def remove(self, e: int) -> None:
        k = e.bit_count()
        self.by_size[k].discard(e)
        self.all_edges.discard(e)
        for v in members(e):
            self.incidence[v].discard(e)
        if k == 1:
            self.blocked &= ~e
        else:
            d = self.deg[k]
            for t in submasks(e, proper=True, nonempty=True):
                c = d[t] - 1
                if c:
                    d[t] = c
                else:
                    del d[t]

    def supersets(self, F: int) -> set[int]:
        best = None
        for v in members(F):
            inc = self.incidence.get(v)
            if not inc:
                return set()
            if best is None or len(inc) < len(best):
                best = inc
        if best is None:
            return set()
        return {e for e in best if e & F == F}

    def hypergraph(self) -> Hypergraph:
        return Hypergraph.from_masks(self.n, self.all_edges)

    def size_count(self, s: int) -> int:
        return len(self.by_size.get(s, ()))


class CoverBuilder:
    mode = COVER

    def __init__(self, H: Hypergraph, params: AlgorithmParams):
        params.validate(H)
        self.H = H
        self.params = params
        self.p = params.p
        self.r = max(H.r, 1)
        self.n = H.n
        self.threshold = Fraction(1, 4 * self.r)
        # count needed by a link with ``missing`` vertices to reach the threshold
        self._need = {m: ceil(self.threshold / self.p**m) for m in range(1, self.r + 1)}
        self._log_r = log_bounds(Fraction(self.r))[0] if self.r > 1 else Fraction(0)

    def start(self) -> CoverState:
        return CoverState(self.n, self.H.edges)

    def unblocked(self, state: CoverState) -> int:
        return full_set(self.n) & ~state.blocked

    def upper_weight(self, state: CoverState) -> Fraction:
        """p-weight of the edges of size at least two."""
        return sum((len(es) * self.p**s for s, es in state.by_size.items() if s >= 2), Fraction(0))

    def should_stop(self, state: CoverState) -> bool:
        w = self.upper_weight(state)
        c = (full_set(self.n) & ~state.blocked).bit_count()
        if self.params.stop_rule == STANDARD:
            return w <= self.p * c
        if w <= self._log_r / self.r * self.p * c:
            return True
        return c <= (1 - 1 / (2 * self.params.K)) * self.n

    def heavy_sets(self, state: CoverState, s: int) -> list[int]:
        d = state.deg.get(s)
        if not d:
            return []
        need = self._need
        return [t for t, c in d.items() if c >= need[s - t.bit_count()] and t not in state.all_edges]

    def choose(self, state: CoverState) -> Optional[Query]:
        for s in range(2, self.r + 1):
            witnesses = self.heavy_sets(state, s)
            if witnesses:
                seed = min(witnesses, key=set_key)
                above = [t for t in witnesses if t & seed == seed]
                best = min(above, key=lambda t: (-t.bit_count(), members(t)))
                return Query(best, s)
        return None

    def select(self, state: CoverState) -> Optional[Query]:
        if self.should_stop(state):
            return None
        q = self.choose(state)
        if q is None:
            raise AlgorithmError("stop test failed but no heavy link exists")
        return q

    def plan(self, state: CoverState, q: Query, inside: bool) -> frozenset[int]:
        if not inside:
            return frozenset((q.chosen,))
        L = q.chosen
        return frozenset(e & ~L for e in state.supersets(L) if e.bit_count() == q.s)

    def _kept_cost(self, state: CoverState, F: frozenset[int]) -> Optional[int]:
        if any(f.bit_count() != 1 for f in F):
            return None
        U = 0
        for f in F:
            U |= f
        return sum(len(inc) for v, inc in state.incidence.items() if not U >> v & 1)

    def advance(self, state: CoverState, q: Query, inside: bool, F: frozenset[int],
                fork: bool) -> tuple[CoverState, frozenset[int]]:
        new_S = state.S | q.chosen if inside else state.S
        removal_cost = sum(min((len(state.incidence.get(v, ())) for v in members(f)), default=0) for f in F)
        kept_cost = self._kept_cost(state, F)
        if kept_cost is not None and kept_cost < removal_cost:
            U = 0
            for f in F:
                U |= f
            kept = set()
            for v, inc in state.incidence.items():
                if not U >> v & 1:
                    kept.update(e for e in inc if not e & U)
            removed = frozenset()  # not materialized on this path
            new = CoverState(self.n, kept, new_S)
            for f in F:
                new.add(f)
            return new, removed
        removed = set()
        for f in F:
            removed |= state.supersets(f)
        if 2 * len(removed) > len(state.all_edges):
            kept = state.all_edges - removed
            new = CoverState(self.n, kept, new_S)
        else:
            new = state.copy() if fork else state
            for e in removed:
                new.remove(e)
            new.S = new_S
        for f in F:
            new.add(f)
        return new, frozenset(removed)

    def finish(self, state: CoverState) -> tuple[int, Hypergraph]:
        C = full_set(self.n) & ~state.blocked
        G = Hypergraph.from_masks(self.n, (e for e in state.all_edges if e.bit_count() >= 2))
        return C, G

    def max_rounds(self) -> int:
        return 3**self.n


# ---------------------------------------------------------------------------
# hard-core and interpolating modes


class TableState:
    """Working hypergraph plus (when small enough) its independence table."""

    __slots__ = ("n", "edges", "blocked", "S", "table")

    def __init__(self, n: int, edges: set[int], S: int, table: Optional[IndependenceTable]):
        self.n = n
        self.edges = edges
        self.blocked = 0
        for e in edges:
            if e.bit_count() == 1:
                self.blocked |= e
        self.S = S
        self.table = table

    def copy(self) -> "TableState":
        new = TableState.__new__(TableState)
        new.n, new.edges, new.blocked, new.S = self.n, set(self.edges), self.blocked, self.S
        new.table = self.table.copy() if self.table is not None else None
        return new

    def hypergraph(self) -> Hypergraph:
        return Hypergraph.from_masks(self.n, self.edges)


class _TableBuilder:
    mode = ""
    table_limit = 20

    def __init__(self, H: Hypergraph, params: AlgorithmParams):
        params.validate(H)
        self.H = H
        self.params = params
        self.p = params.p
        self.delta = params.delta
        self.n = H.n
        self.ratio = (1 - self.delta) * self.p  # per-vertex marginal threshold
        self.use_table = self.n <= self.table_limit

    def start(self) -> TableState:
        table = IndependenceTable.from_hypergraph(self.H, self.p) if self.use_table else None
        return TableState(self.n, set(self.H.edges), 0, table)

    def unblocked(self, state: TableState) -> int:
        return full_set(self.n) & ~state.blocked

    def _fork(self, state: TableState, fork: bool) -> TableState:
        return state.copy() if fork else state


class HardcoreBuilder(_TableBuilder):
    mode = HARDCORE

    def marginal_test(self, state: TableState) -> list[bool]:
        """For every vertex, whether its occupancy marginal is below (1-delta)p."""
        c, d = self.ratio.numerator, self.ratio.denominator
        if state.table is not None:
            total = state.table.total()
            masses = state.table.vertex_masses()
            return [m * d < c * total for m in masses]
        H = state.hypergraph()
        return [conditional_subset_prob(H, self.p, 1 << v) < self.ratio for v in range(self.n)]

    def select(self, state: TableState) -> Optional[Query]:
        candidates = full_set(self.n) & ~state.S & ~state.blocked
        if not candidates:
            return None
        low = self.marginal_test(state)
        for v in members(candidates):
            if low[v]:
                return Query(1 << v)
        return None

    def plan(self, state: TableState, q: Query, inside: bool) -> frozenset[int]:
        v = q.chosen
        if inside:
            return frozenset(e & ~v for e in state.edges if e & v and e != v)
        return frozenset((v,))

    def advance(self, state: TableState, q: Query, inside: bool, F: frozenset[int],
                fork: bool) -> tuple[TableState, frozenset[int]]:
        new = self._fork(state, fork)
        for f in F:
            new.edges.add(f)
            if f.bit_count() == 1:
                new.blocked |= f
        if inside:
            new.S |= q.chosen
            if new.table is not None:
                new.table.force(q.chosen)
        elif new.table is not None:
            new.table.forbid(q.chosen)
        return new, frozenset()

    def finish(self, state: TableState) -> tuple[int, None]:
        return full_set(self.n) & ~state.blocked, None

    def max_rounds(self) -> int:
        return self.n


class InterpolatingBuilder(_TableBuilder):
    mode = INTERPOLATING

    def __init__(self, H: Hypergraph, params: AlgorithmParams, guard: int = INTERPOLATING_GUARD):
        super().__init__(H, params)
        if self.n > guard:
            raise GuardExceeded(f"interpolating search over {self.n} vertices exceeds the guard of {guard}")
        if not self.use_table:
            raise GuardExceeded("interpolating mode needs the dense independence table")

    def select(self, state: TableState) -> Optional[Query]:
        table = state.table
        total = table.total()
        f = table.superset_masses()
        c, d = self.ratio.numerator, self.ratio.denominator
        # float prefilter with a generous margin, then exact confirmation in canonical order
        pop = _popcounts(self.n)
        approx = f.astype(np.float64) / float(total)
        thresholds = np.array([float(self.ratio) ** k for k in range(self.n + 1)])
        masks = np.arange(1 << self.n, dtype=np.int64)
        mask = table.indep & ((masks & state.S) == 0) & (pop > 0)
        mask &= approx < thresholds[pop] * (1 + 1e-9)
        candidates = sorted((int(L) for L in np.flatnonzero(mask)), key=set_key)
        for L in candidates:
            k = L.bit_count()
            if int(f[L]) * d**k < c**k * total:
                return Query(L)
        return None

    def plan(self, state: TableState, q: Query, inside: bool) -> frozenset[int]:
        if inside:
            return frozenset(e & ~q.chosen for e in state.edges)
        return frozenset((q.chosen,))

    def advance(self, state: TableState, q: Query, inside: bool, F: frozenset[int],
                fork: bool) -> tuple[TableState, frozenset[int]]:
        new = self._fork(state, fork)
        if inside:
            if 0 in F:
                raise AlgorithmError("strip-link produced an empty edge")
            new.edges = set(F)
            new.blocked = 0
            for e in F:
                if e.bit_count() == 1:
                    new.blocked |= e
            new.S |= q.chosen
            if new.table is not None:
                new.table.force(q.chosen)
        else:
            new.edges.add(q.chosen)
            if q.chosen.bit_count() == 1:
                new.blocked |= q.chosen
            if new.table is not None:
                new.table.forbid(q.chosen)
        return new, frozenset()

    def finish(self, state: TableState) -> tuple[int, Hypergraph]:
        C = full_set(self.n) & ~state.blocked
        return C, restrict(state.hypergraph(), C)

    def max_rounds(self) -> int:
        return 1 << self.n


def make_builder(H: Hypergraph, params: AlgorithmParams):
    if params.mode == COVER:
        return CoverBuilder(H, params)
    if params.mode == HARDCORE:
        return HardcoreBuilder(H, params)
    return InterpolatingBuilder(H, params)


# ---------------------------------------------------------------------------
# decision-tree driver


def explore(builder, inputs: Iterable[int], *, observer: Optional[Observer] = None,
            time_limit: Optional[float] = None) -> dict[int, ContainerOutput]:
    """Run ``builder`` on every input set, sharing work between inputs.

    Returns the output for each input.  Inputs are not checked for
    independence here; the public entry points do that.
    """
    group0 = sorted(set(inputs))
    deadline = None if time_limit is None else time.monotonic() + time_limit
    limit = builder.max_rounds()
    results: dict[int, ContainerOutput] = {}
    state0 = builder.start()
    if observer is not None:
        observer.start(builder, state0, group0)
    stack = [(state0, [], group0)]
    while stack:
        state, trace, group = stack.pop()
        while True:
            q = builder.select(state)
            if q is None:
                break
            rnd = len(trace)
            if rnd >= limit:
                raise AlgorithmError(f"{builder.mode} run exceeded {limit} rounds")
            if deadline is not None and time.monotonic() > deadline:
                raise WatchdogError(f"time limit of {time_limit}s exceeded after {rnd} rounds")
            inside = [I for I in group if q.chosen & ~I == 0]
            outside = [I for I in group if q.chosen & ~I]
            if inside and outside:
                F_in = builder.plan(state, q, True)
                if observer is not None:
                    observer.before(builder, state, q, True, F_in, inside)
                forked, removed = builder.advance(state, q, True, F_in, fork=True)
                if observer is not None:
                    observer.after(builder, forked, q, True, F_in, removed, inside)
                step = TraceStep(rnd, q.chosen, q.s, INSIDE, forked.S.bit_count())
                stack.append((forked, trace + [step], inside))
                group = outside
            go_in = bool(inside) and not outside
            F = builder.plan(state, q, go_in)
            if observer is not None:
                observer.before(builder, state, q, go_in, F, group)
            state, removed = builder.advance(state, q, go_in, F, fork=False)
            if observer is not None:
                observer.after(builder, state, q, go_in, F, removed, group)
            trace.append(TraceStep(rnd, q.chosen, q.s, INSIDE if go_in else OUTSIDE, state.S.bit_count()))
        C, G = builder.finish(state)
        out = ContainerOutput(state.S, C, G, tuple(trace))
        if observer is not None:
            observer.finish(builder, state, out, group)
        for I in group:
            results[I] = out
    return results


def _single(H: Hypergraph, params: AlgorithmParams, I: int, mode: str, observer=None) -> ContainerOutput:
    if params.mode != mode:
        params = AlgorithmParams(params.p, mode, params.delta, params.stop_rule, params.K, params.relaxed)
    if I & ~H.vertices:
        raise ValueError(f"input set {members(I)} has vertices outside the hypergraph")
    if not is_independent(H, I):
        raise ValueError(f"input set {members(I)} is not independent")
    builder = make_builder(H, params)
    return explore(builder, [I], observer=observer)[I]


# ---------------------------------------------------------------------------
# public single-step and single-run entry points


def select_cover_branch(H_i: Hypergraph, p, r: Optional[int] = None) -> Optional[tuple[int, int]]:
    """``(s, L)`` with the smallest heavy slice ``s`` and the canonical maximal heavy ``L``."""
    r = r if r is not None else max(H_i.r, 1)
    builder = CoverBuilder.__new__(CoverBuilder)
    builder.p = Fraction(p)
    builder.r = r
    builder.threshold = Fraction(1, 4 * r)
    builder._need = {m: ceil(builder.threshold / builder.p**m) for m in range(1, r + 1)}
    q = builder.choose(CoverState(H_i.n, H_i.edges))
    return None if q is None else (q.s, q.chosen)


def build_cover_container(H: Hypergraph, params: AlgorithmParams, I: int, observer=None) -> ContainerOutput:
    return _single(H, params, I, COVER, observer)


def select_hardcore_vertex(H_i: Hypergraph, p, delta, S_i: int = 0) -> Optional[int]:
    params = AlgorithmParams.hardcore(p, delta)
    builder = HardcoreBuilder(H_i, params)
    state = builder.start()
    state.S = S_i
    q = builder.select(state)
    return None if q is None else q.chosen.bit_length() - 1


def build_hardcore_container(H: Hypergraph, params: AlgorithmParams, I: int, observer=None) -> ContainerOutput:
    return _single(H, params, I, HARDCORE, observer)


def select_interpolating_set(H_i: Hypergraph, p, delta, S_i: int = 0) -> Optional[int]:
    params = AlgorithmParams.interpolating(p, delta)
    builder = InterpolatingBuilder(H_i, params)
    state = builder.start()
    state.S = S_i
    q = builder.select(state)
    return None if q is None else q.chosen


def build_interpolating_container(H: Hypergraph, params: AlgorithmParams, I: int,
                                  observer=None) -> ContainerOutput:
    return _single(H, params, I, INTERPOLATING, observer)


# ---------------------------------------------------------------------------
# families


@dataclass
class ContainerFamily:
    """Fingerprints, containers and covers realized over a set of inputs."""

    params: AlgorithmParams
    outputs: dict[int, ContainerOutput]  # fingerprint -> output
    assignment: dict[int, int] = field(default_factory=dict)  # input -> fingerprint

    @property
    def fingerprints(self) -> list[int]:
        return sorted(self.outputs, key=set_key)

    def entries(self) -> list[tuple[int, int, Optional[Hypergraph]]]:
        return [(S, self.outputs[S].C, self.outputs[S].G) for S in self.fingerprints]

    def __len__(self) -> int:
        return len(self.outputs)


def build_family(H: Hypergraph, params: AlgorithmParams, inputs: Optional[Iterable[int]] = None, *,
                 observer: Optional[Observer] = None, guard: Optional[int] = None,
                 time_limit: Optional[float] = None) -> ContainerFamily:
    """Run the algorithm on every independent set (or on ``inputs``) and group by fingerprint.

    Raises :class:`DeterminismError` if two inputs with the same fingerprint
    get different containers, or if rerunning on a fingerprint does not
    reproduce its container.
    """
    if inputs is None:
        group = list(independent_sets(H, guard=guard))
    else:
        group = sorted(set(inputs))
        for I in group:
            if not is_independent(H, I):
                raise ValueError(f"input set {members(I)} is not independent")
    builder = make_builder(H, params)
    results = explore(builder, group, observer=observer, time_limit=time_limit)
    outputs: dict[int, ContainerOutput] = {}
    assignment: dict[int, int] = {}
    for I, out in results.items():
        assignment[I] = out.S
        prev = outputs.get(out.S)
        if prev is None:
            outputs[out.S] = out
        elif not prev.same_container(out):
            raise DeterminismError(f"fingerprint {members(out.S)} maps to two different containers")
    missing = [S for S in outputs if S not in results]
    if missing:
        results.update(explore(make_builder(H, params), missing, time_limit=time_limit))
    for S, out in outputs.items():
        again = results[S]
        if again.S != S or not again.same_container(out):
            raise DeterminismError(f"rerunning on fingerprint {members(S)} did not reproduce its container")
    return ContainerFamily(params, outputs, assignment)
