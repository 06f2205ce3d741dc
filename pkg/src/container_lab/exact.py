"""Exact hard-core model computations on small hypergraphs.

Three routes are provided and cross-checked in the test-suite:

* :func:`independent_sets` - brute-force enumeration, the oracle;
* :func:`partition_function` - branch-and-reduce recursion over Fractions;
* :class:`IndependenceTable` - a dense table over all ``2^n`` vertex subsets,
  used by the container algorithms that need many conditional marginals
  of the same hypergraph.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Optional

import numpy as np

from .hypergraph import Hypergraph, is_independent, members, set_key, vset

__all__ = [
    "GuardExceeded",
    "PartitionEvaluation",
    "McEstimate",
    "guard_n",
    "independent_sets",
    "independent_sets_direct",
    "partition_function",
    "prob_independent",
    "conditional_subset_prob",
    "conditional_expected_size",
    "mc_prob_independent",
    "IndependenceTable",
]

GUARD_ENV = "CONTAINER_LAB_GUARD_N"
DEFAULT_GUARD = 24


class GuardExceeded(ValueError):
    """An exact computation was asked for on an instance above the size guard."""


def guard_n(default: int = DEFAULT_GUARD) -> int:
    value = os.environ.get(GUARD_ENV)
    return int(value) if value else default


def _check_guard(n: int, guard: Optional[int], default: int = DEFAULT_GUARD) -> None:
    limit = guard if guard is not None else guard_n(default)
    if n > limit:
        raise GuardExceeded(f"{n} vertices exceeds the exact-engine guard of {limit} (set {GUARD_ENV} to override)")


@dataclass(frozen=True)
class PartitionEvaluation:
    z: Fraction
    n: int
    lam: Fraction


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    samples: int
    seed: int
    half_width: float

    @property
    def std_error(self) -> float:
        return self.half_width / 1.96


def independent_sets(H: Hypergraph, guard: Optional[int] = None) -> Iterator[int]:
    """Every independent set of ``H`` in (size, lex) order, by exhaustive search.

    Up to the dense-table limit the search runs over a vectorized
    independence indicator; beyond it, a backtracking search extends sets
    in increasing vertex order and prunes as soon as an edge is completed.
    """
    _check_guard(H.n, guard)
    if H.n <= IndependenceTable.TABLE_LIMIT:
        indep = independence_indicator(H)
        yield 0
        for mask in canonical_masks(H.n):
            if indep[mask]:
                yield mask
        return
    yield from sorted(_backtrack(H), key=set_key)


def _backtrack(H: Hypergraph) -> list[int]:
    # edges indexed by their largest vertex, minus that vertex; pair edges fold into one mask
    loops = 0
    pairs = [0] * H.n
    rests: list[list[int]] = [[] for _ in range(H.n)]
    for e in H.edges:
        v = e.bit_length() - 1
        rest = e & ~(1 << v)
        if not rest:
            loops |= 1 << v
        elif rest & (rest - 1) == 0:
            pairs[v] |= rest
        else:
            rests[v].append(rest)
    out = [0]
    stack = [(0, 0)]  # (set, next vertex to try)
    while stack:
        cur, start = stack.pop()
        for v in range(start, H.n):
            if loops >> v & 1 or cur & pairs[v] or any(r & ~cur == 0 for r in rests[v]):
                continue
            ext = cur | 1 << v
            out.append(ext)
            stack.append((ext, v + 1))
    return out


def independent_sets_direct(H: Hypergraph) -> Iterator[int]:
    """Subset-by-subset enumeration with :func:`is_independent`; the slow oracle."""
    for k in range(H.n + 1):
        for combo in combinations(range(H.n), k):
            mask = vset(combo)
            if is_independent(H, mask):
                yield mask


def _components(edges: frozenset[int]) -> list[frozenset[int]]:
    groups: list[tuple[int, list[int]]] = []
    for e in edges:
        hit = [g for g in groups if g[0] & e]
        if not hit:
            groups.append((e, [e]))
            continue
        span, bucket = e, [e]
        for g in hit:
            groups.remove(g)
            span |= g[0]
            bucket.extend(g[1])
        groups.append((span, bucket))
    return [frozenset(b) for _, b in groups]


def _minimal(edges) -> frozenset[int]:
    kept: list[int] = []
    for e in sorted(edges, key=int.bit_count):
        if not any(k & e == k for k in kept):
            kept.append(e)
    return frozenset(kept)


def _z_recursive(edges: frozenset[int], lam: Fraction) -> Fraction:
    """Partition function over the vertices spanned by ``edges``."""

    @lru_cache(maxsize=None)
    def z(es: frozenset[int]) -> Fraction:
        if not es:
            return Fraction(1)
        if 0 in es:
            return Fraction(0)
        span = 0
        for e in es:
            span |= e
        parts = _components(es)
        if len(parts) > 1:
            out = Fraction(1)
            for part in parts:
                out *= z(part)
                if not out:
                    break
            return out
        v = span & -span  # lowest vertex present in some edge
        without = frozenset(e for e in es if not e & v)
        with_v = [e & ~v if e & v else e for e in es]
        if 0 in with_v:
            inside = Fraction(0)
        else:
            reduced = _minimal(with_v)
            inside = lam * _free_factor(span & ~v, reduced, lam) * z(reduced)
        outside = _free_factor(span & ~v, without, lam) * z(without)
        return outside + inside

    return z(_minimal(edges))


def _z_over(ground: int, edges, lam: Fraction) -> Fraction:
    """Partition function over ``ground``; free vertices are counted after minimizing."""
    es = _minimal(edges)
    return _free_factor(ground, es, lam) * _z_recursive(es, lam)


def _free_factor(ground: int, edges, lam: Fraction) -> Fraction:
    span = 0
    for e in edges:
        span |= e
    return (1 + lam) ** (ground & ~span).bit_count()


def partition_function(H: Hypergraph, lam, *, ground: Optional[int] = None,
                       guard: Optional[int] = None) -> PartitionEvaluation:
    """Z = sum over independent I of lam^|I|, with I ranging over subsets of ``ground``."""
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError(f"activity {lam} is negative")
    ground = H.vertices if ground is None else ground
    n = ground.bit_count()
    _check_guard(n, guard)
    edges = frozenset(e for e in H.edges if e & ~ground == 0)
    if 0 in edges:
        return PartitionEvaluation(Fraction(0), n, lam)
    z = _z_over(ground, edges, lam)
    return PartitionEvaluation(z, n, lam)


def _check_p(p: Fraction, *, open_left: bool) -> Fraction:
    p = Fraction(p)
    if open_left and not 0 < p < 1:
        raise ValueError(f"p={p} must lie in (0, 1)")
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} must lie in [0, 1]")
    return p


def prob_independent(H: Hypergraph, p, *, ground: Optional[int] = None,
                     guard: Optional[int] = None) -> Fraction:
    """Pr(ground_p is independent in H), exactly."""
    p = _check_p(p, open_left=False)
    ground = H.vertices if ground is None else ground
    if H.has_empty_edge:
        return Fraction(0)
    if p == 1:
        if any(e & ~ground == 0 for e in H.edges):
            raise ValueError("p = 1 is undefined for a hypergraph with edges inside the ground set")
        return Fraction(1)
    pf = partition_function(H, p / (1 - p), ground=ground, guard=guard)
    return (1 - p) ** pf.n * pf.z


def conditional_subset_prob(H: Hypergraph, p, L: int, *, ground: Optional[int] = None,
                            guard: Optional[int] = None) -> Fraction:
    """Pr(L is inside ground_p | ground_p is independent in H)."""
    p = _check_p(p, open_left=True)
    ground = H.vertices if ground is None else ground
    if L & ~ground:
        raise ValueError(f"{members(L)} is not inside the ground set")
    if H.has_empty_edge:
        raise ValueError("conditioning on an impossible event: H has an empty edge")
    lam = p / (1 - p)
    z = partition_function(H, lam, ground=ground, guard=guard).z
    if not is_independent(H, L):
        return Fraction(0)
    forced = frozenset(e & ~L for e in H.edges if e & ~ground == 0)
    rest = ground & ~L
    z_forced = _z_over(rest, forced, lam)
    return lam ** L.bit_count() * z_forced / z


def conditional_expected_size(H: Hypergraph, p, *, ground: Optional[int] = None,
                              guard: Optional[int] = None) -> Fraction:
    """E[|ground_p| | ground_p independent in H]."""
    p = _check_p(p, open_left=True)
    ground = H.vertices if ground is None else ground
    if H.has_empty_edge:
        raise ValueError("conditioning on an impossible event: H has an empty edge")
    lam = p / (1 - p)
    z = partition_function(H, lam, ground=ground, guard=guard).z
    edges = [e for e in H.edges if e & ~ground == 0]
    total = Fraction(0)
    for v in members(ground):
        bit = 1 << v
        if bit in H:
            continue
        forced = frozenset(e & ~bit for e in edges)
        total += _z_over(ground & ~bit, forced, lam)
    return lam * total / z


_MC_BLOCK = 4096


def mc_prob_independent(H: Hypergraph, p, samples: int, seed: int) -> McEstimate:
    """Monte Carlo estimate of Pr(V_p independent).

    Samples are drawn in fixed blocks; block ``b`` uses a Philox stream keyed
    by ``seed`` with counter offset ``b``, so the result does not depend on
    evaluation order.
    """
    p = _check_p(p, open_left=False)
    if samples < 1:
        raise ValueError("need at least one sample")
    seed &= (1 << 64) - 1
    edges = H.edges
    if not edges:
        return McEstimate(1.0, samples, seed, 0.0)
    pf = float(p)
    hits = 0
    vertex_masks = [members(e) for e in edges]
    for block, start in enumerate(range(0, samples, _MC_BLOCK)):
        size = min(_MC_BLOCK, samples - start)
        bitgen = np.random.Philox(key=seed, counter=[0, 0, block, 0])
        draws = np.random.Generator(bitgen).random((size, H.n)) < pf
        bad = np.zeros(size, dtype=bool)
        for vs in vertex_masks:
            bad |= draws[:, list(vs)].all(axis=1)
        hits += int(size - bad.sum())
    est = hits / samples
    half = 1.96 * math.sqrt(max(est * (1 - est), 0.0) / samples)
    return McEstimate(est, samples, seed, half)


class IndependenceTable:
    """Independence indicator and hard-core masses for every subset of ``0..n-1``.

    ``mass[m]`` is proportional to Pr(V_p = m), namely ``a^|m| (b-a)^(n-|m|)``
    for ``p = a/b``, so every probability is a ratio of exact integers.
    """

    TABLE_LIMIT = 22

    def __init__(self, n: int, p, indep: np.ndarray):
        if n > self.TABLE_LIMIT:
            raise GuardExceeded(f"dense table over {n} vertices exceeds {self.TABLE_LIMIT}")
        self.n = n
        self.p = Fraction(p)
        self.indep = indep
        self._masses = _mass_vector(n, self.p.numerator, self.p.denominator)

    @classmethod
    def from_hypergraph(cls, H: Hypergraph, p) -> "IndependenceTable":
        return cls(H.n, p, independence_indicator(H))

    def copy(self) -> "IndependenceTable":
        return IndependenceTable(self.n, self.p, self.indep.copy())

    # transitions used by the container algorithms
    def force(self, L: int) -> None:
        """Restrict to sets I' with I' + L independent (adding the link/strip-link of L)."""
        idx = np.arange(1 << self.n, dtype=np.int64) | L
        self.indep = self.indep[idx]

    def forbid(self, L: int) -> None:
        """Add ``L`` as an edge."""
        idx = np.arange(1 << self.n, dtype=np.int64)
        self.indep = self.indep & ((idx & L) != L)

    def weighted(self) -> np.ndarray:
        return np.where(self.indep, self._masses, 0)

    def total(self) -> int:
        return int(self.weighted().sum())

    def vertex_masses(self) -> list[int]:
        w = self.weighted()
        out = []
        for v in range(self.n):
            out.append(int(w.reshape(-1, 2, 1 << v)[:, 1, :].sum()))
        return out

    def superset_masses(self) -> np.ndarray:
        """f[L] = total mass of independent sets containing L."""
        f = self.weighted().copy()
        for v in range(self.n):
            view = f.reshape(-1, 2, 1 << v)
            view[:, 0, :] += view[:, 1, :]
        return f


def independence_indicator(H: Hypergraph) -> np.ndarray:
    n = H.n
    if n > IndependenceTable.TABLE_LIMIT:
        raise GuardExceeded(f"dense table over {n} vertices exceeds {IndependenceTable.TABLE_LIMIT}")
    bad = np.zeros(1 << n, dtype=bool)
    if H.edges:
        bad[np.fromiter(H.edges, dtype=np.int64, count=len(H.edges))] = True
    for v in range(n):
        view = bad.reshape(-1, 2, 1 << v)
        view[:, 1, :] |= view[:, 0, :]
    return ~bad


@lru_cache(maxsize=16)
def _mass_vector(n: int, a: int, b: int) -> np.ndarray:
    pop = _popcounts(n)
    per_size = [a**k * (b - a) ** (n - k) for k in range(n + 1)]
    dtype = np.int64 if b**n < 2**62 else object
    table = np.array(per_size, dtype=dtype)
    out = table[pop]
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def _popcounts(n: int) -> np.ndarray:
    pop = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        pop.reshape(-1, 2, 1 << v)[:, 1, :] += 1
    pop.setflags(write=False)
    return pop


@lru_cache(maxsize=8)
def canonical_masks(n: int) -> tuple[int, ...]:
    """All nonempty subsets of ``0..n-1`` in (size, lex) order."""
    out = []
    for k in range(1, n + 1):
        out.extend(vset(c) for c in combinations(range(n), k))
    return tuple(out)
