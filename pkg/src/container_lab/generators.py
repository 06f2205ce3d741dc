"""Instance generators for the classic container applications."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

from .hypergraph import Hypergraph, members, set_key, unblocked_vertices, vset

__all__ = [
    "gen_random_uniform",
    "gen_triangles",
    "gen_aps",
    "gen_complete_graph",
    "gen_star",
    "gen_matching",
    "gen_decreasing_family_instance",
    "gen_power_set_instance",
    "gen_random_mixed",
    "pair_index",
    "random_independent_sets",
]


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"{tag}:{seed}")


def gen_random_uniform(n: int, r: int, m: int, seed: int) -> Hypergraph:
    """``m`` distinct ``r``-subsets of ``0..n-1`` drawn without replacement."""
    if r < 1 or r > n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    total = math.comb(n, r)
    if not 0 <= m <= total:
        raise ValueError(f"cannot draw {m} distinct {r}-sets from {n} vertices (max {total})")
    rng = _rng(seed, f"uniform:{n}:{r}:{m}")
    if m * 3 > total:
        pool = list(combinations(range(n), r))
        chosen = rng.sample(pool, m)
        return Hypergraph(n, chosen)
    picked: set[int] = set()
    while len(picked) < m:
        picked.add(vset(rng.sample(range(n), r)))
    return Hypergraph.from_masks(n, picked)


def pair_index(a: int, b: int, n: int) -> int:
    """Index of the edge ``ab`` (``a < b``) of K_n in the canonical pair order."""
    if not 0 <= a < b < n:
        raise ValueError(f"need 0 <= a < b < n, got ({a}, {b}) with n={n}")
    return a * n - a * (a + 1) // 2 + (b - a - 1)


def gen_triangles(n: int) -> Hypergraph:
    """Triangles of K_n as a 3-uniform hypergraph on the C(n, 2) edges of K_n."""
    if n < 3:
        raise ValueError("need n >= 3")
    edges = []
    for a, b, c in combinations(range(n), 3):
        edges.append((1 << pair_index(a, b, n)) | (1 << pair_index(a, c, n)) | (1 << pair_index(b, c, n)))
    return Hypergraph.from_masks(math.comb(n, 2), edges)


def gen_aps(n: int, k: int) -> Hypergraph:
    """k-term arithmetic progressions in ``0..n-1``."""
    if k < 3 or n < k:
        raise ValueError(f"need k >= 3 and n >= k, got n={n}, k={k}")
    edges = []
    for d in range(1, (n - 1) // (k - 1) + 1):
        for a in range(n - (k - 1) * d):
            edges.append(vset(range(a, a + k * d, d)))
    return Hypergraph.from_masks(n, edges)


def gen_complete_graph(n: int) -> Hypergraph:
    return Hypergraph.from_masks(n, ((1 << a) | (1 << b) for a, b in combinations(range(n), 2)))


def gen_star(leaves: int) -> Hypergraph:
    """Centre 0 joined to each of ``1..leaves``."""
    return Hypergraph.from_masks(leaves + 1, (1 | (1 << v) for v in range(1, leaves + 1)))


def gen_matching(pairs: int) -> Hypergraph:
    return Hypergraph.from_masks(2 * pairs, ((3 << (2 * i)) for i in range(pairs)))


def gen_decreasing_family_instance(n: int, density, seed: int) -> Hypergraph:
    """Random hypergraph whose independent sets serve as a decreasing family.

    About ``density * 2n`` edges are drawn, with sizes 1, 2 or 3 (weighted
    towards pairs); ``density = 0`` gives the edgeless hypergraph, whose
    family is the whole power set.
    """
    density = Fraction(density)
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = _rng(seed, f"decreasing:{n}:{density}")
    m = round(density * 2 * n)
    edges = set()
    for _ in range(m):
        s = min(n, rng.choices((1, 2, 3), weights=(1, 4, 2))[0])
        edges.add(vset(rng.sample(range(n), s)))
    return Hypergraph.from_masks(n, edges)


def gen_power_set_instance(n: int, U: int) -> Hypergraph:
    """Singletons outside ``U``: its independent sets are exactly the subsets of ``U``."""
    return Hypergraph.from_masks(n, (1 << v for v in range(n) if not U >> v & 1))


def gen_random_mixed(n: int, m: int, max_size: int, seed: int) -> Hypergraph:
    """``m`` random edges (sizes ``1..max_size``), not necessarily uniform."""
    rng = _rng(seed, f"mixed:{n}:{m}:{max_size}")
    edges = set()
    attempts = 0
    while len(edges) < m and attempts < 50 * (m + 1):
        attempts += 1
        s = rng.randint(1, min(max_size, n))
        edges.add(vset(rng.sample(range(n), s)))
    return Hypergraph.from_masks(n, edges)


def random_independent_sets(H: Hypergraph, count: int, seed: int) -> list[int]:
    """``count`` distinct seeded independent sets, always including the empty set.

    Each is a random greedy maximal independent set built over a randomly
    thinned vertex order.  Fewer sets are returned when the hypergraph has
    fewer independent sets than requested (or they prove hard to hit).
    """
    rng = _rng(seed, "independent")
    out = {0}
    incident: list[list[int]] = [[] for _ in range(H.n)]
    for e in H.edges:
        for v in members(e):
            incident[v].append(e)
    order = list(range(H.n))
    stale = 0
    while len(out) < count and stale < 20 * count:
        rng.shuffle(order)
        keep = rng.random()
        current = 0
        blocked = H.vertices & ~unblocked_vertices(H)
        for v in order:
            if blocked >> v & 1 or rng.random() >= keep:
                continue
            current |= 1 << v
            for e in incident[v]:
                rest = e & ~current
                if rest and rest & (rest - 1) == 0:
                    blocked |= rest  # adding that vertex would complete e
        if current in out:
            stale += 1
        else:
            out.add(current)
            stale = 0
    return sorted(out, key=set_key)
