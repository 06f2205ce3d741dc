"""Finite hypergraphs over dense vertex indices.

Vertex sets are plain Python ints used as bitmasks (bit ``v`` set means vertex
``v`` is a member), so arbitrarily many vertices are supported and subset tests
are single bitwise operations.  A :class:`Hypergraph` is an immutable set of
edges kept in canonical order: by size, then lexicographically by sorted
members.  Every "pick some set" decision elsewhere in the package resolves
through that order.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Set as AbstractSet
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

__all__ = [
    "Hypergraph",
    "vset",
    "members",
    "full_set",
    "set_key",
    "submasks",
    "weight",
    "link",
    "strip_link",
    "restrict",
    "size_slice",
    "covers",
    "minimal_elements",
    "is_antichain",
    "degree",
    "max_degree",
    "is_independent",
    "unblocked_vertices",
    "up_set_contains",
]


def vset(vertices: Iterable[int]) -> int:
    """Bitmask of an iterable of vertex indices."""
    mask = 0
    for v in vertices:
        if v < 0:
            raise ValueError(f"negative vertex index {v}")
        mask |= 1 << v
    return mask


def members(mask: int) -> tuple[int, ...]:
    """Sorted vertex indices of a bitmask."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def full_set(n: int) -> int:
    return (1 << n) - 1


def set_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Canonical (size, lexicographic) sort key of a vertex set."""
    m = members(mask)
    return (len(m), m)


def submasks(mask: int, proper: bool = False, nonempty: bool = False) -> Iterator[int]:
    """All submasks of ``mask`` (descending numeric order)."""
    sub = mask
    if proper:
        if mask == 0:
            return
        sub = (mask - 1) & mask
    while True:
        if sub or not nonempty:
            yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# Python hashes ints modulo 2**61 - 1, so masks over more vertices than that
# collide whenever they agree modulo 61 bit positions (K_1000 has ~500k edges
# but under 2k distinct hashes).  Wide edge sets are keyed by bytes instead.
_HASH_SAFE_BITS = 61


class _WideMaskSet(AbstractSet):
    """Read-only set of bitmasks over ``n > 61`` vertices with well-spread hashing."""

    __slots__ = ("_keys", "_masks", "_width")

    def __init__(self, masks: Iterable[int], n: int):
        self._width = (n + 7) // 8
        keys = {m.to_bytes(self._width, "little"): m for m in masks}
        self._keys = frozenset(keys)
        self._masks = tuple(keys.values())

    def __contains__(self, mask) -> bool:
        if not isinstance(mask, int) or mask < 0 or mask.bit_length() > 8 * self._width:
            return False
        return mask.to_bytes(self._width, "little") in self._keys

    def __iter__(self) -> Iterator[int]:
        return iter(self._masks)

    def __len__(self) -> int:
        return len(self._masks)


class Hypergraph:
    """An immutable hypergraph on vertices ``0..n-1``.

    Duplicate edges are merged.  Empty edges are rejected unless the
    hypergraph is produced by :func:`strip_link`, which flags them through
    :attr:`has_empty_edge`.
    """

    __slots__ = ("n", "edges", "_edge_set", "has_empty_edge")

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = (), *, _allow_empty: bool = False):
        self._init(n, (vset(e) for e in edges), _allow_empty)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int], *, _allow_empty: bool = False) -> "Hypergraph":
        obj = cls.__new__(cls)
        obj._init(n, masks, _allow_empty)
        return obj

    def _init(self, n: int, masks: Iterable[int], allow_empty: bool) -> None:
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        full = full_set(n)
        checked = []
        for m in masks:
            if m & ~full:
                raise ValueError(f"edge {members(m)} has a vertex outside 0..{n - 1}")
            if m == 0 and not allow_empty:
                raise ValueError("empty edges are not allowed")
            checked.append(m)
        self.n = n
        if n > _HASH_SAFE_BITS:
            self._edge_set = _WideMaskSet(checked, n)
        else:
            self._edge_set = frozenset(checked)
        self.edges: tuple[int, ...] = tuple(sorted(self._edge_set, key=set_key))
        self.has_empty_edge = 0 in self._edge_set

    # -- container protocol -------------------------------------------------
    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[int]:
        return iter(self.edges)

    def __contains__(self, mask: int) -> bool:
        return mask in self._edge_set

    def __bool__(self) -> bool:
        return bool(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        shown = [list(members(e)) for e in self.edges[:8]]
        tail = f" +{len(self.edges) - 8} more" if len(self.edges) > 8 else ""
        return f"Hypergraph(n={self.n}, edges={shown}{tail})"

    # -- derived quantities -------------------------------------------------
    @property
    def edge_set(self) -> AbstractSet:
        return self._edge_set

    @property
    def vertices(self) -> int:
        return full_set(self.n)

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def r(self) -> int:
        """Largest edge size (0 for the edgeless hypergraph)."""
        return self.edges[-1].bit_count() if self.edges else 0

    @property
    def is_uniform(self) -> bool:
        return not self.edges or self.edges[0].bit_count() == self.r

    def edge_lists(self) -> list[list[int]]:
        return [list(members(e)) for e in self.edges]


def _check_range(H: Hypergraph, mask: int, what: str = "set") -> None:
    if mask & ~H.vertices:
        raise ValueError(f"{what} {members(mask)} is not inside 0..{H.n - 1}")


def _as_fraction(p) -> Fraction:
    return p if isinstance(p, Fraction) else Fraction(p)


def weight(H: Hypergraph, p) -> Fraction:
    """The p-weight: sum of p^|E| over edges."""
    p = _as_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p={p} is outside [0, 1]")
    sizes = Counter(e.bit_count() for e in H.edges)
    return sum((c * p**s for s, c in sizes.items()), Fraction(0))


def link(H: Hypergraph, L: int) -> Hypergraph:
    """Edges containing ``L``, with ``L`` removed."""
    _check_range(H, L)
    return Hypergraph.from_masks(H.n, (e & ~L for e in H.edges if e & L == L), _allow_empty=True)


def strip_link(H: Hypergraph, L: int) -> Hypergraph:
    """Every edge with ``L`` removed; may contain the empty edge (see ``has_empty_edge``)."""
    _check_range(H, L)
    return Hypergraph.from_masks(H.n, (e & ~L for e in H.edges), _allow_empty=True)


def restrict(H: Hypergraph, C: int) -> Hypergraph:
    """Induced subhypergraph on ``C`` (global vertex indices are kept)."""
    _check_range(H, C)
    return Hypergraph.from_masks(H.n, (e for e in H.edges if e & ~C == 0), _allow_empty=H.has_empty_edge)


def size_slice(H: Hypergraph, lo: int, hi: int) -> Hypergraph:
    """Edges whose size lies in ``[lo, hi]``."""
    if lo < 0 or hi < lo:
        raise ValueError(f"bad size range [{lo}, {hi}]")
    return Hypergraph.from_masks(H.n, (e for e in H.edges if lo <= e.bit_count() <= hi), _allow_empty=True)


def up_set_contains(edge_set: frozenset[int] | set[int], F: int, proper: bool = False) -> bool:
    """True iff some member of ``edge_set`` is a (proper) subset of ``F``."""
    if len(edge_set) > (1 << F.bit_count()):
        subs = submasks(F, proper=proper)
        return any(s in edge_set for s in subs)
    if proper:
        return any(e & F == e and e != F for e in edge_set)
    return any(e & F == e for e in edge_set)


def covers(G: Hypergraph, H: Hypergraph) -> bool:
    """True iff every edge of ``H`` contains an edge of ``G``."""
    if G.n != H.n:
        raise ValueError("hypergraphs live on different vertex counts")
    gs = G.edge_set
    return all(up_set_contains(gs, f) for f in H.edges)


def minimal_elements(G: Hypergraph) -> Hypergraph:
    """Inclusion-minimal edges of ``G``."""
    kept: set[int] = set()
    for e in G.edges:  # size-ascending, so any subset edge is already decided
        if not up_set_contains(kept, e):
            kept.add(e)
    return Hypergraph.from_masks(G.n, kept, _allow_empty=G.has_empty_edge)


def is_antichain(H: Hypergraph) -> bool:
    es = H.edge_set
    return not any(up_set_contains(es, e, proper=True) for e in H.edges)


def degree(H: Hypergraph, L: int) -> int:
    return sum(1 for e in H.edges if e & L == L)


def max_degree(H: Hypergraph, ell: int) -> int:
    """Largest number of edges containing a common ``ell``-set."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    # keyed by member tuples: wide int masks hash poorly (see _WideMaskSet)
    counts: Counter = Counter()
    for e in H.edges:
        if e.bit_count() < ell:
            continue
        vs = members(e)
        if ell == 1:
            counts.update(vs)
        else:
            counts.update(combinations(vs, ell))
    return max(counts.values(), default=0)


def is_independent(H: Hypergraph, I: int) -> bool:
    """True iff no edge of ``H`` lies inside ``I``."""
    return not up_set_contains(H.edge_set, I)


def unblocked_vertices(H: Hypergraph) -> int:
    """Vertices ``v`` for which ``{v}`` is not an edge."""
    blocked = 0
    for e in H.edges:
        if e.bit_count() > 1:
            break
        blocked |= e
    return H.vertices & ~blocked


def sort_sets(masks: Iterable[int]) -> list[int]:
    return sorted(masks, key=set_key)
