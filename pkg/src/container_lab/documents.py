"""Hypergraph documents: a small JSON format with one edge per line.

::

    {
      "n": 3,
      "edges": [
        [0, 1],
        [1, 2]
      ],
      "meta": {"generator": "manual"}
    }

``labels`` (one string per vertex) and ``meta`` (string to string) are
optional.  Loading canonicalizes edges (sorted members, sorted by size then
lexicographically, duplicates merged) and warns when that changed anything.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .hypergraph import Hypergraph, members, vset

__all__ = [
    "HypergraphDocument",
    "DocumentError",
    "MalformedDocument",
    "VertexOutOfRange",
    "EmptyEdgeError",
    "NonCanonicalWarning",
    "parse",
    "serialize",
    "load",
    "dump",
    "format_rational",
    "parse_rational",
]


class DocumentError(ValueError):
    pass


class MalformedDocument(DocumentError):
    pass


class VertexOutOfRange(DocumentError):
    pass


class EmptyEdgeError(DocumentError):
    pass


class NonCanonicalWarning(UserWarning):
    pass


@dataclass
class HypergraphDocument:
    n: int
    edges: list[list[int]]
    labels: Optional[list[str]] = None
    meta: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_hypergraph(cls, H: Hypergraph, meta: Optional[dict[str, str]] = None,
                        labels: Optional[list[str]] = None) -> "HypergraphDocument":
        return cls(H.n, H.edge_lists(), labels, dict(meta or {}))

    def to_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.n, self.edges)


def _canonical_edges(edges: list[list[int]]) -> list[list[int]]:
    masks = {vset(e) for e in edges}
    return [list(members(m)) for m in sorted(masks, key=lambda m: (m.bit_count(), members(m)))]


def parse(text: str) -> HypergraphDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise MalformedDocument("top level must be an object")
    unknown = set(obj) - {"n", "edges", "labels", "meta"}
    if unknown:
        raise MalformedDocument(f"unknown keys: {sorted(unknown)}")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise MalformedDocument("'n' must be a non-negative integer")
    edges = obj.get("edges")
    if not isinstance(edges, list):
        raise MalformedDocument("'edges' must be a list")
    for edge in edges:
        if not isinstance(edge, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in edge):
            raise MalformedDocument(f"edge {edge!r} is not a list of integers")
        if not edge:
            raise EmptyEdgeError("empty edge in document")
        for v in edge:
            if not 0 <= v < n:
                raise VertexOutOfRange(f"vertex {v} outside 0..{n - 1}")
    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n or not all(isinstance(x, str) for x in labels):
            raise MalformedDocument("'labels' must be a list of n strings")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict) or not all(isinstance(k, str) and isinstance(v, str) for k, v in meta.items()):
        raise MalformedDocument("'meta' must map strings to strings")
    canonical = _canonical_edges(edges)
    if canonical != edges:
        warnings.warn("edges were not in canonical form; sorted and deduplicated on load",
                      NonCanonicalWarning, stacklevel=2)
    return HypergraphDocument(n, canonical, labels, dict(meta))


def serialize(doc: HypergraphDocument) -> str:
    lines = ["{", f'  "n": {doc.n},']
    if doc.edges:
        lines.append('  "edges": [')
        body = [f"    {json.dumps(list(e))}" for e in doc.edges]
        lines.append(",\n".join(body))
        lines.append("  ]" + ("," if doc.labels is not None or doc.meta else ""))
    else:
        lines.append('  "edges": []' + ("," if doc.labels is not None or doc.meta else ""))
    if doc.labels is not None:
        lines.append(f'  "labels": {json.dumps(doc.labels)}' + ("," if doc.meta else ""))
    if doc.meta:
        lines.append(f'  "meta": {json.dumps(dict(sorted(doc.meta.items())))}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load(path) -> HypergraphDocument:
    return parse(Path(path).read_text())


def dump(doc: HypergraphDocument, path) -> None:
    Path(path).write_text(serialize(doc))


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or an integer string; decimals are refused."""
    text = text.strip()
    if any(c in text for c in ".eE"):
        raise ValueError(f"{text!r}: rationals must be given as num/den, not decimals")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{text!r} is not a rational of the form num/den") from None
