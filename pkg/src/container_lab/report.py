"""Verification reports: per-check tallies with a witness for the first failure."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Callable, Optional, Union

from .hypergraph import Hypergraph, members

__all__ = [
    "SCHEMA_VERSION",
    "CheckTally",
    "VerificationReport",
    "jsonable",
    "report_schema",
    "input_digest",
]

SCHEMA_VERSION = "1.0"

Witness = Union[dict, Callable[[], dict], None]


def jsonable(value: Any) -> Any:
    """Convert rationals, vertex-set tuples and hypergraphs into JSON values."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Hypergraph):
        return value.edge_lists()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in value]
    return value


@dataclass
class CheckTally:
    check: str
    description: str = ""
    checked: int = 0
    failed: int = 0
    witness: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> dict:
        out = {"check": self.check, "description": self.description, "checked": self.checked,
               "failed": self.failed, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = jsonable(self.witness)
        return out


@dataclass
class VerificationReport:
    """Named checks, each counted over every instance, round or input it was applied to.

    ``record`` takes the witness lazily (a dict or a zero-argument callable)
    so passing checks cost nothing beyond the test itself.
    """

    suite: str
    tallies: dict[str, CheckTally] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def declare(self, check: str, description: str = "") -> CheckTally:
        tally = self.tallies.get(check)
        if tally is None:
            tally = self.tallies[check] = CheckTally(check, description)
        elif description and not tally.description:
            tally.description = description
        return tally

    def record(self, check: str, ok: bool, witness: Witness = None, description: str = "") -> bool:
        tally = self.declare(check, description)
        tally.checked += 1
        if not ok:
            tally.failed += 1
            if tally.witness is None:
                w = witness() if callable(witness) else witness
                tally.witness = w if w is not None else {}
        return ok

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        for name, t in other.tallies.items():
            mine = self.declare(name, t.description)
            mine.checked += t.checked
            mine.failed += t.failed
            if mine.witness is None and t.witness is not None:
                mine.witness = t.witness
        self.notes.extend(other.notes)
        return self

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.tallies.values())

    @property
    def failures(self) -> list[CheckTally]:
        return [t for t in self.tallies.values() if not t.passed]

    def count(self, check: str) -> int:
        t = self.tallies.get(check)
        return t.checked if t else 0

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [self.tallies[k].to_dict() for k in sorted(self.tallies)],
            "notes": list(self.notes),
        }

    def summary(self) -> str:
        lines = [f"{self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        for name in sorted(self.tallies):
            t = self.tallies[name]
            status = "ok" if t.passed else f"FAILED {t.failed}"
            lines.append(f"  {name:<32} {t.checked:>8} checked  {status}")
        return "\n".join(lines)


def set_witness(**items) -> dict:
    """Witness dict with vertex-set bitmasks rendered as member lists."""
    return {k: list(members(v)) if isinstance(v, int) and not isinstance(v, bool) else v for k, v in items.items()}


def report_schema() -> dict:
    text = resources.files("container_lab").joinpath("report_schema.json").read_text()
    return json.loads(text)


def input_digest(H: Hypergraph) -> str:
    payload = json.dumps({"n": H.n, "edges": H.edge_lists()}, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]
