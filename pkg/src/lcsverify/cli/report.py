"""Report entries, the documented anchor list, and JSON / text rendering.

The JSON payload is byte-deterministic: keys are sorted, entries keep section
order, and wall-clock durations live in a separate top-level ``durations``
object that :meth:`Report.payload_json` leaves out.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..fbc import PAPER_IDENTITIES

SCHEMA = "lcsverify-report/1"
STATUSES = ("pass", "fail", "skipped", "flagged")

# entry name -> claim it checks; identity entries are named "identity: <label>"
# and anchored by the identity itself
ANCHORS = {
    **{f"identity: {label}": f"{lhs} = {rhs}" for label, lhs, rhs in PAPER_IDENTITIES},
    "module: exterior check": "no product of eigenvalues of U - I equals ±1; (alpha_1 - 1)(alpha_2 - 1) = -3",
    "module: stable image chain": "the images of (U - I)^k shrink by a finite index and keep no unit part",
    "module: unit invariant sublattice": "M is residually nilpotent iff no nonzero sublattice L has (U - I)L = L",
    "tensor: structured check": "products of eigenvalues of U^(x)m - I are never ±1",
    "tensor: exterior cross-check": "the pairing and exterior-power decisions agree on U^(x)m - I",
    "tensor: even power eigenvalues": "eigenvalues of U^(x)m are ±alpha_1^l and ±alpha_2^s with l, s >= 1",
    "lie: witt dimensions": "rank of L^n is (1/n) sum_{d | n} mu(d) r^(n/d)",
    "lie: second power": "L^2(M) is the exterior square, acting on Z^2 by det U",
    "lie: inside tensor power": "eigenvalues of L^n(U) are among the eigenvalues of U^(x)n",
    "lie: exterior check": "no product of eigenvalues of L^(n+1)(U) - I equals ±1",
    "norms: first values": "(alpha_1 - 1)(alpha_2 - 1) = -3 and (alpha_1 + 1)(alpha_2 + 1) = 3",
    "norms: divisibility": "-3 divides M_l, 3 divides N_s for odd s, and |M_l|, |N_s| >= 3",
    "norms: divisibility direction": "(alpha_1^s + 1)(alpha_2^s + 1) divides (alpha_1 + 1)(alpha_2 + 1) for odd s",
    "homology: mapping torus": "H_1(H) = Z + Z/3 and H_2(H) = Z/2",
    "homology: relator": "H_2(G) = 0",
    "lcs: engine": "gamma_n(G) for 2 <= n <= c, exactly, inside F / gamma_c(F)",
    "lcs: tower": "gamma_(n+1)(G) is contained in gamma_n(G)",
    "lcs: prime powers": "x^(3^k) lies in gamma_(k+1)(G): x is a generalized 3-torsion element",
    "lcs: non-member": "x does not lie in gamma_2(G)",
    "lcs: graded quotients": "gamma_n(G) / gamma_(n+1)(G) = Z/3 for finite n >= 2",
    "lcs: gamma omega": "gamma_omega(G) = <[a, a^b]>^G",
    "lcs: closure certificates": "each W_n is stable under phi^(±1), fiber conjugation and commutators",
    "witnesses: weights": "[[y, x], x, [y, x], ..., [y, x]] is a nontrivial basic commutator of weight 2k + 3",
}


def jsonable(obj):
    """Plain JSON types only: string keys, lists for tuples and arrays."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


@dataclass
class Entry:
    name: str
    anchor: str
    status: str
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if not self.anchor:
            raise ValueError(f"entry {self.name!r} has no anchor")

    def to_dict(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "status": self.status, "data": jsonable(self.data)}


def entry(name: str, status: str, data: dict | None = None, anchor: str | None = None) -> Entry:
    return Entry(name, anchor if anchor is not None else ANCHORS[name], status, data or {})


@dataclass
class Section:
    name: str
    entries: list[Entry]
    diagnostic: str | None = None

    @property
    def status(self) -> str:
        st = [e.status for e in self.entries]
        if "fail" in st:
            return "fail"
        if not st or all(s == "skipped" for s in st):
            return "skipped"
        if "flagged" in st:
            return "flagged"
        return "pass"

    def to_dict(self) -> dict:
        out = {"section": self.name, "status": self.status, "entries": [e.to_dict() for e in self.entries]}
        if self.diagnostic is not None:
            out["diagnostic"] = self.diagnostic
        return out


@dataclass
class Report:
    config: dict
    sections: list[Section] = field(default_factory=list)
    durations: dict[str, float] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "fail" if any(s.status == "fail" for s in self.sections) else "pass"

    def entries(self):
        for s in self.sections:
            yield from s.entries

    def payload(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": jsonable(self.config),
            "verdict": self.verdict,
            "sections": [s.to_dict() for s in self.sections],
        }

    def payload_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_json(self, durations: bool = True) -> str:
        doc = self.payload()
        if durations:
            doc["durations"] = {k: round(v, 6) for k, v in self.durations.items()}
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _short(value, limit: int = 100) -> str:
    text = json.dumps(jsonable(value), sort_keys=True, ensure_ascii=False)
    return text if len(text) <= limit else text[: limit - 3] + "..."


def render_text(report: Report, durations: bool = True) -> str:
    lines = [f"verdict: {report.verdict.upper()}"]
    for s in report.sections:
        head = f"[{s.status.upper():7}] {s.name}"
        if durations and s.name in report.durations:
            head += f"  ({report.durations[s.name]:.2f} s)"
        lines.append(head)
        if s.diagnostic:
            lines.append(f"    note: {s.diagnostic}")
        for e in s.entries:
            lines.append(f"    {e.status:7} {e.name}")
            lines.append(f"            anchor: {e.anchor}")
            for key in sorted(e.data):
                lines.append(f"            {key}: {_short(e.data[key])}")
    return "\n".join(lines) + "\n"
