"""Verification records for the catalogue of constructions.

Each entry rebuilds one orientation, measures it by directed BFS, audits its
rule attribution and combines any available lower-bound certificate into a
class verdict.  Output is deterministic: no timings, sorted keys, stable order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

from .analysis import (
    LowerBound,
    classify,
    forcing_lower_bound_p3p2,
    sperner_lower_bound,
)
from .constructions import ConstructionResult, audit, build
from .orientation import Orientation, directed_metrics, min_cycle_per_vertex
from .search import refute_diameter

SCHEMA_ID = "orientlab-report/1"

VERIFY_ALL_IDS: tuple[str, ...] = (
    "tree_tree:2,3",
    "tree_tree:2,5",
    "tree_tree:4,3",
    "tree_tree:4,5",
    "tree_tree:2,4",
    "tree_tree:4,4",
    "tree_tree:3,3",
    "tree_tree:3,5",
    "tree_tree:5,5",
    "grid:3,2",
    "grid:4,2",
    "grid:3,3",
    "q3",
    "tree_cycle:3,3",
    "t2_complete:2,3",
    "t2_complete:3,3",
    "p2_complete:3",
    "cycle_cycle:4,3",
    "p3p2_c0_example",
    "cycle_cycle:3,3",
)


# ---------------------------------------------------------------------------
# lower-bound certificates attached to specific ids

def _grid32_lower(result: ConstructionResult) -> LowerBound:
    return forcing_lower_bound_p3p2(result.spec.s).as_lower_bound()


def _p2_complete_lower(result: ConstructionResult) -> LowerBound:
    k = result.claimed_diameter - 1
    res = refute_diameter(result.orientation.graph, k)
    if not res.refuted:
        raise RuntimeError(f"search did not refute diameter {k}: {res.status}")
    return LowerBound(k + 1, "exhaustive", f"{res.nodes} search nodes")


def _star_times_complete_lower(result: ConstructionResult) -> LowerBound:
    # one copy of <leaf, 0> per leaf, against both copies of <centre, 0>
    spec = result.spec
    deg = int(result.id.split(":")[1].split(",")[0])
    mu = spec.base.n // (deg + 1)
    sources = [spec.vid(1, leaf * mu) for leaf in range(1, deg + 1)]
    return sperner_lower_bound(result.orientation.graph, sources, list(spec.copies(0)))


LOWER_BOUNDS: dict[str, Callable[[ConstructionResult], LowerBound]] = {
    "grid:3,2": _grid32_lower,
    "p2_complete:3": _p2_complete_lower,
    "t2_complete:3,3": _star_times_complete_lower,
}


# ---------------------------------------------------------------------------

@dataclass
class ReportEntry:
    id: str
    family: str
    params: str
    vertices: int
    arcs: int
    base_diameter: int
    claimed_diameter: int
    claim: str  # exact | bound
    computed_diameter: int | None
    strong: bool
    min_cycle: int | None
    cycle_bound: int
    audit: list[str]
    claimed_class: str
    verdict: dict
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "family": self.family,
            "params": self.params,
            "vertices": self.vertices,
            "arcs": self.arcs,
            "base_diameter": self.base_diameter,
            "claimed_diameter": self.claimed_diameter,
            "claim": self.claim,
            "computed_diameter": self.computed_diameter,
            "strong": self.strong,
            "min_cycle": self.min_cycle,
            "cycle_bound": self.cycle_bound,
            "audit": list(self.audit),
            "claimed_class": self.claimed_class,
            "verdict": self.verdict,
            "ok": self.ok,
            "problems": list(self.problems),
        }


def _verdict_dict(result: ConstructionResult, d: Orientation, lower: LowerBound | None) -> dict:
    v = classify(result.spec.base, result.spec.s, d, lower, witness_id=result.id)
    return {
        "lower": v.lower,
        "lower_kind": v.lower_kind,
        "upper": int(v.upper) if math.isfinite(v.upper) else None,
        "upper_witness": v.upper_witness,
        "classes": v.label,
        "determined": v.determined,
    }


def verify(result: ConstructionResult, orientation: Orientation | None = None,
           with_lower_bound: bool = True) -> ReportEntry:
    """Check one construction against its claim.

    ``orientation`` overrides the built digraph, which is how fault injection
    feeds a tampered copy through the same checks.
    """
    d = orientation if orientation is not None else result.orientation
    family, _, params = result.id.partition(":")
    m = directed_metrics(d)
    computed = int(m.diameter) if m.strong else None
    min_cycle = min_cycle_per_vertex(d, m.distances) if m.strong else None
    problems: list[str] = []
    if not m.strong:
        problems.append("orientation is not strong")
    elif result.exact and computed != result.claimed_diameter:
        problems.append(f"diameter {computed} differs from claimed {result.claimed_diameter}")
    elif not result.exact and computed > result.claimed_diameter:
        problems.append(f"diameter {computed} exceeds claimed bound {result.claimed_diameter}")
    if min_cycle is not None and min_cycle > result.cycle_bound:
        problems.append(f"some vertex lies on no directed cycle of length <= {result.cycle_bound}")
    findings = audit(d)
    if findings:
        problems.append(f"audit found {len(findings)} unattributed arcs or gadget mismatches")

    verdict: dict = {}
    lower = None
    if with_lower_bound and result.id in LOWER_BOUNDS:
        lower = LOWER_BOUNDS[result.id](result)
    try:
        verdict = _verdict_dict(result, d, lower if m.strong else None)
    except ValueError as exc:
        problems.append(f"class verdict inconsistent: {exc}")
    if verdict and m.strong and verdict["classes"] != result.claimed_class:
        problems.append(f"class verdict {verdict['classes']} differs from claimed {result.claimed_class}")

    return ReportEntry(
        id=result.id, family=family, params=params,
        vertices=d.graph.n, arcs=d.graph.m, base_diameter=result.base_diameter,
        claimed_diameter=result.claimed_diameter, claim="exact" if result.exact else "bound",
        computed_diameter=computed, strong=m.strong, min_cycle=min_cycle,
        cycle_bound=result.cycle_bound, audit=findings, claimed_class=result.claimed_class,
        verdict=verdict, problems=problems,
    )


def verify_all(ids: tuple[str, ...] = VERIFY_ALL_IDS, inject_flip: str | None = None) -> list[ReportEntry]:
    """Verify every catalogue entry; ``inject_flip`` reverses the first arc of that id."""
    if inject_flip is not None and inject_flip not in ids:
        raise KeyError(f"{inject_flip!r} is not in the verified set")
    entries = []
    for cid in ids:
        result = build(cid)
        tampered = None
        if cid == inject_flip:
            a, b = result.orientation.arcs()[0]
            tampered = result.orientation.flip(a, b)
        entries.append(verify(result, tampered))
    return entries


def report_document(entries: list[ReportEntry]) -> dict:
    offenders = [e.id for e in entries if not e.ok]
    return {
        "schema": SCHEMA_ID,
        "entries": [e.as_dict() for e in entries],
        "summary": {"total": len(entries), "mismatches": len(offenders), "offenders": offenders},
    }


def render_json(entries: list[ReportEntry]) -> str:
    return json.dumps(report_document(entries), indent=2, sort_keys=True) + "\n"


def render_text(entries: list[ReportEntry]) -> str:
    header = f"{'id':<22} {'claim':>6} {'BFS':>4} {'cyc':>4} {'audit':>5} {'class':<7} status"
    lines = [header, "-" * len(header)]
    for e in entries:
        claim = ("=" if e.claim == "exact" else "<=") + str(e.claimed_diameter)
        bfs = "inf" if e.computed_diameter is None else str(e.computed_diameter)
        cyc = "-" if e.min_cycle is None else str(e.min_cycle)
        cls = e.verdict.get("classes", "?")
        status = "ok" if e.ok else "MISMATCH: " + "; ".join(e.problems)
        lines.append(f"{e.id:<22} {claim:>6} {bfs:>4} {cyc:>4} {len(e.audit):>5} {cls:<7} {status}")
    bad = [e.id for e in entries if not e.ok]
    lines.append(f"{len(entries)} entries, {len(bad)} mismatches" + (f": {', '.join(bad)}" if bad else ""))
    return "\n".join(lines) + "\n"


REPORT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "entries", "summary"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "family", "params", "vertices", "arcs", "base_diameter",
                             "claimed_diameter", "claim", "computed_diameter", "strong",
                             "min_cycle", "cycle_bound", "audit", "claimed_class", "verdict",
                             "ok", "problems"],
                "properties": {
                    "id": {"type": "string"},
                    "family": {"type": "string"},
                    "params": {"type": "string"},
                    "vertices": {"type": "integer", "minimum": 1},
                    "arcs": {"type": "integer", "minimum": 0},
                    "base_diameter": {"type": "integer", "minimum": 0},
                    "claimed_diameter": {"type": "integer", "minimum": 1},
                    "claim": {"enum": ["exact", "bound"]},
                    "computed_diameter": {"type": ["integer", "null"]},
                    "strong": {"type": "boolean"},
                    "min_cycle": {"type": ["integer", "null"]},
                    "cycle_bound": {"type": "integer"},
                    "audit": {"type": "array", "items": {"type": "string"}},
                    "claimed_class": {"type": "string"},
                    "verdict": {
                        "type": "object",
                        "properties": {
                            "lower": {"type": "integer"},
                            "lower_kind": {"enum": ["window", "base-diameter", "forcing",
                                                    "sperner", "exhaustive"]},
                            "upper": {"type": ["integer", "null"]},
                            "upper_witness": {"type": ["string", "null"]},
                            "classes": {"type": "string"},
                            "determined": {"type": "boolean"},
                        },
                    },
                    "ok": {"type": "boolean"},
                    "problems": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "summary": {
            "type": "object",
            "required": ["total", "mismatches", "offenders"],
            "properties": {
                "total": {"type": "integer"},
                "mismatches": {"type": "integer"},
                "offenders": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
}
