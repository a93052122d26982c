"""Command-line front end.

Exit codes: 0 success, 1 a verification mismatch or a bridged search input,
2 a usage, parse or parameter error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

from .constructions import ConstructionError, ConstructionResult, build, parse_factor
from .graph import (
    Graph,
    GraphError,
    cartesian_product,
    format_edge_list,
    parse_edge_list,
    parse_tree_text,
    vertex_multiplication,
)
from .orientation import format_arcs, format_dot
from .report import render_json, render_text, verify, verify_all
from .search import BridgedGraphError, SearchBudget, orientation_number, refute_diameter


class UsageError(Exception):
    pass


def _safe_name(cid: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", cid)


def _construction_json(result: ConstructionResult) -> str:
    d = result.orientation
    doc = {
        "id": result.id,
        "claimed_diameter": result.claimed_diameter,
        "claim": "exact" if result.exact else "bound",
        "claimed_class": result.claimed_class,
        "vertices": d.graph.n,
        "labels": [d.graph.label(v) for v in range(d.graph.n)],
        "multiplicity": list(result.spec.s),
        "arcs": [[a + 1, b + 1] for a, b in d.arcs()],
        "rules": [d.rule_of(a, b) for a, b in d.arcs()],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _render_construction(result: ConstructionResult, fmt: str) -> str:
    if fmt == "arcs":
        return format_arcs(result.orientation)
    if fmt == "dot":
        return format_dot(result.orientation, result.id)
    return _construction_json(result)


def cmd_construct(args: argparse.Namespace) -> int:
    cid = args.id_flag or args.id
    if not cid:
        raise UsageError("construct needs a construction id")
    result = build(cid)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = _safe_name(cid)
        (out / f"{stem}.arcs").write_text(format_arcs(result.orientation))
        (out / f"{stem}.dot").write_text(format_dot(result.orientation, cid))
        print(f"{cid}: {result.orientation.graph.n} vertices, {result.orientation.graph.m} arcs "
              f"-> {out / (stem + '.arcs')}, {out / (stem + '.dot')}")
        return 0
    sys.stdout.write(_render_construction(result, args.format))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    cid = args.id_flag or args.id
    if not cid:
        raise UsageError("verify needs a construction id")
    entries = [verify(build(cid))]
    sys.stdout.write(render_json(entries) if args.format == "json" else render_text(entries))
    return 0 if entries[0].ok else 1


def cmd_verify_all(args: argparse.Namespace) -> int:
    try:
        entries = verify_all(inject_flip=args.inject_flip)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    text = render_json(entries) if args.format == "json" else render_text(entries)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    bad = [e.id for e in entries if not e.ok]
    if bad:
        print(f"mismatch: {', '.join(bad)}", file=sys.stderr)
        return 1
    return 0


def _read_graph(path: str, as_tree: bool) -> Graph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    if as_tree:
        return parse_tree_text(text)
    lines = [line for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if len(lines) == 1 and len(lines[0].split()) != 2:
        return parse_tree_text(lines[0])
    return parse_edge_list(text)


def cmd_search(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph, args.tree)
    budget = SearchBudget(max_nodes=args.budget_nodes, symmetry=not args.no_symmetry)
    try:
        if args.k is not None:
            res = refute_diameter(g, args.k, budget=budget)
            cert = res.certificate()
            if args.format == "json":
                if res.witness is not None:
                    cert["witness_arcs"] = [[a + 1, b + 1] for a, b in res.witness.arcs()]
                sys.stdout.write(json.dumps(cert, indent=2, sort_keys=True) + "\n")
            elif res.status == "refuted":
                print(f"refuted: no orientation of diameter <= {args.k}")
                print(_certificate_line(cert))
            elif res.status == "witness":
                print(f"witness: orientation of diameter {cert['witness_diameter']} <= {args.k}")
                sys.stdout.write(format_arcs(res.witness))
            else:
                print(f"inconclusive: node budget {args.budget_nodes} exhausted")
                print(_certificate_line(cert))
                return 1
            return 0
        result = orientation_number(g, budget)
    except BridgedGraphError as exc:
        a, b = exc.bridge
        print(f"bridged: no strong orientation (bridge {a + 1} {b + 1})")
        return 1
    if args.format == "json":
        doc = {
            "value": result.value,
            "lower": result.lower,
            "upper": result.upper if math.isfinite(result.upper) else None,
            "nodes": result.nodes,
            "steps": [s.certificate() for s in result.steps],
        }
        if result.witness is not None:
            doc["witness_arcs"] = [[a + 1, b + 1] for a, b in result.witness.arcs()]
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return 0 if result.value is not None else 1
    if result.value is None:
        print(f"inconclusive: d̄ >= {result.lower} (node budget {args.budget_nodes} exhausted)")
        return 1
    print(f"d̄ = {result.value}")
    for step in result.steps:
        if step.status == "refuted":
            print(f"refuted k={step.k}: {_certificate_line(step.certificate())}")
    print("witness:")
    sys.stdout.write(format_arcs(result.witness))
    return 0


def _certificate_line(cert: dict) -> str:
    pruning = ", ".join(f"{k}={v}" for k, v in cert["pruning"].items()) or "none"
    return (f"nodes {cert['nodes']}, automorphisms {cert['automorphisms_used']}, "
            f"symmetry prefix {cert['symmetry_prefix']}, pruning {pruning}")


def cmd_graph(args: argparse.Namespace) -> int:
    factors = [parse_factor(tok) for tok in args.expr.split("x")]
    g = factors[0]
    for h in factors[1:]:
        g = cartesian_product(g, h)
    if args.mult:
        values = [int(x) for x in args.mult.split(",")]
        if len(values) == 1:
            values = values * g.n
        g, _ = vertex_multiplication(g, values)
    sys.stdout.write(format_edge_list(g))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orientlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit an orientation by id, e.g. grid:3,2")
    p.add_argument("id", nargs="?")
    p.add_argument("--id", dest="id_flag")
    p.add_argument("--format", choices=("arcs", "dot", "json"), default="arcs")
    p.add_argument("--out", help="directory for <id>.arcs and <id>.dot")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="verify and classify one construction")
    p.add_argument("id", nargs="?")
    p.add_argument("--id", dest="id_flag")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-all", help="verify the full catalogue")
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.add_argument("--inject-flip", metavar="ID", help="reverse one arc of ID before checking")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("search", help="exact orientation number or refutation of diameter k")
    p.add_argument("graph", help="edge-list file, parent-array tree file, or - for stdin")
    p.add_argument("--k", type=int)
    p.add_argument("--tree", action="store_true", help="read the input as a parent array")
    p.add_argument("--budget-nodes", type=int, default=5_000_000)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("graph", help="edge list of a product such as P2xK3, optionally multiplied")
    p.add_argument("expr")
    p.add_argument("--mult", help="one multiplicity for all vertices, or a comma list")
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConstructionError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
