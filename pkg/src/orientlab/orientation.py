"""Orientations of undirected graphs, the two-copy arc gadgets, and directed metrics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graph import Graph, MulSpec, bfs_levels, iter_bits


class OrientationError(ValueError):
    pass


class ConflictError(OrientationError):
    """An edge was asked to point both ways; two construction rules overlap."""


class NotStrongError(OrientationError):
    pass


class Gadget(enum.Enum):
    PARALLEL = "=>"
    CYCLIC = "~>"
    TWOHEAD_1 = "->>1"
    TWOHEAD_2 = "->>2"


# (copy of tail-side vertex, copy of head-side vertex, points from u to v?)
_GADGET_SHAPES = {
    Gadget.PARALLEL: [(1, 1, True), (1, 2, True), (2, 1, True), (2, 2, True)],
    Gadget.CYCLIC: [(1, 1, True), (2, 1, False), (2, 2, True), (1, 2, False)],
    Gadget.TWOHEAD_1: [(1, 1, True), (2, 1, True), (1, 2, False), (2, 2, False)],
    Gadget.TWOHEAD_2: [(1, 2, True), (2, 2, True), (1, 1, False), (2, 1, False)],
}


def gadget_arcs(kind: Gadget, spec: MulSpec, u: int, v: int) -> list[tuple[int, int]]:
    """Flat arcs a gadget puts between the copies of base vertices ``u`` and ``v``.

    Each shape entry ``(x, y, forward)`` concerns the edge ``(x,u)(y,v)``.
    """
    if not spec.base.has_edge(u, v):
        raise OrientationError(f"base edge {spec.base.label(u)}-{spec.base.label(v)} is absent")
    if spec.s[u] != 2 or spec.s[v] != 2:
        raise OrientationError("gadgets need multiplicity 2 on both endpoints")
    out = []
    for x, y, forward in _GADGET_SHAPES[kind]:
        a, b = spec.vid(x, u), spec.vid(y, v)
        out.append((a, b) if forward else (b, a))
    return out


def _edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


class OrientationBuilder:
    """Staging area for a partial orientation with per-arc provenance.

    Setting an arc that already points the same way is a no-op (rules in
    chained notation repeat arcs); pointing it the other way is a conflict.
    """

    def __init__(self, graph: Graph, spec: MulSpec | None = None):
        self.graph = graph
        self.spec = spec
        self._tail: dict[tuple[int, int], int] = {}
        self._rule: dict[tuple[int, int], str] = {}

    def state(self, a: int, b: int) -> int:
        """+1 if ``a -> b`` is set, -1 if ``b -> a`` is set, 0 if unset."""
        tail = self._tail.get(_edge_key(a, b))
        if tail is None:
            return 0
        return 1 if tail == a else -1

    def set_arc(self, a: int, b: int, rule: str) -> None:
        if not self.graph.has_edge(a, b):
            raise OrientationError(f"no edge between {self.graph.label(a)} and {self.graph.label(b)}")
        key = _edge_key(a, b)
        tail = self._tail.get(key)
        if tail is None:
            self._tail[key] = a
            self._rule[key] = rule
        elif tail != a:
            raise ConflictError(
                f"{rule}: arc {self.graph.label(a)}->{self.graph.label(b)} conflicts with "
                f"{self._rule[key]}")

    def gadget(self, kind: Gadget, u: int, v: int, rule: str | None = None) -> None:
        if self.spec is None:
            raise OrientationError("gadgets need a vertex-multiplication")
        tag = rule or f"{kind.name}({self.spec.base.label(u)},{self.spec.base.label(v)})"
        for a, b in gadget_arcs(kind, self.spec, u, v):
            self.set_arc(a, b, tag)

    def pair_state(self, u: int, v: int) -> int:
        """How many of the edges between copies of base ``u`` and ``v`` are set."""
        assert self.spec is not None
        return sum(1 for a in self.spec.copies(u) for b in self.spec.copies(v)
                   if _edge_key(a, b) in self._tail)

    def gadget_unless_set(self, kind: Gadget, u: int, v: int, rule: str | None = None) -> bool:
        """Apply a gadget unless the base edge was oriented by an earlier rule.

        A partly oriented base edge means two rules overlap and raises.
        """
        done = self.pair_state(u, v)
        if done == 0:
            self.gadget(kind, u, v, rule)
            return True
        if done != self.spec.s[u] * self.spec.s[v]:
            raise ConflictError(
                f"base edge {self.spec.base.label(u)}-{self.spec.base.label(v)} is partly oriented")
        return False

    def unset_edges(self) -> list[tuple[int, int]]:
        return [e for e in self.graph.edges() if e not in self._tail]

    def finalize(self) -> "Orientation":
        missing = self.unset_edges()
        if missing:
            a, b = missing[0]
            raise OrientationError(
                f"{len(missing)} edges left unoriented, e.g. "
                f"{self.graph.label(a)}-{self.graph.label(b)}")
        edges = self.graph.edges()
        forward = tuple(self._tail[e] == e[0] for e in edges)
        rules = tuple(self._rule[e] for e in edges)
        return Orientation(self.graph, forward, self.spec, rules)


@dataclass(frozen=True)
class DirectedMetrics:
    distances: list[list[float]]
    diameter: float
    strong: bool


@dataclass(frozen=True)
class Orientation:
    """A total orientation: ``forward[i]`` says edge ``i`` (``u < v``) points ``u -> v``."""

    graph: Graph
    forward: tuple[bool, ...]
    spec: MulSpec | None = None
    provenance: tuple[str, ...] | None = None
    _out: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _in: tuple[int, ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = self.graph.edges()
        if len(self.forward) != len(edges):
            raise OrientationError("orientation must direct every edge exactly once")
        if self.provenance is not None and len(self.provenance) != len(edges):
            raise OrientationError("provenance length differs from edge count")
        out = [0] * self.graph.n
        inn = [0] * self.graph.n
        for (u, v), fwd in zip(edges, self.forward):
            a, b = (u, v) if fwd else (v, u)
            out[a] |= 1 << b
            inn[b] |= 1 << a
        object.__setattr__(self, "_out", tuple(out))
        object.__setattr__(self, "_in", tuple(inn))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(edges)})

    @classmethod
    def from_arcs(cls, graph: Graph, arcs: Iterable[tuple[int, int]],
                  spec: MulSpec | None = None) -> "Orientation":
        builder = OrientationBuilder(graph, spec)
        for a, b in arcs:
            builder.set_arc(a, b, "input")
        done = builder.finalize()
        return cls(graph, done.forward, spec)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def out_masks(self) -> tuple[int, ...]:
        return self._out

    @property
    def in_masks(self) -> tuple[int, ...]:
        return self._in

    def arcs(self) -> list[tuple[int, int]]:
        """Arcs sorted by (tail, head)."""
        return sorted((u, v) if f else (v, u) for (u, v), f in zip(self.graph.edges(), self.forward))

    def has_arc(self, a: int, b: int) -> bool:
        return bool(self._out[a] >> b & 1)

    def outset(self, v: int) -> list[int]:
        return list(iter_bits(self._out[v]))

    def inset(self, v: int) -> list[int]:
        return list(iter_bits(self._in[v]))

    def rule_of(self, a: int, b: int) -> str | None:
        if self.provenance is None:
            return None
        return self.provenance[self._index[_edge_key(a, b)]]

    def reverse(self) -> "Orientation":
        return Orientation(self.graph, tuple(not f for f in self.forward), self.spec, self.provenance)

    def flip(self, a: int, b: int) -> "Orientation":
        """Copy with the single edge ``ab`` reversed."""
        i = self._index[_edge_key(a, b)]
        fwd = list(self.forward)
        fwd[i] = not fwd[i]
        prov = None
        if self.provenance is not None:
            prov = list(self.provenance)
            prov[i] = "flipped"
            prov = tuple(prov)
        return Orientation(self.graph, tuple(fwd), self.spec, prov)

    def distances_from(self, source: int) -> list[float]:
        row = [math.inf] * self.n
        for d, level in enumerate(bfs_levels(self._out, source)):
            for v in iter_bits(level):
                row[v] = d
        return row

    def distance(self, a: int, b: int) -> float:
        return self.distances_from(a)[b]


def directed_metrics(d: Orientation) -> DirectedMetrics:
    rows = [d.distances_from(s) for s in range(d.n)]
    diam = max(max(row) for row in rows)
    return DirectedMetrics(rows, diam, math.isfinite(diam))


def directed_diameter(d: Orientation) -> float:
    """Diameter via bitset BFS; stops early and returns ``inf`` once a source misses a vertex."""
    full = (1 << d.n) - 1
    best = 0
    for s in range(d.n):
        levels = bfs_levels(d.out_masks, s)
        reached = 0
        for level in levels:
            reached |= level
        if reached != full:
            return math.inf
        best = max(best, len(levels) - 1)
    return best


def is_strong(d: Orientation) -> bool:
    full = (1 << d.n) - 1

    def reach(masks):
        seen = 0
        for level in bfs_levels(masks, 0):
            seen |= level
        return seen == full

    return reach(d.out_masks) and reach(d.in_masks)


def min_cycle_per_vertex(d: Orientation, rows: Sequence[Sequence[float]] | None = None) -> int:
    """Largest, over all vertices, of the shortest directed cycle through that vertex."""
    if rows is None:
        rows = directed_metrics(d).distances
    worst = 0
    for v in range(d.n):
        through = min((rows[w][v] for w in d.outset(v)), default=math.inf)
        if not math.isfinite(through):
            raise NotStrongError(f"vertex {d.graph.label(v)} lies on no directed cycle")
        worst = max(worst, 1 + int(through))
    if not is_strong(d):
        raise NotStrongError("orientation is not strong")
    return worst


def lift_bound(d: Orientation, cycle_bound: int) -> int:
    """Upper bound on the orientation number of any larger multiplication.

    Valid when every vertex lies on a directed cycle of length at most
    ``cycle_bound``; the bound is ``max(cycle_bound, diameter)``.
    """
    metrics_ = directed_metrics(d)
    if not metrics_.strong:
        raise NotStrongError("orientation is not strong")
    worst = min_cycle_per_vertex(d, metrics_.distances)
    if worst > cycle_bound:
        raise OrientationError(
            f"some vertex has shortest cycle {worst}, exceeding the bound {cycle_bound}")
    return max(cycle_bound, int(metrics_.diameter))


def lift_multiplicity(d: Orientation, t: Sequence[int]) -> Orientation:
    """Extend ``d`` to a larger multiplication by cloning copy 1 of each vertex.

    Every new copy ``(x, v)`` with ``x > s_v`` takes the in/out pattern of
    ``(1, v)``; between two new copies the arc follows the arc between the
    corresponding first copies.
    """
    from .graph import vertex_multiplication

    spec = d.spec
    if spec is None:
        raise OrientationError("lifting needs an orientation of a vertex-multiplication")
    if len(t) != len(spec.s) or any(a < b for a, b in zip(t, spec.s)):
        raise OrientationError("target multiplicities must dominate the current ones")
    big, big_spec = vertex_multiplication(spec.base, t)

    def model(flat: int) -> int:
        x, v = big_spec.coords(flat)
        return spec.vid(x if x <= spec.s[v] else 1, v)

    builder = OrientationBuilder(big, big_spec)
    for a, b in big.edges():
        ma, mb = model(a), model(b)
        if d.has_arc(ma, mb):
            builder.set_arc(a, b, "lifted")
        else:
            builder.set_arc(b, a, "lifted")
    return builder.finalize()


# ---------------------------------------------------------------------------
# text formats

def format_arcs(d: Orientation) -> str:
    arcs = d.arcs()
    lines = [f"{d.n} {len(arcs)}"] + [f"{a + 1} {b + 1}" for a, b in arcs]
    return "\n".join(lines) + "\n"


def parse_arcs(text: str, spec: MulSpec | None = None) -> Orientation:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows:
        raise OrientationError("empty arc list")
    try:
        n, m = (int(x) for x in rows[0])
        arcs = [(int(a) - 1, int(b) - 1) for a, b in rows[1:]]
    except ValueError as exc:
        raise OrientationError(f"malformed arc list: {exc}") from None
    if len(arcs) != m:
        raise OrientationError(f"header promises {m} arcs, found {len(arcs)}")
    graph = Graph.from_edges(n, arcs)
    if graph.m != m:
        raise OrientationError("arc list repeats an edge")
    if spec is not None:
        from .graph import vertex_multiplication
        multiplied, _ = vertex_multiplication(spec.base, spec.s)
        if multiplied.adjacency != graph.adjacency:
            raise OrientationError("arc list does not orient the given multiplication")
        graph = multiplied
    return Orientation.from_arcs(graph, arcs, spec)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def format_dot(d: Orientation, name: str = "D") -> str:
    lines = [f'digraph "{_dot_escape(name)}" {{']
    for v in range(d.n):
        lines.append(f'  {v} [label="{_dot_escape(d.graph.label(v))}"];')
    for a, b in d.arcs():
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
