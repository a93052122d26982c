"""Undirected graphs: standard families, trees, cartesian products and
vertex-multiplications, plus BFS metrics and bridges.

Vertices are flat integers ``0..n-1``.  Products use the row-major id
``u * |V(H)| + x`` for ``<u, x>``; multiplications lay out the copies of each
base vertex contiguously (prefix sums of the multiplicity vector).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Invalid graph input or a graph that violates an operation's precondition."""


class DisconnectedGraphError(GraphError):
    def __init__(self, u: int, v: int):
        super().__init__(f"graph is disconnected: no path between {u} and {v}")
        self.witness = (u, v)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bfs_levels(masks: Sequence[int], source: int, limit: int | None = None) -> list[int]:
    """Level sets (as bitmasks) of a BFS over neighbour masks, starting at ``source``."""
    seen = 1 << source
    frontier = seen
    levels = [frontier]
    while frontier and (limit is None or len(levels) <= limit):
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= masks[v]
        frontier = nxt & ~seen
        if not frontier:
            break
        seen |= frontier
        levels.append(frontier)
    return levels


def distance_rows(masks: Sequence[int]) -> list[list[float]]:
    """All-pairs BFS distances over neighbour masks; unreachable pairs get ``inf``."""
    n = len(masks)
    rows = []
    for s in range(n):
        row = [math.inf] * n
        for d, level in enumerate(bfs_levels(masks, s)):
            for v in iter_bits(level):
                row[v] = d
        rows.append(row)
    return rows


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with sorted, duplicate-free neighbour lists."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    _masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("graph needs at least one vertex")
        if len(self.adjacency) != self.n:
            raise GraphError("adjacency length differs from vertex count")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("label count differs from vertex count")
        masks = []
        for u, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphError(f"neighbour list of {u} is not sorted and duplicate-free")
            mask = 0
            for v in nbrs:
                if v == u:
                    raise GraphError(f"self-loop at {u}")
                if not 0 <= v < self.n or u not in self.adjacency[v]:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")
                mask |= 1 << v
            masks.append(mask)
        object.__setattr__(self, "_masks", tuple(masks))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(n, adjacency, tuple(labels) if labels is not None else None)

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._masks[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def distances_from(self, source: int) -> list[float]:
        row = [math.inf] * self.n
        for d, level in enumerate(bfs_levels(self._masks, source)):
            for v in iter_bits(level):
                row[v] = d
        return row

    def distance(self, u: int, v: int) -> float:
        return self.distances_from(u)[v]

    def is_connected(self) -> bool:
        return all(math.isfinite(d) for d in self.distances_from(0))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[u], index[v]) for u in vertices for v in self.adjacency[u]
                 if v in index and u < v]
        labels = [self.label(v) for v in vertices] if self.labels is not None else None
        return Graph.from_edges(len(vertices), edges, labels)


# ---------------------------------------------------------------------------
# families

def path_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs at least one vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)],
                            [str(i + 1) for i in range(n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least three vertices")
    edges = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    return Graph.from_edges(n, edges, [str(i + 1) for i in range(n)])


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs at least one vertex")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Graph.from_edges(n, edges, [str(i + 1) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves}; vertex 0 is the hub."""
    if leaves < 1:
        raise GraphError("star needs at least one leaf")
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def hypercube_graph(dim: int) -> Graph:
    """Q_dim on bit-strings; vertex id is the integer value of the string."""
    if dim < 1:
        raise GraphError("hypercube exponent must be at least 1")
    n = 1 << dim
    edges = [(v, v ^ (1 << b)) for v in range(n) for b in range(dim) if v < v ^ (1 << b)]
    return Graph.from_edges(n, edges, [format(v, f"0{dim}b") for v in range(n)])


_FAMILIES = {
    "path": path_graph,
    "cycle": cycle_graph,
    "complete": complete_graph,
    "hypercube": hypercube_graph,
    "star": star_graph,
}


def build_family(kind: str, size: int) -> Graph:
    try:
        builder = _FAMILIES[kind]
    except KeyError:
        raise GraphError(f"unknown family {kind!r}; expected one of {sorted(_FAMILIES)}") from None
    return builder(size)


def spider(legs: Sequence[int]) -> Graph:
    """Subdivided star: a hub (vertex 0) with paths of the given lengths attached."""
    edges = []
    nxt = 1
    for length in legs:
        if length < 1:
            raise GraphError("spider legs must have positive length")
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(nxt, edges)


def parse_tree(parents: Sequence[int]) -> Graph:
    """Tree from a 1-based parent array; the root carries the sentinel 0."""
    n = len(parents)
    if n < 1:
        raise GraphError("empty parent array")
    roots = [i for i, p in enumerate(parents) if p == 0]
    if len(roots) != 1:
        raise GraphError(f"expected exactly one root sentinel, found {len(roots)}")
    edges = []
    for i, p in enumerate(parents):
        if p == 0:
            continue
        if not 1 <= p <= n:
            raise GraphError(f"parent index {p} out of range")
        if p - 1 == i:
            raise GraphError(f"vertex {i + 1} is its own parent")
        edges.append((i, p - 1))
    # walk each vertex to the root; revisiting means a cycle
    for start in range(n):
        seen = set()
        v = start
        while parents[v] != 0:
            if v in seen:
                raise GraphError(f"cycle detected through vertex {v + 1}")
            seen.add(v)
            v = parents[v] - 1
    g = Graph.from_edges(n, edges)
    if g.m != n - 1:
        raise GraphError("parent array repeats an edge")
    if not g.is_connected():
        raise GraphError("parent array does not describe a connected tree")
    return g


def tree_to_parents(t: Graph, root: int = 0) -> list[int]:
    parents = [0] * t.n
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in t.neighbors(u):
            if v not in seen:
                seen.add(v)
                parents[v] = u + 1
                queue.append(v)
    return parents


def is_tree(g: Graph) -> bool:
    return g.m == g.n - 1 and g.is_connected()


# ---------------------------------------------------------------------------
# products and multiplications

def cartesian_product(g: Graph, h: Graph) -> Graph:
    nh = h.n
    edges = []
    for u in range(g.n):
        for x, y in h.edges():
            edges.append((u * nh + x, u * nh + y))
    for u, v in g.edges():
        for x in range(nh):
            edges.append((u * nh + x, v * nh + x))
    labels = [f"<{g.label(u)},{h.label(x)}>" for u in range(g.n) for x in range(nh)]
    return Graph.from_edges(g.n * nh, edges, labels)


def product_vertex(h: Graph, flat: int) -> tuple[int, int]:
    return divmod(flat, h.n)


def product_id(h: Graph, u: int, x: int) -> int:
    if not 0 <= x < h.n:
        raise GraphError(f"right coordinate {x} out of range")
    return u * h.n + x


@dataclass(frozen=True)
class MulSpec:
    """Coordinates ``(copy, base vertex)`` for a vertex-multiplication.

    Copies are numbered from 1 as in ``(x, v_i)``; ``offsets[i]`` is the flat id
    of ``(1, v_i)``.
    """

    base: Graph
    s: tuple[int, ...]
    offsets: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.offsets[-1] + self.s[-1]

    def vid(self, copy: int, v: int) -> int:
        if not 1 <= copy <= self.s[v]:
            raise GraphError(f"copy {copy} out of range for base vertex {v} (s={self.s[v]})")
        return self.offsets[v] + copy - 1

    def coords(self, flat: int) -> tuple[int, int]:
        lo, hi = 0, len(self.offsets) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.offsets[mid] <= flat:
                lo = mid
            else:
                hi = mid - 1
        return flat - self.offsets[lo] + 1, lo

    def copies(self, v: int) -> range:
        return range(self.offsets[v], self.offsets[v] + self.s[v])

    def base_of(self, flat: int) -> int:
        return self.coords(flat)[1]


def vertex_multiplication(g: Graph, s: Sequence[int]) -> tuple[Graph, MulSpec]:
    if len(s) != g.n:
        raise GraphError(f"multiplicity vector has length {len(s)}, expected {g.n}")
    if any(k < 1 for k in s):
        raise GraphError("multiplicities must be at least 1")
    offsets, total = [], 0
    for k in s:
        offsets.append(total)
        total += k
    spec = MulSpec(g, tuple(s), tuple(offsets))
    edges = []
    for u, v in g.edges():
        for a in spec.copies(u):
            for b in spec.copies(v):
                edges.append((a, b))
    labels = [f"({x},{g.label(v)})" for v in range(g.n) for x in range(1, s[v] + 1)]
    return Graph.from_edges(total, edges, labels), spec


# ---------------------------------------------------------------------------
# metrics

@dataclass(frozen=True)
class Metrics:
    distances: list[list[float]]
    eccentricities: list[float]
    diameter: float
    radius: float


def metrics(g: Graph) -> Metrics:
    rows = distance_rows(g.masks)
    for u, row in enumerate(rows):
        for v, d in enumerate(row):
            if not math.isfinite(d):
                raise DisconnectedGraphError(u, v)
    ecc = [max(row) for row in rows]
    return Metrics(rows, ecc, max(ecc), min(ecc))


def diameter(g: Graph) -> int:
    return int(metrics(g).diameter)


def bipartition(g: Graph) -> tuple[bool, tuple[list[int], list[int]] | list[int]]:
    """Two-colouring ``(True, (V1, V2))`` or ``(False, odd_cycle)``.

    Vertex 0 of every component lands in V1.
    """
    color = [-1] * g.n
    parent = [-1] * g.n
    for root in range(g.n):
        if color[root] != -1:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    parent[v] = u
                    queue.append(v)
                elif color[v] == color[u]:
                    return False, _odd_cycle(parent, u, v)
    v1 = [v for v in range(g.n) if color[v] == 0]
    v2 = [v for v in range(g.n) if color[v] == 1]
    return True, (v1, v2)


def _odd_cycle(parent: list[int], u: int, v: int) -> list[int]:
    def chain(x):
        out = [x]
        while parent[x] != -1:
            x = parent[x]
            out.append(x)
        return out

    pu, pv = chain(u), chain(v)
    common = set(pu) & set(pv)
    left = []
    for x in pu:
        left.append(x)
        if x in common:
            meet = x
            break
    right = []
    for x in pv:
        if x == meet:
            break
        right.append(x)
    return left + right[::-1]


def bridges(g: Graph) -> list[tuple[int, int]]:
    """Bridges via iterative low-link DFS, as sorted ``(u, v)`` pairs with ``u < v``."""
    disc = [-1] * g.n
    low = [0] * g.n
    out = []
    timer = 0
    for root in range(g.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for v in it:
                if v == parent:
                    continue
                if disc[v] == -1:
                    disc[v] = low[v] = timer
                    timer += 1
                    stack.append((v, u, iter(g.neighbors(v))))
                    advanced = True
                    break
                low[u] = min(low[u], disc[v])
            if advanced:
                continue
            stack.pop()
            if parent != -1:
                low[parent] = min(low[parent], low[u])
                if low[u] > disc[parent]:
                    out.append((min(u, parent), max(u, parent)))
    return sorted(out)


# ---------------------------------------------------------------------------
# tree labelling

@dataclass(frozen=True)
class Role:
    """Position of a tree vertex relative to the centre(s).

    ``depth`` 0 is a centre, 1 a neighbour ``[i]``, 2 a grandchild ``[alpha, i]``.
    ``side`` is 1 or 2 for odd-diameter trees and 0 otherwise.
    """

    depth: int
    side: int = 0
    i: int = 0
    alpha: int = 0

    def __str__(self) -> str:
        suffix = f"_{self.side}" if self.side else ""
        if self.depth == 0:
            return f"c{self.side}" if self.side else "c"
        if self.depth == 1:
            return f"[{self.i}]{suffix}"
        return f"[{self.alpha},{self.i}]{suffix}"


@dataclass(frozen=True)
class TreeLabeling:
    tree: Graph
    diameter: int
    centers: tuple[int, ...]
    roles: tuple[Role, ...]

    @property
    def odd(self) -> bool:
        return len(self.centers) == 2

    @property
    def center(self) -> int:
        if self.odd:
            raise GraphError("odd-diameter tree has two centres")
        return self.centers[0]

    def vertex(self, role: Role | str) -> int:
        key = str(role)
        for v, r in enumerate(self.roles):
            if str(r) == key:
                return v
        raise KeyError(key)

    def tags(self) -> list[str]:
        return [str(r) for r in self.roles]

    def neighbours_of_center(self, side: int = 0) -> list[int]:
        """Vertices tagged ``[i]`` (or ``[i]_side``) in increasing ``i``."""
        found = [(r.i, v) for v, r in enumerate(self.roles) if r.depth == 1 and r.side == side]
        return [v for _, v in sorted(found)]

    def children(self, v: int) -> list[int]:
        r = self.roles[v]
        found = [(c.alpha, w) for w, c in enumerate(self.roles)
                 if c.depth == 2 and c.side == r.side and c.i == r.i]
        return [w for _, w in sorted(found)]


def label_tree(t: Graph) -> TreeLabeling:
    if not is_tree(t):
        raise GraphError("label_tree needs a tree")
    if t.n < 3:
        raise GraphError("tree diameter must lie in [2, 5]")
    m = metrics(t)
    d = int(m.diameter)
    if not 2 <= d <= 5:
        raise GraphError(f"tree diameter {d} outside [2, 5]")
    centers = tuple(v for v in range(t.n) if m.eccentricities[v] == m.radius)
    roles: list[Role | None] = [None] * t.n
    if d % 2 == 0:
        (c,) = centers
        roles[c] = Role(0)
        _label_branch(t, roles, c, exclude=-1, side=0)
    else:
        c1, c2 = centers
        roles[c1] = Role(0, 1)
        roles[c2] = Role(0, 2)
        _label_branch(t, roles, c1, exclude=c2, side=1)
        _label_branch(t, roles, c2, exclude=c1, side=2)
    assert all(r is not None for r in roles)
    return TreeLabeling(t, d, centers, tuple(roles))


def _label_branch(t: Graph, roles: list, center: int, exclude: int, side: int) -> None:
    i = 0
    for nb in t.neighbors(center):
        if nb == exclude:
            continue
        i += 1
        roles[nb] = Role(1, side, i)
        alpha = 0
        for gc in t.neighbors(nb):
            if gc == center:
                continue
            alpha += 1
            roles[gc] = Role(2, side, i, alpha)


# ---------------------------------------------------------------------------
# edge-list text format

def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows:
        raise GraphError("empty edge list")
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(a) - 1, int(b) - 1) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header promises {m} edges, found {len(edges)}")
    g = Graph.from_edges(n, edges)
    if g.m != m:
        raise GraphError("edge list contains duplicate edges")
    return g


def parse_tree_text(text: str) -> Graph:
    try:
        parents = [int(x) for x in text.split()]
    except ValueError as exc:
        raise GraphError(f"malformed parent array: {exc}") from None
    return parse_tree(parents)


def format_tree(t: Graph) -> str:
    return " ".join(str(p) for p in tree_to_parents(t)) + "\n"
