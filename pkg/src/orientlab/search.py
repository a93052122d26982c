"""Branch-and-bound over edge directions: exact orientation numbers and refutations.

A partial assignment is judged by its optimistic relaxation: decided edges
point one way, undecided edges may be walked both ways.  If some vertex
cannot reach every other vertex within ``k`` steps even then, no completion
has diameter ``<= k``.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .graph import Graph, GraphError, bridges, diameter
from .orientation import Orientation, directed_diameter


class BridgedGraphError(GraphError):
    def __init__(self, bridge: tuple[int, int]):
        super().__init__("bridged: no strong orientation")
        self.bridge = bridge


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 5_000_000
    max_seconds: float | None = None
    symmetry: bool = True
    max_automorphisms: int = 4096
    symmetry_prefix: int = 10


@dataclass
class SearchResult:
    """Outcome of one ``refute_diameter`` call.

    ``status`` is ``"witness"`` (an orientation of diameter ``<= k`` was found),
    ``"refuted"`` (the reduced space was exhausted) or ``"budget"``.
    """

    status: str
    k: int
    witness: Orientation | None
    nodes: int
    pruning: dict[str, int]
    symmetry: bool
    group_size: int
    prefix_length: int
    fixed_arcs: int

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"

    def certificate(self) -> dict:
        out = {
            "status": self.status,
            "k": self.k,
            "nodes": self.nodes,
            "pruning": dict(sorted(self.pruning.items())),
            "symmetry": self.symmetry,
            "automorphisms_used": self.group_size,
            "symmetry_prefix": self.prefix_length,
            "fixed_arcs": self.fixed_arcs,
        }
        if self.witness is not None:
            out["witness_diameter"] = int(directed_diameter(self.witness))
        return out


@dataclass
class OrientationNumberResult:
    value: int | None
    lower: int
    upper: float
    witness: Orientation | None
    steps: list[SearchResult] = field(default_factory=list)

    @property
    def nodes(self) -> int:
        return sum(s.nodes for s in self.steps)


def edge_order(g: Graph) -> list[int]:
    """Edge indices by descending betweenness, ties broken by index."""
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges())
    score = nx.edge_betweenness_centrality(nxg, normalized=False)
    edges = g.edges()
    return sorted(range(len(edges)), key=lambda i: (-round(score[edges[i]], 9), i))


def automorphisms(g: Graph, limit: int) -> list[tuple[int, ...]]:
    """Up to ``limit`` automorphisms (identity first), in matcher order."""
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges())
    out = []
    matcher = nx.algorithms.isomorphism.GraphMatcher(nxg, nxg)
    for mapping in matcher.isomorphisms_iter():
        out.append(tuple(mapping[v] for v in range(g.n)))
        if len(out) >= limit:
            break
    ident = tuple(range(g.n))
    if ident in out:
        out.remove(ident)
    return [ident] + out


class _Search:
    def __init__(self, g: Graph, k: int, fixed: Sequence[tuple[int, int]], budget: SearchBudget):
        self.g, self.k, self.budget = g, k, budget
        self.edges = g.edges()
        self.index = {e: i for i, e in enumerate(self.edges)}
        self.n = g.n
        self.full = (1 << g.n) - 1
        self.assign = [0] * len(self.edges)  # +1: low -> high, -1: high -> low
        self.out = [0] * g.n
        self.inn = [0] * g.n
        self.und = list(g.masks)
        self.trail: list[int] = []
        self.stats: Counter = Counter()
        self.nodes = 0
        self.started = time.monotonic()
        for a, b in fixed:
            if not g.has_edge(a, b):
                raise GraphError(f"fixed arc {a}->{b} is not an edge")
            i = self.index[(min(a, b), max(a, b))]
            want = 1 if a < b else -1
            if self.assign[i] == -want:
                raise GraphError(f"fixed arcs orient edge {a}-{b} both ways")
            if self.assign[i] == 0:
                self._set(i, want)
        self.fixed_count = len(self.trail)
        self.trail.clear()

    # -- state --------------------------------------------------------------
    def _set(self, i: int, sign: int) -> None:
        u, v = self.edges[i]
        a, b = (u, v) if sign > 0 else (v, u)
        self.assign[i] = sign
        self.out[a] |= 1 << b
        self.inn[b] |= 1 << a
        self.und[a] &= ~(1 << b)
        self.und[b] &= ~(1 << a)
        self.trail.append(i)

    def _undo_to(self, mark: int) -> None:
        while len(self.trail) > mark:
            i = self.trail.pop()
            u, v = self.edges[i]
            a, b = (u, v) if self.assign[i] > 0 else (v, u)
            self.assign[i] = 0
            self.out[a] &= ~(1 << b)
            self.inn[b] &= ~(1 << a)
            self.und[a] |= 1 << b
            self.und[b] |= 1 << a

    # -- pruning ------------------------------------------------------------
    def _reachable(self) -> bool:
        """Every vertex reaches every other within ``k`` steps in the relaxation."""
        full, k = self.full, self.k
        reach = [o | u for o, u in zip(self.out, self.und)]
        for s in range(self.n):
            seen = frontier = 1 << s
            for _ in range(k):
                nxt = 0
                f = frontier
                while f:
                    low = f & -f
                    nxt |= reach[low.bit_length() - 1]
                    f ^= low
                frontier = nxt & ~seen
                if not frontier:
                    break
                seen |= frontier
            if seen != full:
                return False
        return True

    def _dead(self, vertices: Iterable[int]) -> bool:
        for x in vertices:
            if not self.und[x] and (not self.out[x] or not self.inn[x]):
                return True
        return False

    def _propagate(self) -> bool:
        """Unit rule: a vertex with one undecided edge and no out- (in-) arc must use it that way."""
        changed = True
        while changed:
            changed = False
            for x in range(self.n):
                und = self.und[x]
                if und and und & (und - 1) == 0:
                    y = und.bit_length() - 1
                    if not self.out[x]:
                        self._decide(x, y)
                        self.stats["forced"] += 1
                        changed = True
                    elif not self.inn[x]:
                        self._decide(y, x)
                        self.stats["forced"] += 1
                        changed = True
            if changed and self._dead(range(self.n)):
                self.stats["dead-vertex"] += 1
                return False
        return True

    def _decide(self, a: int, b: int) -> None:
        i = self.index[(min(a, b), max(a, b))]
        self._set(i, 1 if a < b else -1)

    def _feasible(self) -> bool:
        if not self._propagate():
            return False
        if not self._reachable():
            self.stats["distance-bound"] += 1
            return False
        return True

    def _probe(self) -> bool:
        """Failed-literal probing: fix any edge whose one direction is already infeasible."""
        changed = True
        while changed:
            changed = False
            for i in range(len(self.edges)):
                if self.assign[i]:
                    continue
                ok = []
                for sign in (1, -1):
                    mark = len(self.trail)
                    self._set(i, sign)
                    ok.append(self._feasible())
                    self._undo_to(mark)
                if not ok[0] and not ok[1]:
                    self.stats["probe-refuted"] += 1
                    return False
                if ok[0] != ok[1]:
                    self._set(i, 1 if ok[0] else -1)
                    self.stats["probe-forced"] += 1
                    changed = True
        return True

    # -- symmetry -----------------------------------------------------------
    def _setup_symmetry(self, order: list[int]) -> None:
        self.prefix: list[int] = []
        self.maps: list[tuple[list[int], list[int]]] = []
        self.group_size = 1
        self.allow_reverse = False
        if not self.budget.symmetry:
            return
        free = [i for i in order if not self.assign[i]]
        self.prefix = free[: self.budget.symmetry_prefix]
        if not self.prefix:
            return
        fixed = {(min(e), max(e)): self.assign[i] for i, e in enumerate(self.edges) if self.assign[i]}
        self.allow_reverse = not fixed
        pos = {e: j for j, e in enumerate(self.prefix)}
        prefix_set = set(self.prefix)
        kept = []
        for sigma in automorphisms(self.g, self.budget.max_automorphisms)[1:]:
            if not self._preserves(sigma, fixed):
                continue
            perm, sign = [], []
            ok = True
            for i in self.prefix:
                u, v = self.edges[i]
                a, b = sigma[u], sigma[v]
                j = self.index[(min(a, b), max(a, b))]
                if j not in prefix_set:
                    ok = False
                    break
                perm.append(pos[j])
                sign.append(1 if a < b else -1)
            if ok:
                kept.append((perm, sign))
        self.maps = kept
        self.group_size = len(kept) + 1

    def _preserves(self, sigma, fixed) -> bool:
        for (u, v), s in fixed.items():
            a, b = (u, v) if s > 0 else (v, u)
            x, y = sigma[a], sigma[b]
            e = (min(x, y), max(x, y))
            if fixed.get(e) != (1 if x < y else -1):
                return False
        return True

    def _is_leader(self) -> bool:
        """The prefix assignment is lexicographically minimal in its orbit."""
        vals = [self.assign[i] for i in self.prefix]
        key = [0 if x > 0 else 1 for x in vals]
        images = []
        for perm, sign in self.maps:
            img = [0] * len(vals)
            for j, (p, s) in enumerate(zip(perm, sign)):
                img[p] = vals[j] * s
            images.append(img)
        if self.allow_reverse:
            images += [[-x for x in img] for img in images] + [[-x for x in vals]]
        for img in images:
            other = [0 if x > 0 else 1 for x in img]
            if other < key:
                return False
        return True

    # -- driver -------------------------------------------------------------
    def run(self) -> SearchResult:
        order = edge_order(self.g)
        status, witness = "refuted", None
        self.nodes = 1  # the root, where probing happens
        try:
            if not self._feasible():
                pass
            elif not self._probe():
                pass
            else:
                self._setup_symmetry(order)
                self.order = order
                self.nodes -= 1  # the first dfs call re-counts the root
                witness = self._dfs(not self.prefix)
                if witness is not None:
                    status = "witness"
        except BudgetExceeded:
            status = "budget"
        if not hasattr(self, "prefix"):
            self.prefix, self.group_size = [], 1
        return SearchResult(status, self.k, witness, self.nodes, dict(self.stats),
                            self.budget.symmetry, self.group_size, len(self.prefix),
                            self.fixed_count)

    def _dfs(self, leader_checked: bool) -> Orientation | None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise BudgetExceeded
        if self.budget.max_seconds is not None and self.nodes % 256 == 0:
            if time.monotonic() - self.started > self.budget.max_seconds:
                raise BudgetExceeded
        if not leader_checked and all(self.assign[i] for i in self.prefix):
            if not self._is_leader():
                self.stats["symmetry"] += 1
                return None
            leader_checked = True
        nxt = next((i for i in self.order if not self.assign[i]), None)
        if nxt is None:
            return Orientation(self.g, tuple(s > 0 for s in self.assign))
        for sign in (1, -1):
            mark = len(self.trail)
            self._set(nxt, sign)
            u, v = self.edges[nxt]
            if self._dead((u, v)):
                self.stats["dead-vertex"] += 1
            elif self._feasible():
                found = self._dfs(leader_checked)
                if found is not None:
                    return found
            self._undo_to(mark)
        return None


def _require_bridgeless(g: Graph) -> None:
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    found = bridges(g)
    if found:
        raise BridgedGraphError(found[0])


def refute_diameter(g: Graph, k: int, fixed: Sequence[tuple[int, int]] = (),
                    budget: SearchBudget | None = None) -> SearchResult:
    """Search for an orientation of diameter ``<= k`` extending ``fixed``, or prove none exists."""
    _require_bridgeless(g)
    if k < 1:
        raise ValueError("k must be positive")
    result = _Search(g, k, list(fixed), budget or SearchBudget()).run()
    if result.witness is not None:
        assert directed_diameter(result.witness) <= k
    return result


def orientation_number(g: Graph, budget: SearchBudget | None = None) -> OrientationNumberResult:
    """Exact minimum diameter over strong orientations, searching ``k = d(g), d(g)+1, ...``."""
    _require_bridgeless(g)
    budget = budget or SearchBudget()
    k = max(diameter(g), 1)
    steps = []
    spent = 0
    while True:
        remaining = SearchBudget(budget.max_nodes - spent, budget.max_seconds, budget.symmetry,
                                 budget.max_automorphisms, budget.symmetry_prefix)
        step = refute_diameter(g, k, (), remaining)
        steps.append(step)
        spent += step.nodes
        if step.status == "witness":
            return OrientationNumberResult(k, k, k, step.witness, steps)
        if step.status == "budget":
            return OrientationNumberResult(None, k, math.inf, None, steps)
        k += 1
