"""Class bookkeeping and lower-bound machinery.

Verdicts are intervals ``[lower, upper]`` on the orientation number.  The
class index is ``value - d(G)`` and is reported only when the interval is a
single point.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .graph import (
    Graph,
    GraphError,
    MulSpec,
    bipartition,
    cartesian_product,
    diameter,
    path_graph,
    vertex_multiplication,
)
from .orientation import Gadget, Orientation, directed_diameter
from .constructions import gadget_of
from .search import SearchBudget, refute_diameter


class HypothesisError(ValueError):
    """Structural preconditions of a check or certificate do not hold."""


@dataclass(frozen=True)
class LowerBound:
    value: int
    kind: str  # window | forcing | sperner | exhaustive
    detail: str = ""


@dataclass(frozen=True)
class ClassVerdict:
    base_diameter: int
    lower: int
    lower_kind: str
    upper: float
    upper_witness: str | None
    window: bool

    @property
    def classes(self) -> list[int]:
        if not math.isfinite(self.upper):
            return [j for j in range(3) if self.base_diameter + j >= self.lower]
        return [j for j in range(self.lower - self.base_diameter, int(self.upper) - self.base_diameter + 1)]

    @property
    def label(self) -> str:
        names = [f"C{j}" for j in self.classes]
        return "|".join(names) if names else "undetermined"

    @property
    def determined(self) -> bool:
        return self.lower == self.upper


def classify(g: Graph, s: Sequence[int], upper_witness: Orientation | None = None,
             lower_cert: LowerBound | None = None, witness_id: str | None = None) -> ClassVerdict:
    """Tightest interval from the three-class window, a witness and a lower-bound certificate."""
    if len(s) != g.n:
        raise GraphError("multiplicity vector length differs from vertex count")
    base = diameter(g)
    window = g.n >= 3 and all(x >= 2 for x in s)
    lower, lower_kind = base, "window" if window else "base-diameter"
    upper: float = base + 2 if window else math.inf
    witness_name = None
    if upper_witness is not None:
        expected, _ = vertex_multiplication(g, s)
        if upper_witness.graph.adjacency != expected.adjacency:
            raise GraphError("witness is not an orientation of the stated multiplication")
        wd = directed_diameter(upper_witness)
        if wd < upper:
            upper = wd
            witness_name = witness_id or "witness"
    if lower_cert is not None and lower_cert.value > lower:
        lower, lower_kind = lower_cert.value, lower_cert.kind
    if lower > upper:
        raise ValueError(f"inconsistent bounds: lower {lower} exceeds upper {upper}")
    return ClassVerdict(base, lower, lower_kind, upper, witness_name, window)


# ---------------------------------------------------------------------------
# pincers forced on two-step paths

class ForcedForm(enum.Enum):
    FIRST = "u0 ->>1 u1 <<-2 u2"
    SECOND = "u0 ->>2 u1 <<-1 u2"
    UNMATCHED = "hypothesis holds but neither form"


def _check_unique_middle(spec: MulSpec, u0: int, u1: int, u2: int) -> None:
    g = spec.base
    if len({u0, u1, u2}) != 3:
        raise HypothesisError("u0, u1, u2 must be distinct")
    if not (g.has_edge(u0, u1) and g.has_edge(u1, u2)):
        raise HypothesisError("u0 u1 u2 is not a path")
    if g.has_edge(u0, u2):
        raise HypothesisError("u0 and u2 are adjacent")
    common = set(g.neighbors(u0)) & set(g.neighbors(u2))
    if common != {u1}:
        raise HypothesisError("u1 is not the only common neighbour of u0 and u2")


def distance_hypothesis(d: Orientation, u0: int, u2: int) -> bool:
    spec = d.spec
    for a in spec.copies(u0):
        for b in spec.copies(u2):
            if d.distance(a, b) != 2 or d.distance(b, a) != 2:
                return False
    return True


def present_forms(d: Orientation, u0: int, u1: int, u2: int) -> list[ForcedForm]:
    found = []
    if gadget_of(d, u0, u1) == (Gadget.TWOHEAD_1, True) and gadget_of(d, u2, u1) == (Gadget.TWOHEAD_2, True):
        found.append(ForcedForm.FIRST)
    if gadget_of(d, u0, u1) == (Gadget.TWOHEAD_2, True) and gadget_of(d, u2, u1) == (Gadget.TWOHEAD_1, True):
        found.append(ForcedForm.SECOND)
    return found


def forced_pincer_form(d: Orientation, u0: int, u1: int, u2: int) -> ForcedForm | None:
    """Which pincer pattern the arcs around ``u1`` form, when distances force one.

    Returns ``None`` when some copy pair of ``u0``/``u2`` is not at distance
    2 in both directions (nothing is forced).
    """
    spec = d.spec
    if spec is None:
        raise HypothesisError("orientation is not on a vertex-multiplication")
    _check_unique_middle(spec, u0, u1, u2)
    if any(spec.s[v] != 2 for v in (u0, u1, u2)):
        raise HypothesisError("u0, u1, u2 need multiplicity 2")
    if not distance_hypothesis(d, u0, u2):
        return None
    forms = present_forms(d, u0, u1, u2)
    return forms[0] if forms else ForcedForm.UNMATCHED


def pincer_path_distance(d: Orientation, path: Sequence[int], i: int) -> int:
    """Confirm ``d_D`` equals the path length between every copy pair of the path ends.

    Needs a shortest base path with a first-form pincer at position ``i`` and
    cyclic gadgets (either direction) on every other consecutive pair.
    """
    spec = d.spec
    if spec is None:
        raise HypothesisError("orientation is not on a vertex-multiplication")
    k = len(path) - 1
    if k < 2 or not 0 <= i <= k - 2:
        raise HypothesisError("need a path of length >= 2 and 0 <= i <= k - 2")
    if any(spec.s[v] != 2 for v in path):
        raise HypothesisError("path vertices need multiplicity 2")
    if spec.base.distance(path[0], path[-1]) != k:
        raise HypothesisError("path is not a shortest path")
    for a, b in zip(path, path[1:]):
        if not spec.base.has_edge(a, b):
            raise HypothesisError("consecutive path vertices are not adjacent")
    if ForcedForm.FIRST not in present_forms(d, path[i], path[i + 1], path[i + 2]):
        raise HypothesisError(f"no first-form pincer at position {i}")
    for j in range(k):
        if j in (i, i + 1):
            continue
        found = gadget_of(d, path[j], path[j + 1])
        if found is None or found[0] is not Gadget.CYCLIC:
            raise HypothesisError(f"pair {j} carries no cyclic gadget")
    for a in spec.copies(path[0]):
        for b in spec.copies(path[-1]):
            if d.distance(a, b) != k or d.distance(b, a) != k:
                raise AssertionError("path bound failed on the full digraph")
    return k


# ---------------------------------------------------------------------------
# antichains

def sperner_max_antichain(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return math.comb(n, n // 2)


@dataclass(frozen=True)
class AntichainCertificate:
    """Two sources whose outsets inside ``block`` are nested: ``O(p) <= O(q)``."""

    p: int
    q: int
    outset_p: tuple[int, ...]
    outset_q: tuple[int, ...]
    guaranteed: bool


ANTICHAIN = "antichain"


def outset_domination(d: Orientation, block: Sequence[int], sources: Sequence[int]
                      ) -> AntichainCertificate | str:
    block = list(block)
    for s in sources:
        for b in block:
            if not d.graph.has_edge(s, b):
                raise HypothesisError(f"source {s} is not adjacent to block vertex {b}")
    bmask = 0
    for b in block:
        bmask |= 1 << b
    outs = [d.out_masks[s] & bmask for s in sources]
    guaranteed = len(sources) > sperner_max_antichain(len(block)) if block else len(sources) > 1
    for x, y in itertools.permutations(range(len(sources)), 2):
        if outs[x] & ~outs[y] == 0:
            bits = lambda m: tuple(v for v in block if m >> v & 1)
            return AntichainCertificate(sources[x], sources[y], bits(outs[x]), bits(outs[y]), guaranteed)
    if guaranteed:
        raise AssertionError("pigeonhole bound exceeded yet no nested outsets found")
    return ANTICHAIN


# ---------------------------------------------------------------------------
# P3 x P2 forcing

MAX_RAIL_EDGES = 16
P3P2_LABELS = ("<1,1>", "<1,2>", "<2,1>", "<2,2>", "<3,1>", "<3,2>")


def p3p2_vertex(i: int, j: int) -> int:
    """Base id of ``<i, j>`` (1-based) in ``P3 x P2``."""
    return (i - 1) * 2 + (j - 1)


@dataclass
class ForcingCertificate:
    status: str  # refuted | witness | inconclusive
    multiplicity: tuple[int, ...]
    rail_patterns: list[int]
    rail_forms: list[list[str]]
    combinations: int
    nodes: int
    pruning: dict[str, int] = field(default_factory=dict)
    witness: Orientation | None = None

    def as_lower_bound(self) -> LowerBound:
        if self.status != "refuted":
            raise ValueError("no lower bound: search did not refute")
        return LowerBound(4, "forcing", f"{self.combinations} forced rail combinations exhausted")


def _supported_shape(s: Sequence[int]) -> str:
    mid = (s[p3p2_vertex(2, 1)], s[p3p2_vertex(2, 2)])
    corners = [s[p3p2_vertex(i, j)] for i in (1, 3) for j in (1, 2)]
    if all(x == 2 for x in s):
        return "all-two"
    if all(c == 2 for c in corners) and sorted(mid)[0] == 2 and max(mid) >= 3:
        return "one-middle"
    if mid == (2, 2) and all(c >= 1 for c in corners):
        return "corners"
    raise HypothesisError(f"multiplicity {tuple(s)} is outside the supported P3 x P2 shapes")


def rail_patterns(g: Graph, spec: MulSpec, j: int) -> list[list[tuple[int, int]]]:
    """All orientations of rail ``<1,j> <2,j> <3,j>`` compatible with diameter 3.

    In a bipartite graph two distinct vertices of one colour class are at even
    distance, so diameter 3 forces distance exactly 2 between every copy of
    ``<1,j>`` and every copy of ``<3,j>``, in both directions, through a copy
    of ``<2,j>`` (their only common base neighbour).
    """
    a, m, c = p3p2_vertex(1, j), p3p2_vertex(2, j), p3p2_vertex(3, j)
    ok, _ = bipartition(g)
    if not ok:
        raise HypothesisError("multiplied graph is not bipartite")
    common = set(spec.base.neighbors(a)) & set(spec.base.neighbors(c))
    if common != {m}:
        raise HypothesisError("rail ends have more than one common neighbour")
    edges = [(x, y) for x in list(spec.copies(a)) + list(spec.copies(c)) for y in spec.copies(m)]
    if len(edges) > MAX_RAIL_EDGES:
        raise HypothesisError(f"rail has {len(edges)} edges; explicit enumeration is capped at {MAX_RAIL_EDGES}")
    ends_a, ends_c, mids = list(spec.copies(a)), list(spec.copies(c)), list(spec.copies(m))
    patterns = []
    for bits in itertools.product((0, 1), repeat=len(edges)):
        arc = {}
        for (x, y), bit in zip(edges, bits):
            arc[(x, y) if bit else (y, x)] = True
        good = all(
            any((p, w) in arc and (w, q) in arc for w in mids)
            and any((q, w) in arc and (w, p) in arc for w in mids)
            for p in ends_a for q in ends_c)
        if good:
            patterns.append(sorted(arc))
    return patterns


def _forms_of_pattern(spec: MulSpec, j: int, pattern: list[tuple[int, int]]) -> str:
    a, m, c = p3p2_vertex(1, j), p3p2_vertex(2, j), p3p2_vertex(3, j)
    arcs = set(pattern)
    if spec.s[m] != 2:
        return "n/a"
    for name, (x, y) in (("first", (1, 2)), ("second", (2, 1))):
        mx, my = spec.vid(x, m), spec.vid(y, m)
        if all((p, mx) in arcs and (mx, q) in arcs and (q, my) in arcs and (my, p) in arcs
               for p in spec.copies(a) for q in spec.copies(c)):
            return name
    return "other"


def forcing_lower_bound_p3p2(s: Sequence[int], budget: SearchBudget | None = None
                             ) -> ForcingCertificate:
    """Show ``(P3 x P2)(s)`` has no orientation of diameter 3.

    Rails are pinned to every pattern the distance-2 condition allows; each
    combination is then handed to the exhaustive search with those arcs fixed.
    """
    s = tuple(s)
    if len(s) != 6:
        raise HypothesisError("P3 x P2 has six vertices")
    _supported_shape(s)
    base = cartesian_product(path_graph(3), path_graph(2))
    g, spec = vertex_multiplication(base, s)
    rails = [rail_patterns(g, spec, j) for j in (1, 2)]
    forms = [[_forms_of_pattern(spec, j, p) for p in rails[j - 1]] for j in (1, 2)]
    budget = budget or SearchBudget()
    nodes, combos = 0, 0
    pruning: dict[str, int] = {}
    status = "refuted"
    for first, second in itertools.product(*rails):
        combos += 1
        res = refute_diameter(g, 3, first + second, budget)
        nodes += res.nodes
        for key, val in res.pruning.items():
            pruning[key] = pruning.get(key, 0) + val
        if res.status == "witness":
            return ForcingCertificate("witness", s, [len(r) for r in rails], forms, combos, nodes,
                                      pruning, res.witness)
        if res.status == "budget":
            status = "inconclusive"
    return ForcingCertificate(status, s, [len(r) for r in rails], forms, combos, nodes, pruning)


def _walks(g: Graph, source: int, length: int) -> int:
    """Mask of vertices reachable from ``source`` by a walk of exactly ``length`` steps."""
    current = 1 << source
    for _ in range(length):
        nxt = 0
        for v in range(g.n):
            if current >> v & 1:
                nxt |= g.masks[v]
        current = nxt
    return current


def sperner_lower_bound(g: Graph, sources: Sequence[int], block: Sequence[int]) -> LowerBound:
    """Certify that every orientation of ``g`` has diameter at least 4.

    Needs pairwise non-adjacent sources with no length-3 walk between any two of
    them, all common neighbours inside ``block``, and more sources than the
    largest antichain on ``block``.  Then two sources have nested outsets inside
    the block, so neither reaches the other in 2 steps, nor (by the walk
    condition) in 1 or 3.
    """
    bmask = 0
    for b in block:
        bmask |= 1 << b
    sources = list(sources)
    for x, y in itertools.combinations(sources, 2):
        if g.has_edge(x, y):
            raise HypothesisError(f"sources {x} and {y} are adjacent")
        if g.masks[x] & g.masks[y] & ~bmask:
            raise HypothesisError(f"sources {x} and {y} share a neighbour outside the block")
        if _walks(g, x, 3) >> y & 1:
            raise HypothesisError(f"sources {x} and {y} are joined by a walk of length 3")
    bound = sperner_max_antichain(len(block))
    if len(sources) <= bound:
        raise HypothesisError(f"{len(sources)} sources do not exceed the antichain bound {bound}")
    return LowerBound(4, "sperner", f"{len(sources)} sources over a {len(block)}-vertex block")
