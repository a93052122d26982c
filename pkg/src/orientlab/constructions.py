"""Explicit strong orientations of 2-multiplied cartesian products.

Every builder stages arcs through :class:`OrientationBuilder`, so each arc
remembers the rule that placed it and overlapping rules raise instead of
silently overwriting each other.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Sequence

from .graph import (
    Graph,
    GraphError,
    MulSpec,
    TreeLabeling,
    bipartition,
    cartesian_product,
    complete_graph,
    cycle_graph,
    diameter,
    hypercube_graph,
    label_tree,
    parse_tree,
    path_graph,
    spider,
    star_graph,
    vertex_multiplication,
)
from .orientation import (
    Gadget,
    Orientation,
    OrientationBuilder,
    OrientationError,
    directed_diameter,
    _GADGET_SHAPES,
)

PAR, CYC, TH1, TH2 = Gadget.PARALLEL, Gadget.CYCLIC, Gadget.TWOHEAD_1, Gadget.TWOHEAD_2


class ConstructionError(ValueError):
    pass


class NotProvidedError(ConstructionError):
    """The requested instance is known to be orientable but no explicit rule set is provided."""


@dataclass(frozen=True)
class ConstructionResult:
    id: str
    orientation: Orientation
    claimed_diameter: int
    claimed_class: str
    exact: bool = True
    cycle_bound: int = 4
    base_diameter: int = 0

    @property
    def spec(self) -> MulSpec:
        return self.orientation.spec


class ProductFrame:
    """``(G x H)^(s)`` with a staging builder and ``<u, x>`` addressing."""

    def __init__(self, g: Graph, h: Graph, s: Sequence[int] | None = None):
        self.g, self.h = g, h
        self.product = cartesian_product(g, h)
        mult = list(s) if s is not None else [2] * self.product.n
        self.graph, self.spec = vertex_multiplication(self.product, mult)
        self.builder = OrientationBuilder(self.graph, self.spec)

    def at(self, u: int, x: int) -> int:
        return u * self.h.n + x

    def copy(self, p: int, u: int, x: int) -> int:
        return self.spec.vid(p, self.at(u, x))

    def gadget(self, kind: Gadget, a: tuple[int, int], b: tuple[int, int], rule: str) -> None:
        self.builder.gadget(kind, self.at(*a), self.at(*b), rule)

    def soft(self, kind: Gadget, a: tuple[int, int], b: tuple[int, int], rule: str) -> None:
        self.builder.gadget_unless_set(kind, self.at(*a), self.at(*b), rule)

    def chain(self, kind: Gadget, cells: Sequence[tuple[int, int]], rule: str) -> None:
        for a, b in zip(cells, cells[1:]):
            self.gadget(kind, a, b, rule)

    def finish(self) -> Orientation:
        return self.builder.finalize()


def _result(cid: str, d: Orientation, claimed: int, cls: str, base: Graph, *,
            exact: bool = True, cycle_bound: int = 4) -> ConstructionResult:
    return ConstructionResult(cid, d, claimed, cls, exact, cycle_bound, diameter(base))


# ---------------------------------------------------------------------------
# trees

def _as_labeling(t: TreeLabeling | Graph) -> TreeLabeling:
    return t if isinstance(t, TreeLabeling) else label_tree(t)


def _side(lab: TreeLabeling, side: int) -> list[tuple[int, list[int]]]:
    """``[(neighbour, its children), ...]`` of one centre, in tag order."""
    return [(v, lab.children(v)) for v in lab.neighbours_of_center(side)]


def _hang(lab: TreeLabeling, side: int) -> list[int]:
    """Vertices hanging off a centre (depth 1 or 2) on the given side."""
    return [v for v, r in enumerate(lab.roles) if r.depth >= 1 and r.side == side]


def _fiber_toward_center(frame: ProductFrame, lab: TreeLabeling, center: int, side: int,
                         fixed: int, axis: str, rule: str) -> None:
    """Orient the tree-edges of one branch side toward ``center`` with cyclic gadgets.

    ``axis`` chooses whether the tree is the left (``"left"``) or right factor;
    ``fixed`` is the coordinate held constant in the other factor.
    """

    def cell(v):
        return (v, fixed) if axis == "left" else (fixed, v)

    for nb, kids in _side(lab, side):
        for kid in kids:
            frame.soft(CYC, cell(kid), cell(nb), rule)
        frame.soft(CYC, cell(nb), cell(center), rule)


def _tree_tree_even_odd(frame: ProductFrame, left: TreeLabeling, right: TreeLabeling) -> None:
    c = left.center
    d1, d2 = right.centers
    for y in left.neighbours_of_center():
        frame.chain(PAR, [(c, d2), (y, d2), (y, d1), (c, d1), (c, d2)], "backbone")
    for x in range(left.tree.n):
        _fiber_toward_center(frame, right, d1, 1, x, "right", "right-fiber")
        _fiber_toward_center(frame, right, d2, 2, x, "right", "right-fiber")
        frame.soft(CYC, (x, d2), (x, d1), "right-fiber")
    for y in _hang(right, 1) + _hang(right, 2):
        _fiber_toward_center(frame, left, c, 0, y, "left", "left-fiber")
    for y in (d1, d2):
        for nb, kids in _side(left, 0):
            for kid in kids:
                frame.soft(CYC, (kid, y), (nb, y), "left-fiber")


def _tree_tree_even_even(frame: ProductFrame, left: TreeLabeling, right: TreeLabeling) -> None:
    c, d = left.center, right.center
    for i in left.neighbours_of_center():
        frame.gadget(PAR, (i, d), (c, d), "backbone")
        for j in right.neighbours_of_center():
            frame.gadget(PAR, (c, j), (i, j), "backbone")
    for y in range(right.tree.n):
        _fiber_toward_center(frame, left, c, 0, y, "left", "left-fiber")
    for x in range(left.tree.n):
        _fiber_toward_center(frame, right, d, 0, x, "right", "right-fiber")


def _tree_tree_odd_odd(frame: ProductFrame, left: TreeLabeling, right: TreeLabeling) -> None:
    c1, c2 = left.centers
    d1, d2 = right.centers
    for i in right.neighbours_of_center(1):
        frame.chain(PAR, [(c1, i), (c1, d1), (c2, d1), (c2, i), (c1, i)], "backbone")
    for j in right.neighbours_of_center(2):
        frame.chain(PAR, [(c1, j), (c1, d2), (c2, d2), (c2, j), (c1, j)], "backbone")
    for x in range(left.tree.n):
        _fiber_toward_center(frame, right, d1, 1, x, "right", "right-fiber")
        _fiber_toward_center(frame, right, d2, 2, x, "right", "right-fiber")
        frame.soft(CYC, (x, d2), (x, d1), "right-fiber")
    deep = [v for v, r in enumerate(right.roles) if r.depth == 2]
    for y in range(right.tree.n):
        _fiber_toward_center(frame, left, c1, 1, y, "left", "left-fiber")
        _fiber_toward_center(frame, left, c2, 2, y, "left", "left-fiber")
    for y in deep:
        frame.soft(CYC, (c2, y), (c1, y), "left-fiber")


def tree_tree(left: TreeLabeling | Graph, right: TreeLabeling | Graph,
              cid: str | None = None) -> ConstructionResult:
    """Orientation of ``(T_lam x T_mu)^(2)`` with diameter ``lam + mu``.

    Supported: ``2 <= lam, mu <= 5`` except ``(2, 2)``.  Pairs whose parity
    pattern has no direct rule set are built on the transposed product and
    mapped back.
    """
    for t in (left, right):
        tree = t.tree if isinstance(t, TreeLabeling) else t
        if tree.n >= 2 and diameter(tree) >= 6:
            raise NotProvidedError(
                "tree diameter >= 6: no explicit construction is provided; "
                "lift a smaller product with lift_product instead")
    a, b = _as_labeling(left), _as_labeling(right)
    lam, mu = a.diameter, b.diameter
    cid = cid or f"tree_tree:{lam},{mu}"
    if lam == 2 and mu == 2:
        raise ConstructionError("tree_tree needs at least one tree of diameter >= 3")
    direct = ((lam % 2 == 0 and mu % 2 == 1) or (lam % 2 == 1 and mu % 2 == 1)
              or (lam % 2 == 0 and mu == 4))
    if not direct:
        swapped = tree_tree(b, a, cid)
        return _result(cid, transpose(swapped.orientation, b.tree, a.tree), lam + mu, "C0",
                       cartesian_product(a.tree, b.tree))
    frame = ProductFrame(a.tree, b.tree)
    if lam % 2 == 0 and mu % 2 == 1:
        _tree_tree_even_odd(frame, a, b)
    elif lam % 2 == 0:
        _tree_tree_even_even(frame, a, b)
    else:
        _tree_tree_odd_odd(frame, a, b)
    return _result(cid, frame.finish(), lam + mu, "C0", frame.product)


def transpose(d: Orientation, g: Graph, h: Graph) -> Orientation:
    """Map an orientation of ``(G x H)^(s)`` onto ``(H x G)^(s')`` by swapping coordinates."""
    spec = d.spec
    target_base = cartesian_product(h, g)

    def swap(base_vertex: int) -> int:
        u, x = divmod(base_vertex, h.n)
        return x * g.n + u

    s = [0] * target_base.n
    for v in range(spec.base.n):
        s[swap(v)] = spec.s[v]
    graph, tspec = vertex_multiplication(target_base, s)
    builder = OrientationBuilder(graph, tspec)
    for a, b in d.arcs():
        pa, ua = spec.coords(a)
        pb, ub = spec.coords(b)
        builder.set_arc(tspec.vid(pa, swap(ua)), tspec.vid(pb, swap(ub)), d.rule_of(a, b) or "input")
    return builder.finalize()


# ---------------------------------------------------------------------------
# grids

def grid(lam: int, mu: int) -> ConstructionResult:
    """Orientation of ``(P_lam x P_mu)^(2)``; cells are addressed 1-based as ``<i, j>``."""
    if lam < mu or mu < 2:
        raise ConstructionError("grid needs lam >= mu >= 2")
    if (lam, mu) == (2, 2):
        raise ConstructionError("grid:2,2 is excluded (P2 x P2 is a 4-cycle)")
    frame = ProductFrame(path_graph(lam), path_graph(mu))

    def c(i, j):
        return (i - 1, j - 1)

    def pincer(a, mid, b, rule):
        frame.gadget(TH1, a, mid, rule)
        frame.gadget(TH2, b, mid, rule)

    if (lam, mu) == (3, 2):
        for j in (1, 2):
            pincer(c(1, j), c(2, j), c(3, j), "pincer")
        for i in (1, 2, 3):
            frame.gadget(CYC, c(i, 1), c(i, 2), "rung")
        return _result("grid:3,2", frame.finish(), 4, "C1", frame.product)
    if mu == 2:
        pincer(c(1, 2), c(2, 2), c(3, 2), "pincer")
        pincer(c(lam - 2, 1), c(lam - 1, 1), c(lam, 1), "pincer")
        for i in range(1, lam + 1):
            frame.gadget(CYC, c(i, 1), c(i, 2), "rung")
        for j in range(1, lam - 2):
            frame.gadget(CYC, c(j, 1), c(j + 1, 1), "row")
        for k in range(3, lam):
            frame.gadget(CYC, c(k, 2), c(k + 1, 2), "row")
        return _result(f"grid:{lam},2", frame.finish(), lam, "C0", frame.product)
    a, b = (lam + 1) // 2, (mu + 1) // 2
    pincer(c(a - 1, b), c(a, b), c(a + 1, b), "pincer")
    pincer(c(a, b - 1), c(a, b), c(a, b + 1), "pincer")
    for i in range(1, lam + 1):
        for j in range(1, mu + 1):
            if i < lam:
                frame.soft(CYC, c(i, j), c(i + 1, j), "increasing")
            if j < mu:
                frame.soft(CYC, c(i, j), c(i, j + 1), "increasing")
    return _result(f"grid:{lam},{mu}", frame.finish(), lam + mu - 2, "C0", frame.product)


# ---------------------------------------------------------------------------
# hypercube

# two 4-cycles 1234 and 5678 with i ~ i+4, placed on bit-strings by Gray code
Q3_CELLS = (0b000, 0b001, 0b011, 0b010, 0b100, 0b101, 0b111, 0b110)


def q3() -> ConstructionResult:
    cube = hypercube_graph(3)
    g, spec = vertex_multiplication(cube, [2] * 8)
    builder = OrientationBuilder(g, spec)

    def put(kind, i, j):
        builder.gadget(kind, Q3_CELLS[i - 1], Q3_CELLS[j - 1], f"{kind.name}({i},{j})")

    for i in (1, 5):
        for a, b in ((i, i + 1), (i + 1, i + 2), (i + 2, i + 3), (i, i + 3)):
            put(CYC, a, b)
    for a, b in ((4, 8), (2, 6), (5, 1), (7, 3)):
        put(PAR, a, b)
    return _result("q3", builder.finalize(), 3, "C0", cube)


# ---------------------------------------------------------------------------
# tree x cycle

def tree_cycle(t: TreeLabeling | Graph, mu: int, cid: str | None = None) -> ConstructionResult:
    tree = t.tree if isinstance(t, TreeLabeling) else t
    lam = diameter(tree)
    cid = cid or f"tree_cycle:{lam},{mu}"
    if lam >= 2 and mu >= 4:
        frame = ProductFrame(tree, cycle_graph(mu))
        ok, parts = bipartition(tree)
        assert ok
        first, _ = parts
        first = set(first)
        for u in range(tree.n):
            for x in range(mu):
                nxt = (x + 1) % mu
                if u in first:
                    frame.gadget(PAR, (u, x), (u, nxt), "cycle-fiber")
                else:
                    frame.gadget(PAR, (u, nxt), (u, x), "reversed-cycle-fiber")
        for u, v in tree.edges():
            tail, head = (u, v) if u in first else (v, u)
            for x in range(mu):
                frame.gadget(CYC, (tail, x), (head, x), "tree-fiber")
        return _result(cid, frame.finish(), lam + mu // 2, "C0", frame.product)
    if lam == 3 and mu == 3:
        lab = _as_labeling(t)
        frame = ProductFrame(tree, cycle_graph(3))
        c1, c2 = lab.centers
        frame.chain(PAR, [(c1, 0), (c1, 1), (c1, 2), (c1, 0)], "centre-cycle")
        frame.chain(PAR, [(c2, 2), (c2, 1), (c2, 0), (c2, 2)], "centre-cycle")
        for y in range(3):
            for i in lab.neighbours_of_center(1):
                frame.gadget(TH1, (i, y), (c1, y), "pincer")
            frame.gadget(TH2, (c2, y), (c1, y), "pincer")
            for j in lab.neighbours_of_center(2):
                frame.gadget(CYC, (c2, y), (j, y), "spoke")
        for leaf in lab.neighbours_of_center(1) + lab.neighbours_of_center(2):
            frame.chain(CYC, [(leaf, 0), (leaf, 1), (leaf, 2), (leaf, 0)], "leaf-cycle")
        return _result(cid, frame.finish(), 4, "C0", frame.product)
    raise ConstructionError(f"tree_cycle supports lam >= 2 with mu >= 4, or lam = mu = 3 (got {lam},{mu})")


# ---------------------------------------------------------------------------
# complete-graph fibres

def _complete_fiber(frame: ProductFrame, u: int, mu: int) -> None:
    """Triangle-rich orientation of one ``K_mu`` fibre: ``j -> 1`` for ``j >= 3``, otherwise upward."""
    for j1 in range(1, mu + 1):
        for j2 in range(j1 + 1, mu + 1):
            if j1 == 1 and j2 >= 3:
                frame.gadget(CYC, (u, j2 - 1), (u, 0), "complete-fiber")
            else:
                frame.gadget(CYC, (u, j1 - 1), (u, j2 - 1), "complete-fiber")


def t2_complete(t: TreeLabeling | Graph, mu: int, cid: str | None = None) -> ConstructionResult:
    lab = _as_labeling(t)
    if lab.diameter != 2:
        raise ConstructionError("t2_complete needs a tree of diameter 2")
    if mu < 3:
        raise ConstructionError("t2_complete needs mu >= 3")
    c = lab.center
    spokes = lab.neighbours_of_center()
    cid = cid or f"t2_complete:{len(spokes)},{mu}"
    frame = ProductFrame(lab.tree, complete_graph(mu))
    for j in range(mu):
        frame.gadget(TH1, (spokes[0], j), (c, j), "pincer")
        for i in spokes[1:]:
            frame.gadget(TH2, (i, j), (c, j), "pincer")
    for v in range(lab.tree.n):
        _complete_fiber(frame, v, mu)
    if len(spokes) == 2:
        return _result(cid, frame.finish(), 3, "C0", frame.product, cycle_bound=3)
    return _result(cid, frame.finish(), 4, "C1", frame.product, cycle_bound=3)


def p2_complete(mu: int) -> ConstructionResult:
    if mu < 3:
        raise ConstructionError("p2_complete needs mu >= 3")
    frame = ProductFrame(path_graph(2), complete_graph(mu))
    frame.gadget(PAR, (1, 0), (0, 0), "rung")
    frame.gadget(PAR, (0, 1), (1, 1), "rung")
    for i in range(2, mu):
        frame.gadget(CYC, (0, i), (1, i), "rung")
    for k in (0, 1):
        _complete_fiber(frame, k, mu)
    return _result(f"p2_complete:{mu}", frame.finish(), 3, "C1", frame.product, cycle_bound=3)


# ---------------------------------------------------------------------------
# cycle x cycle

def cycle_cycle(lam: int, mu: int) -> ConstructionResult:
    if mu < 3 or lam < mu:
        raise ConstructionError("cycle_cycle needs lam >= mu >= 3")
    if (lam, mu) == (4, 3):
        return _c4c3()
    if mu == 3 and lam != 3:
        raise NotProvidedError(f"no explicit orientation is provided for C{lam} x C3")
    frame = ProductFrame(cycle_graph(lam), cycle_graph(mu))
    for u in range(lam):
        odd = (u + 1) % 2 == 1
        for x in range(mu):
            nxt = (x + 1) % mu
            if odd:
                frame.gadget(PAR, (u, x), (u, nxt), "cycle-fiber")
            else:
                frame.gadget(PAR, (u, nxt), (u, x), "reversed-cycle-fiber")
            frame.gadget(CYC, (u, x), ((u + 1) % lam, x), "around")
    if (lam, mu) == (3, 3):
        return _result("cycle_cycle:3,3", frame.finish(), 3, "C0|C1", frame.product, cycle_bound=3)
    return _result(f"cycle_cycle:{lam},{mu}", frame.finish(), lam // 2 + mu // 2, "C0", frame.product)


def _c4c3() -> ConstructionResult:
    frame = ProductFrame(cycle_graph(4), cycle_graph(3))

    def c(i, j):
        return (i - 1, j - 1)

    for i in (1, 2, 3):
        frame.gadget(CYC, c(2, i), c(1, i), "rung")
        frame.gadget(CYC, c(3, i), c(4, i), "rung")
    frame.chain(PAR, [c(1, 2), c(1, 1), c(4, 1), c(4, 2), c(1, 2), c(1, 3), c(4, 3), c(4, 2)], "loop")
    frame.chain(PAR, [c(3, 2), c(3, 1), c(2, 1), c(2, 2), c(3, 2), c(3, 3), c(2, 3), c(2, 2)], "loop")
    for a, b in ((c(1, 3), c(1, 1)), (c(4, 1), c(4, 3)), (c(3, 3), c(3, 1)), (c(2, 1), c(2, 3))):
        frame.gadget(PAR, a, b, "chord")
    return _result("cycle_cycle:4,3", frame.finish(), 3, "C0", frame.product)


# ---------------------------------------------------------------------------
# P3 x P2 with two quadrupled middle vertices

P3P2_MULTIPLICITY = (2, 2, 4, 4, 2, 2)


def p3p2_c0_example() -> ConstructionResult:
    frame = ProductFrame(path_graph(3), path_graph(2), P3P2_MULTIPLICITY)
    b = frame.builder

    def cp(p, i, j):
        return frame.copy(p, i - 1, j - 1)

    frame.gadget(PAR, (0, 1), (0, 0), "rung")
    frame.gadget(PAR, (2, 1), (2, 0), "rung")
    for p in range(1, 5):
        for q in range(1, 5):
            b.set_arc(cp(p, 2, 1), cp(q, 2, 2), "middle-rung")
    for i in (1, 2):
        for end, (first, second) in ((1, ((2, 4), (1, 3))), (3, ((1, 4), (2, 3)))):
            for p in first:
                b.set_arc(cp(p, 2, i), cp(1, end, i), "rail")
                b.set_arc(cp(2, end, i), cp(p, 2, i), "rail")
            for q in second:
                b.set_arc(cp(1, end, i), cp(q, 2, i), "rail")
                b.set_arc(cp(q, 2, i), cp(2, end, i), "rail")
    return _result("p3p2_c0_example", frame.finish(), 3, "C0", frame.product)


# ---------------------------------------------------------------------------
# lifting to a further product factor

def lift_product(base: ConstructionResult | Orientation, h: Graph,
                 cid: str | None = None) -> ConstructionResult:
    """Orientation of ``(G x H)^(2)`` from one of ``G^(2)``.

    Each ``H``-fibre copies ``base`` arc for arc and each ``G``-fibre edge
    ``<u,x><u,y>`` (``x < y`` in ``H``) carries a cyclic gadget.  The claimed
    value ``d(base) + d(H)`` is exact when ``d(base) = d(G)``.
    """
    d = base.orientation if isinstance(base, ConstructionResult) else base
    spec = d.spec
    if spec is None or any(k != 2 for k in spec.s):
        raise ConstructionError("lift_product needs an orientation of a 2-multiplication")
    g = spec.base
    dg = diameter(g)
    if dg < 2:
        raise ConstructionError("lift_product needs d(G) >= 2")
    dd = directed_diameter(d)
    if dd == float("inf"):
        raise OrientationError("base orientation is not strong")
    frame = ProductFrame(g, h)
    for a, b in d.arcs():
        pa, u = spec.coords(a)
        pb, v = spec.coords(b)
        for x in range(h.n):
            frame.builder.set_arc(frame.copy(pa, u, x), frame.copy(pb, v, x), "copied")
    for x, y in h.edges():
        for u in range(g.n):
            frame.gadget(CYC, (u, x), (u, y), "lifted-fiber")
    dh = diameter(h)
    exact = dd == dg
    base_id = base.id if isinstance(base, ConstructionResult) else "orientation"
    cid = cid or f"lift_product:{base_id}+H{h.n}"
    return _result(cid, frame.finish(), int(dd) + dh, "C0" if exact else "C0|C1",
                   frame.product, exact=exact)


# ---------------------------------------------------------------------------
# audit

def gadget_of(d: Orientation, u: int, v: int) -> tuple[Gadget, bool] | None:
    """Which gadget the four arcs between copies of base ``u`` and ``v`` form.

    Returns ``(kind, True)`` for ``kind(u, v)``, ``(kind, False)`` for
    ``kind(v, u)``, or ``None`` when the arcs match no gadget.
    """
    spec = d.spec
    for kind, shape in _GADGET_SHAPES.items():
        for forward, (a, b) in ((True, (u, v)), (False, (v, u))):
            if all(d.has_arc(spec.vid(x, a), spec.vid(y, b)) == fwd for x, y, fwd in shape):
                return kind, forward
    return None


def audit(result: ConstructionResult | Orientation) -> list[str]:
    """Problems found: arcs with no rule attached and base edges not shaped like a gadget.

    Base edges between vertices of multiplicity other than 2 are exempt from
    the shape check.
    """
    d = result.orientation if isinstance(result, ConstructionResult) else result
    problems = []
    for a, b in d.arcs():
        rule = d.rule_of(a, b)
        if rule is None or rule in ("input", "flipped"):
            problems.append(f"unattributed arc {d.graph.label(a)}->{d.graph.label(b)}")
    spec = d.spec
    if spec is not None:
        for u, v in spec.base.edges():
            if spec.s[u] == 2 and spec.s[v] == 2 and gadget_of(d, u, v) is None:
                problems.append(
                    f"base edge {spec.base.label(u)}-{spec.base.label(v)} matches no gadget")
    return problems


# ---------------------------------------------------------------------------
# string ids

_H_PATTERN = re.compile(r"^([PCKQ])(\d+)$")


def parse_factor(token: str) -> Graph:
    """``P<n>``, ``C<n>``, ``K<n>`` or ``Q<n>`` to a graph."""
    m = _H_PATTERN.match(token.strip())
    if not m:
        raise ConstructionError(f"bad factor {token!r}; expected P<n>, C<n>, K<n> or Q<n>")
    kind, size = m.group(1), int(m.group(2))
    builder = {"P": path_graph, "C": cycle_graph, "K": complete_graph, "Q": hypercube_graph}[kind]
    try:
        return builder(size)
    except GraphError as exc:
        raise ConstructionError(str(exc)) from None


def parse_tree_token(token: str) -> Graph:
    """Tree from ``<d>`` (path of diameter d), ``s<a>.<b>...`` (spider) or ``p<parents>``."""
    token = token.strip()
    try:
        if token.isdigit():
            return path_graph(int(token) + 1)
        if token.startswith("s"):
            return spider([int(x) for x in token[1:].split(".")])
        if token.startswith("p"):
            return parse_tree([int(x) for x in token[1:].split(".")])
    except (ValueError, GraphError) as exc:
        raise ConstructionError(f"bad tree token {token!r}: {exc}") from None
    raise ConstructionError(f"bad tree token {token!r}")


def _ints(params: str, count: int) -> list[int]:
    try:
        values = [int(x) for x in params.split(",")]
    except ValueError:
        raise ConstructionError(f"expected {count} integers, got {params!r}") from None
    if len(values) != count:
        raise ConstructionError(f"expected {count} integers, got {params!r}")
    return values


def build(cid: str) -> ConstructionResult:
    """Construct from a string id such as ``tree_tree:2,3`` or ``lift_product:q3+C5``."""
    family, _, params = cid.partition(":")
    builders: dict[str, Callable[[], ConstructionResult]] = {
        "q3": lambda: q3(),
        "p3p2_c0_example": lambda: p3p2_c0_example(),
        "grid": lambda: grid(*_ints(params, 2)),
        "cycle_cycle": lambda: cycle_cycle(*_ints(params, 2)),
        "p2_complete": lambda: p2_complete(*_ints(params, 1)),
        "t2_complete": lambda: _t2(params, cid),
        "tree_tree": lambda: _tt(params, cid),
        "tree_cycle": lambda: _tc(params, cid),
        "lift_product": lambda: _lift(params, cid),
    }
    if family not in builders:
        raise ConstructionError(f"unknown construction {cid!r}")
    if family in ("q3", "p3p2_c0_example") and params:
        raise ConstructionError(f"{family} takes no parameters")
    try:
        return builders[family]()
    except GraphError as exc:
        raise ConstructionError(str(exc)) from None


def _split2(params: str) -> tuple[str, str]:
    parts = params.split(",")
    if len(parts) != 2:
        raise ConstructionError(f"expected two comma-separated parameters, got {params!r}")
    return parts[0], parts[1]


def _tt(params: str, cid: str) -> ConstructionResult:
    a, b = _split2(params)
    return tree_tree(parse_tree_token(a), parse_tree_token(b), cid)


def _tc(params: str, cid: str) -> ConstructionResult:
    a, b = _split2(params)
    return tree_cycle(parse_tree_token(a), _ints(b, 1)[0], cid)


def _t2(params: str, cid: str) -> ConstructionResult:
    deg, mu = _ints(params, 2)
    if deg < 2:
        raise ConstructionError("a diameter-2 tree needs a centre of degree >= 2")
    return t2_complete(star_graph(deg), mu, cid)


def _lift(params: str, cid: str) -> ConstructionResult:
    base_id, sep, factor = params.rpartition("+")
    if not sep:
        raise ConstructionError("lift_product ids look like lift_product:<base id>+<factor>")
    return lift_product(build(base_id), parse_factor(factor), cid)
