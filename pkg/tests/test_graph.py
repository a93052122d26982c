import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import connected_graphs, random_trees
from orientlab.graph import (
    DisconnectedGraphError,
    Graph,
    GraphError,
    bipartition,
    bridges,
    build_family,
    cartesian_product,
    complete_graph,
    cycle_graph,
    diameter,
    format_edge_list,
    format_tree,
    hypercube_graph,
    label_tree,
    metrics,
    parse_edge_list,
    parse_tree,
    parse_tree_text,
    path_graph,
    spider,
    star_graph,
    vertex_multiplication,
)
from orientlab.search import BridgedGraphError, orientation_number


def as_nx(g):
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges())
    return out


# families -------------------------------------------------------------------

def test_path_family_edges_and_diameter():
    g = build_family("path", 3)
    assert g.edges() == [(0, 1), (1, 2)]
    assert diameter(g) == 2


def test_cycle_family_closes_the_ring():
    g = build_family("cycle", 4)
    assert g.m == 4 and g.has_edge(3, 0)
    assert diameter(g) == 2


def test_hypercube_is_two_four_cycles_and_a_matching():
    q = build_family("hypercube", 3)
    assert (q.n, q.m, diameter(q)) == (8, 12, 3)
    low, high = q.induced(range(4)), q.induced(range(4, 8))
    assert nx.is_isomorphic(as_nx(low), nx.cycle_graph(4))
    assert nx.is_isomorphic(as_nx(high), nx.cycle_graph(4))
    matching = [(u, v) for u, v in q.edges() if u < 4 <= v]
    assert sorted(v - u for u, v in matching) == [4] * 4


@pytest.mark.parametrize("kind,size", [("cycle", 2), ("path", 0), ("hypercube", 0), ("star", 0), ("wheel", 5)])
def test_family_rejects_bad_sizes(kind, size):
    with pytest.raises(GraphError):
        build_family(kind, size)


def test_graph_rejects_loops_and_asymmetry():
    with pytest.raises(GraphError):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        Graph(2, ((1,), ()))


# trees ----------------------------------------------------------------------

def test_parse_tree_examples():
    assert parse_tree([0, 1, 2]).edges() == path_graph(3).edges()
    star = parse_tree([0, 1, 1, 1])
    assert diameter(star) == 2 and star.degree(0) == 3
    p6 = parse_tree([0, 1, 2, 3, 4, 5])
    assert diameter(p6) == 5 and p6.m == 5


@pytest.mark.parametrize("parents", [[2, 1, 0], [0, 0, 1], [0, 3, 2], [0, 9], []])
def test_parse_tree_rejects_malformed(parents):
    with pytest.raises(GraphError):
        parse_tree(parents)


def test_tree_text_round_trip():
    t = spider([2, 1, 3])
    back = parse_tree_text(format_tree(t))
    assert nx.is_isomorphic(as_nx(back), as_nx(t))


def test_label_p5_has_one_center_two_branches():
    lab = label_tree(path_graph(5))
    assert lab.centers == (2,)
    assert sorted(lab.tags()) == sorted(["c", "[1]", "[2]", "[1,1]", "[1,2]"])
    assert lab.vertex("[1]") == 1 and lab.vertex("[1,1]") == 0


def test_label_p6_has_adjacent_centers():
    lab = label_tree(path_graph(6))
    c1, c2 = lab.centers
    assert lab.tree.has_edge(c1, c2)
    assert sorted(lab.tags()) == sorted(["c1", "c2", "[1]_1", "[1]_2", "[1,1]_1", "[1,1]_2"])


def test_label_star_has_no_grandchildren():
    lab = label_tree(star_graph(3))
    assert lab.center == 0
    assert sorted(lab.tags()) == ["[1]", "[2]", "[3]", "c"]


def test_label_tree_rejects_out_of_range():
    with pytest.raises(GraphError):
        label_tree(path_graph(7))
    with pytest.raises(GraphError):
        label_tree(path_graph(2))
    with pytest.raises(GraphError):
        label_tree(cycle_graph(5))


@settings(max_examples=60, deadline=None)
@given(random_trees(max_n=12))
def test_every_vertex_gets_exactly_one_role(parents):
    t = parse_tree(parents)
    if t.n < 3 or not 2 <= diameter(t) <= 5:
        return
    lab = label_tree(t)
    tags = lab.tags()
    assert len(tags) == t.n and len(set(tags)) == t.n
    for v, role in enumerate(lab.roles):
        centre_dist = min(t.distance(v, c) for c in lab.centers)
        assert role.depth == centre_dist


# products and multiplications -------------------------------------------------

def test_grid_p3_p2_counts():
    g = cartesian_product(path_graph(3), path_graph(2))
    assert (g.n, g.m, diameter(g)) == (6, 7, 3)
    assert bridges(g) == []


def test_k2_squared_is_the_four_cycle():
    g = cartesian_product(path_graph(2), path_graph(2))
    assert nx.is_isomorphic(as_nx(g), nx.cycle_graph(4))


def test_c4_times_c3():
    g = cartesian_product(cycle_graph(4), cycle_graph(3))
    assert (g.n, diameter(g)) == (12, 3)


def test_product_edge_count_formula():
    for g, h in [(path_graph(4), cycle_graph(5)), (star_graph(3), complete_graph(4))]:
        p = cartesian_product(g, h)
        assert p.m == g.n * h.m + g.m * h.n


def test_multiplying_k3_gives_complete_tripartite():
    g, spec = vertex_multiplication(complete_graph(3), [2, 2, 2])
    assert g.m == 12
    assert nx.is_isomorphic(as_nx(g), nx.complete_multipartite_graph(2, 2, 2))
    assert [list(spec.copies(v)) for v in range(3)] == [[0, 1], [2, 3], [4, 5]]


def test_unit_multiplication_is_identity():
    base = path_graph(3)
    g, spec = vertex_multiplication(base, [1, 1, 1])
    assert g.edges() == base.edges()
    assert [spec.vid(1, v) for v in range(3)] == [0, 1, 2]


def test_doubled_p3_p2():
    g, _ = vertex_multiplication(cartesian_product(path_graph(3), path_graph(2)), [2] * 6)
    assert (g.n, g.m) == (12, 28)


def test_multiplication_coordinates_round_trip():
    _, spec = vertex_multiplication(path_graph(4), [1, 3, 2, 4])
    for v in range(4):
        for x in range(1, spec.s[v] + 1):
            assert spec.coords(spec.vid(x, v)) == (x, v)


@pytest.mark.parametrize("s", [[2, 2], [2, 0, 2]])
def test_multiplication_rejects_bad_vectors(s):
    with pytest.raises(GraphError):
        vertex_multiplication(path_graph(3), s)


# metrics ----------------------------------------------------------------------

def test_metrics_of_p6():
    m = metrics(path_graph(6))
    assert (m.diameter, m.radius) == (5, 3)


def test_metrics_of_q3():
    m = metrics(hypercube_graph(3))
    assert (m.diameter, m.radius) == (3, 3)


def test_p5_times_p6_diameter_is_additive():
    assert diameter(cartesian_product(path_graph(5), path_graph(6))) == 9


def test_disconnected_graph_names_a_pair():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError) as info:
        metrics(g)
    u, v = info.value.witness
    assert math.isinf(g.distance(u, v))


def test_bipartition_of_p4():
    ok, (a, b) = bipartition(path_graph(4))
    assert ok and sorted(map(len, (a, b))) == [2, 2]
    assert all(not path_graph(4).has_edge(x, y) for x, y in itertools.combinations(a, 2))


def test_bipartition_reports_odd_cycle():
    g = cycle_graph(5)
    ok, cycle = bipartition(g)
    assert not ok and len(cycle) % 2 == 1
    assert all(g.has_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))


@settings(max_examples=30, deadline=None)
@given(random_trees(max_n=12))
def test_trees_are_bipartite_and_all_bridges(parents):
    t = parse_tree(parents)
    assert bipartition(t)[0]
    assert sorted(bridges(t)) == t.edges()


def test_cycle_has_no_bridges():
    assert bridges(cycle_graph(6)) == []


def test_edge_list_round_trip():
    g = cartesian_product(path_graph(3), cycle_graph(4))
    assert parse_edge_list(format_edge_list(g)).edges() == g.edges()


@pytest.mark.parametrize("text", ["", "3 2\n1 2\n", "2 1\n1 1\n", "2 1\nx y\n"])
def test_edge_list_rejects_malformed(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


# properties -------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=6, max_extra=4), connected_graphs(max_n=6, max_extra=4))
def test_product_distance_is_additive(g, h):
    p = cartesian_product(g, h)
    adj = oracles.adjacency(p.n, p.edges())
    gd = [g.distances_from(u) for u in range(g.n)]
    hd = [h.distances_from(x) for x in range(h.n)]
    for src in range(p.n):
        row = oracles.bfs(adj, src)
        u, x = divmod(src, h.n)
        for dst, dist in row.items():
            v, y = divmod(dst, h.n)
            assert dist == gd[u][v] + hd[x][y]


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=6, max_extra=4), st.data())
def test_multiplied_diameter_never_shrinks(g, data):
    s = data.draw(st.lists(st.integers(1, 3), min_size=g.n, max_size=g.n))
    gm, _ = vertex_multiplication(g, s)
    assert oracles.diameter(oracles.adjacency(gm.n, gm.edges())) >= diameter(g)
    if diameter(g) >= 2:
        assert diameter(gm) == diameter(g)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=6, max_extra=4))
def test_bridges_match_deletion_oracle(g):
    found = set(bridges(g))
    for i, e in enumerate(g.edges()):
        rest = g.edges()[:i] + g.edges()[i + 1:]
        cut = len(oracles.bfs(oracles.adjacency(g.n, rest), 0)) < g.n
        assert (e in found) == cut


@settings(max_examples=25, deadline=None)
@given(connected_graphs(max_n=6, max_extra=4))
def test_bridgeless_iff_strongly_orientable(g):
    if g.m > 10:
        return
    if bridges(g):
        with pytest.raises(BridgedGraphError):
            orientation_number(g)
    else:
        assert orientation_number(g).value is not None
