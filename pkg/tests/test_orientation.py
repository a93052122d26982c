import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import connected_graphs
from orientlab.graph import cycle_graph, path_graph, vertex_multiplication
from orientlab.orientation import (
    ConflictError,
    Gadget,
    NotStrongError,
    Orientation,
    OrientationBuilder,
    OrientationError,
    directed_diameter,
    directed_metrics,
    format_arcs,
    format_dot,
    gadget_arcs,
    is_strong,
    lift_bound,
    lift_multiplicity,
    min_cycle_per_vertex,
    parse_arcs,
)

# (1,u)=0 (2,u)=1 (1,v)=2 (2,v)=3 on the doubled edge uv
GOLDEN = {
    Gadget.PARALLEL: {(0, 2), (0, 3), (1, 2), (1, 3)},
    Gadget.CYCLIC: {(0, 2), (2, 1), (1, 3), (3, 0)},
    Gadget.TWOHEAD_1: {(0, 2), (1, 2), (3, 0), (3, 1)},
    Gadget.TWOHEAD_2: {(2, 0), (2, 1), (0, 3), (1, 3)},
}


def doubled_edge():
    return vertex_multiplication(path_graph(2), [2, 2])


def random_orientation(g, rng, spec=None):
    arcs = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in g.edges()]
    return Orientation.from_arcs(g, arcs, spec)


def directed_cycle(n):
    g = cycle_graph(n)
    return Orientation.from_arcs(g, [(i, (i + 1) % n) for i in range(n)])


@pytest.mark.parametrize("kind", list(Gadget))
def test_gadget_arc_sets_are_golden(kind):
    g, spec = doubled_edge()
    assert set(gadget_arcs(kind, spec, 0, 1)) == GOLDEN[kind]
    b = OrientationBuilder(g, spec)
    b.gadget(kind, 0, 1)
    assert set(b.finalize().arcs()) == GOLDEN[kind]


def test_cyclic_gadget_is_a_directed_four_cycle():
    g, spec = doubled_edge()
    d = Orientation.from_arcs(g, gadget_arcs(Gadget.CYCLIC, spec, 0, 1), spec)
    assert directed_diameter(d) == 3
    assert min_cycle_per_vertex(d) == 4


def test_overlapping_gadgets_conflict():
    g, spec = doubled_edge()
    b = OrientationBuilder(g, spec)
    b.gadget(Gadget.CYCLIC, 0, 1)
    with pytest.raises(ConflictError):
        b.gadget(Gadget.CYCLIC, 1, 0)


def test_repeating_the_same_arc_is_harmless():
    g, spec = doubled_edge()
    b = OrientationBuilder(g, spec)
    b.gadget(Gadget.PARALLEL, 0, 1, "first")
    b.gadget(Gadget.PARALLEL, 0, 1, "again")
    assert set(b.finalize().arcs()) == GOLDEN[Gadget.PARALLEL]


def test_gadget_needs_an_edge_and_doubled_ends():
    g, spec = vertex_multiplication(path_graph(3), [2, 2, 2])
    with pytest.raises(OrientationError):
        OrientationBuilder(g, spec).gadget(Gadget.PARALLEL, 0, 2)
    g, spec = vertex_multiplication(path_graph(2), [2, 3])
    with pytest.raises(OrientationError):
        OrientationBuilder(g, spec).gadget(Gadget.PARALLEL, 0, 1)


def test_finalize_requires_every_edge():
    g, spec = vertex_multiplication(path_graph(3), [2, 2, 2])
    b = OrientationBuilder(g, spec)
    b.gadget(Gadget.CYCLIC, 0, 1)
    with pytest.raises(OrientationError):
        b.finalize()


def test_unless_set_skips_finished_edges_only():
    g, spec = doubled_edge()
    b = OrientationBuilder(g, spec)
    b.gadget(Gadget.PARALLEL, 0, 1)
    assert b.gadget_unless_set(Gadget.CYCLIC, 0, 1) is False
    b = OrientationBuilder(g, spec)
    b.set_arc(0, 2, "one arc")
    with pytest.raises(ConflictError):
        b.gadget_unless_set(Gadget.CYCLIC, 0, 1)


# reversal -------------------------------------------------------------------

def test_reverse_is_an_involution_on_doubled_c6():
    g, spec = vertex_multiplication(cycle_graph(6), [2] * 6)
    rng = random.Random(6)
    for _ in range(20):
        d = random_orientation(g, rng, spec)
        assert d.reverse().reverse().arcs() == d.arcs()
        assert all(d.reverse().outset(v) == d.inset(v) for v in range(g.n))


def test_reverse_swaps_distances_on_c5():
    for d in (directed_cycle(5), directed_cycle(5).reverse()):
        r = d.reverse()
        for u in range(5):
            for v in range(5):
                assert r.distance(u, v) == d.distance(v, u)


def test_reversed_cycle_runs_backwards():
    assert directed_cycle(4).reverse().arcs() == sorted([(1, 0), (2, 1), (3, 2), (0, 3)])


# metrics ----------------------------------------------------------------------

def test_directed_four_cycle():
    m = directed_metrics(directed_cycle(4))
    assert m.strong and m.diameter == 3


def test_tree_orientations_are_never_strong():
    t = path_graph(4)
    rng = random.Random(1)
    for _ in range(10):
        d = random_orientation(t, rng)
        m = directed_metrics(d)
        assert not m.strong and math.isinf(m.diameter) and not is_strong(d)


def test_min_cycle_of_directed_seven_cycle():
    assert min_cycle_per_vertex(directed_cycle(7)) == 7


def test_min_cycle_needs_strong():
    d = Orientation.from_arcs(path_graph(3), [(0, 1), (1, 2)])
    with pytest.raises(NotStrongError):
        min_cycle_per_vertex(d)


def test_lift_bound_values(built):
    assert lift_bound(built("grid:3,3").orientation, 4) == 4
    assert lift_bound(built("q3").orientation, 4) == 4
    assert lift_bound(directed_cycle(4), 4) == 4
    with pytest.raises(OrientationError):
        lift_bound(directed_cycle(7), 4)


def test_lift_multiplicity_stays_within_the_bound(built):
    base = built("grid:3,2").orientation
    lifted = lift_multiplicity(base, [3, 2, 4, 2, 2, 3])
    assert lifted.graph.n == 16
    expected, _ = vertex_multiplication(base.spec.base, [3, 2, 4, 2, 2, 3])
    assert lifted.graph.adjacency == expected.adjacency
    assert directed_diameter(lifted) <= lift_bound(base, 4)


# text formats -----------------------------------------------------------------

def test_arc_list_round_trip(built):
    d = built("grid:3,2").orientation
    back = parse_arcs(format_arcs(d), d.spec)
    assert back.arcs() == d.arcs()


def test_arc_list_rejects_a_foreign_spec(built):
    d = built("grid:3,2").orientation
    with pytest.raises(OrientationError):
        parse_arcs(format_arcs(d), built("q3").spec)


def test_dot_output_is_stable(built):
    d = built("grid:3,2").orientation
    text = format_dot(d, "grid:3,2")
    assert text.startswith('digraph "grid:3,2" {')
    arc_lines = [line for line in text.splitlines() if "->" in line]
    assert len(arc_lines) == d.graph.m
    assert text == format_dot(d, "grid:3,2")


# properties -------------------------------------------------------------------

@settings(max_examples=50, deadline=None)
@given(connected_graphs(max_n=7, max_extra=6), st.randoms(use_true_random=False))
def test_arcs_are_total_and_split_neighbourhoods(g, rng):
    d = random_orientation(g, rng)
    assert sum(len(d.outset(v)) for v in range(g.n)) == g.m
    for v in range(g.n):
        assert set(d.outset(v)).isdisjoint(d.inset(v))
        assert sorted(d.outset(v) + d.inset(v)) == list(g.neighbors(v))


@settings(max_examples=50, deadline=None)
@given(connected_graphs(max_n=7, max_extra=6), st.randoms(use_true_random=False))
def test_directed_distance_dominates_undirected(g, rng):
    d = random_orientation(g, rng)
    adj = oracles.adjacency(g.n, d.arcs(), directed=True)
    for u in range(g.n):
        reach = oracles.bfs(adj, u)
        row = d.distances_from(u)
        for v in range(g.n):
            assert row[v] == reach.get(v, math.inf)
            assert row[v] >= g.distance(u, v)
