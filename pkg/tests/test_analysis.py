import itertools
import math
import random

import pytest

import oracles
from orientlab.analysis import (
    ANTICHAIN,
    MAX_RAIL_EDGES,
    ForcedForm,
    HypothesisError,
    LowerBound,
    classify,
    forcing_lower_bound_p3p2,
    forced_pincer_form,
    pincer_path_distance,
    outset_domination,
    p3p2_vertex,
    rail_patterns,
    sperner_lower_bound,
    sperner_max_antichain,
)
from orientlab.graph import (
    Graph,
    GraphError,
    cartesian_product,
    complete_graph,
    cycle_graph,
    path_graph,
    star_graph,
    vertex_multiplication,
)
from orientlab.orientation import Gadget, Orientation, OrientationBuilder
from orientlab.search import SearchBudget, refute_diameter


def p3p2():
    return cartesian_product(path_graph(3), path_graph(2))


# classification -----------------------------------------------------------------

def test_grid_3_2_is_class_one_by_forcing(built):
    r = built("grid:3,2")
    cert = forcing_lower_bound_p3p2([2] * 6).as_lower_bound()
    v = classify(p3p2(), [2] * 6, r.orientation, cert, "grid:3,2")
    assert (v.lower, v.upper, v.label, v.lower_kind) == (4, 4, "C1", "forcing")
    assert v.determined


def test_grid_3_2_is_class_one_by_exhaustion(built):
    g = built("grid:3,2").orientation.graph
    res = refute_diameter(g, 3)
    assert res.refuted
    v = classify(p3p2(), [2] * 6, built("grid:3,2").orientation, LowerBound(4, "exhaustive"))
    assert v.label == "C1"


def test_grid_4_2_meets_the_base_diameter(built):
    base = cartesian_product(path_graph(4), path_graph(2))
    v = classify(base, [2] * 8, built("grid:4,2").orientation, None, "grid:4,2")
    assert v.label == "C0" and v.lower_kind == "window" and v.upper_witness == "grid:4,2"


def test_c3_times_c3_stays_an_interval(built):
    base = cartesian_product(cycle_graph(3), cycle_graph(3))
    v = classify(base, [2] * 9, built("cycle_cycle:3,3").orientation)
    assert v.label == "C0|C1" and not v.determined


def test_window_alone_spans_three_classes():
    v = classify(p3p2(), [3] * 6)
    assert (v.lower, v.upper, v.label) == (3, 5, "C0|C1|C2")


def test_classify_rejects_a_witness_of_another_graph(built):
    with pytest.raises(GraphError):
        classify(p3p2(), [2] * 6, built("q3").orientation)


def test_classify_rejects_contradictory_bounds(built):
    with pytest.raises(ValueError):
        classify(p3p2(), [2] * 6, built("grid:3,2").orientation, LowerBound(5, "exhaustive"))


@pytest.mark.parametrize("cid", ["grid:4,2", "grid:3,3", "q3", "tree_tree:2,3", "cycle_cycle:4,3"])
def test_window_soundness(built, cid):
    r = built(cid)
    d = directed_diameter_int(r.orientation)
    assert r.base_diameter <= d <= r.base_diameter + 2


def directed_diameter_int(d):
    return oracles.diameter(oracles.adjacency(d.graph.n, d.arcs(), directed=True))


# forced pincers --------------------------------------------------------------------

def test_grid_3_2_rails_are_forced(built):
    d = built("grid:3,2").orientation
    for j in (1, 2):
        u0, u1, u2 = (p3p2_vertex(i, j) for i in (1, 2, 3))
        assert forced_pincer_form(d, u0, u1, u2) in (ForcedForm.FIRST, ForcedForm.SECOND)


def test_unforced_when_distances_fail():
    g, spec = vertex_multiplication(path_graph(3), [2, 2, 2])
    b = OrientationBuilder(g, spec)
    b.gadget(Gadget.PARALLEL, 0, 1)
    b.gadget(Gadget.PARALLEL, 1, 2)
    assert forced_pincer_form(b.finalize(), 0, 1, 2) is None


def test_forced_pincer_hypothesis_checks():
    g, spec = vertex_multiplication(cycle_graph(4), [2] * 4)
    d = Orientation.from_arcs(g, [(a, b) for a, b in g.edges()], spec)
    with pytest.raises(HypothesisError):
        forced_pincer_form(d, 0, 1, 2)
    g, spec = vertex_multiplication(path_graph(3), [2, 3, 2])
    d = Orientation.from_arcs(g, [(a, b) for a, b in g.edges()], spec)
    with pytest.raises(HypothesisError):
        forced_pincer_form(d, 0, 1, 2)


def test_path_bound_on_the_long_grid(built):
    r = built("grid:4,2")
    at = {r.spec.base.label(v): v for v in range(r.spec.base.n)}
    path = [at[x] for x in ("<1,1>", "<1,2>", "<2,2>", "<3,2>", "<4,2>")]
    assert pincer_path_distance(r.orientation, path, 1) == 4


def test_path_bound_on_the_square_grid(built):
    r = built("grid:3,3")
    base = r.spec.base
    at = {base.label(v): v for v in range(base.n)}
    path = [at[x] for x in ("<1,1>", "<1,2>", "<2,2>", "<3,2>")]
    assert pincer_path_distance(r.orientation, path, 1) == 3
    # the same distances, read straight off BFS
    for a in r.spec.copies(path[0]):
        for b in r.spec.copies(path[-1]):
            assert r.orientation.distance(a, b) == 3 == r.orientation.distance(b, a)


def test_path_bound_needs_a_pincer():
    g, spec = vertex_multiplication(path_graph(4), [2] * 4)
    b = OrientationBuilder(g, spec)
    for u in range(3):
        b.gadget(Gadget.CYCLIC, u, u + 1)
    with pytest.raises(HypothesisError):
        pincer_path_distance(b.finalize(), [0, 1, 2, 3], 0)


# antichains ---------------------------------------------------------------------

@pytest.mark.parametrize("n,value", [(1, 1), (4, 6), (5, 10)])
def test_central_binomial(n, value):
    assert sperner_max_antichain(n) == value


def test_central_binomial_matches_lattice_search():
    for n in range(1, 6):
        assert sperner_max_antichain(n) == oracles.max_antichain(n)


def bipartite_orientation(sources, block, outsets):
    g = Graph.from_edges(sources + block, [(s, sources + b) for s in range(sources) for b in range(block)])
    arcs = []
    for s in range(sources):
        for b in range(block):
            arcs.append((s, sources + b) if b in outsets[s] else (sources + b, s))
    return Orientation.from_arcs(g, arcs)


def test_middle_layer_outsets_form_an_antichain():
    layer = [set(c) for c in itertools.combinations(range(4), 2)]
    d = bipartite_orientation(6, 4, layer)
    assert outset_domination(d, range(6, 10), range(6)) == ANTICHAIN


def test_one_source_too_many_forces_containment():
    rng = random.Random(3)
    for _ in range(20):
        outsets = [{b for b in range(4) if rng.random() < 0.5} for _ in range(7)]
        cert = outset_domination(bipartite_orientation(7, 4, outsets), range(7, 11), range(7))
        assert cert != ANTICHAIN and cert.guaranteed
        assert set(cert.outset_p) <= set(cert.outset_q)


def test_domination_needs_full_adjacency():
    d = Orientation.from_arcs(path_graph(3), [(0, 1), (1, 2)])
    with pytest.raises(HypothesisError):
        outset_domination(d, [2], [0, 1])


def test_sperner_certificate_for_the_large_star():
    g, spec = vertex_multiplication(cartesian_product(star_graph(3), complete_graph(3)), [2] * 12)
    sources = [spec.vid(1, leaf * 3) for leaf in (1, 2, 3)]
    assert sperner_lower_bound(g, sources, list(spec.copies(0))).value == 4
    # independent route: exhaustive search finds no diameter-3 orientation
    assert refute_diameter(g, 3, budget=SearchBudget(max_nodes=200_000)).refuted


def test_sperner_certificate_fails_for_the_small_star():
    g, spec = vertex_multiplication(cartesian_product(star_graph(2), complete_graph(3)), [2] * 9)
    sources = [spec.vid(1, leaf * 3) for leaf in (1, 2)]
    with pytest.raises(HypothesisError):
        sperner_lower_bound(g, sources, list(spec.copies(0)))


def test_sperner_certificate_at_the_stated_threshold():
    def attempt(middle):
        s = [2, 2, 2, middle, 2, 2]
        g, spec = vertex_multiplication(p3p2(), s)
        block = [v for b in spec.base.neighbors(3) for v in spec.copies(b)]
        return sperner_lower_bound(g, list(spec.copies(3)), block)

    assert math.comb(6, 3) + 1 == 21
    assert attempt(21).value == 4
    with pytest.raises(HypothesisError):
        attempt(20)


def test_sperner_certificate_rejects_bad_sources():
    g = complete_graph(4)
    with pytest.raises(HypothesisError):
        sperner_lower_bound(g, [0, 1], [2, 3])
    g = cycle_graph(5)
    with pytest.raises(HypothesisError):
        sperner_lower_bound(g, [0, 2], [1])


# P3 x P2 forcing ----------------------------------------------------------------

def test_rails_of_the_doubled_grid_have_two_patterns():
    g, spec = vertex_multiplication(p3p2(), [2] * 6)
    for j in (1, 2):
        assert len(rail_patterns(g, spec, j)) == 2
    cert = forcing_lower_bound_p3p2([2] * 6)
    assert cert.status == "refuted"
    assert [sorted(f) for f in cert.rail_forms] == [["first", "second"]] * 2


@pytest.mark.parametrize("s", [(3, 2, 3, 2, 2, 2), (2, 2, 4, 4, 2, 2), (2, 2, 2)])
def test_forcing_rejects_unsupported_shapes(s):
    with pytest.raises(HypothesisError):
        forcing_lower_bound_p3p2(s)


def test_forcing_caps_rail_enumeration():
    with pytest.raises(HypothesisError):
        forcing_lower_bound_p3p2((2, 2, 5, 2, 2, 2))
    assert MAX_RAIL_EDGES == 16


def test_class_zero_example_rails_are_among_the_patterns(built):
    # a genuine diameter-3 orientation must survive the rail necessity filter
    r = built("p3p2_c0_example")
    d, spec = r.orientation, r.spec
    for j in (1, 2):
        rail = {p3p2_vertex(i, j) for i in (1, 2, 3)}
        mine = sorted((a, b) for a, b in d.arcs()
                      if {spec.base_of(a), spec.base_of(b)} <= rail)
        assert mine in rail_patterns(d.graph, spec, j)
