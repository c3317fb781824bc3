import json
import math

import pytest
from hypothesis import given, strategies as st

from systolic_atlas.pants_graph import (
    ARCCOSH2,
    CurvePath,
    GluingGraph,
    GraphError,
    TrivalentTree,
    build_joined_tree,
    build_tree_for_genus,
    coverage_check,
    handle_loops,
    min_length_through_center,
    separating_check,
    surface_from_tree,
    tree_parameter,
)


def test_joined_tree_small():
    t = build_joined_tree(1)
    assert (t.n_vertices, len(t.leaves), t.center_leaf_distance()) == (4, 3, 1)
    t = build_joined_tree(2)
    assert (t.n_vertices, len(t.leaves), t.center_leaf_distance()) == (10, 6, 2)
    with pytest.raises(GraphError):
        build_joined_tree(0)


@pytest.mark.parametrize("n", range(1, 11))
def test_joined_tree_invariants(n):
    t = build_joined_tree(n)
    assert len(t.leaves) == 3 * 2 ** (n - 1)
    assert t.n_vertices == 3 * (2 ** n - 1) + 1
    d = t.distances_from(t.center)
    assert all(d[v] == n for v in t.leaves)
    graph = surface_from_tree(t)
    assert graph.genus == len(t.leaves) == len(graph.leaf_handles)
    assert graph.genus == 1 + len(graph.edges) - graph.n_pants
    assert coverage_check(graph, handle_loops(graph))[0] is False


def test_tree_for_genus():
    assert build_tree_for_genus(6) == build_joined_tree(2)
    assert build_tree_for_genus(3) == build_joined_tree(1)
    t4 = build_tree_for_genus(4)
    assert len(t4.leaves) == 4 and t4.contains_joined_tree(1) and t4.center_leaf_distance() >= 1
    t7 = build_tree_for_genus(7)
    assert len(t7.leaves) == 7 and t7.contains_joined_tree(2) and t7.center_leaf_distance() >= 2
    assert tree_parameter(11) == 2 and tree_parameter(12) == 3
    with pytest.raises(GraphError):
        build_tree_for_genus(2)


@given(st.integers(3, 200))
def test_tree_for_genus_sandwich(g):
    t = build_tree_for_genus(g)
    n = tree_parameter(g)
    assert len(t.leaves) == g
    assert t.contains_joined_tree(n)
    assert t.center_leaf_distance() >= n
    assert surface_from_tree(t).genus == g


def test_surface_from_joined_tree_1():
    graph = surface_from_tree(build_joined_tree(1))
    assert graph.genus == 3 and graph.n_pants == 4 and len(graph.edges) == 6
    assert 2 - 2 * graph.genus == -graph.n_pants
    with pytest.raises(GraphError):
        surface_from_tree("not a tree")


def test_invalid_trees():
    with pytest.raises(GraphError):
        TrivalentTree(())
    with pytest.raises(GraphError):
        TrivalentTree((-1, 0, 0))  # centre of degree 2
    with pytest.raises(GraphError):
        TrivalentTree((-1, 0, 0, 0, 5, 4))  # cycle 4 <-> 5


def test_min_length_through_center():
    assert min_length_through_center(surface_from_tree(build_joined_tree(2))) == pytest.approx(2 * ARCCOSH2)
    assert min_length_through_center(surface_from_tree(build_joined_tree(1))) == pytest.approx(ARCCOSH2)
    assert ARCCOSH2 == pytest.approx(math.acosh(2.0))


def _tree_edge_loop(graph):
    # out and back across the first tree edge: stays in the sphere part
    eid = next(i for i, e in enumerate(graph.edges) if not e.handle)
    return CurvePath(((eid, 1), (eid, -1)))


def test_separating_check():
    graph = surface_from_tree(build_joined_tree(2))
    assert separating_check(graph, _tree_edge_loop(graph)) is True
    assert separating_check(graph, handle_loops(graph)[0]) is False
    with pytest.raises(GraphError):
        separating_check(graph, CurvePath(()))


def test_separating_monotone():
    graph = surface_from_tree(build_joined_tree(2))
    base = _tree_edge_loop(graph)
    tree_edges = [i for i, e in enumerate(graph.edges) if not e.handle]
    eid0 = base.crossings[0][0]
    for eid in tree_edges:
        e = graph.edges[eid]
        if e.pants_a == graph.edges[eid0].pants_b:
            longer = CurvePath(((eid0, 1), (eid, 1), (eid, -1), (eid0, -1)))
            assert separating_check(graph, longer) is True


def test_coverage_check():
    graph = surface_from_tree(build_joined_tree(1))
    ok, missed = coverage_check(graph, [])
    assert ok is False and missed == frozenset(range(graph.n_pants))
    ok, missed = coverage_check(graph, handle_loops(graph))
    assert ok is False and missed == frozenset({0})
    tree_loops = [CurvePath(((i, 1), (i, -1))) for i, e in enumerate(graph.edges) if not e.handle]
    assert coverage_check(graph, tree_loops)[0] is True


def test_json_roundtrip():
    graph = surface_from_tree(build_tree_for_genus(5))
    again = GluingGraph.from_dict(json.loads(graph.to_json()))
    assert again == graph
    t = build_tree_for_genus(5)
    assert TrivalentTree.from_dict(t.to_dict()) == t


def test_curve_path_validation():
    graph = surface_from_tree(build_joined_tree(1))
    with pytest.raises(GraphError):
        CurvePath(((0, 1),)).pants_sequence(graph)  # tree edge crossed once: not closed
    with pytest.raises(GraphError):
        CurvePath(((99, 1),)).pants_sequence(graph)
