"""Graph types, neighborhood maps, and the domination predicate.

Brute-force oracles live in this file: common neighborhoods by an
exhaustive double loop over vertex pairs, domination by testing every
candidate vertex with an explicit set-inclusion check.
"""

import math

import numpy as np
import pytest

from flagcollapse import (
    FilteredEdge,
    FilteredGraph,
    GraphError,
    build_neighborhood_map,
    edge_neighborhood,
    is_dominated,
)
from conftest import random_graph

INF = math.inf


def triangle_123():
    return FilteredGraph.build([(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)])


# -- construction and validation ---------------------------------------------


def test_build_canonicalizes_and_sorts():
    g = FilteredGraph.build([(2, 0, 3.0), (1, 0, 1.0), (2, 1, 2.0)])
    assert g.edges == [
        FilteredEdge(0, 1, 1.0),
        FilteredEdge(1, 2, 2.0),
        FilteredEdge(0, 2, 3.0),
    ]


def test_default_births_are_earliest_incident_grade():
    g = triangle_123()
    assert g.births == {0: 1.0, 1: 1.0, 2: 2.0}


def test_explicit_births_override():
    g = FilteredGraph.build([(0, 1, 2.0)], births={0: 0.5, 1: 1.0})
    assert g.births == {0: 0.5, 1: 1.0}


def test_birth_after_incident_edge_rejected():
    with pytest.raises(GraphError, match="precedes a vertex birth"):
        FilteredGraph.build([(0, 1, 1.0)], births={0: 2.0})


def test_duplicate_edge_rejected_naming_the_pair():
    with pytest.raises(GraphError, match=r"\(0, 1\)"):
        FilteredGraph.build([(0, 1, 1.0), (1, 0, 2.0)])


def test_self_loop_rejected():
    with pytest.raises(GraphError, match="self-loop"):
        FilteredGraph.build([(3, 3, 1.0)])


def test_isolated_vertices_survive_via_births():
    g = FilteredGraph.build([(0, 1, 1.0)], births={0: 0.0, 1: 0.0, 7: 0.0})
    assert 7 in g.births


# -- neighborhood map construction -------------------------------------------


@pytest.mark.parametrize("representation", ["dense", "sparse"])
def test_map_matches_triangle(representation):
    g = triangle_123()
    n = build_neighborhood_map(g, representation)
    assert n.neighbor_items(0) == [(1, 1.0), (2, 3.0)]
    assert n.neighbor_items(1) == [(0, 1.0), (2, 2.0)]
    assert n.neighbor_items(2) == [(0, 3.0), (1, 2.0)]


@pytest.mark.parametrize("representation", ["dense", "sparse"])
def test_map_of_empty_graph(representation):
    n = build_neighborhood_map(FilteredGraph.build([]), representation)
    assert n.vertices == []


@pytest.mark.parametrize("representation", ["dense", "sparse"])
def test_map_of_k4_grade_zero(representation):
    edges = [(i, j, 0.0) for i in range(4) for j in range(i + 1, 4)]
    g = FilteredGraph.build(edges)
    n = build_neighborhood_map(g, representation)
    for v in range(4):
        assert len(n.neighbor_items(v)) == 3
        assert all(t == 0.0 for _, t in n.neighbor_items(v))


def test_map_symmetry_under_mutation():
    g = triangle_123()
    n = build_neighborhood_map(g)
    n.set_grade(0, 1, 5.0)
    assert n.grade(0, 1) == n.grade(1, 0) == 5.0
    n.remove(0, 1)
    assert not n.has_edge(0, 1) and not n.has_edge(1, 0)


# -- edge neighborhoods --------------------------------------------------------


def test_edge_neighborhood_triangle_examples():
    n = build_neighborhood_map(triangle_123())
    nb = edge_neighborhood(n, FilteredEdge(0, 1, 1.0), 1.0)
    assert nb.present == set() and nb.future == [(2, 3.0)]
    nb = edge_neighborhood(n, FilteredEdge(0, 1, 1.0), 3.0)
    assert nb.present == {2} and nb.future == []


def test_edge_neighborhood_at_infinity():
    n = build_neighborhood_map(triangle_123())
    nb = edge_neighborhood(n, FilteredEdge(0, 1, 1.0), INF)
    assert nb.future == [] and nb.present == {2}


def test_edge_neighborhood_absent_edge_errors():
    n = build_neighborhood_map(triangle_123())
    with pytest.raises(GraphError, match="not in the map"):
        edge_neighborhood(n, FilteredEdge(0, 3, 1.0), 1.0)


def brute_neighborhood(g, e, t):
    """Exhaustive double loop over vertex pairs."""
    grade = {}
    for a, b, s in g.edges:
        grade[(a, b)] = grade[(b, a)] = s
    present, future = set(), []
    for w in g.births:
        if w in (e.u, e.v):
            continue
        g1 = grade.get((e.u, w))
        g2 = grade.get((e.v, w))
        if g1 is None or g2 is None:
            continue
        arrival = max(g1, g2)
        if arrival <= t:
            present.add(w)
        else:
            future.append((w, arrival))
    future.sort(key=lambda p: (p[1], p[0]))
    return present, future


@pytest.mark.parametrize("representation", ["dense", "sparse"])
def test_edge_neighborhood_matches_brute_force(rng, representation):
    for _ in range(30):
        g = random_graph(rng, 4, 8, distinct=bool(rng.integers(2)))
        n = build_neighborhood_map(g, representation)
        for e in g.edges:
            for t in (e.t, e.t + 1.0, INF):
                nb = edge_neighborhood(n, e, t)
                present, future = brute_neighborhood(g, e, t if t != INF else INF)
                if t == INF:
                    present |= {w for w, _ in future}
                    future = []
                assert nb.present == present
                assert nb.future == future


# -- domination ----------------------------------------------------------------


def test_dominated_triangle_all_ones():
    edges = [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]
    n = build_neighborhood_map(FilteredGraph.build(edges))
    assert is_dominated(n, FilteredEdge(0, 1, 1.0), 1.0) == 2


def test_four_cycle_has_no_dominated_edge():
    edges = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]
    g = FilteredGraph.build(edges)
    n = build_neighborhood_map(g)
    for e in g.edges:
        assert is_dominated(n, e, 1.0) is None


def test_domination_query_before_edge_grade_errors():
    n = build_neighborhood_map(triangle_123())
    with pytest.raises(GraphError, match="precedes"):
        is_dominated(n, FilteredEdge(0, 2, 3.0), 1.0)


def brute_dominator(g, e, t):
    """Smallest vertex passing the explicit set-inclusion test."""
    present, _ = brute_neighborhood(g, e, t)
    grade = {}
    for a, b, s in g.edges:
        grade[(a, b)] = grade[(b, a)] = s
    for w in sorted(present):
        closed_w = {w} | {
            x for x in g.births if grade.get((w, x), INF) <= t
        }
        if present <= closed_w:
            return w
    return None


@pytest.mark.parametrize("representation", ["dense", "sparse"])
def test_domination_matches_brute_force(rng, representation):
    for _ in range(40):
        g = random_graph(rng, 4, 10, distinct=bool(rng.integers(2)))
        n = build_neighborhood_map(g, representation)
        for e in g.edges:
            for t in (e.t, e.t + 2.0):
                assert is_dominated(n, e, t) == brute_dominator(g, e, t)


def test_witness_inclusion_holds_verbatim(rng):
    for _ in range(20):
        g = random_graph(rng, 4, 9, distinct=False)
        n = build_neighborhood_map(g)
        for e in g.edges:
            w = is_dominated(n, e, e.t)
            if w is None:
                continue
            nb = edge_neighborhood(n, e, e.t)
            closed_w = {w} | {
                x for x, s in n.neighbor_items(w) if s <= e.t
            }
            assert nb.present <= closed_w


def test_domination_monotone_without_future_arrivals(rng):
    # if an edge is dominated at t and no common neighbor arrives in
    # (t, t'], it stays dominated at t'
    for _ in range(25):
        g = random_graph(rng, 4, 9, distinct=True)
        n = build_neighborhood_map(g)
        for e in g.edges:
            if is_dominated(n, e, e.t) is None:
                continue
            nb = edge_neighborhood(n, e, e.t)
            t_next = nb.future[0][1] if nb.future else INF
            probes = [e.t + (t_next - e.t) / 2] if t_next != INF else [e.t + 1.0]
            for t in probes:
                assert is_dominated(n, e, t) is not None


def test_dense_and_sparse_agree(rng):
    for _ in range(20):
        g = random_graph(rng, 4, 9, distinct=bool(rng.integers(2)))
        nd = build_neighborhood_map(g, "dense")
        ns = build_neighborhood_map(g, "sparse")
        for e in g.edges:
            assert is_dominated(nd, e, e.t) == is_dominated(ns, e, e.t)
            assert (
                edge_neighborhood(nd, e, e.t).present
                == edge_neighborhood(ns, e, e.t).present
            )
