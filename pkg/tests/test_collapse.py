"""Sequential collapse drivers.

Claims covered:
    - triangle and 4-cycle behave per the hand-checked expectations
    - kept and removed edges partition the input; grades never decrease
    - the reduced flag filtration has the input's persistence diagram
    - connectivity at every grade is preserved (union-find check)
    - forward and backward agree exactly on all-distinct grades
    - fixpoint iteration converges, is idempotent, and leaves no edge
      dominated at its own grade when last among equal grades
    - dense and sparse representations give identical results
"""

import numpy as np
import pytest

from flagcollapse import (
    FilteredEdge,
    FilteredGraph,
    backward_collapse,
    build_neighborhood_map,
    collapse_to_fixpoint,
    diagrams_equal,
    flag_expand,
    forward_collapse,
    is_dominated,
    persistence,
    rips_graph,
)
from conftest import random_graph


def diagram_of(g, max_dim=2):
    return persistence(flag_expand(g, max_dim + 1), max_dim)


def test_triangle_backward():
    g = FilteredGraph.build([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    r = backward_collapse(g)
    assert len(r.kept) == 2 and len(r.removed) == 1
    assert all(e.t == 1.0 for e in r.kept)


def test_triangle_forward_keeps_two():
    g = FilteredGraph.build([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    r = forward_collapse(g)
    assert len(r.kept) == 2


def test_four_cycle_untouched():
    g = FilteredGraph.build(
        [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]
    )
    for driver in (backward_collapse, forward_collapse):
        r = driver(g)
        assert r.kept == g.edges and r.removed == []


@pytest.mark.parametrize("driver", [backward_collapse, forward_collapse])
def test_partition_and_monotone_grades(rng, driver):
    for _ in range(10):
        g = random_graph(rng, 5, 10, distinct=bool(rng.integers(2)))
        r = driver(g)
        original = {(e.u, e.v): e.t for e in g.edges}
        assert {(e.u, e.v) for e in r.kept} | {
            (e.u, e.v) for e in r.removed
        } == set(original)
        assert not {(e.u, e.v) for e in r.kept} & {
            (e.u, e.v) for e in r.removed
        }
        for e in r.kept:
            assert e.t >= original[(e.u, e.v)]
        for e in r.removed:
            assert e.t == original[(e.u, e.v)]
        assert r.to_graph().births == g.births


@pytest.mark.parametrize("driver", [backward_collapse, forward_collapse])
def test_diagram_preserved_on_random_rips(rng, driver):
    for _ in range(8):
        pts = rng.random((int(rng.integers(5, 11)), 2))
        g = rips_graph(pts)
        assert diagrams_equal(diagram_of(g), diagram_of(driver(g).to_graph()))


@pytest.mark.parametrize("driver", [backward_collapse, forward_collapse])
def test_diagram_preserved_with_ties(rng, driver):
    for _ in range(8):
        g = random_graph(rng, 4, 8, distinct=False)
        assert diagrams_equal(diagram_of(g), diagram_of(driver(g).to_graph()))


def components_at(edges, births, t):
    parent = {v: v for v in births if births[v] <= t}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, s in edges:
        if s <= t and u in parent and v in parent:
            parent[find(u)] = find(v)
    return frozenset(frozenset(x for x in parent if find(x) == r)
                     for r in {find(x) for x in parent})


def test_connectivity_preserved_at_every_grade(rng):
    for _ in range(6):
        g = random_graph(rng, 5, 9, distinct=bool(rng.integers(2)))
        out = backward_collapse(g).to_graph()
        grades = sorted({e.t for e in g.edges} | {e.t for e in out.edges})
        for t in grades:
            assert components_at(g.edges, g.births, t) == components_at(
                out.edges, out.births, t
            )


def test_forward_backward_agree_on_distinct_grades(rng):
    for _ in range(15):
        g = random_graph(rng, 5, 10, distinct=True)
        rb = backward_collapse(g)
        rf = forward_collapse(g)
        assert rb.kept == rf.kept
        assert rb.removed == rf.removed


@pytest.mark.parametrize("driver", [backward_collapse, forward_collapse])
def test_dense_sparse_identical(rng, driver):
    for _ in range(10):
        g = random_graph(rng, 4, 9, distinct=bool(rng.integers(2)))
        a = driver(g, representation="dense")
        b = driver(g, representation="sparse")
        assert a.kept == b.kept and a.removed == b.removed


def test_fixpoint_four_cycle_one_round():
    g = FilteredGraph.build(
        [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]
    )
    result, sizes = collapse_to_fixpoint(g, "backward")
    assert sizes == [4]
    assert result.kept == g.edges


def test_fixpoint_idempotent(rng):
    for _ in range(5):
        g = random_graph(rng, 5, 9, distinct=bool(rng.integers(2)))
        result, _ = collapse_to_fixpoint(g, "backward")
        fixed = result.to_graph()
        again = backward_collapse(fixed)
        assert again.kept == fixed.edges and again.removed == []


def test_fixpoint_output_has_no_dominated_last_edge(rng):
    # scan the output directly: no edge is dominated at its own grade when
    # it is the last one inserted among equal grades
    for _ in range(5):
        g = random_graph(rng, 5, 9, distinct=bool(rng.integers(2)))
        result, _ = collapse_to_fixpoint(g, "backward")
        fixed = result.to_graph()
        nmap = build_neighborhood_map(fixed)
        for e in fixed.edges:
            assert is_dominated(nmap, e, e.t) is None


def test_fixpoint_sizes_strictly_decrease_until_repeat(rng):
    for _ in range(5):
        g = random_graph(rng, 6, 10, distinct=False)
        _, sizes = collapse_to_fixpoint(g, "backward")
        body = sizes[:-1] if len(sizes) >= 2 and sizes[-1] == sizes[-2] else sizes
        assert all(a > b for a, b in zip(body, body[1:]))


def test_fixpoint_rejects_bad_arguments():
    g = FilteredGraph.build([(0, 1, 1.0)])
    with pytest.raises(ValueError):
        collapse_to_fixpoint(g, "backward", max_rounds=0)
    with pytest.raises(ValueError):
        collapse_to_fixpoint(g, "sideways")


def test_stats_are_populated():
    g = FilteredGraph.build([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    r = backward_collapse(g)
    assert r.stats.domination_checks > 0
    assert r.stats.trims == 1
